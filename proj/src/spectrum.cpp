#include "izeno/spectrum.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "izeno/errors.hpp"
#include "quadrature.hpp"

namespace izeno {

double lorentzian(double omega, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("lorentzian requires gamma > 0");
    return 1.0 / (omega * omega + 0.25 * gamma * gamma);
}

double spectrum_B0(const SystemParams& p, const PoleResult& pole, double omega) {
    const double wbar = pole.omega_bar(p.omega0);
    return p.g2 * p.omega0 * chi_squared(p.form_factor, omega) * lorentzian(omega - wbar, pole.gamma);
}

namespace {

struct Lines {
    double center_low, center_high;
    double width_low, width_high;
};

Lines lines_for(const SystemParams& p, const PoleResult& pole, double B, const SpectrumOptions& opt) {
    const double wbar = pole.omega_bar(p.omega0);
    B = std::abs(B);
    Lines l{wbar - B, wbar + B, pole.gamma, pole.gamma};
    if (opt.per_channel_widths && B > 0.0) {
        const double base = std::numbers::pi * p.g2 * p.omega0;
        l.width_low = B <= p.omega0 ? base * chi_squared(p.form_factor, p.omega0 - B) : 0.0;
        l.width_high = base * chi_squared(p.form_factor, p.omega0 + B);
    }
    return l;
}

double density(const SystemParams& p, const Lines& l, double omega) {
    double s = 0.0;
    if (l.width_low > 0.0) s += lorentzian(omega - l.center_low, l.width_low);
    if (l.width_high > 0.0) s += lorentzian(omega - l.center_high, l.width_high);
    return p.g2 * p.omega0 * chi_squared(p.form_factor, omega) * 0.5 * s;
}

// Integral over (0, inf), one line at a time in the offset x = w - c so that
// the Lorentzian is resolved even when its width is far below ulp(c).
double integrate_lines(const SystemParams& p, const Lines& l) {
    const double scale = 0.5 * p.g2 * p.omega0;
    double acc = 0.0;
    for (auto [c, w] : {std::pair{l.center_low, l.width_low}, std::pair{l.center_high, l.width_high}}) {
        if (!(w > 0.0)) continue;
        auto f = [&](double x) {
            const double omega = std::max(0.0, c + x);
            return scale * chi_squared(p.form_factor, omega) * lorentzian(x, w);
        };
        const double lo = -c;  // omega = 0
        std::vector<double> bps{lo, 0.0};
        for (double d = w; d < 4.0 * (std::abs(c) + p.omega0); d *= 10.0) {
            if (-d > lo) bps.push_back(-d);
            bps.push_back(d);
        }
        bps.push_back(p.form_factor.lambda_cut - c);
        std::sort(bps.begin(), bps.end());
        bps.erase(std::remove_if(bps.begin(), bps.end(), [&](double x) { return x < lo; }), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
        for (std::size_t i = 0; i + 1 < bps.size(); ++i)
            acc += detail::gk(f, bps[i], bps[i + 1], "spectrum", 1e-11, 1e-14);
        acc += detail::semi_infinite(f, bps.back(), std::max(bps.back() + c, 1.0), "spectrum tail", 1e-11, 1e-14);
    }
    return acc;
}

}  // namespace

double spectrum_B(const SystemParams& p, const PoleResult& pole, double B, double omega, const SpectrumOptions& opt) {
    if (!(omega >= 0.0)) throw DomainError("spectrum_B requires omega >= 0");
    return density(p, lines_for(p, pole, B, opt), omega);
}

SpectrumCurve sample_spectrum(const SystemParams& p, const PoleResult& pole, double B,
                              const std::vector<double>& omegas, const SpectrumOptions& opt) {
    SpectrumCurve c;
    c.params = p;
    c.B = std::abs(B);
    c.gamma = pole.gamma;
    c.omega_bar = pole.omega_bar(p.omega0);
    c.omegas = omegas;
    const Lines l = lines_for(p, pole, B, opt);
    c.density.reserve(omegas.size());
    for (double w : omegas) c.density.push_back(density(p, l, w));
    return c;
}

double trapezoid_integral(const SpectrumCurve& c) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < c.omegas.size(); ++i)
        s += 0.5 * (c.density[i] + c.density[i + 1]) * (c.omegas[i + 1] - c.omegas[i]);
    return s;
}

double spectrum_normalization(const SystemParams& p, const PoleResult& pole, double B, const SpectrumOptions& opt) {
    if (!(pole.gamma > 0.0)) throw DomainError("spectrum_normalization requires gamma > 0");
    return integrate_lines(p, lines_for(p, pole, B, opt));
}

Occupations asymptotic_occupations(const SystemParams& p, const PoleResult& pole, double B, double omega_k,
                                   double t) {
    const double g = pole.gamma;
    const double nu = omega_k - pole.omega_bar(p.omega0);
    const double phi2 = p.g2 * p.omega0 * chi_squared(p.form_factor, omega_k);
    const std::complex<double> a(nu, 0.5 * g);
    const double denom = std::norm(a * a - B * B);
    const double base = nu * nu + 0.25 * g * g;
    const double c = std::cos(B * t), s = std::sin(B * t), s2 = std::sin(2.0 * B * t);
    Occupations o;
    o.y2 = phi2 / denom * (base * c * c + B * B * s * s + 0.5 * g * B * s2);
    o.z2 = phi2 / denom * (base * s * s + B * B * c * c - 0.5 * g * B * s2);
    return o;
}

RecoveredRate recover_gamma_from_normalization(const SystemParams& p, double B) {
    B = std::abs(B);
    const PoleResult pole = pole_perturbative(p, B);
    RecoveredRate r;
    r.omega_bar = pole.omega_bar(p.omega0);
    const FormFactorModel& m = p.form_factor;
    const double low = B <= r.omega_bar ? chi_squared(m, r.omega_bar - B) : 0.0;
    r.gamma_formula = std::numbers::pi * p.g2 * p.omega0 * (chi_squared(m, r.omega_bar + B) + low);
    if (r.gamma_formula == 0.0) return r;

    PoleResult trial = pole;
    auto excess = [&](double log_gamma) {
        trial.gamma = std::exp(log_gamma);
        return integrate_lines(p, lines_for(p, trial, B, {})) - 1.0;
    };
    double lo = std::log(0.5 * r.gamma_formula), hi = std::log(2.0 * r.gamma_formula);
    double flo = excess(lo), fhi = excess(hi);
    for (int i = 0; i < 40 && flo < 0.0; ++i) flo = excess(lo -= std::log(2.0));
    for (int i = 0; i < 40 && fhi > 0.0; ++i) fhi = excess(hi += std::log(2.0));
    if (flo < 0.0 || fhi > 0.0) throw NumericalError("normalization root for gamma could not be bracketed");
    std::uintmax_t iters = 100;
    auto tol = boost::math::tools::eps_tolerance<double>(45);
    const auto [a, b] = boost::math::tools::toms748_solve(excess, lo, hi, flo, fhi, tol, iters);
    r.gamma = std::exp(0.5 * (a + b));
    r.broad_line = r.gamma > 1e-2 * r.omega_bar;
    return r;
}

}  // namespace izeno
