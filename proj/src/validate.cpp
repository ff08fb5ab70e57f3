#include "izeno/validate.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "izeno/commands.hpp"
#include "izeno/dynamics.hpp"
#include "izeno/errors.hpp"
#include "izeno/lab_units.hpp"
#include "izeno/multilevel.hpp"
#include "izeno/self_energy.hpp"
#include "izeno/spectrum.hpp"
#include "quadrature.hpp"

namespace izeno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Outcome {
    double value;
    double threshold;
    bool passed;
    std::string detail = {};
};

class Battery {
public:
    void run(const std::string& module, const std::string& name, const std::function<Outcome()>& body) {
        CheckResult r;
        r.module = module;
        r.name = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            const Outcome o = body();
            r.value = o.value;
            r.threshold = o.threshold;
            r.passed = o.passed;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.value = kNaN;
            r.passed = false;
            r.detail = std::string("threw: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.checks.push_back(std::move(r));
    }

    ValidationReport report;
};

Outcome below(double value, double threshold, std::string detail = {}) {
    return {value, threshold, value <= threshold, std::move(detail)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Resolvent kernel g^2 w0 chi^2(w) (s + i w)/((s + i w)^2 + B^2) integrated on a separate rule set.
cplx shift_identity_direct(const SystemParams& p, double B, cplx s) {
    const FormFactorModel& m = p.form_factor;
    auto kernel = [&](double w) {
        const cplx a = s + cplx(0.0, w);
        return cplx(chi_squared(m, w)) / (a + B * B / a);
    };
    std::vector<double> bps{0.0};
    for (double c : {-s.imag() - B, -s.imag() + B})
        if (c > 0.0) bps.push_back(c);
    bps.push_back(m.lambda_cut);
    std::sort(bps.begin(), bps.end());
    cplx acc = 0.0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) acc += detail::gk(kernel, bps[i], bps[i + 1], "oracle", 1e-13);
    boost::math::quadrature::exp_sinh<double> es;
    const double a = bps.back();
    auto re = [&](double u) { return kernel(a + u).real(); };
    auto im = [&](double u) { return kernel(a + u).imag(); };
    acc += cplx(es.integrate(re, 0.0, INFINITY, 1e-13), es.integrate(im, 0.0, INFINITY, 1e-13));
    return p.g2 * p.omega0 * acc;
}

LevelLadder random_ladder(std::mt19937_64& rng, double omega0, bool off_resonant) {
    std::uniform_int_distribution<int> count(1, 5);
    std::uniform_real_distribution<double> f(0.05, 1.0);
    std::uniform_real_distribution<double> d(1.5, 8.0);
    std::bernoulli_distribution sign(0.3);
    LevelLadder l;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        double delta = d(rng) * omega0;
        if (!off_resonant && sign(rng)) delta = -delta;
        l.entries.push_back({f(rng), delta});
    }
    return l.sorted();
}

}  // namespace

bool ValidationReport::all_passed() const { return failures() == 0; }

std::size_t ValidationReport::failures() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.passed ? 0 : 1;
    return n;
}

std::string ValidationReport::csv(const RunConfig& config) const {
    std::ostringstream o;
    o << metadata_header(config, "validate");
    o << "# summary: checks = " << checks.size() << ", passed = " << checks.size() - failures()
      << ", failed = " << failures() << "\n";
    o << "module,check,status,value,threshold,seconds,detail\n";
    for (const auto& c : checks) {
        std::string detail = c.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        std::replace(detail.begin(), detail.end(), '\n', ' ');
        o << c.module << ',' << c.name << ',' << (c.passed ? "pass" : "FAIL") << ',' << fmt(c.value) << ','
          << fmt(c.threshold) << ',' << fmt(c.seconds) << ',' << detail << '\n';
    }
    return o.str();
}

ValidationReport cmd_validate(const RunConfig& c) {
    Battery bat;
    std::mt19937_64 rng(c.seed);
    const SystemParams& p = c.system;
    const FormFactorModel& m = p.form_factor;
    const double w0 = p.omega0;

    // form_factor
    bat.run("form_factor", "chi2_integrable", [&] {
        m.validate();
        auto f = [&](double w) { return chi_squared(m, w); };
        const double T = 1e6 * m.lambda_cut;
        const double body = detail::gk(f, 0.0, m.lambda_cut, "chi2") + detail::gk(f, m.lambda_cut, T, "chi2");
        // chi^2 <= lambda^(kappa+beta) ref^-kappa w^-beta beyond lambda.
        const double bound = std::pow(m.lambda_cut, m.kappa + m.beta) * std::pow(m.omega0_ref, -m.kappa) *
                             std::pow(T, 1.0 - m.beta) / (m.beta - 1.0);
        return below(bound / body, 1e-3, "tail bound beyond 1e6 lambda relative to the body");
    });
    bat.run("form_factor", "log_slopes", [&] {
        auto slope = [&](double w) {
            return std::log(chi_squared(m, 2.0 * w) / chi_squared(m, w)) / std::log(2.0);
        };
        const double e1 = std::abs(slope(1e-6 * m.lambda_cut) - m.kappa);
        const double e2 = std::abs(slope(1e6 * m.lambda_cut) + m.beta);
        return below(std::max(e1, e2), 1e-3, "infrared slope kappa and ultraviolet slope -beta");
    });
    bat.run("form_factor", "nonnegative", [&] {
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) worst = std::min(worst, chi_squared(m, m.lambda_cut * std::pow(10.0, u(rng))));
        return Outcome{worst, 0.0, worst >= 0.0};
    });

    // self_energy
    const double cs = coupling_strength(p);
    const double base_tol = c.tolerance > 0.0 ? c.tolerance : 5e-3;
    const double tol = base_tol + 4.0 * cs;
    bat.run("self_energy", "golden_rule", [&] {
        const PoleResult r = pole_newton(p, 0.0);
        std::ostringstream d;
        d << "tolerance " << base_tol << " + 4 x coupling strength " << cs;
        return below(rel(r.gamma, golden_rule_gamma(p)), tol, d.str());
    });
    bat.run("self_energy", "pole_ratio_vs_closed_form", [&] {
        const double b = 0.2;
        const double ratio = pole_newton(p, b * w0).gamma / pole_newton(p, 0.0).gamma;
        return below(rel(ratio, gamma_ratio_closed_form(m.kappa, b)), 1e-2 + 4.0 * cs);
    });
    bat.run("self_energy", "shift_identity", [&] {
        std::uniform_real_distribution<double> re(0.05, 1.0), im(-2.0, 2.0), bb(0.0, 1.5);
        double worst = 0.0;
        for (int i = 0; i < c.validate.shift_samples; ++i) {
            const cplx s(re(rng) * w0, im(rng) * w0);
            const double B = bb(rng) * w0;
            const cplx direct = shift_identity_direct(p, B, s);
            worst = std::max(worst, std::abs(Q_of_B(p, B, s, Sheet::I) - direct) / std::abs(direct));
        }
        return below(worst, 1e-10, "worst relative difference over random off-cut samples");
    });
    bat.run("self_energy", "closed_form_endpoint", [&] {
        const double v = gamma_ratio_closed_form(m.kappa, 1.0);
        return below(std::abs(v - std::ldexp(0.5, m.kappa)), 0.0, "gamma(omega0)/gamma = 2^kappa / 2");
    });

    // dressed states
    bat.run("dressed_multilevel", "partial_rate_sum_rule", [&] {
        double worst = 0.0;
        for (double B : linspace(0.0, 2.0 * w0, 100)) {
            const PartialRates r = partial_rates(p, B);
            worst = std::max(worst, rel(r.gamma_plus + r.gamma_minus, gamma_of_B(p, B)));
            if (B > w0 && r.gamma_plus != 0.0) worst = INFINITY;
        }
        return below(worst, 1e-12);
    });
    bat.run("dressed_multilevel", "weights_sum_to_one", [&] {
        std::uniform_real_distribution<double> bb(0.05, 0.9);
        double worst = 0.0;
        for (int i = 0; i < c.validate.ladders; ++i) {
            const LevelLadder l = random_ladder(rng, w0, false);
            const auto d = partial_fractions(l, bb(rng) * w0);
            double sum = 0.0;
            for (double x : d.weights) sum += x;
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        return below(worst, 1e-12);
    });
    bat.run("dressed_multilevel", "perturbative_shift_order", [&] {
        double worst = 0.0;
        for (int i = 0; i < c.validate.ladders; ++i) {
            const LevelLadder l = random_ladder(rng, w0, false);
            auto err = [&](double B) {
                const auto e = partial_fractions(l, B).shifts;
                const auto q = perturbative_shifts(l, B).shifts;
                double mx = 0.0;
                for (std::size_t k = 0; k < e.size(); ++k) mx = std::max(mx, std::abs(e[k] - q[k]));
                return mx;
            };
            const double ratio = err(0.02 * w0) / err(0.01 * w0);
            worst = std::max(worst, std::abs(ratio / 8.0 - 1.0));
        }
        return below(worst, 0.25, "halving B divides the shift error by 8");
    });
    bat.run("dressed_multilevel", "b_star_exceeds_b", [&] {
        double worst = INFINITY;
        for (int i = 0; i < c.validate.ladders; ++i) {
            const LevelLadder l = random_ladder(rng, w0, true);
            worst = std::min(worst, effective_B_star(l, 0.3 * w0, w0) / (0.3 * w0) - 1.0);
        }
        return Outcome{worst, 0.0, worst > 0.0, "min B*/B - 1"};
    });

    // spectrum
    bat.run("spectrum", "normalization", [&] {
        const double B = c.spectrum.b * w0;
        const double n = spectrum_normalization(p, pole_newton(p, B), B);
        return below(std::abs(n - 1.0), 5e-3);
    });
    bat.run("spectrum", "recovered_gamma_vs_closed_form", [&] {
        const double b = 0.5;
        const RecoveredRate r0 = recover_gamma_from_normalization(p, 0.0);
        const RecoveredRate rb = recover_gamma_from_normalization(p, b * w0);
        return below(rel(rb.gamma / r0.gamma, gamma_ratio_closed_form(m.kappa, b)), 2e-2 + 4.0 * cs);
    });

    // dynamics
    if (c.validate.dynamics) {
        bat.run("dynamics", "survival_fit_vs_pole", [&] {
            const SystemParams q = evolve_params(c);
            const double B = c.evolve.b * q.omega0;
            const PoleResult pole = pole_newton(q, B);
            GridOptions g;
            g.focus = B > 0.0 ? std::vector<double>{q.omega0 - B, q.omega0 + B} : std::vector<double>{q.omega0};
            g.dense_halfwidth = c.evolve.dense_halfwidth;
            g.dense_fraction = c.evolve.dense_fraction;
            const ModeGrid grid = build_mode_grid(q, c.evolve.omega_max * q.omega0,
                                                  static_cast<std::size_t>(c.evolve.modes), c.evolve.rule, g);
            const double t1 = c.evolve.fit_start / pole.gamma, t2 = c.evolve.fit_end / pole.gamma;
            const TimeSeries ts = evolve(grid, q, B, t2, c.evolve.tolerance);
            const DecayFit fit = fit_decay_rate(survival_probability(ts), t1, t2);
            std::ostringstream d;
            d << "norm drift " << ts.max_norm_drift;
            const double e = rel(fit.gamma, pole.gamma);
            return Outcome{e, 0.05, e <= 0.05 && ts.max_norm_drift < 1e-8, d.str()};
        });
    }

    // lab_units
    bat.run("lab_units", "power_coefficient", [&] {
        return below(rel(lab::derived_power_coefficient(), 132.0), 1e-2);
    });
    bat.run("lab_units", "dipole_vs_linewidth", [&] {
        const double x2 = 2.5e-3, W = 0.7, n0 = 3e-4;
        const double a = lab::b_from_dipole(W, x2, n0);
        const double b = lab::b_from_linewidth(n0, lab::dipole_linewidth(x2, W), W);
        return below(rel(a, b), 1e-14);
    });
    bat.run("lab_units", "rabi_round_trip", [&] {
        const double B = 0.37;
        return below(std::abs(lab::b_from_rabi(lab::rabi_from_b(B)) - B), 0.0);
    });

    return bat.report;
}

}  // namespace izeno
