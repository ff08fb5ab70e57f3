#include "izeno/self_energy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "izeno/errors.hpp"
#include "quadrature.hpp"

namespace izeno {

namespace {

using std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// Integral over [a, inf), split at the cutoff so the adaptive rules see its shoulder.
template <class F>
auto tail(const FormFactorModel& m, F&& f, double a, const char* what) {
    using R = decltype(f(a));
    const double L = m.lambda_cut;
    R acc(0.0);
    double start = a;
    if (L > a) {
        acc += detail::gk(f, a, L, what);
        start = L;
    }
    acc += detail::semi_infinite(f, start, std::max(start, L), what);
    return acc;
}

// F(z) = integral_0^inf chi^2(w)/(w - z) dw for z off [0, inf).
cplx stieltjes(const FormFactorModel& m, cplx z) {
    const double x = z.real();
    const double y = z.imag();
    if (x > 0.0 && std::abs(y) <= x) {
        // Near the positive axis: subtract chi^2(z) on [0, 2x] and add its log integral back.
        const double W = 2.0 * x;
        const cplx c = chi_squared(m, z);
        const cplx dc = chi_squared_derivative(m, z);
        auto sub = [&](double w) -> cplx {
            const cplx d = w - z;
            if (std::abs(d) < 1e-9 * x) return dc;
            return (chi_squared(m, w) - c) / d;
        };
        cplx acc = detail::gk(sub, 0.0, x, "subtracted window") + detail::gk(sub, x, W, "subtracted window");
        acc += c * (std::log(W - z) - std::log(-z));
        acc += tail(m, [&](double w) { return cplx(chi_squared(m, w)) / (w - z); }, W, "self-energy tail");
        return acc;
    }
    auto f = [&](double w) { return cplx(chi_squared(m, w)) / (w - z); };
    cplx acc(0.0);
    double start = 0.0;
    if (x > 0.0) {
        acc += detail::gk(f, 0.0, x, "self-energy");
        start = x;
    }
    return acc + tail(m, f, start, "self-energy tail");
}

}  // namespace

std::string to_string(Sheet sheet) {
    switch (sheet) {
        case Sheet::I: return "I";
        case Sheet::II: return "II";
        case Sheet::III: return "III";
    }
    return "?";
}

std::string to_string(PoleMethod method) { return method == PoleMethod::newton ? "newton" : "perturbative"; }

double principal_value(const FormFactorModel& m, double eta) {
    if (!std::isfinite(eta)) throw DomainError("principal_value requires finite eta");
    if (eta <= 0.0) {
        return tail(m, [&](double w) { return chi_squared(m, w) / (w - eta); }, 0.0, "dispersion integral");
    }
    // With the window [0, 2 eta] the log remainder ln((W - eta)/eta) vanishes.
    const double c = chi_squared(m, eta);
    const double dc = chi_squared_derivative(m, cplx(eta)).real();
    auto sub = [&](double w) {
        const double d = w - eta;
        if (std::abs(d) < 1e-9 * eta) return dc;
        return (chi_squared(m, w) - c) / d;
    };
    const double W = 2.0 * eta;
    double acc = detail::gk(sub, 0.0, eta, "principal value") + detail::gk(sub, eta, W, "principal value");
    acc += tail(m, [&](double w) { return chi_squared(m, w) / (w - eta); }, W, "principal value tail");
    return acc;
}

cplx q_boundary(const FormFactorModel& m, double eta) {
    m.validate();
    const double re = eta > 0.0 ? pi * chi_squared(m, eta) : 0.0;
    return {re, -principal_value(m, eta)};
}

cplx q_sheet_I(const FormFactorModel& m, cplx s) {
    m.validate();
    const cplx z = I * s;
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw DomainError("q_sheet_I: s lies on the cut (negative imaginary axis); use q_boundary");
    return -I * stieltjes(m, z);
}

cplx q_sheet_II(const FormFactorModel& m, cplx s) {
    m.validate();
    if (s.real() == 0.0 && s.imag() <= 0.0) return q_boundary(m, -s.imag());
    if (s.real() >= 0.0) return q_sheet_I(m, s);
    return q_sheet_I(m, s) + 2.0 * pi * chi_squared(m, I * s);
}

cplx Q_of_B(const SystemParams& p, double B, cplx s, Sheet sheet) {
    B = std::abs(B);
    const FormFactorModel& m = p.form_factor;
    const cplx sp = s + I * B;
    const cplx sm = s - I * B;
    cplx qp, qm;
    switch (sheet) {
        case Sheet::I:
            qp = q_sheet_I(m, sp);
            qm = B == 0.0 ? qp : q_sheet_I(m, sm);
            break;
        case Sheet::II:
            // Only the cut reaching up to +iB is crossed; at B = 0 both coincide.
            qm = q_sheet_II(m, sm);
            qp = B == 0.0 ? qm : q_sheet_I(m, sp);
            break;
        case Sheet::III:
            qp = q_sheet_II(m, sp);
            qm = B == 0.0 ? qp : q_sheet_II(m, sm);
            break;
    }
    return p.g2 * p.omega0 * 0.5 * (qp + qm);
}

Sheet pole_sheet(const SystemParams& p, double B) {
    if (B < 0.0) throw DomainError("B must be non-negative");
    if (B == p.omega0)
        throw PreconditionError("B = omega0: the perturbative disc |s + i omega0| < |B - omega0| has zero radius");
    if (B == 0.0 || B > p.omega0) return Sheet::II;
    return Sheet::III;
}

PoleResult pole_perturbative(const SystemParams& p, double B) {
    p.validate();
    const Sheet sheet = pole_sheet(p, B);
    const FormFactorModel& m = p.form_factor;
    const cplx qsum = q_boundary(m, p.omega0 + B) + q_boundary(m, p.omega0 - B);
    PoleResult r;
    r.s_pole = -I * p.omega0 - 0.5 * p.g2 * p.omega0 * qsum;
    r.gamma = -2.0 * r.s_pole.real() + 0.0;
    r.delta_E = p.omega0 + r.s_pole.imag();
    r.sheet = sheet;
    r.method = PoleMethod::perturbative;
    r.unphysical = B > p.omega0;
    r.residual = std::abs(r.s_pole + I * p.omega0 + Q_of_B(p, B, r.s_pole, sheet));
    return r;
}

PoleResult pole_newton(const SystemParams& p, double B, const NewtonOptions& opt) {
    PoleResult r = pole_perturbative(p, B);
    r.method = PoleMethod::newton;
    const double w0 = p.omega0;
    const double radius = std::abs(B - w0);
    const double h = opt.fd_step * w0;
    auto f = [&](cplx s) { return s + I * w0 + Q_of_B(p, B, s, r.sheet); };

    cplx s = r.s_pole;
    std::vector<cplx> trail{s};
    bool converged = false;
    int it = 0;
    while (it < opt.max_iter) {
        ++it;
        const cplx fs = f(s);
        if (fs == 0.0) {
            converged = true;
            break;
        }
        const cplx dQ = (Q_of_B(p, B, s + I * h, r.sheet) - Q_of_B(p, B, s - I * h, r.sheet)) / (2.0 * I * h);
        const cplx ds = -fs / (1.0 + dQ);
        s += ds;
        trail.push_back(s);
        if (std::abs(s + I * w0) >= radius) {
            std::ostringstream os;
            os << "pole_newton left the convergence disc |s + i omega0| < " << radius << " at s = " << s
               << " (sheet " << to_string(r.sheet) << ")";
            throw SheetError(os.str());
        }
        if (std::abs(ds.real()) <= 1e-9 * std::abs(s.real()) && std::abs(ds.imag()) <= 1e-14 * w0) {
            converged = true;
            break;
        }
    }
    const double residual = std::abs(f(s));
    if (!converged || residual > opt.tol * w0) {
        std::ostringstream os;
        os << "pole_newton did not converge in " << it << " iterations (residual " << residual << ")";
        throw ConvergenceError(os.str(), std::move(trail));
    }
    r.s_pole = s;
    r.gamma = -2.0 * s.real() + 0.0;
    r.delta_E = w0 + s.imag();
    r.residual = residual;
    r.iterations = it;
    return r;
}

double gamma_ratio_closed_form(int kappa, double b) {
    b = std::abs(b);
    if (b > 1.0) return 0.5 * std::pow(1.0 + b, kappa);
    // Odd powers cancel: sum of C(kappa, k) b^k over even k, Horner in b^2.
    const double b2 = b * b;
    double acc = 0.0;
    for (int k = kappa - kappa % 2; k >= 0; k -= 2) {
        double c = 1.0;
        for (int i = 0; i < k; ++i) c = c * (kappa - i) / (i + 1);
        acc = acc * b2 + c;
    }
    return acc;
}

double gamma_ratio_closed_form(const TransitionSpec& t, double b) { return gamma_ratio_closed_form(kappa_of(t), b); }

double golden_rule_gamma(const SystemParams& p) {
    return 2.0 * pi * p.g2 * p.omega0 * chi_squared(p.form_factor, p.omega0);
}

double gamma_of_B(const SystemParams& p, double B) {
    B = std::abs(B);
    const FormFactorModel& m = p.form_factor;
    const double low = B <= p.omega0 ? chi_squared(m, p.omega0 - B) : 0.0;
    return pi * p.g2 * p.omega0 * (chi_squared(m, p.omega0 + B) + low);
}

FlaggedRate gamma_large_B(const SystemParams& p, double B) {
    if (!(B > p.form_factor.lambda_cut)) throw PreconditionError("gamma_large_B requires B > lambda_cut");
    const double gamma0 = golden_rule_gamma(p);
    const FormFactorModel& m = p.form_factor;
    return {0.5 * gamma0 * chi_squared(m, B) / chi_squared(m, p.omega0), true};
}

double coupling_strength(const SystemParams& p) {
    const FormFactorModel& m = p.form_factor;
    const double w0 = p.omega0;
    const double h = 1e-4 * w0;
    const cplx dq = (q_boundary(m, w0 + h) - q_boundary(m, w0 - h)) / (2.0 * h);
    const double shift = std::abs(principal_value(m, w0));
    return p.g2 * std::max(w0 * std::abs(dq), m.kappa * shift);
}

}  // namespace izeno
