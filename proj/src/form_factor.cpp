#include "izeno/form_factor.hpp"

#include <cmath>

#include "izeno/errors.hpp"

namespace izeno {

void TransitionSpec::validate() const {
    if (j < 1) throw DomainError("transition j must be >= 1, got " + std::to_string(j));
}

int kappa_of(const TransitionSpec& transition) {
    transition.validate();
    return transition.character == Multipole::electric ? 2 * transition.j - 1 : 2 * transition.j + 1;
}

void FormFactorModel::validate() const {
    if (kappa < 1 || kappa % 2 == 0)
        throw DomainError("kappa must be an odd positive integer, got " + std::to_string(kappa));
    if (!(lambda_cut > 0.0)) throw DomainError("lambda_cut must be positive");
    if (!(beta > 1.0)) throw DomainError("beta must exceed 1 for omega*chi^2 to be integrable");
    if (!(omega0_ref > 0.0)) throw DomainError("omega0_ref must be positive");
}

namespace {

template <class T>
T int_pow(T base, int n) {
    T r(1.0);
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

}  // namespace

double chi_squared(const FormFactorModel& m, double omega) {
    if (!(omega >= 0.0)) throw DomainError("chi_squared requires omega >= 0");
    const double u = omega / m.lambda_cut;
    const double p = -0.5 * (m.kappa + m.beta);
    if (u <= 1.0) return int_pow(omega / m.omega0_ref, m.kappa) * std::pow(1.0 + u * u, p);
    // Factored form keeps the far tail finite.
    const double v = 1.0 / u;
    return int_pow(m.lambda_cut / m.omega0_ref, m.kappa) * std::pow(u, -m.beta) * std::pow(1.0 + v * v, p);
}

std::complex<double> chi_squared(const FormFactorModel& m, std::complex<double> z) {
    const std::complex<double> u = z / m.lambda_cut;
    const std::complex<double> base = 1.0 + u * u;
    if (std::abs(base) < 1e-14) throw DomainError("chi_squared continuation hit the singularity at +-i*lambda_cut");
    if (base.real() < 0.0 && base.imag() == 0.0)
        throw DomainError("chi_squared continuation requested on its cut beyond +-i*lambda_cut");
    return int_pow(z / m.omega0_ref, m.kappa) * std::pow(base, -0.5 * (m.kappa + m.beta));
}

std::complex<double> chi_squared_derivative(const FormFactorModel& m, std::complex<double> z) {
    const double L2 = m.lambda_cut * m.lambda_cut;
    const std::complex<double> base = 1.0 + z * z / L2;
    const std::complex<double> damp = std::pow(base, -0.5 * (m.kappa + m.beta));
    const std::complex<double> w = z / m.omega0_ref;
    // d/dz [w^k] * damp + w^k * d/dz[damp]
    const std::complex<double> lead = double(m.kappa) / m.omega0_ref * int_pow(w, m.kappa - 1);
    const std::complex<double> ddamp = -(m.kappa + m.beta) * z / L2 * damp / base;
    return lead * damp + int_pow(w, m.kappa) * ddamp;
}

double coupling_g2(double alpha_fs, double omega0, double lambda_cut, const TransitionSpec& transition) {
    if (!(omega0 > 0.0) || !(lambda_cut > 0.0))
        throw DomainError("coupling_g2 requires positive omega0 and lambda_cut");
    transition.validate();
    const int exponent = transition.character == Multipole::electric ? 2 * transition.j : 2 * transition.j + 2;
    return alpha_fs * std::pow(omega0 / lambda_cut, exponent);
}

std::vector<std::string> SystemParams::validate() const {
    std::vector<std::string> warnings;
    if (!(omega0 > 0.0)) throw DomainError("omega0 must be positive");
    if (!(g2 >= 0.0)) throw DomainError("g2 must be non-negative");
    form_factor.validate();
    if (kappa_of(transition) != form_factor.kappa)
        throw DomainError("form_factor.kappa = " + std::to_string(form_factor.kappa) +
                          " disagrees with the transition exponent " + std::to_string(kappa_of(transition)));
    if (g2 > 1e-2) warnings.push_back("g2 > 1e-2: weak-coupling expansions lose accuracy");
    if (!(omega0 < form_factor.lambda_cut)) warnings.push_back("omega0 >= lambda_cut: outside the physical regime");
    return warnings;
}

std::string to_string(Multipole m) { return m == Multipole::electric ? "electric" : "magnetic"; }

Multipole multipole_from_string(const std::string& s) {
    if (s == "electric" || s == "E" || s == "e") return Multipole::electric;
    if (s == "magnetic" || s == "M" || s == "m") return Multipole::magnetic;
    throw DomainError("unknown multipole character '" + s + "'");
}

}  // namespace izeno
