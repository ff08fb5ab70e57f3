#pragma once

#include <complex>
#include <string>

#include "izeno/form_factor.hpp"

namespace izeno {

using cplx = std::complex<double>;

enum class Sheet { I, II, III };
enum class PoleMethod { perturbative, newton };

std::string to_string(Sheet sheet);
std::string to_string(PoleMethod method);

struct PoleResult {
    cplx s_pole{};
    double gamma = 0.0;    // -2 Re s_pole
    double delta_E = 0.0;  // omega0 + Im s_pole
    Sheet sheet = Sheet::II;
    PoleMethod method = PoleMethod::perturbative;
    double residual = 0.0;  // |s + i omega0 + Q(B, s)|
    bool unphysical = false;  // B > omega0: outside the validity of the approximation
    int iterations = 0;

    // omega0 - delta_E, the shifted line center.
    double omega_bar(double omega0) const { return omega0 - delta_E; }
};

// P-integral of chi^2(w)/(w - eta) over (0, inf); ordinary integral for eta <= 0.
double principal_value(const FormFactorModel& model, double eta);

// q(-i eta + 0+) = pi chi^2(eta) theta(eta) - i P-integral.
cplx q_boundary(const FormFactorModel& model, double eta);

// q(s) = -i * integral chi^2(w)/(w - i s); cut on the negative imaginary axis.
cplx q_sheet_I(const FormFactorModel& model, cplx s);

// Continuation through the cut: q_I(s) + 2 pi chi^2(i s) for Re s < 0.
cplx q_sheet_II(const FormFactorModel& model, cplx s);

// g^2 omega0 * (q(s + iB) + q(s - iB)) / 2 on the requested determination.
cplx Q_of_B(const SystemParams& params, double B, cplx s, Sheet sheet);

// Sheet used by the pole search: II at B = 0 or B > omega0, III otherwise.
Sheet pole_sheet(const SystemParams& params, double B);

PoleResult pole_perturbative(const SystemParams& params, double B);

struct NewtonOptions {
    double tol = 1e-12;  // residual bound in units of omega0
    int max_iter = 50;
    double fd_step = 1e-7;  // derivative step in units of omega0
};

PoleResult pole_newton(const SystemParams& params, double B, const NewtonOptions& options = {});

double gamma_ratio_closed_form(int kappa, double b_over_omega0);
double gamma_ratio_closed_form(const TransitionSpec& transition, double b_over_omega0);

// 2 pi g^2 omega0 chi^2(omega0).
double golden_rule_gamma(const SystemParams& params);

// pi g^2 omega0 [chi^2(omega0 + B) + chi^2(omega0 - B) theta(omega0 - B)].
double gamma_of_B(const SystemParams& params, double B);

struct FlaggedRate {
    double rate = 0.0;
    bool unphysical = false;
};

// (gamma/2) chi^2(B)/chi^2(omega0) for B > lambda_cut.
FlaggedRate gamma_large_B(const SystemParams& params, double B);

// g^2 max(|q'(-i omega0)|, |Im q_b(omega0)| / omega0); small means the pole is perturbative.
double coupling_strength(const SystemParams& params);

}  // namespace izeno
