#pragma once

#include <vector>

#include "izeno/form_factor.hpp"
#include "izeno/self_energy.hpp"

namespace izeno {

// f_L(w; gamma) = 1/(w^2 + gamma^2/4).
double lorentzian(double omega, double gamma);

// g^2 omega0 chi^2(w) f_L(w - omega_bar; gamma).
double spectrum_B0(const SystemParams& params, const PoleResult& pole, double omega);

struct SpectrumOptions {
    // Give the line at omega_bar -+ B the channel width gamma_+- instead of the shared gamma(B).
    // Off by default; with it on the normalization is no longer 1.
    bool per_channel_widths = false;
};

// g^2 omega0 chi^2(w) [f_L(w - omega_bar - B) + f_L(w - omega_bar + B)] / 2.
double spectrum_B(const SystemParams& params, const PoleResult& pole, double B, double omega,
                  const SpectrumOptions& options = {});

struct SpectrumCurve {
    std::vector<double> omegas;
    std::vector<double> density;
    SystemParams params;
    double B = 0.0;
    double gamma = 0.0;
    double omega_bar = 0.0;
};

SpectrumCurve sample_spectrum(const SystemParams& params, const PoleResult& pole, double B,
                              const std::vector<double>& omegas, const SpectrumOptions& options = {});

// Trapezoid integral of the sampled density.
double trapezoid_integral(const SpectrumCurve& curve);

// Integral of spectrum_B over (0, inf).
double spectrum_normalization(const SystemParams& params, const PoleResult& pole, double B,
                              const SpectrumOptions& options = {});

struct Occupations {
    double y2 = 0.0;
    double z2 = 0.0;
};

// Pole-damped occupations per unit frequency, |phi|^2 = g^2 omega0 chi^2(omega_k).
Occupations asymptotic_occupations(const SystemParams& params, const PoleResult& pole, double B, double omega_k,
                                   double t);

struct RecoveredRate {
    double gamma = 0.0;          // root of the normalization condition
    double gamma_formula = 0.0;  // narrow-line closed form
    double omega_bar = 0.0;
    bool broad_line = false;     // gamma not << omega_bar
};

// Solves integral dP_B(gamma) = 1 for gamma with the line center from the pole expansion.
RecoveredRate recover_gamma_from_normalization(const SystemParams& params, double B);

}  // namespace izeno
