#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "izeno/form_factor.hpp"
#include "izeno/self_energy.hpp"

namespace izeno {

enum class GridRule { uniform, gauss_legendre };

std::string to_string(GridRule rule);
GridRule grid_rule_from_string(const std::string& s);

struct GridOptions {
    std::vector<double> focus;     // resonance energies to resolve; empty means {omega0}
    double dense_halfwidth = 0.1;  // half-width of each dense window, units of omega0
    double dense_fraction = 0.7;   // share of the nodes placed in dense windows
    int panel_order = 8;
    double target_tolerance = 1e-5;  // relative bound on the coupling-sum quadrature error
};

struct ModeGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> couplings2;  // |phi_k|^2 = w_k g^2 omega0 chi^2(w_k)
    double omega_max = 0.0;
    GridRule rule = GridRule::gauss_legendre;
    double declared_tolerance = 0.0;
    double quadrature_error = 0.0;  // relative error of sum |phi_k|^2

    std::size_t size() const { return nodes.size(); }
};

ModeGrid build_mode_grid(const SystemParams& params, double omega_max, std::size_t M, GridRule rule,
                         const GridOptions& options = {});

// 2 pi over the widest node gap around the resonances omega0 +- B.
double recurrence_time(const ModeGrid& grid, double omega0, double B);

struct AmplitudeState {
    double t = 0.0;
    std::complex<double> x{1.0, 0.0};
    std::vector<std::complex<double>> y;  // empty unless modes were kept
    std::vector<std::complex<double>> z;
    double norm = 1.0;
};

struct EvolveOptions {
    std::size_t samples = 400;        // uniform samples on [0, t_final]
    std::vector<double> sample_times;  // extra sample times
    bool keep_modes = false;
    double initial_step = 1e-3;
    double min_step = 1e-13;
    std::size_t max_steps = 20'000'000;
};

struct TimeSeries {
    std::vector<AmplitudeState> states;
    double max_norm_drift = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

// Integrates i x' = w0 x + sum phi y, i y' = phi x + w y + B z, i z' = B y + w z from x = 1.
TimeSeries evolve(const ModeGrid& grid, const SystemParams& params, double B, double t_final, double tol,
                  const EvolveOptions& options = {});

struct SurvivalCurve {
    std::vector<double> t;
    std::vector<double> p;
};

SurvivalCurve survival_probability(const TimeSeries& series);

struct DecayFit {
    double gamma = 0.0;
    double uncertainty = 0.0;   // standard error of the slope
    double residual = 0.0;      // rms of the log residuals over their span
    std::size_t points = 0;
};

DecayFit fit_decay_rate(const SurvivalCurve& curve, double t1, double t2, double max_residual = 1e-2);

double ww_survival(const PoleResult& pole, double t);

}  // namespace izeno
