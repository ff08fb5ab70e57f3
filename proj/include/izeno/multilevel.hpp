#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "izeno/form_factor.hpp"

namespace izeno {

struct DressedDoublet {
    double energy_plus = 0.0;
    double energy_minus = 0.0;
    double coupling_scale = 0.0;  // relative to the bare phi
    double splitting = 0.0;       // 2B, the Rabi frequency
};

DressedDoublet dressed_doublet(double B);

struct PartialRates {
    double gamma_plus = 0.0;   // decay into |+>, photon at omega0 - B
    double gamma_minus = 0.0;  // decay into |->, photon at omega0 + B
};

PartialRates partial_rates(const SystemParams& params, double B);

struct LadderLevel {
    double f = 0.0;      // |Phi_j|^2 / |Phi_3|^2
    double delta = 0.0;  // Omega_j - Omega_3
};

// Off-resonant levels j = 4..N; level 3 (f = 1, delta = 0) is implicit.
struct LevelLadder {
    std::vector<LadderLevel> entries;

    void validate() const;  // sorts nothing; checks f >= 0, delta != 0
    LevelLadder sorted() const;  // by |delta|
};

struct PartialFractionDecomp {
    std::vector<double> shifts;   // sigma_i, ascending
    std::vector<double> weights;  // c_i
};

// Roots of sigma - B^2 sum_j f_j/(sigma - delta_j) with the denominators cleared, ascending.
std::vector<double> branch_points(const LevelLadder& ladder, double B);

// Message if two branch points lie within 1e-10 of each other.
std::optional<std::string> conditioning_warning(const std::vector<double>& roots);

PartialFractionDecomp partial_fractions(const LevelLadder& ladder, double B);

// Second-order expansion in B of shifts and weights, ascending in shift.
PartialFractionDecomp perturbative_shifts(const LevelLadder& ladder, double B);

// gamma * sum_i c_i (1 - sigma_i/omega0)^kappa theta(omega0 - sigma_i), gamma the golden rule.
double gamma_many(const SystemParams& params, const PartialFractionDecomp& decomposition);
double gamma_many(const SystemParams& params, const LevelLadder& ladder, double B);

// True when a dressed-pair shift exceeds omega0, outside the analysed regime.
bool gamma_many_regime_flag(const PartialFractionDecomp& decomposition, double B, double omega0);

// B [1 + sum f omega0/(2 delta)]; requires every delta > omega0.
double effective_B_star(const LevelLadder& ladder, double B, double omega0);

}  // namespace izeno
