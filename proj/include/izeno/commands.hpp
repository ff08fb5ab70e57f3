#pragma once

#include <string>
#include <vector>

#include "izeno/config.hpp"

namespace izeno {

// Each command returns CSV text starting with the '#' metadata block.
std::string cmd_gamma_scan(const RunConfig& config);
std::string cmd_spectrum(const RunConfig& config);
std::string cmd_evolve(const RunConfig& config);
std::string cmd_dressed(const RunConfig& config);
std::string cmd_multilevel(const RunConfig& config);
std::string cmd_estimate_b(const RunConfig& config);

// [system] with the [evolve] lambda_cut / omega0_ref overrides applied.
SystemParams evolve_params(const RunConfig& config);

// n evenly spaced values on [lo, hi]; {lo} when n == 1.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace izeno
