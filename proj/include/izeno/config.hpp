#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "izeno/dynamics.hpp"
#include "izeno/form_factor.hpp"
#include "izeno/lab_units.hpp"
#include "izeno/multilevel.hpp"

namespace izeno {

struct GammaScanTask {
    double b_min = 0.0;
    double b_max = 1.0;
    int points = 11;
    std::vector<int> j_values;  // empty: the [system] transition only
    bool with_pole = true;
    bool with_spectrum = true;
};

struct SpectrumTask {
    double b = 0.2;
    double omega_min = 0.5;
    double omega_max = 1.5;
    int points = 2001;
    bool per_channel_widths = false;
};

struct EvolveTask {
    double b = 0.5;
    int modes = 2000;
    double omega_max = 30.0;
    GridRule rule = GridRule::gauss_legendre;
    double dense_halfwidth = 0.1;
    double dense_fraction = 0.7;
    double tolerance = 1e-7;
    int samples = 400;
    double t_final = 0.0;    // 0: fit_end / gamma_pole
    double fit_start = 1.0;  // units of 1/gamma_pole
    double fit_end = 5.0;
    std::optional<double> lambda_cut;  // overrides [form_factor] for this task
    std::optional<double> omega0_ref;
};

struct MultilevelTask {
    double b_min = 0.0;
    double b_max = 0.5;
    int points = 11;
};

struct ValidateTask {
    int shift_samples = 100;
    int ladders = 20;
    bool dynamics = true;
};

struct RunConfig {
    SystemParams system;
    lab::LaserSpec laser = lab::DirectDrive{0.2};
    double laser_omega0_eV = 1.0;  // physical omega0 used to report B/omega0
    LevelLadder ladder;
    GammaScanTask gamma_scan;
    SpectrumTask spectrum;
    EvolveTask evolve;
    MultilevelTask multilevel;
    ValidateTask validate;
    std::uint64_t seed = 20240531;
    int threads = 1;
    double tolerance = 0.0;  // 0: per-check defaults
};

// The defaults: standard weak-coupling regime (omega0_ref = lambda_cut = 1e3 omega0).
RunConfig default_config();

// Parses sectioned INI text on top of the defaults; unknown sections or keys raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Fully resolved config as INI text.
std::string serialize_config(const RunConfig& config);

// '#'-prefixed metadata block: command, version, resolved config.
std::string metadata_header(const RunConfig& config, const std::string& command);

// %.17g
std::string fmt(double v);

}  // namespace izeno
