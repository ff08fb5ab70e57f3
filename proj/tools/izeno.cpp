#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "izeno/commands.hpp"
#include "izeno/config.hpp"
#include "izeno/errors.hpp"
#include "izeno/validate.hpp"

namespace {

enum Exit { ok = 0, validation_failed = 1, config_error = 2, numerical_error = 3 };

int emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return ok;
    }
    std::ofstream f(out);
    if (!f) {
        std::cerr << "error: cannot write " << out << "\n";
        return config_error;
    }
    f << text;
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay of a laser-driven three-level emitter: rates, spectra and time evolution"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<double> tolerance;
    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output CSV path (default stdout)");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--tolerance", tolerance, "base tolerance for validate")->check(CLI::NonNegativeNumber);

    auto* gamma_scan = app.add_subcommand("gamma-scan", "gamma(B)/gamma by closed form, pole search and spectrum");
    auto* spectrum = app.add_subcommand("spectrum", "emitted photon spectrum at B = 0 and B");
    auto* evolve = app.add_subcommand("evolve", "discretized-bath survival curve and fitted rate");
    auto* dressed = app.add_subcommand("dressed", "dressed doublet and partial rates");
    auto* multilevel = app.add_subcommand("multilevel", "rate with off-resonant levels, exact and perturbative");
    auto* estimate_b = app.add_subcommand("estimate-b", "B from laboratory laser parameters");
    auto* validate = app.add_subcommand("validate", "run the invariant battery");
    for (auto* sub : {gamma_scan, spectrum, evolve, dressed, multilevel, estimate_b, validate})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    izeno::RunConfig cfg;
    try {
        cfg = config_path.empty() ? izeno::default_config() : izeno::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        if (tolerance) cfg.tolerance = *tolerance;
        for (const auto& w : cfg.system.validate()) std::cerr << "warning: " << w << "\n";
    } catch (const izeno::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    }

    try {
        if (*gamma_scan) return emit(izeno::cmd_gamma_scan(cfg), out);
        if (*spectrum) return emit(izeno::cmd_spectrum(cfg), out);
        if (*evolve) return emit(izeno::cmd_evolve(cfg), out);
        if (*dressed) return emit(izeno::cmd_dressed(cfg), out);
        if (*multilevel) return emit(izeno::cmd_multilevel(cfg), out);
        if (*estimate_b) return emit(izeno::cmd_estimate_b(cfg), out);
        if (*validate) {
            const auto report = izeno::cmd_validate(cfg);
            const int rc = emit(report.csv(cfg), out);
            for (const auto& c : report.checks)
                if (!c.passed) std::cerr << "FAIL " << c.module << "." << c.name << ": " << c.detail << "\n";
            if (rc != ok) return rc;
            return report.all_passed() ? ok : validation_failed;
        }
    } catch (const izeno::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical_error;
    }
    return ok;
}
