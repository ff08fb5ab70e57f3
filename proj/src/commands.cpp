#include "izeno/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "izeno/dynamics.hpp"
#include "izeno/errors.hpp"
#include "izeno/lab_units.hpp"
#include "izeno/multilevel.hpp"
#include "izeno/self_energy.hpp"
#include "izeno/spectrum.hpp"
#include "parallel.hpp"

namespace izeno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Pole rate, or NaN where no pole is defined (B = omega0) or the search fails.
double pole_gamma_or_nan(const SystemParams& p, double B) {
    try {
        return pole_newton(p, B).gamma;
    } catch (const PreconditionError&) {
        return kNaN;
    } catch (const NumericalError&) {
        return kNaN;
    }
}

double recovered_gamma_or_nan(const SystemParams& p, double B) {
    try {
        return recover_gamma_from_normalization(p, B).gamma;
    } catch (const std::exception&) {
        return kNaN;
    }
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
    if (n <= 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

SystemParams evolve_params(const RunConfig& c) {
    SystemParams p = c.system;
    if (c.evolve.lambda_cut) p.form_factor.lambda_cut = *c.evolve.lambda_cut;
    if (c.evolve.omega0_ref) p.form_factor.omega0_ref = *c.evolve.omega0_ref;
    p.validate();
    return p;
}

std::string cmd_gamma_scan(const RunConfig& c) {
    const auto& task = c.gamma_scan;
    std::vector<int> js = task.j_values;
    if (js.empty()) js.push_back(c.system.transition.j);
    const auto bs = linspace(task.b_min, task.b_max, task.points);

    struct Row {
        int j, kappa;
        double b, closed, pole, spectrum;
    };
    std::vector<std::pair<int, double>> jobs;
    for (int j : js)
        for (double b : bs) jobs.emplace_back(j, b);

    auto params_for = [&](int j) {
        SystemParams p = c.system;
        p.transition = {j, c.system.transition.character};
        p.form_factor.kappa = kappa_of(p.transition);
        return p;
    };
    // Reference rates at B = 0, one per j.
    auto refs = detail::parallel_map(js.size(), c.threads, [&](std::size_t i) {
        const SystemParams p = params_for(js[i]);
        return std::pair{task.with_pole ? pole_gamma_or_nan(p, 0.0) : kNaN,
                         task.with_spectrum ? recovered_gamma_or_nan(p, 0.0) : kNaN};
    });
    auto rows = detail::parallel_map(jobs.size(), c.threads, [&](std::size_t i) {
        const auto [j, b] = jobs[i];
        const SystemParams p = params_for(j);
        const std::size_t ji = static_cast<std::size_t>(std::find(js.begin(), js.end(), j) - js.begin());
        const double B = b * p.omega0;
        Row r{j, p.form_factor.kappa, b, gamma_ratio_closed_form(p.form_factor.kappa, b), kNaN, kNaN};
        if (task.with_pole) r.pole = pole_gamma_or_nan(p, B) / refs[ji].first;
        if (task.with_spectrum) r.spectrum = recovered_gamma_or_nan(p, B) / refs[ji].second;
        return r;
    });

    std::ostringstream o;
    o << metadata_header(c, "gamma-scan");
    o << "j,kappa,b_over_omega0,ratio_closed_form,ratio_pole,ratio_spectrum\n";
    for (const Row& r : rows)
        o << r.j << ',' << r.kappa << ',' << fmt(r.b) << ',' << fmt(r.closed) << ',' << fmt(r.pole) << ','
          << fmt(r.spectrum) << '\n';
    return o.str();
}

std::string cmd_spectrum(const RunConfig& c) {
    const SystemParams& p = c.system;
    const auto& task = c.spectrum;
    const double B = task.b * p.omega0;
    const PoleResult pole0 = pole_newton(p, 0.0);
    const PoleResult poleB = pole_newton(p, B);
    const auto omegas = linspace(task.omega_min * p.omega0, task.omega_max * p.omega0, task.points);
    SpectrumOptions opt;
    opt.per_channel_widths = task.per_channel_widths;
    const auto curve0 = sample_spectrum(p, pole0, 0.0, omegas);
    const auto curveB = sample_spectrum(p, poleB, B, omegas, opt);

    std::ostringstream o;
    o << metadata_header(c, "spectrum");
    o << "# gamma_B0 = " << fmt(pole0.gamma) << "\n# gamma_B = " << fmt(poleB.gamma)
      << "\n# omega_bar = " << fmt(poleB.omega_bar(p.omega0)) << "\n# normalization_B0 = "
      << fmt(spectrum_normalization(p, pole0, 0.0)) << "\n# normalization_B = "
      << fmt(spectrum_normalization(p, poleB, B, opt)) << "\n";
    o << "omega,density_B0,density_B\n";
    for (std::size_t i = 0; i < omegas.size(); ++i)
        o << fmt(omegas[i]) << ',' << fmt(curve0.density[i]) << ',' << fmt(curveB.density[i]) << '\n';
    return o.str();
}

std::string cmd_evolve(const RunConfig& c) {
    const SystemParams p = evolve_params(c);
    const auto& task = c.evolve;
    const double B = task.b * p.omega0;
    const PoleResult pole = pole_newton(p, B);
    const double t_final = task.t_final > 0.0 ? task.t_final : task.fit_end / pole.gamma;

    GridOptions gopt;
    gopt.focus = {p.omega0 - B, p.omega0 + B};
    if (B == 0.0) gopt.focus = {p.omega0};
    gopt.dense_halfwidth = task.dense_halfwidth;
    gopt.dense_fraction = task.dense_fraction;
    const ModeGrid grid =
        build_mode_grid(p, task.omega_max * p.omega0, static_cast<std::size_t>(task.modes), task.rule, gopt);

    EvolveOptions eopt;
    eopt.samples = static_cast<std::size_t>(task.samples);
    const TimeSeries series = evolve(grid, p, B, t_final, task.tolerance, eopt);
    const SurvivalCurve curve = survival_probability(series);

    std::ostringstream o;
    o << metadata_header(c, "evolve");
    o << "# gamma_pole = " << fmt(pole.gamma) << "\n# recurrence_time = " << fmt(recurrence_time(grid, p.omega0, B))
      << "\n# grid_quadrature_error = " << fmt(grid.quadrature_error)
      << "\n# max_norm_drift = " << fmt(series.max_norm_drift) << "\n# accepted_steps = " << series.accepted_steps
      << "\n";
    const double t1 = task.fit_start / pole.gamma, t2 = task.fit_end / pole.gamma;
    if (t2 <= t_final) {
        const DecayFit fit = fit_decay_rate(curve, t1, t2);
        o << "# gamma_fit = " << fmt(fit.gamma) << "\n# gamma_fit_uncertainty = " << fmt(fit.uncertainty)
          << "\n# fit_relative_difference = " << fmt(fit.gamma / pole.gamma - 1.0) << "\n";
    }
    o << "t,survival,survival_ww\n";
    for (std::size_t i = 0; i < curve.t.size(); ++i)
        o << fmt(curve.t[i]) << ',' << fmt(curve.p[i]) << ',' << fmt(ww_survival(pole, curve.t[i])) << '\n';
    return o.str();
}

std::string cmd_dressed(const RunConfig& c) {
    const SystemParams& p = c.system;
    const auto bs = linspace(c.gamma_scan.b_min, c.gamma_scan.b_max, c.gamma_scan.points);
    std::ostringstream o;
    o << metadata_header(c, "dressed");
    o << "b_over_omega0,energy_plus,energy_minus,rabi,gamma_plus,gamma_minus,gamma_sum,gamma_B\n";
    for (double b : bs) {
        const double B = b * p.omega0;
        const DressedDoublet d = dressed_doublet(B);
        const PartialRates r = partial_rates(p, B);
        o << fmt(b) << ',' << fmt(d.energy_plus) << ',' << fmt(d.energy_minus) << ',' << fmt(d.splitting) << ','
          << fmt(r.gamma_plus) << ',' << fmt(r.gamma_minus) << ',' << fmt(r.gamma_plus + r.gamma_minus) << ','
          << fmt(gamma_of_B(p, B)) << '\n';
    }
    return o.str();
}

std::string cmd_multilevel(const RunConfig& c) {
    const SystemParams& p = c.system;
    const double gamma0 = golden_rule_gamma(p);
    const auto bs = linspace(c.multilevel.b_min, c.multilevel.b_max, c.multilevel.points);
    struct Row {
        double b, exact, pert, b_star, ratio_star;
        bool flag;
    };
    auto rows = detail::parallel_map(bs.size(), c.threads, [&](std::size_t i) {
        const double B = bs[i] * p.omega0;
        const auto exact = partial_fractions(c.ladder, B);
        const auto pert = perturbative_shifts(c.ladder, B);
        Row r{bs[i], gamma_many(p, exact) / gamma0, gamma_many(p, pert) / gamma0, kNaN, kNaN,
              gamma_many_regime_flag(exact, B, p.omega0)};
        try {
            r.b_star = effective_B_star(c.ladder, B, p.omega0);
            r.ratio_star = gamma_of_B(p, r.b_star) / gamma0;
        } catch (const PreconditionError&) {
        }
        return r;
    });
    std::ostringstream o;
    o << metadata_header(c, "multilevel");
    o << "b_over_omega0,gamma_many_exact,gamma_many_perturbative,b_star,gamma_b_star,outside_regime\n";
    for (const Row& r : rows)
        o << fmt(r.b) << ',' << fmt(r.exact) << ',' << fmt(r.pert) << ',' << fmt(r.b_star / p.omega0) << ','
          << fmt(r.ratio_star) << ',' << (r.flag ? 1 : 0) << '\n';
    return o.str();
}

std::string cmd_estimate_b(const RunConfig& c) {
    const double B = lab::resolve_b(c.laser);
    const double w0 = c.laser_omega0_eV;
    std::ostringstream o;
    o << metadata_header(c, "estimate-b");
    o << "quantity,value,unit\n";
    o << "B," << fmt(B) << ",eV\n";
    o << "B_over_omega0," << fmt(B / w0) << ",1\n";
    o << "rabi," << fmt(lab::rabi_from_b(B)) << ",eV\n";
    o << "rabi_over_omega0," << fmt(lab::rabi_from_b(B) / w0) << ",1\n";
    o << "power_coefficient," << fmt(lab::derived_power_coefficient()) << ",eV^2 um^2/(W um^3 eV)\n";
    return o.str();
}

}  // namespace izeno
