#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <functional>
#include <map>
#include <string>

#include "izeno/commands.hpp"
#include "izeno/config.hpp"
#include "izeno/errors.hpp"
#include "izeno/lab_units.hpp"
#include "izeno/multilevel.hpp"
#include "izeno/self_energy.hpp"
#include "izeno/spectrum.hpp"
#include "izeno/validate.hpp"

namespace py = pybind11;
using namespace izeno;

namespace {

std::string run_command(const std::string& name, const std::string& config_text) {
    static const std::map<std::string, std::function<std::string(const RunConfig&)>> table{
        {"gamma-scan", cmd_gamma_scan}, {"spectrum", cmd_spectrum},     {"evolve", cmd_evolve},
        {"dressed", cmd_dressed},       {"multilevel", cmd_multilevel}, {"estimate-b", cmd_estimate_b},
    };
    auto it = table.find(name);
    if (it == table.end()) throw py::value_error("unknown command '" + name + "'");
    const RunConfig c = parse_config(config_text);
    py::gil_scoped_release release;
    return it->second(c);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decay of a laser-driven emitter: self-energy poles, spectra, time evolution.";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<FormFactorModel>(m, "FormFactorModel")
        .def(py::init<>())
        .def(py::init([](int kappa, double lambda_cut, double beta, double omega0_ref) {
                 FormFactorModel f{kappa, lambda_cut, beta, omega0_ref};
                 f.validate();
                 return f;
             }),
             py::arg("kappa") = 3, py::arg("lambda_cut") = 1e3, py::arg("beta") = 2.0, py::arg("omega0_ref") = 1.0)
        .def_readwrite("kappa", &FormFactorModel::kappa)
        .def_readwrite("lambda_cut", &FormFactorModel::lambda_cut)
        .def_readwrite("beta", &FormFactorModel::beta)
        .def_readwrite("omega0_ref", &FormFactorModel::omega0_ref);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double omega0, double g2, const FormFactorModel& ff) {
                 SystemParams p;
                 p.omega0 = omega0;
                 p.g2 = g2;
                 p.form_factor = ff;
                 p.validate();
                 return p;
             }),
             py::arg("omega0") = 1.0, py::arg("g2") = 1e-4, py::arg("form_factor") = FormFactorModel{})
        .def_readwrite("omega0", &SystemParams::omega0)
        .def_readwrite("g2", &SystemParams::g2)
        .def_readwrite("form_factor", &SystemParams::form_factor)
        .def("validate", &SystemParams::validate);

    py::class_<PoleResult>(m, "PoleResult")
        .def_readonly("s_pole", &PoleResult::s_pole)
        .def_readonly("gamma", &PoleResult::gamma)
        .def_readonly("delta_E", &PoleResult::delta_E)
        .def_readonly("residual", &PoleResult::residual)
        .def_readonly("unphysical", &PoleResult::unphysical)
        .def_readonly("iterations", &PoleResult::iterations)
        .def_property_readonly("sheet", [](const PoleResult& r) { return to_string(r.sheet); })
        .def("__repr__", [](const PoleResult& r) {
            return "PoleResult(gamma=" + fmt(r.gamma) + ", delta_E=" + fmt(r.delta_E) + ", sheet=" +
                   to_string(r.sheet) + ")";
        });

    m.def("chi_squared", py::overload_cast<const FormFactorModel&, double>(&chi_squared), py::arg("model"),
          py::arg("omega"));
    m.def("golden_rule_gamma", &golden_rule_gamma, py::arg("params"));
    m.def("gamma_of_B", &gamma_of_B, py::arg("params"), py::arg("B"));
    m.def("gamma_ratio_closed_form", py::overload_cast<int, double>(&gamma_ratio_closed_form), py::arg("kappa"),
          py::arg("b_over_omega0"));
    m.def("pole_newton", [](const SystemParams& p, double B) { return pole_newton(p, B); }, py::arg("params"),
          py::arg("B"));
    m.def("pole_perturbative", &pole_perturbative, py::arg("params"), py::arg("B"));
    m.def("spectrum_normalization",
          [](const SystemParams& p, const PoleResult& pole, double B) { return spectrum_normalization(p, pole, B); },
          py::arg("params"), py::arg("pole"), py::arg("B"));

    m.def(
        "partial_fractions",
        [](const std::vector<std::pair<double, double>>& levels, double B) {
            LevelLadder l;
            for (auto [f, d] : levels) l.entries.push_back({f, d});
            const auto r = partial_fractions(l, B);
            return std::pair{r.shifts, r.weights};
        },
        py::arg("levels"), py::arg("B"), "levels: (f, delta) pairs; returns (shifts, weights).");

    m.def("derived_power_coefficient", &lab::derived_power_coefficient);
    m.def("b_from_power", &lab::b_from_power, py::arg("power_W"), py::arg("lambda_um"), py::arg("area_um2"),
          py::arg("hgamma_eV"));

    m.def("default_config", [] { return serialize_config(default_config()); });
    m.def("run", &run_command, py::arg("command"), py::arg("config") = "",
          "Runs a CLI command on INI config text and returns its CSV output.");
    m.def(
        "validate",
        [](const std::string& text) {
            const RunConfig c = parse_config(text);
            ValidationReport r;
            {
                py::gil_scoped_release release;
                r = cmd_validate(c);
            }
            return std::pair{r.all_passed(), r.csv(c)};
        },
        py::arg("config") = "");
}
