#include "izeno/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "izeno/errors.hpp"

namespace izeno {

namespace pt = boost::property_tree;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double to_double(const std::string& key, std::string s) {
    boost::algorithm::trim(s);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ConfigError(key, "expected a number, got '" + s + "'");
    return v;
}

long long to_int(const std::string& key, std::string s) {
    boost::algorithm::trim(s);
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ConfigError(key, "expected an integer, got '" + s + "'");
    return v;
}

bool to_bool(const std::string& key, std::string s) {
    boost::algorithm::trim(s);
    boost::algorithm::to_lower(s);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key, "expected a boolean, got '" + s + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& s) {
    std::vector<double> out;
    if (boost::algorithm::trim_copy(s).empty()) return out;
    std::vector<std::string> parts;
    boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
    for (const auto& part : parts) out.push_back(to_double(key, part));
    return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += fmt(v[i]);
        else
            out += std::to_string(v[i]);
    }
    return out;
}

void positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
}

void nonneg(const std::string& key, double v) {
    if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;
using Schema = std::map<std::string, std::map<std::string, Setter>>;

#define NUM(field) [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_double(k, v); }
#define INT(field) \
    [](RunConfig& c, const std::string& k, const std::string& v) { c.field = static_cast<int>(to_int(k, v)); }
#define BOOL(field) [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_bool(k, v); }

// Laser keys are collected first and resolved together.
const std::set<std::string> kDirectKeys{"b"};
const std::set<std::string> kDipoleKeys{"photon_density", "dipole_element", "omega_big", "overlap"};
const std::set<std::string> kPowerKeys{"power", "area", "wavelength", "linewidth"};

const Schema& schema() {
    static const Schema s{
        {"system",
         {{"omega0", NUM(system.omega0)},
          {"g2", NUM(system.g2)},
          {"j", INT(system.transition.j)},
          {"character",
           [](RunConfig& c, const std::string& k, const std::string& v) {
               try {
                   c.system.transition.character = multipole_from_string(boost::algorithm::trim_copy(v));
               } catch (const std::invalid_argument& e) {
                   throw ConfigError(k, e.what());
               }
           }}}},
        {"form_factor",
         {{"kappa", INT(system.form_factor.kappa)},
          {"lambda_cut", NUM(system.form_factor.lambda_cut)},
          {"beta", NUM(system.form_factor.beta)},
          {"omega0_ref", NUM(system.form_factor.omega0_ref)}}},
        {"gamma_scan",
         {{"b_min", NUM(gamma_scan.b_min)},
          {"b_max", NUM(gamma_scan.b_max)},
          {"points", INT(gamma_scan.points)},
          {"j_values",
           [](RunConfig& c, const std::string& k, const std::string& v) {
               c.gamma_scan.j_values.clear();
               for (double d : to_doubles(k, v)) {
                   if (d != static_cast<int>(d)) throw ConfigError(k, "expected integers");
                   c.gamma_scan.j_values.push_back(static_cast<int>(d));
               }
           }},
          {"with_pole", BOOL(gamma_scan.with_pole)},
          {"with_spectrum", BOOL(gamma_scan.with_spectrum)}}},
        {"spectrum",
         {{"b", NUM(spectrum.b)},
          {"omega_min", NUM(spectrum.omega_min)},
          {"omega_max", NUM(spectrum.omega_max)},
          {"points", INT(spectrum.points)},
          {"per_channel_widths", BOOL(spectrum.per_channel_widths)}}},
        {"evolve",
         {{"b", NUM(evolve.b)},
          {"modes", INT(evolve.modes)},
          {"omega_max", NUM(evolve.omega_max)},
          {"rule",
           [](RunConfig& c, const std::string& k, const std::string& v) {
               try {
                   c.evolve.rule = grid_rule_from_string(boost::algorithm::trim_copy(v));
               } catch (const std::invalid_argument& e) {
                   throw ConfigError(k, e.what());
               }
           }},
          {"dense_halfwidth", NUM(evolve.dense_halfwidth)},
          {"dense_fraction", NUM(evolve.dense_fraction)},
          {"tolerance", NUM(evolve.tolerance)},
          {"samples", INT(evolve.samples)},
          {"t_final", NUM(evolve.t_final)},
          {"fit_start", NUM(evolve.fit_start)},
          {"fit_end", NUM(evolve.fit_end)},
          {"lambda_cut", NUM(evolve.lambda_cut)},
          {"omega0_ref", NUM(evolve.omega0_ref)}}},
        {"multilevel",
         {{"b_min", NUM(multilevel.b_min)}, {"b_max", NUM(multilevel.b_max)}, {"points", INT(multilevel.points)}}},
        {"validate",
         {{"shift_samples", INT(validate.shift_samples)},
          {"ladders", INT(validate.ladders)},
          {"dynamics", BOOL(validate.dynamics)}}},
        {"run",
         {{"seed",
           [](RunConfig& c, const std::string& k, const std::string& v) {
               const long long s = to_int(k, v);
               if (s < 0) throw ConfigError(k, "must be >= 0");
               c.seed = static_cast<std::uint64_t>(s);
           }},
          {"threads", INT(threads)},
          {"tolerance", NUM(tolerance)}}},
    };
    return s;
}

#undef NUM
#undef INT
#undef BOOL

void resolve_laser(RunConfig& c, const std::map<std::string, std::string>& keys) {
    std::string mode;
    std::set<std::string> given;
    for (const auto& [k, v] : keys) {
        if (k == "mode") {
            mode = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(v));
        } else if (k == "omega0_ev") {
            c.laser_omega0_eV = to_double("laser.omega0_ev", v);
            positive("laser.omega0_ev", c.laser_omega0_eV);
        } else if (kDirectKeys.count(k) || kDipoleKeys.count(k) || kPowerKeys.count(k)) {
            given.insert(k);
        } else {
            throw ConfigError("laser." + k, "unknown key");
        }
    }
    auto from = [&](const std::set<std::string>& group) {
        for (const auto& k : given)
            if (group.count(k)) return true;
        return false;
    };
    const int groups = int(from(kDirectKeys)) + int(from(kDipoleKeys)) + int(from(kPowerKeys));
    if (groups > 1) throw ConfigError("laser", "keys from more than one parameterization are populated");
    if (mode.empty()) {
        if (from(kDipoleKeys)) mode = "dipole";
        else if (from(kPowerKeys)) mode = "power";
        else mode = "direct";
    }
    auto get = [&](const std::string& k, double fallback) {
        auto it = keys.find(k);
        return it == keys.end() ? fallback : to_double("laser." + k, it->second);
    };
    auto require = [&](const std::set<std::string>& group, const std::set<std::string>& optional) {
        for (const auto& k : given)
            if (!group.count(k)) throw ConfigError("laser." + k, "not part of mode " + mode);
        for (const auto& k : group)
            if (!optional.count(k) && !given.count(k) && !given.empty())
                throw ConfigError("laser." + k, "required for mode " + mode);
    };
    if (mode == "direct") {
        require(kDirectKeys, {});
        if (!given.empty()) c.laser = lab::DirectDrive{get("b", 0.0)};
    } else if (mode == "dipole") {
        require(kDipoleKeys, {"overlap"});
        if (given.empty()) throw ConfigError("laser", "mode dipole needs photon_density, dipole_element, omega_big");
        c.laser = lab::DipoleDrive{get("photon_density", 0), get("dipole_element", 0), get("omega_big", 0),
                                   get("overlap", 1.0 / 3.0)};
    } else if (mode == "power") {
        require(kPowerKeys, {});
        if (given.empty()) throw ConfigError("laser", "mode power needs power, area, wavelength, linewidth");
        c.laser = lab::PowerDrive{get("power", 0), get("area", 0), get("wavelength", 0), get("linewidth", 0)};
    } else {
        throw ConfigError("laser.mode", "expected direct, dipole or power");
    }
    try {
        lab::validate(c.laser);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("laser", e.what());
    }
}

void resolve_ladder(RunConfig& c, const std::map<std::string, std::string>& keys) {
    std::vector<double> f, delta;
    for (const auto& [k, v] : keys) {
        if (k == "f") f = to_doubles("ladder.f", v);
        else if (k == "delta") delta = to_doubles("ladder.delta", v);
        else throw ConfigError("ladder." + k, "unknown key");
    }
    if (f.size() != delta.size()) throw ConfigError("ladder", "f and delta must have the same length");
    c.ladder.entries.clear();
    for (std::size_t i = 0; i < f.size(); ++i) c.ladder.entries.push_back({f[i], delta[i]});
    try {
        c.ladder.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("ladder", e.what());
    }
    c.ladder = c.ladder.sorted();
}

void check(const RunConfig& c, bool kappa_given) {
    SystemParams p = c.system;
    try {
        p.transition.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("system.j", e.what());
    }
    if (kappa_given && c.system.form_factor.kappa != kappa_of(c.system.transition))
        throw ConfigError("form_factor.kappa", "does not match kappa_of(system.j, system.character)");
    try {
        c.system.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const std::string key = msg.find("beta") != std::string::npos          ? "form_factor.beta"
                                : msg.find("lambda") != std::string::npos      ? "form_factor.lambda_cut"
                                : msg.find("omega0_ref") != std::string::npos  ? "form_factor.omega0_ref"
                                : msg.find("kappa") != std::string::npos       ? "form_factor.kappa"
                                : msg.find("g2") != std::string::npos          ? "system.g2"
                                : msg.find("omega0") != std::string::npos      ? "system.omega0"
                                                                               : "system";
        throw ConfigError(key, msg);
    }
    nonneg("gamma_scan.b_min", c.gamma_scan.b_min);
    if (!(c.gamma_scan.b_max >= c.gamma_scan.b_min)) throw ConfigError("gamma_scan.b_max", "must be >= b_min");
    if (c.gamma_scan.points < 1) throw ConfigError("gamma_scan.points", "must be >= 1");
    for (int j : c.gamma_scan.j_values)
        if (j < 1) throw ConfigError("gamma_scan.j_values", "multipole orders must be >= 1");
    nonneg("spectrum.b", c.spectrum.b);
    nonneg("spectrum.omega_min", c.spectrum.omega_min);
    if (!(c.spectrum.omega_max > c.spectrum.omega_min)) throw ConfigError("spectrum.omega_max", "must exceed omega_min");
    if (c.spectrum.points < 2) throw ConfigError("spectrum.points", "must be >= 2");
    nonneg("evolve.b", c.evolve.b);
    if (c.evolve.modes < 100) throw ConfigError("evolve.modes", "must be >= 100");
    positive("evolve.omega_max", c.evolve.omega_max);
    positive("evolve.dense_halfwidth", c.evolve.dense_halfwidth);
    if (!(c.evolve.dense_fraction >= 0.0 && c.evolve.dense_fraction < 1.0))
        throw ConfigError("evolve.dense_fraction", "must lie in [0, 1)");
    positive("evolve.tolerance", c.evolve.tolerance);
    if (c.evolve.samples < 2) throw ConfigError("evolve.samples", "must be >= 2");
    nonneg("evolve.t_final", c.evolve.t_final);
    positive("evolve.fit_start", c.evolve.fit_start);
    if (!(c.evolve.fit_end > c.evolve.fit_start)) throw ConfigError("evolve.fit_end", "must exceed fit_start");
    if (c.evolve.lambda_cut) positive("evolve.lambda_cut", *c.evolve.lambda_cut);
    if (c.evolve.omega0_ref) positive("evolve.omega0_ref", *c.evolve.omega0_ref);
    nonneg("multilevel.b_min", c.multilevel.b_min);
    if (!(c.multilevel.b_max >= c.multilevel.b_min)) throw ConfigError("multilevel.b_max", "must be >= b_min");
    if (c.multilevel.points < 1) throw ConfigError("multilevel.points", "must be >= 1");
    if (c.validate.shift_samples < 1) throw ConfigError("validate.shift_samples", "must be >= 1");
    if (c.validate.ladders < 1) throw ConfigError("validate.ladders", "must be >= 1");
    if (c.threads < 1) throw ConfigError("run.threads", "must be >= 1");
    nonneg("run.tolerance", c.tolerance);
}

}  // namespace

RunConfig default_config() {
    RunConfig c;
    c.system.omega0 = 1.0;
    c.system.g2 = 1e-4;
    c.system.transition = {2, Multipole::electric};
    c.system.form_factor = {3, 1e3, 2.0, 1e3};
    c.evolve.lambda_cut = 5.0;
    c.evolve.omega0_ref = 1.0;
    c.ladder.entries = {{0.5, 3.0}, {0.3, 5.0}};
    return c;
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
    }
    RunConfig c = default_config();
    bool kappa_given = false;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ConfigError(section, "top-level keys are not allowed; use sections");
        std::map<std::string, std::string> keys;
        for (const auto& [k, v] : body) keys[k] = v.data();
        if (section == "laser") {
            resolve_laser(c, keys);
            continue;
        }
        if (section == "ladder") {
            resolve_ladder(c, keys);
            continue;
        }
        auto sec = schema().find(section);
        if (sec == schema().end()) throw ConfigError(section, "unknown section");
        for (const auto& [k, v] : keys) {
            auto setter = sec->second.find(k);
            if (setter == sec->second.end()) throw ConfigError(section + "." + k, "unknown key");
            setter->second(c, section + "." + k, v);
            if (section == "form_factor" && k == "kappa") kappa_given = true;
        }
    }
    if (!kappa_given) {
        try {
            c.system.form_factor.kappa = kappa_of(c.system.transition);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("system.j", e.what());
        }
    }
    check(c, kappa_given);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    const auto& ff = c.system.form_factor;
    o << "[system]\nomega0 = " << fmt(c.system.omega0) << "\ng2 = " << fmt(c.system.g2)
      << "\nj = " << c.system.transition.j << "\ncharacter = " << to_string(c.system.transition.character) << "\n";
    o << "[form_factor]\nkappa = " << ff.kappa << "\nlambda_cut = " << fmt(ff.lambda_cut) << "\nbeta = " << fmt(ff.beta)
      << "\nomega0_ref = " << fmt(ff.omega0_ref) << "\n";
    o << "[laser]\n";
    if (auto* d = std::get_if<lab::DirectDrive>(&c.laser)) {
        o << "mode = direct\nb = " << fmt(d->b) << "\n";
    } else if (auto* d = std::get_if<lab::DipoleDrive>(&c.laser)) {
        o << "mode = dipole\nphoton_density = " << fmt(d->n0) << "\ndipole_element = " << fmt(d->dipole)
          << "\nomega_big = " << fmt(d->omega_big) << "\noverlap = " << fmt(d->overlap) << "\n";
    } else if (auto* d = std::get_if<lab::PowerDrive>(&c.laser)) {
        o << "mode = power\npower = " << fmt(d->power) << "\narea = " << fmt(d->area) << "\nwavelength = "
          << fmt(d->wavelength) << "\nlinewidth = " << fmt(d->linewidth) << "\n";
    }
    o << "omega0_ev = " << fmt(c.laser_omega0_eV) << "\n";
    std::vector<double> f, delta;
    for (const auto& l : c.ladder.entries) {
        f.push_back(l.f);
        delta.push_back(l.delta);
    }
    o << "[ladder]\nf = " << join(f) << "\ndelta = " << join(delta) << "\n";
    const auto& g = c.gamma_scan;
    o << "[gamma_scan]\nb_min = " << fmt(g.b_min) << "\nb_max = " << fmt(g.b_max) << "\npoints = " << g.points
      << "\nj_values = " << join(g.j_values) << "\nwith_pole = " << std::boolalpha << g.with_pole
      << "\nwith_spectrum = " << g.with_spectrum << "\n";
    const auto& s = c.spectrum;
    o << "[spectrum]\nb = " << fmt(s.b) << "\nomega_min = " << fmt(s.omega_min) << "\nomega_max = " << fmt(s.omega_max)
      << "\npoints = " << s.points << "\nper_channel_widths = " << s.per_channel_widths << "\n";
    const auto& e = c.evolve;
    o << "[evolve]\nb = " << fmt(e.b) << "\nmodes = " << e.modes << "\nomega_max = " << fmt(e.omega_max)
      << "\nrule = " << to_string(e.rule) << "\ndense_halfwidth = " << fmt(e.dense_halfwidth)
      << "\ndense_fraction = " << fmt(e.dense_fraction) << "\ntolerance = " << fmt(e.tolerance)
      << "\nsamples = " << e.samples << "\nt_final = " << fmt(e.t_final) << "\nfit_start = " << fmt(e.fit_start)
      << "\nfit_end = " << fmt(e.fit_end) << "\n";
    if (e.lambda_cut) o << "lambda_cut = " << fmt(*e.lambda_cut) << "\n";
    if (e.omega0_ref) o << "omega0_ref = " << fmt(*e.omega0_ref) << "\n";
    o << "[multilevel]\nb_min = " << fmt(c.multilevel.b_min) << "\nb_max = " << fmt(c.multilevel.b_max)
      << "\npoints = " << c.multilevel.points << "\n";
    o << "[validate]\nshift_samples = " << c.validate.shift_samples << "\nladders = " << c.validate.ladders
      << "\ndynamics = " << c.validate.dynamics << "\n";
    o << "[run]\nseed = " << c.seed << "\nthreads = " << c.threads << "\ntolerance = " << fmt(c.tolerance) << "\n";
    return o.str();
}

std::string metadata_header(const RunConfig& c, const std::string& command) {
    std::ostringstream o;
    o << "# izeno " << command << "\n# version = 0.1.0\n# resolved config:\n";
    std::istringstream in(serialize_config(c));
    for (std::string line; std::getline(in, line);)
        if (line.rfind("threads", 0) != 0) o << "# " << line << "\n";
    return o.str();
}

}  // namespace izeno
