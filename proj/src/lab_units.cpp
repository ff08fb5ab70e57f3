#include "izeno/lab_units.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "izeno/errors.hpp"

namespace izeno::lab {

namespace {

void require_nonneg(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and >= 0");
}

void require_pos(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

}  // namespace

double derived_power_coefficient() {
    constexpr double um = 1e-6;
    const double energy_density = 1.0 / (c_light * um * um);  // J/m^3 for 1 W on 1 um^2
    const double volume = um * um * um / (16.0 * std::numbers::pi * std::numbers::pi);
    return energy_density * volume / e_charge;  // J eV -> eV^2
}

double b_from_power(double power_W, double lambda_um, double area_um2, double hgamma_eV) {
    require_nonneg(power_W, "power");
    require_pos(lambda_um, "wavelength");
    require_pos(area_um2, "area");
    require_nonneg(hgamma_eV, "linewidth");
    const double lam3 = lambda_um * lambda_um * lambda_um;
    return std::sqrt(derived_power_coefficient() * power_W * lam3 / area_um2 * hgamma_eV);
}

double b_from_dipole(double omega_big, double dipole_sq, double n0, double overlap) {
    require_nonneg(omega_big, "Omega0");
    require_nonneg(dipole_sq, "|x13|^2");
    require_nonneg(n0, "n0");
    if (!(overlap >= 0.0 && overlap <= 1.0)) throw DomainError("polarization overlap must lie in [0, 1]");
    return std::sqrt(2.0 * std::numbers::pi * alpha_fs * omega_big * overlap * dipole_sq * n0);
}

double b_from_dipole_si(double omega_big_eV, double dipole_m, double n0_per_m3, double overlap) {
    require_nonneg(dipole_m, "|x13|");
    // x -> x/(hbar c), n0 -> n0 (hbar c)^3 leaves one power of hbar c.
    return b_from_dipole(omega_big_eV, dipole_m * dipole_m, n0_per_m3 * hbar_c_eVm, overlap);
}

double dipole_linewidth(double dipole_sq, double omega_big) {
    require_nonneg(dipole_sq, "|x13|^2");
    require_nonneg(omega_big, "Omega0");
    return 4.0 / 3.0 * alpha_fs * dipole_sq * omega_big * omega_big * omega_big;
}

double b_from_linewidth(double n0, double gamma13, double omega_big) {
    require_nonneg(n0, "n0");
    require_nonneg(gamma13, "Gamma13");
    require_pos(omega_big, "Omega0");
    return std::sqrt(0.5 * std::numbers::pi * n0 * gamma13 / (omega_big * omega_big));
}

double rabi_from_b(double B) {
    require_nonneg(B, "B");
    return 2.0 * B;
}

double b_from_rabi(double rabi) {
    require_nonneg(rabi, "Rabi frequency");
    return 0.5 * rabi;
}

void validate(const LaserSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DirectDrive>) {
                require_nonneg(s.b, "b_direct");
            } else if constexpr (std::is_same_v<T, DipoleDrive>) {
                require_nonneg(s.n0, "photon_density");
                require_pos(s.dipole, "dipole_element");
                require_pos(s.omega_big, "omega_big");
                if (!(s.overlap >= 0.0 && s.overlap <= 1.0)) throw DomainError("overlap must lie in [0, 1]");
            } else {
                require_nonneg(s.power, "power");
                require_pos(s.area, "area");
                require_pos(s.wavelength, "wavelength");
                require_pos(s.linewidth, "linewidth");
            }
        },
        spec);
}

double resolve_b(const LaserSpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DirectDrive>) {
                return s.b;
            } else if constexpr (std::is_same_v<T, DipoleDrive>) {
                return b_from_dipole_si(s.omega_big, s.dipole, s.n0, s.overlap);
            } else {
                return b_from_power(s.power, s.wavelength, s.area, s.linewidth);
            }
        },
        spec);
}

}  // namespace izeno::lab
