#pragma once

#include <variant>

namespace izeno::lab {

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double c_light = 299792458.0;           // m/s
inline constexpr double e_charge = 1.602176634e-19;      // C
inline constexpr double alpha_fs = 7.2973525693e-3;
inline constexpr double hbar_c_eVm = 1.973269804e-7;    // eV m

// Coefficient K in B^2 = K P lambda^3 / A * hGamma, with P in W, lambda in um, A in um^2,
// hGamma and B in eV. Built from the energy density P/(c A) and the mode volume lambda^3/(16 pi^2).
double derived_power_coefficient();

double b_from_power(double power_W, double lambda_um, double area_um2, double hgamma_eV);

// Natural units (hbar = c = 1): B^2 = 2 pi alpha Omega0 overlap |x|^2 n0.
// overlap is the polarization factor |e.x|^2/|x|^2, 1/3 for the angle average.
double b_from_dipole(double omega_big, double dipole_sq, double n0, double overlap = 1.0 / 3.0);

// Same with Omega0 in eV, |x| in m, n0 in m^-3; returns eV.
double b_from_dipole_si(double omega_big_eV, double dipole_m, double n0_per_m3, double overlap = 1.0 / 3.0);

// (4/3) alpha |x|^2 Omega0^3, natural units.
double dipole_linewidth(double dipole_sq, double omega_big);

// B^2 = (pi/2) n0 Gamma / Omega0^2, natural units.
double b_from_linewidth(double n0, double gamma13, double omega_big);

double rabi_from_b(double B);
double b_from_rabi(double rabi);

struct DirectDrive {
    double b = 0.0;
};

struct DipoleDrive {
    double n0 = 0.0;          // m^-3
    double dipole = 0.0;      // |x13|, m
    double omega_big = 0.0;   // Omega0, eV
    double overlap = 1.0 / 3.0;
};

struct PowerDrive {
    double power = 0.0;       // W
    double area = 0.0;        // um^2
    double wavelength = 0.0;  // um
    double linewidth = 0.0;   // hGamma13, eV
};

using LaserSpec = std::variant<DirectDrive, DipoleDrive, PowerDrive>;

void validate(const LaserSpec& spec);

// B in eV for the physical parameterizations, as given for DirectDrive.
double resolve_b(const LaserSpec& spec);

}  // namespace izeno::lab
