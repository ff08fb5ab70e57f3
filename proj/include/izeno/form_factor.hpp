#pragma once

#include <complex>
#include <string>
#include <vector>

namespace izeno {

enum class Multipole { electric, magnetic };

struct TransitionSpec {
    int j = 1;
    Multipole character = Multipole::electric;

    void validate() const;
};

// Low-frequency exponent: 2j-1 for electric, 2j+1 for magnetic.
int kappa_of(const TransitionSpec& transition);

// chi^2(w) = (w/omega0_ref)^kappa / (1 + (w/lambda_cut)^2)^((kappa+beta)/2)
struct FormFactorModel {
    int kappa = 3;
    double lambda_cut = 1.0e3;
    double beta = 2.0;
    double omega0_ref = 1.0;

    void validate() const;
};

double chi_squared(const FormFactorModel& model, double omega);

// Principal-branch continuation; singular at +-i*lambda_cut.
std::complex<double> chi_squared(const FormFactorModel& model, std::complex<double> z);

std::complex<double> chi_squared_derivative(const FormFactorModel& model, std::complex<double> z);

// alpha * (omega0/lambda)^(2j+1-+1), upper sign electric.
double coupling_g2(double alpha_fs, double omega0, double lambda_cut, const TransitionSpec& transition);

struct SystemParams {
    double omega0 = 1.0;
    double g2 = 1.0e-4;
    FormFactorModel form_factor{};
    TransitionSpec transition{2, Multipole::electric};

    // Throws DomainError on hard violations; returns soft warnings.
    std::vector<std::string> validate() const;
};

std::string to_string(Multipole m);
Multipole multipole_from_string(const std::string& s);

}  // namespace izeno
