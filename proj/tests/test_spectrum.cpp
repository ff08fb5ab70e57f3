#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "izeno/errors.hpp"
#include "izeno/spectrum.hpp"
#include "oracle.hpp"

using namespace izeno;
using std::numbers::pi;

namespace {

SystemParams broad() {
    SystemParams p;
    p.g2 = 1e-2;
    p.form_factor = {3, 5.0, 2.0, 1.0};
    return p;
}

SystemParams standard() {
    SystemParams p;
    p.form_factor = {3, 1e3, 2.0, 1e3};
    return p;
}

}  // namespace

TEST_CASE("lorentzian area") {
    for (double g : {1e-3, 0.1, 2.0}) {
        const double area = 2.0 * oracle::integrate([&](double x) { return lorentzian(x, g); }, {0.0, g});
        CHECK(area == doctest::Approx(2.0 * pi / g).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lorentzian(0.0, 0.0), DomainError);
}

TEST_CASE("normalization against the oracle on a broad line") {
    const SystemParams p = broad();
    for (double B : {0.0, 0.3}) {
        const PoleResult pole = pole_newton(p, B);
        const double c = pole.omega_bar(p.omega0);
        const double ref = oracle::integrate([&](double w) { return spectrum_B(p, pole, B, w); },
                                             {0.0, c - B, c + B, 5.0}, 1e-13);
        CHECK(spectrum_normalization(p, pole, B) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("narrow lines normalize to one") {
    const SystemParams p = standard();
    for (double B : {0.0, 0.2, 0.6}) {
        const PoleResult pole = pole_newton(p, B);
        CHECK(std::abs(spectrum_normalization(p, pole, B) - 1.0) < 1e-3);
    }
}

TEST_CASE("recovered rate matches the narrow-line formula") {
    const SystemParams p = standard();
    for (double B : {0.0, 0.2, 0.5}) {
        const RecoveredRate r = recover_gamma_from_normalization(p, B);
        CHECK(!r.broad_line);
        CHECK(r.gamma / r.gamma_formula == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(r.gamma / pole_newton(p, B).gamma == doctest::Approx(1.0).epsilon(1e-2));
    }
}

TEST_CASE("B = 0 collapses to the single line") {
    const SystemParams p = broad();
    const PoleResult pole = pole_newton(p, 0.0);
    SpectrumOptions opt;
    opt.per_channel_widths = true;
    for (double w : {0.3, 0.97, 1.0, 2.2}) {
        CHECK(spectrum_B(p, pole, 0.0, w) == doctest::Approx(spectrum_B0(p, pole, w)).epsilon(1e-15));
        CHECK(spectrum_B(p, pole, 0.0, w, opt) == doctest::Approx(spectrum_B0(p, pole, w)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(spectrum_B(p, pole, 0.0, -1.0), DomainError);
}

TEST_CASE("trapezoid on a fine sample approaches the normalization") {
    const SystemParams p = broad();
    const PoleResult pole = pole_newton(p, 0.25);
    std::vector<double> ws;
    for (int i = 0; i <= 200000; ++i) ws.push_back(40.0 * i / 200000);
    const SpectrumCurve c = sample_spectrum(p, pole, 0.25, ws);
    const double tail = oracle::integrate([&](double w) { return spectrum_B(p, pole, 0.25, w); }, {40.0});
    CHECK(trapezoid_integral(c) + tail == doctest::Approx(spectrum_normalization(p, pole, 0.25)).epsilon(1e-6));
    CHECK(c.omega_bar == doctest::Approx(pole.omega_bar(p.omega0)));
}

TEST_CASE("asymptotic occupations from the driven mode pair") {
    const SystemParams p = broad();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uw(0.2, 2.0), ub(0.05, 0.6), ut(0.0, 50.0);
    const PoleResult pole = pole_newton(p, 0.3);
    const cplx I{0.0, 1.0};
    for (int i = 0; i < 25; ++i) {
        const double wk = uw(rng), B = ub(rng), t = ut(rng);
        const double nu = wk - pole.omega_bar(p.omega0);
        const double phi = std::sqrt(p.g2 * p.omega0 * chi_squared(p.form_factor, wk));
        // Mode pair driven by x = exp(-(i wbar + gamma/2) t'), transient dropped.
        cplx y = 0.0, z = 0.0;
        for (int sgn : {1, -1}) {
            const cplx term = std::exp(-I * (wk - sgn * B) * t) / (0.5 * pole.gamma - I * (nu - sgn * B));
            y += -I * phi * 0.5 * term;
            z += -I * phi * (-I) / (2.0 * I) * double(sgn) * term;
        }
        const Occupations o = asymptotic_occupations(p, pole, B, wk, t);
        CHECK(o.y2 == doctest::Approx(std::norm(y)).epsilon(1e-10));
        CHECK(o.z2 == doctest::Approx(std::norm(z)).epsilon(1e-10));
    }
}
