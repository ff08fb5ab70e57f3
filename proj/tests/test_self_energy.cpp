#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "izeno/errors.hpp"
#include "izeno/self_energy.hpp"
#include "oracle.hpp"

using namespace izeno;
using std::numbers::pi;

namespace {

const cplx I{0.0, 1.0};

// Standard-regime pole, frozen from a run that matched pole_second_order below.
constexpr double kGamma0 = 6.2825405e-13;
constexpr double kGamma02 = 7.0364911e-13;
constexpr double kDeltaE02 = 3.3366736e-05;

SystemParams standard() {
    SystemParams p;
    p.form_factor = {3, 1e3, 2.0, 1e3};
    return p;
}

// P-integral via the symmetric fold int_0^eta [f(eta+u) - f(eta-u)]/u du plus the tail past 2 eta.
double pv_oracle(const FormFactorModel& m, double eta) {
    auto fold = [&](double u) { return (chi_squared(m, eta + u) - chi_squared(m, eta - u)) / u; };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double near = ts.integrate(fold, 0.0, eta, 1e-14);
    auto tail = [&](double w) { return chi_squared(m, w) / (w - eta); };
    std::vector<double> bps{2 * eta};
    if (m.lambda_cut > 2 * eta) bps.push_back(m.lambda_cut);
    return near + oracle::integrate(tail, bps);
}

cplx q_oracle(const FormFactorModel& m, cplx s) {
    std::vector<double> bps{0.0};
    if (-s.imag() > 0.0) bps.push_back(-s.imag());
    bps.push_back(m.lambda_cut);
    return oracle::integrate_complex([&](double w) { return cplx(chi_squared(m, w)) / (s + I * w); }, bps);
}

// Second-order pole from boundary values: s2 = -i w0 - Q(s0) - Q'(s0)(s1 - s0).
cplx pole_second_order(const SystemParams& p, double B) {
    const FormFactorModel& m = p.form_factor;
    auto Qb = [&](double eta) {
        return 0.5 * p.g2 * p.omega0 * (q_boundary(m, eta + B) + q_boundary(m, eta - B));
    };
    const double w0 = p.omega0;
    const cplx s0 = -I * w0;
    const cplx s1 = s0 - Qb(w0);
    const double h = 1e-5 * w0;
    // s = -i eta, so d/ds = i d/deta.
    const cplx dQ = I * (Qb(w0 + h) - Qb(w0 - h)) / (2 * h);
    return s0 - Qb(w0) - dQ * (s1 - s0);
}

}  // namespace

TEST_CASE("principal value against the folded oracle") {
    for (const FormFactorModel& m : {FormFactorModel{3, 5.0, 2.0, 1.0}, FormFactorModel{3, 1e3, 2.0, 1e3},
                                     FormFactorModel{1, 20.0, 1.5, 1.0}, FormFactorModel{5, 3.0, 3.0, 1.0}}) {
        for (double eta : {0.2, 0.8, 1.0, 1.2, 2.5}) {
            const double ref = pv_oracle(m, eta);
            CHECK(principal_value(m, eta) == doctest::Approx(ref).epsilon(1e-10));
        }
        // eta <= 0 is an ordinary integral.
        const double neg = oracle::integrate([&](double w) { return chi_squared(m, w) / (w + 0.5); },
                                             {0.0, m.lambda_cut});
        CHECK(principal_value(m, -0.5) == doctest::Approx(neg).epsilon(1e-11));
    }
}

TEST_CASE("q_boundary real part is pi chi^2 theta") {
    const FormFactorModel m{3, 5.0, 2.0, 1.0};
    CHECK(q_boundary(m, 1.3).real() == doctest::Approx(pi * chi_squared(m, 1.3)).epsilon(1e-15));
    CHECK(q_boundary(m, -0.4).real() == 0.0);
    CHECK(q_boundary(m, 1.3).imag() == doctest::Approx(-principal_value(m, 1.3)).epsilon(1e-15));
}

TEST_CASE("sheet I against direct quadrature") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(0.05, 2.0), im(-3.0, 3.0);
    const FormFactorModel m{3, 5.0, 2.0, 1.0};
    for (int i = 0; i < 40; ++i) {
        const cplx s(re(rng), im(rng));
        const cplx ref = q_oracle(m, s);
        CHECK(std::abs(q_sheet_I(m, s) - ref) < 1e-11 * std::abs(ref));
    }
    // Left half plane away from the cut.
    for (const cplx s : {cplx(-0.3, 0.5), cplx(-1.0, 2.0), cplx(-0.2, -0.0)}) {
        const cplx ref = q_oracle(m, s);
        CHECK(std::abs(q_sheet_I(m, s) - ref) < 1e-11 * std::abs(ref));
    }
    CHECK_THROWS_AS(q_sheet_I(m, cplx(0.0, -1.0)), DomainError);
}

TEST_CASE("boundary value is the limit from the right") {
    const FormFactorModel m{3, 5.0, 2.0, 1.0};
    for (double eta : {0.3, 1.0, 2.0}) {
        const cplx lim = q_sheet_I(m, cplx(1e-9, -eta));
        CHECK(std::abs(lim - q_boundary(m, eta)) < 1e-6 * std::abs(q_boundary(m, eta)));
    }
}

TEST_CASE("sheet II continues sheet I through the cut") {
    const FormFactorModel m{3, 5.0, 2.0, 1.0};
    for (double eta : {0.3, 1.0, 2.0}) {
        const double e = 1e-7;
        const cplx right = q_sheet_I(m, cplx(e, -eta));
        const cplx left = q_sheet_II(m, cplx(-e, -eta));
        CHECK(std::abs(right - left) < 1e-5 * std::abs(right));
        // Sheet I itself jumps by 2 pi chi^2 across the cut.
        const cplx left_I = q_sheet_I(m, cplx(-e, -eta));
        CHECK(std::abs(right - left_I) == doctest::Approx(2 * pi * chi_squared(m, eta)).epsilon(1e-4));
    }
    CHECK(q_sheet_II(m, cplx(0.0, -1.0)) == q_boundary(m, 1.0));
    CHECK(q_sheet_II(m, cplx(0.4, 0.2)) == q_sheet_I(m, cplx(0.4, 0.2)));
}

TEST_CASE("shift identity on sheet I") {
    SystemParams p;
    p.form_factor = {3, 5.0, 2.0, 1.0};
    for (const auto& [B, s] : {std::pair{0.4, cplx(0.2, -0.7)}, std::pair{1.3, cplx(0.1, 0.3)}}) {
        const cplx direct =
            p.g2 * p.omega0 *
            oracle::integrate_complex(
                [&](double w) {
                    const cplx a = s + I * w;
                    return cplx(chi_squared(p.form_factor, w)) * a / (a * a + B * B);
                },
                {0.0, 5.0});
        CHECK(std::abs(Q_of_B(p, B, s, Sheet::I) - direct) < 1e-11 * std::abs(direct));
    }
}

TEST_CASE("sheet selection") {
    const SystemParams p = standard();
    CHECK(pole_sheet(p, 0.0) == Sheet::II);
    CHECK(pole_sheet(p, 0.5) == Sheet::III);
    CHECK(pole_sheet(p, 1.5) == Sheet::II);
    CHECK_THROWS_AS(pole_sheet(p, 1.0), PreconditionError);
    CHECK_THROWS_AS(pole_newton(p, 1.0), PreconditionError);
    CHECK(to_string(Sheet::III) == "III");
}

TEST_CASE("golden rule and second-order pole") {
    const SystemParams p = standard();
    const PoleResult r = pole_newton(p, 0.0);
    const double golden = golden_rule_gamma(p);
    CHECK(std::abs(r.gamma / golden - 1.0) < 5e-3);
    CHECK(r.residual < 1e-12);
    CHECK(r.sheet == Sheet::II);
    for (double B : {0.0, 0.2, 0.5, 1.5}) {
        const PoleResult n = pole_newton(p, B);
        const cplx ref = pole_second_order(p, B);
        CHECK(std::abs(n.s_pole.real() / ref.real() - 1.0) < 1e-6);
        CHECK(std::abs(n.s_pole.imag() - ref.imag()) < 1e-12);
    }
}

TEST_CASE("frozen pole rates in the standard regime") {
    const SystemParams p = standard();
    CHECK(pole_newton(p, 0.0).gamma == doctest::Approx(kGamma0).epsilon(1e-7));
    CHECK(pole_newton(p, 0.2).gamma == doctest::Approx(kGamma02).epsilon(1e-7));
    CHECK(pole_newton(p, 0.2).delta_E == doctest::Approx(kDeltaE02).epsilon(1e-7));
}

TEST_CASE("halving g2 quarters the golden-rule discrepancy") {
    SystemParams p;
    p.form_factor = {3, 5.0, 2.0, 1.0};
    p.g2 = 1e-3;
    const double d1 = std::abs(pole_newton(p, 0.0).gamma - golden_rule_gamma(p));
    p.g2 = 5e-4;
    const double d2 = std::abs(pole_newton(p, 0.0).gamma - golden_rule_gamma(p));
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("closed-form ratio") {
    CHECK(gamma_ratio_closed_form({2, Multipole::electric}, 0.2) == doctest::Approx(28.0 / 25.0).epsilon(1e-15));
    for (double b = 0.0; b < 1.0; b += 0.01) CHECK(gamma_ratio_closed_form(1, b) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_ratio_closed_form(1, 1.0) == 1.0);
    CHECK(gamma_ratio_closed_form(3, 1.0) == 4.0);
    CHECK(gamma_ratio_closed_form(5, 1.0) == 16.0);
    CHECK(gamma_ratio_closed_form(3, 0.0) == 1.0);
    // Above omega0 only the upper channel remains.
    CHECK(gamma_ratio_closed_form(3, 1.5) == doctest::Approx(0.5 * std::pow(2.5, 3)));
}

TEST_CASE("gamma_of_B against the pole") {
    const SystemParams p = standard();
    const double g0 = pole_newton(p, 0.0).gamma;
    for (double b : {0.1, 0.4, 0.7, 0.9}) {
        const double ratio = pole_newton(p, b).gamma / g0;
        CHECK(ratio == doctest::Approx(gamma_ratio_closed_form(3, b)).epsilon(1e-2));
    }
    const PoleResult above = pole_perturbative(p, 1.5);
    CHECK(above.unphysical);
    CHECK(above.gamma == doctest::Approx(gamma_of_B(p, 1.5)).epsilon(1e-12));
}

TEST_CASE("large-B tail") {
    SystemParams p;
    p.form_factor = {3, 10.0, 2.0, 1.0};
    const FlaggedRate a = gamma_large_B(p, 100.0), b = gamma_large_B(p, 200.0);
    CHECK(a.unphysical);
    const double exact = 8.0 * std::pow(101.0 / 401.0, 2.5);
    CHECK(b.rate / a.rate == doctest::Approx(exact).epsilon(1e-13));
    CHECK(std::abs(b.rate / a.rate - 0.25) / 0.25 < 2.5 * (1.0 / 100 - 1.0 / 400) * 1.01);
    CHECK_THROWS_AS(gamma_large_B(p, 5.0), PreconditionError);
}

TEST_CASE("coupling strength separates the two normalizations") {
    SystemParams p;
    p.form_factor = {3, 1e3, 2.0, 1.0};
    CHECK(coupling_strength(p) > 10.0);
    p.form_factor.omega0_ref = 1e3;
    CHECK(coupling_strength(p) < 1e-3);
}

TEST_CASE("newton failure modes") {
    const SystemParams p = standard();
    NewtonOptions opt;
    opt.max_iter = 0;
    CHECK_THROWS_AS(pole_newton(p, 0.3, opt), ConvergenceError);
    CHECK_THROWS_AS(pole_newton(p, -0.1), DomainError);
}
