#include "izeno/multilevel.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "izeno/errors.hpp"

namespace izeno {

DressedDoublet dressed_doublet(double B) {
    if (!(B >= 0.0)) throw DomainError("dressed_doublet requires B >= 0");
    return {B, -B, 1.0 / std::sqrt(2.0), 2.0 * B};
}

PartialRates partial_rates(const SystemParams& p, double B) {
    if (!(B >= 0.0)) throw DomainError("partial_rates requires B >= 0");
    const double base = std::numbers::pi * p.g2 * p.omega0;
    PartialRates r;
    r.gamma_plus = B <= p.omega0 ? base * chi_squared(p.form_factor, p.omega0 - B) : 0.0;
    r.gamma_minus = base * chi_squared(p.form_factor, p.omega0 + B);
    return r;
}

void LevelLadder::validate() const {
    for (const LadderLevel& l : entries) {
        if (!(l.f >= 0.0) || !std::isfinite(l.f)) throw DomainError("ladder f_j must be finite and >= 0");
        if (!(l.delta != 0.0) || !std::isfinite(l.delta)) throw DomainError("ladder delta_j must be finite and nonzero");
    }
}

LevelLadder LevelLadder::sorted() const {
    LevelLadder out = *this;
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const LadderLevel& a, const LadderLevel& b) { return std::abs(a.delta) < std::abs(b.delta); });
    return out;
}

namespace {

using Poly = std::vector<double>;  // ascending powers

Poly multiply(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

void axpy(Poly& y, double a, const Poly& x) {
    if (y.size() < x.size()) y.resize(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Poles of the reduced rational function: level 3 at 0 plus every level with f > 0.
std::vector<LadderLevel> active_poles(const LevelLadder& ladder) {
    std::vector<LadderLevel> a{{1.0, 0.0}};
    for (const LadderLevel& l : ladder.entries)
        if (l.f > 0.0) a.push_back(l);
    return a;
}

double R_of(const std::vector<LadderLevel>& poles, double B, double s) {
    double acc = s;
    for (const auto& l : poles) acc -= B * B * l.f / (s - l.delta);
    return acc;
}

double dR_of(const std::vector<LadderLevel>& poles, double B, double s) {
    double acc = 1.0;
    for (const auto& l : poles) {
        const double d = s - l.delta;
        acc += B * B * l.f / (d * d);
    }
    return acc;
}

}  // namespace

std::vector<double> branch_points(const LevelLadder& ladder, double B) {
    ladder.validate();
    if (!(B >= 0.0)) throw DomainError("branch_points requires B >= 0");
    std::vector<double> roots;
    if (B == 0.0) {
        roots = {0.0, 0.0};
        for (const LadderLevel& l : ladder.entries) roots.push_back(l.delta);
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    const auto poles = active_poles(ladder);
    // sigma * prod(sigma - d_a) - B^2 sum_a f_a prod_{b != a}(sigma - d_b)
    Poly all{1.0};
    for (const auto& l : poles) all = multiply(all, {-l.delta, 1.0});
    Poly P = multiply(all, {0.0, 1.0});
    for (std::size_t a = 0; a < poles.size(); ++a) {
        Poly others{1.0};
        for (std::size_t b = 0; b < poles.size(); ++b)
            if (b != a) others = multiply(others, {-poles[b].delta, 1.0});
        axpy(P, -B * B * poles[a].f, others);
    }
    Eigen::Map<const Eigen::VectorXd> coeffs(P.data(), static_cast<Eigen::Index>(P.size()));
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(coeffs);
    for (const auto& z : solver.roots()) {
        double s = z.real();
        // Newton polish on the rational form, which is monotone between poles.
        for (int it = 0; it < 4; ++it) {
            const double step = R_of(poles, B, s) / dR_of(poles, B, s);
            s -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(s))) break;
        }
        roots.push_back(s);
    }
    for (const LadderLevel& l : ladder.entries)
        if (l.f == 0.0) roots.push_back(l.delta);
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::optional<std::string> conditioning_warning(const std::vector<double>& roots) {
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        if (roots[i + 1] - roots[i] < 1e-10) {
            std::ostringstream os;
            os << "branch points " << roots[i] << " and " << roots[i + 1] << " are within 1e-10";
            return os.str();
        }
    }
    return std::nullopt;
}

PartialFractionDecomp partial_fractions(const LevelLadder& ladder, double B) {
    PartialFractionDecomp d;
    d.shifts = branch_points(ladder, B);
    if (B == 0.0) {
        // Limit B -> 0: the doublet carries all the weight.
        d.weights.assign(d.shifts.size(), 0.0);
        int placed = 0;
        for (std::size_t i = 0; i < d.shifts.size() && placed < 2; ++i) {
            if (d.shifts[i] == 0.0) {
                d.weights[i] = 0.5;
                ++placed;
            }
        }
        return d;
    }
    if (auto w = conditioning_warning(d.shifts)) throw ConditioningError("degenerate branch points: " + *w);
    const auto poles = active_poles(ladder);
    for (double s : d.shifts) {
        bool inactive = false;
        for (const LadderLevel& l : ladder.entries)
            if (l.f == 0.0 && l.delta == s) inactive = true;
        d.weights.push_back(inactive ? 0.0 : 1.0 / dR_of(poles, B, s));
    }
    return d;
}

PartialFractionDecomp perturbative_shifts(const LevelLadder& ladder, double B) {
    ladder.validate();
    double S1 = 0.0, S2 = 0.0;
    for (const LadderLevel& l : ladder.entries) {
        S1 += l.f / l.delta;
        S2 += l.f / (l.delta * l.delta);
    }
    const double B2 = B * B;
    std::vector<std::pair<double, double>> pairs{
        {B - 0.5 * B2 * S1, 0.5 - 0.25 * B * S1 - 0.5 * B2 * S2},
        {-B - 0.5 * B2 * S1, 0.5 + 0.25 * B * S1 - 0.5 * B2 * S2},
    };
    for (const LadderLevel& l : ladder.entries)
        pairs.emplace_back(l.delta + B2 * l.f / l.delta, B2 * l.f / (l.delta * l.delta));
    std::stable_sort(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a.first < b.first; });
    PartialFractionDecomp d;
    for (auto& [s, c] : pairs) {
        d.shifts.push_back(s);
        d.weights.push_back(c);
    }
    return d;
}

double gamma_many(const SystemParams& p, const PartialFractionDecomp& d) {
    const double gamma0 = 2.0 * std::numbers::pi * p.g2 * p.omega0 * chi_squared(p.form_factor, p.omega0);
    const int kappa = p.form_factor.kappa;
    double acc = 0.0;
    for (std::size_t i = 0; i < d.shifts.size(); ++i) {
        const double s = d.shifts[i];
        if (s > p.omega0) continue;  // theta(0) = 1
        acc += d.weights[i] * std::pow(1.0 - s / p.omega0, kappa);
    }
    return gamma0 * acc;
}

double gamma_many(const SystemParams& p, const LevelLadder& ladder, double B) {
    return gamma_many(p, partial_fractions(ladder, B));
}

bool gamma_many_regime_flag(const PartialFractionDecomp& d, double B, double omega0) {
    double minus = -INFINITY, plus = INFINITY;
    for (std::size_t i = 0; i < d.shifts.size(); ++i) {
        if (d.weights[i] == 0.0) continue;
        const double s = d.shifts[i];
        if (s <= 0.0) minus = std::max(minus, s);
        if (s > 0.0) plus = std::min(plus, s);
    }
    if (plus == INFINITY) plus = minus;  // B = 0: both doublet roots sit at zero
    return minus > omega0 || (B < omega0 && plus > omega0);
}

double effective_B_star(const LevelLadder& ladder, double B, double omega0) {
    ladder.validate();
    double acc = 1.0;
    for (const LadderLevel& l : ladder.entries) {
        if (!(l.delta > omega0))
            throw PreconditionError("effective_B_star requires every delta > omega0; use gamma_many directly");
        acc += l.f * omega0 / (2.0 * l.delta);
    }
    return B * acc;
}

}  // namespace izeno
