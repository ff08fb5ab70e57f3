#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <queue>
#include <sstream>
#include <string>

#include "izeno/errors.hpp"

namespace izeno::detail {

inline constexpr double kRelTol = 1e-13;

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }
inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(std::complex<double> v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

[[noreturn]] inline void quadrature_failure(const char* what, double a, double b, double err, double l1) {
    std::ostringstream os;
    os.precision(6);
    os << "quadrature did not converge for " << what << " on [" << a << ", " << b << "]: error estimate " << err
       << " vs L1 norm " << l1;
    throw NumericalError(os.str());
}

// One 61-point Gauss-Kronrod panel; err is |K - G| with Boost's roundoff floor.
template <class F>
auto gk_panel(F& f, double a, double b, double& err, double& l1) {
    using R = decltype(f(a));
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto g = [&](double t) -> R { return f(mid + half * t); };
    R v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, -1.0, 1.0, 0, 0.0, &err, &l1);
    err *= half;
    l1 *= half;
    return R(v * half);
}

// Globally adaptive Gauss-Kronrod on a finite interval: bisect the panel with the
// largest error until the total meets rel_tol * L1 or abs_tol. Endpoints are never sampled.
template <class F>
auto gk(F&& f, double a, double b, const char* what, double rel_tol = kRelTol, double abs_tol = 0.0) {
    using R = decltype(f(a));
    if (a == b) return R(0.0);
    struct Panel {
        double a, b, err, l1;
        R v;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    std::priority_queue<Panel> heap;
    Panel p0{a, b, 0.0, 0.0, R(0.0)};
    p0.v = gk_panel(f, a, b, p0.err, p0.l1);
    heap.push(p0);
    R total = p0.v;
    double err = p0.err, l1 = p0.l1;
    constexpr std::size_t kMaxPanels = 4000;
    while (err > std::max(rel_tol * l1, abs_tol) && heap.size() < kMaxPanels) {
        Panel top = heap.top();
        heap.pop();
        const double m = 0.5 * (top.a + top.b);
        if (!(m > top.a && m < top.b)) {
            heap.push(top);
            break;
        }
        Panel left{top.a, m, 0.0, 0.0, R(0.0)}, right{m, top.b, 0.0, 0.0, R(0.0)};
        left.v = gk_panel(f, left.a, left.b, left.err, left.l1);
        right.v = gk_panel(f, right.a, right.b, right.err, right.l1);
        total += left.v + right.v - top.v;
        err += left.err + right.err - top.err;
        l1 += left.l1 + right.l1 - top.l1;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    total = R(0.0);
    err = 0.0;
    l1 = 0.0;
    while (!heap.empty()) {
        total += heap.top().v;
        err += heap.top().err;
        l1 += heap.top().l1;
        heap.pop();
    }
    if (!finite(total) || err > 1e3 * rel_tol * l1 + abs_tol + 1e-300) quadrature_failure(what, a, b, err, l1);
    return total;
}

// Per thread: integrate() is non-const and extends its abscissa tables lazily.
inline boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    static thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

// Integral over [a, inf) through w = a + L t/(1-t).
template <class F>
auto semi_infinite(F&& f, double a, double L, const char* what, double rel_tol = kRelTol, double abs_tol = 0.0) {
    using R = decltype(f(a));
    auto g = [&](double t) -> R {
        if (t >= 1.0) return R(0.0);
        const double one_minus = 1.0 - t;
        return f(a + L * t / one_minus) * (L / (one_minus * one_minus));
    };
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    R v = tanh_sinh_rule().integrate(g, 0.0, 1.0, rel_tol, &err, &l1, &levels);
    if (!finite(v) || err > 1e3 * rel_tol * l1 + abs_tol + 1e-300) quadrature_failure(what, a, INFINITY, err, l1);
    return v;
}

}  // namespace izeno::detail
