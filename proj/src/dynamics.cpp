#include "izeno/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "izeno/errors.hpp"
#include "quadrature.hpp"

namespace izeno {

using cplx = std::complex<double>;

std::string to_string(GridRule rule) { return rule == GridRule::uniform ? "uniform" : "gauss_legendre"; }

GridRule grid_rule_from_string(const std::string& s) {
    if (s == "uniform") return GridRule::uniform;
    if (s == "gauss_legendre" || s == "gauss-legendre") return GridRule::gauss_legendre;
    throw DomainError("unknown grid rule '" + s + "'");
}

namespace {

struct Segment {
    double a, b;
    bool dense;
    std::size_t n = 0;
};

// Golub-Welsch nodes and weights on [-1, 1].
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        w[i] = 2.0 * v * v;
    }
}

// Largest-remainder apportionment of `total` items by length, at least one each.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& lengths) {
    const std::size_t k = lengths.size();
    std::vector<std::size_t> out(k, 1);
    if (k == 0) return out;
    if (total < k) throw RefinementError("too few modes for the requested grid layout");
    double sum = 0.0;
    for (double l : lengths) sum += l;
    const std::size_t free = total - k;
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t used = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double share = free * lengths[i] / sum;
        const auto whole = static_cast<std::size_t>(std::floor(share));
        out[i] += whole;
        used += whole;
        rem.emplace_back(share - whole, i);
    }
    std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; used < free; ++i, ++used) out[rem[i].second] += 1;
    return out;
}

void fill_segment(const Segment& s, GridRule rule, int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (rule == GridRule::uniform) {
        const double h = (s.b - s.a) / s.n;
        for (std::size_t i = 0; i < s.n; ++i) {
            nodes.push_back(s.a + (i + 0.5) * h);
            weights.push_back(h);
        }
        return;
    }
    const std::size_t panels = (s.n + order - 1) / order;
    const std::size_t base = s.n / panels;
    const std::size_t extra = s.n % panels;
    const double width = (s.b - s.a) / panels;
    std::vector<double> x, w;
    for (std::size_t p = 0; p < panels; ++p) {
        const int q = static_cast<int>(base + (p < extra ? 1 : 0));
        legendre_rule(q, x, w);
        const double lo = s.a + p * width;
        for (int i = 0; i < q; ++i) {
            nodes.push_back(lo + 0.5 * width * (x[i] + 1.0));
            weights.push_back(0.5 * width * w[i]);
        }
    }
}

}  // namespace

ModeGrid build_mode_grid(const SystemParams& p, double omega_max, std::size_t M, GridRule rule,
                         const GridOptions& opt) {
    p.validate();
    if (M < 100) throw PreconditionError("build_mode_grid requires M >= 100");
    std::vector<double> focus = opt.focus.empty() ? std::vector<double>{p.omega0} : opt.focus;
    double top = p.omega0;
    for (double f : focus) top = std::max(top, f);
    if (!(omega_max >= 10.0 * top))
        throw PreconditionError("omega_max must be at least 10 times the largest resonance energy");
    if (opt.panel_order < 1) throw DomainError("panel_order must be positive");

    // Dense windows around each resonance, merged where they overlap.
    const double h = opt.dense_halfwidth * p.omega0;
    std::vector<std::pair<double, double>> windows;
    if (h > 0.0 && opt.dense_fraction > 0.0) {
        for (double f : focus) {
            if (f <= 0.0 || f >= omega_max) continue;
            windows.emplace_back(std::max(0.0, f - h), std::min(omega_max, f + h));
        }
        std::sort(windows.begin(), windows.end());
        std::vector<std::pair<double, double>> merged;
        for (auto& w : windows) {
            if (!merged.empty() && w.first <= merged.back().second)
                merged.back().second = std::max(merged.back().second, w.second);
            else
                merged.push_back(w);
        }
        windows = merged;
    }
    std::vector<Segment> segs;
    double cursor = 0.0;
    for (auto& w : windows) {
        if (w.first > cursor) segs.push_back({cursor, w.first, false});
        segs.push_back({w.first, w.second, true});
        cursor = w.second;
    }
    if (cursor < omega_max) segs.push_back({cursor, omega_max, false});

    std::vector<double> dense_len, coarse_len;
    for (auto& s : segs) (s.dense ? dense_len : coarse_len).push_back(s.b - s.a);
    std::size_t M_dense = dense_len.empty() ? 0 : static_cast<std::size_t>(std::llround(opt.dense_fraction * M));
    if (coarse_len.empty()) M_dense = M;
    auto nd = apportion(M_dense, dense_len);
    auto nc = apportion(M - M_dense, coarse_len);
    std::size_t id = 0, ic = 0;
    for (auto& s : segs) s.n = s.dense ? nd[id++] : nc[ic++];

    ModeGrid g;
    g.omega_max = omega_max;
    g.rule = rule;
    g.declared_tolerance = opt.target_tolerance;
    for (auto& s : segs) fill_segment(s, rule, opt.panel_order, g.nodes, g.weights);

    const double scale = p.g2 * p.omega0;
    double sum = 0.0;
    g.couplings2.reserve(g.nodes.size());
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        g.couplings2.push_back(g.weights[k] * scale * chi_squared(p.form_factor, g.nodes[k]));
        sum += g.couplings2.back();
    }
    if (scale > 0.0) {
        double exact = 0.0;
        auto f = [&](double w) { return chi_squared(p.form_factor, w); };
        for (auto& s : segs) exact += detail::gk(f, s.a, s.b, "coupling normalization");
        exact *= scale;
        g.quadrature_error = std::abs(sum - exact) / exact;
        if (g.quadrature_error > opt.target_tolerance) {
            std::ostringstream os;
            os << "mode grid with M = " << M << " misses the coupling integral by " << g.quadrature_error
               << " (target " << opt.target_tolerance << "); increase M";
            throw RefinementError(os.str());
        }
    }
    return g;
}

double recurrence_time(const ModeGrid& g, double omega0, double B) {
    const std::vector<double>& w = g.nodes;
    if (w.size() < 2) return 0.0;
    double gap = 0.0;
    for (double e : {omega0 - std::abs(B), omega0 + std::abs(B)}) {
        if (e <= 0.0 || e >= g.omega_max) continue;
        // Widest gap among the 16 nodes nearest to the resonance.
        const auto it = std::lower_bound(w.begin(), w.end(), e);
        const std::ptrdiff_t c = it - w.begin();
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(1, c - 8);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(w.size()) - 1, c + 8);
        for (std::ptrdiff_t k = lo; k <= hi; ++k) gap = std::max(gap, w[k] - w[k - 1]);
    }
    return gap > 0.0 ? 2.0 * std::numbers::pi / gap : INFINITY;
}

namespace {

// Arrowhead Hamiltonian in the carrier frame: emitter at 0, dressed modes at w_k +- B - w0.
struct Arrowhead {
    std::vector<double> d;
    std::vector<double> v;
};

class GaussStepper {
public:
    explicit GaussStepper(const Arrowhead& H) : H_(H), t1_(H.d.size() + 1), t2_(H.d.size() + 1), inv_(H.d.size()) {}

    // psi <- R(-i H h) psi with R the (2,2) Pade map of the 2-stage Gauss method.
    void step(std::vector<cplx>& psi, double h) {
        const cplx I(0.0, 1.0);
        apply(psi, t1_);
        apply(t1_, t2_);
        const cplx a1 = -I * (0.5 * h);
        const double a2 = -h * h / 12.0;
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += a1 * t1_[i] + a2 * t2_[i];
        const cplx root(3.0, std::sqrt(3.0));
        solve(psi, I * h / root);
        solve(psi, I * h / std::conj(root));
    }

private:
    void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
        const std::size_t n = H_.d.size();
        cplx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += H_.v[k] * in[k + 1];
            out[k + 1] = H_.v[k] * in[0] + H_.d[k] * in[k + 1];
        }
        out[0] = acc;
    }

    // (1 + c H) psi = r, in place, by eliminating the bath block.
    void solve(std::vector<cplx>& r, cplx c) {
        const std::size_t n = H_.d.size();
        cplx den = 1.0, num = r[0];
        for (std::size_t k = 0; k < n; ++k) {
            const cplx q(1.0 + c.real() * H_.d[k], c.imag() * H_.d[k]);
            const double n2 = std::norm(q);
            inv_[k] = cplx(q.real() / n2, -q.imag() / n2);
            const cplx cv = c * H_.v[k];
            den -= cv * cv * inv_[k];
            num -= cv * r[k + 1] * inv_[k];
        }
        const cplx x = num / den;
        r[0] = x;
        for (std::size_t k = 0; k < n; ++k) r[k + 1] = (r[k + 1] - c * H_.v[k] * x) * inv_[k];
    }

    const Arrowhead& H_;
    std::vector<cplx> t1_, t2_, inv_;
};

double norm2(const std::vector<cplx>& psi) {
    double s = 0.0;
    for (const cplx& c : psi) s += std::norm(c);
    return s;
}

}  // namespace

TimeSeries evolve(const ModeGrid& grid, const SystemParams& p, double B, double t_final, double tol,
                  const EvolveOptions& opt) {
    p.validate();
    B = std::abs(B);
    if (!(tol > 0.0)) throw DomainError("evolve requires tol > 0");
    if (!(t_final >= 0.0)) throw DomainError("evolve requires t_final >= 0");
    const double t_rec = recurrence_time(grid, p.omega0, B);
    if (t_final > 0.5 * t_rec) {
        std::ostringstream os;
        os << "t_final = " << t_final << " exceeds half the recurrence time " << t_rec
           << " of this grid; refine the grid near omega0 +- B or shorten the run";
        throw PreconditionError(os.str());
    }

    const std::size_t M = grid.size();
    Arrowhead H;
    H.d.resize(2 * M);
    H.v.resize(2 * M);
    for (std::size_t k = 0; k < M; ++k) {
        const double v = std::sqrt(0.5 * grid.couplings2[k]);
        H.d[k] = grid.nodes[k] + B - p.omega0;
        H.d[M + k] = grid.nodes[k] - B - p.omega0;
        H.v[k] = H.v[M + k] = v;
    }

    std::vector<double> times;
    const std::size_t ns = std::max<std::size_t>(opt.samples, 1);
    for (std::size_t i = 0; i <= ns; ++i) times.push_back(t_final * static_cast<double>(i) / ns);
    for (double t : opt.sample_times)
        if (t >= 0.0 && t <= t_final) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::vector<cplx> psi(2 * M + 1, 0.0), full, half;
    psi[0] = 1.0;
    GaussStepper stepper(H);
    TimeSeries out;

    auto record = [&](double t) {
        AmplitudeState s;
        s.t = t;
        const cplx phase = std::polar(1.0, -p.omega0 * t);
        s.x = psi[0] * phase;
        s.norm = norm2(psi);
        out.max_norm_drift = std::max(out.max_norm_drift, std::abs(s.norm - 1.0));
        if (opt.keep_modes) {
            s.y.resize(M);
            s.z.resize(M);
            const double r = std::sqrt(0.5);
            for (std::size_t k = 0; k < M; ++k) {
                s.y[k] = r * (psi[k + 1] + psi[M + k + 1]) * phase;
                s.z[k] = r * (psi[k + 1] - psi[M + k + 1]) * phase;
            }
        }
        out.states.push_back(std::move(s));
    };

    double t = 0.0;
    double h = opt.initial_step;
    std::size_t next = 0;
    while (next < times.size() && times[next] <= 0.0) {
        record(0.0);
        ++next;
    }
    while (next < times.size()) {
        if (out.accepted_steps + out.rejected_steps > opt.max_steps)
            throw StiffnessError("evolve exceeded the step budget; relax tol or reduce omega_max");
        const double target = times[next];
        const double hs = std::min(h, target - t);
        full = psi;
        stepper.step(full, hs);
        half = psi;
        stepper.step(half, 0.5 * hs);
        stepper.step(half, 0.5 * hs);
        const double err = std::abs(half[0] - full[0]) / 15.0;
        const double factor = err > 0.0 ? std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 4.0) : 4.0;
        if (err <= tol) {
            psi.swap(half);
            ++out.accepted_steps;
            const bool landed = hs == target - t;
            t = landed ? target : t + hs;
            if (hs == h || factor < 1.0) h = hs * factor;
            if (landed) {
                record(t);
                ++next;
            }
        } else {
            ++out.rejected_steps;
            h = hs * factor;
            if (h < opt.min_step) {
                std::ostringstream os;
                os << "step size underflow (h = " << h << ") at t = " << t
                   << "; reduce omega_max, coarsen the bath, or relax tol";
                throw StiffnessError(os.str());
            }
        }
    }
    return out;
}

SurvivalCurve survival_probability(const TimeSeries& series) {
    SurvivalCurve c;
    c.t.reserve(series.states.size());
    c.p.reserve(series.states.size());
    for (const AmplitudeState& s : series.states) {
        c.t.push_back(s.t);
        c.p.push_back(std::min(1.0, std::norm(s.x)));
    }
    return c;
}

DecayFit fit_decay_rate(const SurvivalCurve& curve, double t1, double t2, double max_residual) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
        if (curve.t[i] < t1 || curve.t[i] > t2) continue;
        if (!(curve.p[i] > 0.0)) throw FitQualityError("survival curve is not positive on the fit window");
        ts.push_back(curve.t[i]);
        ys.push_back(std::log(curve.p[i]));
    }
    const std::size_t n = ts.size();
    if (n < 3) throw FitQualityError("fit window holds fewer than 3 samples");
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (ts[i] - mt) * (ts[i] - mt);
        sxy += (ts[i] - mt) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double ssr = 0.0, ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (my + slope * (ts[i] - mt));
        ssr += r * r;
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    const double span = ymax - ymin;
    if (span < 1e-12) throw FitQualityError("no measurable decay on the fit window");
    DecayFit fit;
    fit.gamma = -slope;
    fit.uncertainty = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    fit.residual = std::sqrt(ssr / n) / span;
    fit.points = n;
    if (fit.residual > max_residual) {
        std::ostringstream os;
        os << "survival is not exponential on [" << t1 << ", " << t2 << "]: relative residual " << fit.residual;
        throw FitQualityError(os.str());
    }
    return fit;
}

double ww_survival(const PoleResult& pole, double t) {
    if (!(t >= 0.0)) throw DomainError("ww_survival requires t >= 0");
    return std::exp(-pole.gamma * t);
}

}  // namespace izeno
