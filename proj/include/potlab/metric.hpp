#pragma once

#include <functional>
#include <random>
#include <vector>

#include "potlab/potential.hpp"

namespace potlab {

struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BallRadius {
    ExtReal radius = ExtReal::pos_inf();
    bool exact = true;  // false: certified-by-probing lower bound
};

namespace detail {

/// Deterministic probe directions on the unit sphere of the product space
/// (dimension 2n). Evenly spaced angles when 2n == 2, seeded otherwise.
inline std::vector<std::vector<double>> probe_directions(std::size_t dim2n, int count) {
    std::vector<std::vector<double>> dirs;
    if (dim2n == 2) {
        for (int k = 0; k < count; ++k) {
            double a = 2.0 * 3.14159265358979323846 * k / count;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
        return dirs;
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ dim2n);
    std::normal_distribution<double> nd;
    for (int k = 0; k < count; ++k) {
        std::vector<double> d(dim2n);
        double s = 0.0;
        do {
            s = 0.0;
            for (auto& v : d) {
                v = nd(rng);
                s += v * v;
            }
        } while (s == 0.0);
        s = std::sqrt(s);
        for (auto& v : d) v /= s;
        dirs.push_back(std::move(d));
    }
    return dirs;
}

inline PointPair offset(const PointPair& p, const std::vector<double>& dir, double r) {
    PointPair q = p;
    std::size_t n = p.dim();
    for (std::size_t i = 0; i < n; ++i) q.x[i] = p.x[i] + r * dir[i];
    for (std::size_t i = 0; i < n; ++i) q.y[i] = p.y[i] + r * dir[n + i];
    return q;
}

inline bool ring_inside(const Cost& c, const PointPair& p,
                        const std::vector<std::vector<double>>& dirs, double r) {
    for (const auto& d : dirs) {
        PointPair q = offset(p, d, r);
        if (!c.in_domain(q.x, q.y)) return false;
    }
    return true;
}

}  // namespace detail

/// rho(x,y) = sup { rho > 0 : B_rho(x,y) ⊆ D }. Exact when the cost carries
/// a boundary-distance formula; otherwise a bisected lower bound certified
/// by ring probing (the ball-inside-domain invariant is never overstated).
inline BallRadius maximal_ball_radius(const Cost& c, const PointPair& p, int ring_probes = 64) {
    if (!c.domain_open()) {
        throw MetricError("maximal_ball_radius: domain of " + c.name() + " is not open; refused");
    }
    if (!c.in_domain(p.x, p.y)) {
        throw MetricError("maximal_ball_radius: point outside dom c");
    }
    if (auto bd = c.boundary_distance(p)) {
        return {*bd, true};
    }
    auto dirs = detail::probe_directions(2 * p.dim(), ring_probes);
    double lo = 0.0, hi = 1.0;
    // Grow until a ring probe escapes the domain.
    int grow = 0;
    while (detail::ring_inside(c, p, dirs, hi)) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 60) return {ExtReal::finite(lo), false};  // no boundary in sight
    }
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (detail::ring_inside(c, p, dirs, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {ExtReal::finite(lo), false};
}

/// Per-node maximal balls and the ball-chain classes: nodes p, q join when
/// some instance point lies strictly inside both maximal balls.
///
/// Topological connectedness of a finite sample is meaningless, so this is
/// the connectivity notion the module exposes; statements about connected
/// continuous sets are exercised through dense samples of them.
struct BallStructure {
    std::vector<BallRadius> radii;
    std::vector<int> component_id;
    int component_count = 0;
};

inline BallStructure ball_chain_components(const Cost& cost, const std::vector<PointPair>& points,
                                           double eps) {
    BallStructure bs;
    int n = static_cast<int>(points.size());
    bs.radii.reserve(n);
    for (const auto& p : points) bs.radii.push_back(maximal_ball_radius(cost, p));

    auto inside = [&](const PointPair& r, int node) {
        const ExtReal& rho = bs.radii[node].radius;
        if (rho.is_pos_inf()) return true;
        return product_dist(r, points[node]) < rho.value() - eps;
    };

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool linked = false;
            for (int k = 0; k < n && !linked; ++k) {
                linked = inside(points[k], i) && inside(points[k], j);
            }
            if (linked) parent[find(i)] = find(j);
        }
    }
    bs.component_id.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (bs.component_id[r] == -1) bs.component_id[r] = bs.component_count++;
        bs.component_id[i] = bs.component_id[r];
    }
    return bs;
}

inline BallStructure ball_chain_components(const Instance& inst) {
    return ball_chain_components(*inst.cost, inst.points, inst.tolerance);
}

// --- continuity extension -----------------------------------------------------

/// Evaluates an antiderivative along a sequence converging to the query and
/// returns the limit once the tail is Cauchy within tolerance; the Cauchy
/// certificate is the cost-difference estimate
///   |f(p_m) - f(p_n)| <= max(|c(p_m) - c(x_n, y_m)|, |c(p_n) - c(x_m, y_n)|).
/// The returned value, adjoined to f, still satisfies the antiderivative
/// inequalities against every instance node (checked before returning).
inline double continuity_extension(const VariationGraph& g, const Cost& cost,
                                   const std::function<double(const PointPair&)>& f,
                                   const PointPair& query,
                                   const std::function<PointPair(int)>& selector, double tol,
                                   int max_steps = 64) {
    if (!cost.domain_open() || !cost.continuous_on_domain()) {
        throw MetricError("continuity_extension: requires an open domain and c continuous on it (" +
                          cost.name() + " refused)");
    }
    if (!cost.in_domain(query.x, query.y)) {
        throw MetricError("continuity_extension: query outside dom c");
    }
    // f must already be an antiderivative on the instance.
    std::vector<double> node_values;
    node_values.reserve(g.n());
    for (const auto& p : g.points) node_values.push_back(f(p));
    VerifyResult vr = verify_antiderivative(g, node_values, tol);
    if (!vr.all_ok()) {
        throw MetricError("continuity_extension: f is not an antiderivative of the instance");
    }

    PointPair prev = selector(1);
    double f_prev = f(prev);
    double value = f_prev;
    bool settled = product_dist(prev, query) <= tol;
    for (int m = 2; m <= max_steps && !settled; ++m) {
        PointPair cur = selector(m);
        if (!cost.in_domain(cur.x, cur.y)) {
            throw MetricError("continuity_extension: selector left dom c");
        }
        double f_cur = f(cur);
        ExtReal c_pp = cost.eval(prev);
        ExtReal c_cc = cost.eval(cur);
        ExtReal c_cross1 = cost.eval(cur.x, prev.y, prev.y_irrational());
        ExtReal c_cross2 = cost.eval(prev.x, cur.y, cur.y_irrational());
        double est = kPosInf;
        if (c_pp.is_finite() && c_cc.is_finite() && c_cross1.is_finite() && c_cross2.is_finite()) {
            est = std::max(std::abs(c_pp.value() - c_cross1.value()),
                           std::abs(c_cc.value() - c_cross2.value()));
        }
        double step = std::abs(f_cur - f_prev);
        value = f_cur;
        if (product_dist(cur, query) <= tol || (est <= tol / 4 && step <= tol / 4)) {
            settled = true;
        }
        prev = cur;
        f_prev = f_cur;
    }
    if (!settled) {
        throw MetricError("continuity_extension: tail not Cauchy within the step budget");
    }
    // Adjoin the value at the query and re-check the antiderivative
    // inequalities against all nodes.
    for (int j = 0; j < g.n(); ++j) {
        ExtReal cq = cost.eval(query);
        ExtReal cross_qj = cost.eval_cross(g.points[j], query);   // c(x_j, y_q)
        ExtReal cross_jq = cost.eval_cross(query, g.points[j]);   // c(x_q, y_j)
        if (cross_qj.is_finite() &&
            cq.value() - cross_qj.value() > value - node_values[j] + 10 * tol) {
            throw MetricError("continuity_extension: extended value breaks the inequalities");
        }
        if (cross_jq.is_finite() &&
            g.cost_at[j] - cross_jq.value() > node_values[j] - value + 10 * tol) {
            throw MetricError("continuity_extension: extended value breaks the inequalities");
        }
    }
    return value;
}

/// Selector walking toward the query along the segment that contains it:
/// p_m = query + (anchor - query) / 2^m. A query matching an instance point
/// yields the constant sequence.
inline std::function<PointPair(int)> make_segment_selector(const Instance& inst,
                                                           const PointPair& query) {
    for (const auto& p : inst.points) {
        if (p.x == query.x && p.y == query.y) {
            return [p](int) { return p; };
        }
    }
    for (const auto& s : inst.segments) {
        // Is the query on this segment?  Project the parameter and compare.
        double dx = s.b.x[0] - s.a.x[0], dy = s.b.y[0] - s.a.y[0];
        double len2 = dx * dx + dy * dy;
        if (len2 == 0.0) continue;
        double t = ((query.x[0] - s.a.x[0]) * dx + (query.y[0] - s.a.y[0]) * dy) / len2;
        if (t < 0.0 || t > 1.0) continue;
        PointPair proj = s.at(t);
        if (product_dist(proj, query) > 1e-12) continue;
        double t_anchor = t < 0.5 ? std::min(1.0, t + 0.5) : std::max(0.0, t - 0.5);
        PointPair q = query;
        return [s, t, t_anchor, q](int m) {
            double tm = t + (t_anchor - t) * std::pow(0.5, m);
            PointPair p = s.at(tm);
            p.tags = q.tags;
            return p;
        };
    }
    throw MetricError("continuity_extension: query is not approximable from the instance");
}

}  // namespace potlab
