#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <vector>

#include "potlab/graph.hpp"

namespace potlab {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// All-pairs table of the maximal inner variation F_G. Entry (s,e) is -inf
/// when e is unreachable from s, +inf when a strictly positive cycle lies
/// between them, and otherwise the finite maximum over walks.
struct VariationMatrix {
    int n = 0;
    std::vector<double> f;  // row-major, IEEE ±inf as sentinels
    bool path_bounded = true;
    bool cyclically_monotone = true;

    double raw(int s, int e) const { return f[static_cast<std::size_t>(s) * n + e]; }
    ExtReal at(int s, int e) const { return ExtReal::from_double(raw(s, e)); }
};

namespace detail {

/// One row of F: longest-walk relaxation from s over the nodes reachable
/// from s. |R|-1 rounds with an exact-fixed-point early exit; if still
/// unstable, |R| extra rounds measure each node's total further gain, and
/// a gain beyond eps marks its downstream cone +inf. A cycle whose sum
/// exceeds eps pumps at least that much per lap, so it is always caught,
/// while rounding creep on zero cycles stays far below eps.
inline std::vector<double> variation_row(const VariationGraph& g, int s, double eps) {
    int n = g.n();
    std::vector<char> reach = g.reach_mask(s, true);
    std::vector<double> dist(n, kNegInf);
    dist[s] = 0.0;

    int reach_count = 0;
    for (char c : reach) reach_count += c;

    auto sweep = [&](int rounds) {
        bool stable = false;
        for (int round = 0; round < rounds && !stable; ++round) {
            stable = true;
            for (int u = 0; u < n; ++u) {
                if (dist[u] == kNegInf) continue;
                double du = dist[u];
                for (const auto& e : g.out[u]) {
                    double cand = du + e.w;
                    if (cand > dist[e.to]) {
                        dist[e.to] = cand;
                        stable = false;
                    }
                }
            }
        }
        return stable;
    };

    bool stable = sweep(reach_count - 1);
    if (!stable) {
        std::vector<double> snapshot = dist;
        sweep(reach_count);
        std::vector<int> improving;
        for (int v = 0; v < n; ++v) {
            if (snapshot[v] == kNegInf) continue;
            if (dist[v] - snapshot[v] > eps) improving.push_back(v);
        }
        if (!improving.empty()) {
            std::vector<char> blown(n, 0);
            std::deque<int> q;
            for (int v : improving) {
                if (!blown[v]) {
                    blown[v] = 1;
                    q.push_back(v);
                }
            }
            while (!q.empty()) {
                int u = q.front();
                q.pop_front();
                for (const auto& e : g.out[u]) {
                    if (!blown[e.to]) {
                        blown[e.to] = 1;
                        q.push_back(e.to);
                    }
                }
            }
            for (int v = 0; v < n; ++v) {
                if (blown[v]) dist[v] = kPosInf;
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!reach[v]) dist[v] = kNegInf;
    }
    // Cycles within eps of zero are zero-weight by convention, so the
    // diagonal entry is exactly 0 unless a genuinely positive cycle blew
    // it up; rounding creep from telescoping sums must not leak into it.
    if (dist[s] != kPosInf && dist[s] <= eps) dist[s] = 0.0;
    return dist;
}

}  // namespace detail

/// F_G(s, e): exact sup over walks of the telescoping weight sum.
inline ExtReal max_inner_variation(const VariationGraph& g, int s, int e, double eps = 1e-9) {
    if (s < 0 || e < 0 || s >= g.n() || e >= g.n()) {
        throw std::out_of_range("max_inner_variation: node index");
    }
    auto row = detail::variation_row(g, s, eps);
    return ExtReal::from_double(row[e]);
}

inline VariationMatrix all_pairs_variation(const VariationGraph& g, double eps = 1e-9) {
    VariationMatrix m;
    m.n = g.n();
    m.f.resize(static_cast<std::size_t>(m.n) * m.n);
    for (int s = 0; s < m.n; ++s) {
        auto row = detail::variation_row(g, s, eps);
        std::copy(row.begin(), row.end(), m.f.begin() + static_cast<std::size_t>(s) * m.n);
    }
    for (int s = 0; s < m.n && m.path_bounded; ++s) {
        for (int e = 0; e < m.n; ++e) {
            if (m.raw(s, e) == kPosInf) {
                m.path_bounded = false;
                break;
            }
        }
    }
    for (int v = 0; v < m.n; ++v) {
        double d = m.raw(v, v);
        // Diagonal entries are 0 or +inf under the trivial-path convention.
        if (!(d == 0.0)) {
            m.cyclically_monotone = false;
        }
    }
    return m;
}

/// Zero-init relaxation check for a strictly positive cycle: n-1 sweeps
/// with a fixed-point early exit; if still unstable, n further sweeps must
/// lift some node by more than eps (a positive cycle gains its sum every
/// lap). Cycles whose sum stays within eps count as zero-weight.
inline bool has_positive_cycle(const VariationGraph& g, double eps) {
    int n = g.n();
    if (n == 0) return false;
    std::vector<double> dist(n, 0.0);
    auto sweep = [&](int rounds) {
        bool stable = false;
        for (int round = 0; round < rounds && !stable; ++round) {
            stable = true;
            for (int u = 0; u < n; ++u) {
                double du = dist[u];
                for (const auto& e : g.out[u]) {
                    if (du + e.w > dist[e.to]) {
                        dist[e.to] = du + e.w;
                        stable = false;
                    }
                }
            }
        }
        return stable;
    };
    if (sweep(n - 1)) return false;
    std::vector<double> snapshot = dist;
    sweep(n);
    for (int v = 0; v < n; ++v) {
        if (dist[v] - snapshot[v] > eps) return true;
    }
    return false;
}

// --- growth across nested discretizations ------------------------------------

struct GrowthResult {
    std::vector<ExtReal> values;      // F(s, e) per refinement level
    bool monotone_certificate = true; // non-decreasing, exact comparisons
    std::vector<bool> level_cyclically_monotone;
};

/// F(s,e) across nested point-set levels. Levels must be supersets of their
/// predecessors and every level must contain both query points.
inline GrowthResult variation_growth(const Cost& cost,
                                     const std::vector<std::vector<PointPair>>& levels,
                                     const PointPair& s_point, const PointPair& e_point,
                                     double eps = 1e-9, bool check_cycles = true) {
    GrowthResult out;
    std::vector<PointPair> prev;
    for (std::size_t lv = 0; lv < levels.size(); ++lv) {
        const auto& pts = levels[lv];
        auto find = [&](const PointPair& p) {
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (pts[i].x == p.x && pts[i].y == p.y) return static_cast<int>(i);
            }
            throw InstanceError("growth: query point missing from level " + std::to_string(lv));
        };
        for (const auto& p : prev) {
            bool found = false;
            for (const auto& q : pts) {
                if (q.x == p.x && q.y == p.y) {
                    found = true;
                    break;
                }
            }
            if (!found) throw InstanceError("growth: levels are not nested");
        }
        int si = find(s_point), ei = find(e_point);
        VariationGraph g = build_variation_graph(cost, pts);
        auto row = detail::variation_row(g, si, eps);
        out.values.push_back(ExtReal::from_double(row[ei]));
        if (check_cycles) {
            out.level_cyclically_monotone.push_back(!has_positive_cycle(g, eps));
        }
        prev = pts;
    }
    for (std::size_t i = 1; i < out.values.size(); ++i) {
        if (out.values[i] < out.values[i - 1]) out.monotone_certificate = false;
    }
    return out;
}

}  // namespace potlab
