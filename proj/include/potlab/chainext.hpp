#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "potlab/metric.hpp"

namespace potlab {

struct ChainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Order { Ominus, Oplus };

inline std::string to_string(Order o) { return o == Order::Ominus ? "ominus" : "oplus"; }

inline bool chain_leq(Order o, const PointPair& p, const PointPair& q) {
    return o == Order::Ominus ? leq_ominus(p, q) : leq_oplus(p, q);
}
inline bool chain_less(Order o, const PointPair& p, const PointPair& q) {
    return o == Order::Ominus ? strictly_ominus(p, q) : strictly_oplus(p, q);
}

// --- chain decision -----------------------------------------------------------

struct ChainCheck {
    bool chain = true;
    std::vector<int> sorted_indices;
    int bad_a = -1, bad_b = -1;  // witnessing incomparable pair when !chain
};

/// Sorts by x (ties by y in the order-appropriate direction) and verifies
/// pairwise comparability in one pass. Exact comparisons throughout.
inline ChainCheck is_chain(const std::vector<PointPair>& pts, Order order) {
    ChainCheck out;
    out.sorted_indices.resize(pts.size());
    std::iota(out.sorted_indices.begin(), out.sorted_indices.end(), 0);
    std::stable_sort(out.sorted_indices.begin(), out.sorted_indices.end(), [&](int a, int b) {
        if (pts[a].sx() != pts[b].sx()) return pts[a].sx() < pts[b].sx();
        return order == Order::Ominus ? pts[a].sy() > pts[b].sy() : pts[a].sy() < pts[b].sy();
    });
    for (std::size_t k = 0; k + 1 < out.sorted_indices.size(); ++k) {
        int a = out.sorted_indices[k], b = out.sorted_indices[k + 1];
        if (!chain_leq(order, pts[a], pts[b])) {
            out.chain = false;
            out.bad_a = a;
            out.bad_b = b;
            return out;
        }
    }
    return out;
}

// --- segment complexes and chain structures ------------------------------------

/// Isolated points plus closed segments in the plane, with a declared order.
/// The closure is represented exactly: both endpoints of every segment
/// belong to the complex.
struct SegmentComplex {
    std::vector<PointPair> isolated;
    std::vector<Segment> segments;
    Order order = Order::Ominus;
};

inline SegmentComplex complex_from_instance(const Instance& inst, Order order) {
    SegmentComplex c;
    c.order = order;
    c.isolated.assign(inst.points.begin(), inst.points.begin() + inst.explicit_count);
    c.segments = inst.segments;
    return c;
}

/// A maximal straight run of the chain, oriented so that a ⪯ b.
struct Piece {
    PointPair a, b;
    bool connector = false;
    std::optional<Segment> origin;  // input segment this piece came from
    bool flipped = false;           // origin was listed against the chain order

    bool degenerate() const { return a.x == b.x && a.y == b.y; }
    double length() const { return product_dist(a, b); }
    PointPair at(double t) const {
        if (t == 0.0) return a;
        if (t == 1.0) {
            PointPair p = b;
            p.tags = a.tags;
            return p;
        }
        PointPair p;
        p.x = {a.x[0] + t * (b.x[0] - a.x[0])};
        p.y = {a.y[0] + t * (b.y[0] - a.y[0])};
        p.tags = a.tags;
        return p;
    }

    /// Samples preserving the origin's exact arithmetic when present, so
    /// extension point sets contain the input point set bit-for-bit.
    std::vector<PointPair> sample(double density) const {
        if (degenerate()) return {a};
        if (origin) {
            auto pts = origin->sample();
            if (flipped) std::reverse(pts.begin(), pts.end());
            return pts;
        }
        int count = std::max(2, static_cast<int>(std::ceil(length() * density)) + 1);
        std::vector<PointPair> pts;
        for (int j = 0; j < count; ++j) pts.push_back(at(double(j) / (count - 1)));
        return pts;
    }
};

/// Pieces sorted in chain order; consecutive pieces satisfy prev.b ⪯ next.a.
struct ChainStructure {
    Order order = Order::Ominus;
    std::vector<Piece> pieces;

    const PointPair& min_element() const { return pieces.front().a; }
    const PointPair& max_element() const { return pieces.back().b; }

    std::vector<PointPair> sample(double density) const {
        std::vector<PointPair> out;
        std::set<std::pair<double, double>> seen;
        for (const auto& p : pieces) {
            for (auto& q : p.sample(density)) {
                if (seen.insert({q.x[0], q.y[0]}).second) out.push_back(std::move(q));
            }
        }
        return out;
    }

    bool contains(const PointPair& q, double tol = 1e-12) const {
        for (const auto& p : pieces) {
            if (p.degenerate()) {
                if (product_dist(p.a, q) <= tol) return true;
                continue;
            }
            double dx = p.b.x[0] - p.a.x[0], dy = p.b.y[0] - p.a.y[0];
            double len2 = dx * dx + dy * dy;
            double t = ((q.x[0] - p.a.x[0]) * dx + (q.y[0] - p.a.y[0]) * dy) / len2;
            if (t < -tol || t > 1.0 + tol) continue;
            if (product_dist(p.at(std::clamp(t, 0.0, 1.0)), q) <= tol) return true;
        }
        return false;
    }
};

inline ChainStructure make_chain_structure(const SegmentComplex& complex) {
    ChainStructure s;
    s.order = complex.order;
    for (const auto& p : complex.isolated) {
        if (p.dim() != 1) throw ChainError("chain machinery lives on 2-coordinate instances");
        Piece degenerate;
        degenerate.a = p;
        degenerate.b = p;
        s.pieces.push_back(std::move(degenerate));
    }
    for (const auto& seg : complex.segments) {
        if (seg.half_open) {
            throw ChainError("chain extension requires closed segments (half-open closure leaves the set)");
        }
        Piece p;
        p.origin = seg;
        if (chain_leq(complex.order, seg.a, seg.b)) {
            p.a = seg.a;
            p.b = seg.b;
        } else if (chain_leq(complex.order, seg.b, seg.a)) {
            p.a = seg.b;
            p.b = seg.a;
            p.flipped = true;
        } else {
            throw ChainError("segment endpoints are incomparable in the declared order");
        }
        s.pieces.push_back(std::move(p));
    }
    if (s.pieces.empty()) throw ChainError("empty complex");
    Order o = complex.order;
    std::stable_sort(s.pieces.begin(), s.pieces.end(), [o](const Piece& u, const Piece& v) {
        if (u.a.sx() != v.a.sx()) return u.a.sx() < v.a.sx();
        if (u.a.sy() != v.a.sy()) return o == Order::Ominus ? u.a.sy() > v.a.sy() : u.a.sy() < v.a.sy();
        if (u.b.sx() != v.b.sx()) return u.b.sx() < v.b.sx();
        return o == Order::Ominus ? u.b.sy() > v.b.sy() : u.b.sy() < v.b.sy();
    });
    for (std::size_t k = 0; k + 1 < s.pieces.size(); ++k) {
        if (!chain_leq(o, s.pieces[k].b, s.pieces[k + 1].a)) {
            throw ChainError("complex closure is not a chain in the declared order");
        }
    }
    return s;
}

// --- the literal (L, U) profile -------------------------------------------------

/// (L, U) of a point of the structure: L = sup P_X of the strict
/// predecessors, U = inf P_Y (⊖) or sup P_Y (⊕), per the two definитions.
/// A minimal element maps to itself.
inline PointPair lu_query(const ChainStructure& s, const PointPair& q) {
    Order o = s.order;
    bool found = false;
    double sup_x = kNegInf;
    double bound_y = o == Order::Ominus ? kPosInf : kNegInf;

    for (const auto& p : s.pieces) {
        // Largest t with p.at(t) ⪯ q; both constraints are monotone in t.
        auto frac = [](double a, double b, double lim, bool up) -> double {
            // reach of {a + t(b-a)} inside (up ? <= lim : >= lim)
            if (up ? b <= lim : b >= lim) return 1.0;
            if (up ? a > lim : a < lim) return -1.0;
            return (lim - a) / (b - a);
        };
        double tx = frac(p.a.x[0], p.b.x[0], q.x[0], true);
        double ty = o == Order::Ominus ? frac(p.a.y[0], p.b.y[0], q.y[0], false)
                                       : frac(p.a.y[0], p.b.y[0], q.y[0], true);
        double t_hi = std::min(tx, ty);
        if (t_hi < 0.0) continue;
        PointPair top = p.degenerate() ? p.a : p.at(std::clamp(t_hi, 0.0, 1.0));
        bool only_q = (p.degenerate() && p.a.x == q.x && p.a.y == q.y) ||
                      (!p.degenerate() && t_hi == 0.0 && p.a.x == q.x && p.a.y == q.y);
        if (only_q) continue;
        found = true;
        sup_x = std::max(sup_x, top.x[0]);
        bound_y = o == Order::Ominus ? std::min(bound_y, top.y[0]) : std::max(bound_y, top.y[0]);
    }
    if (!found) return q;  // minimal element
    PointPair lu;
    lu.x = {sup_x};
    lu.y = {bound_y};
    return lu;
}

// --- chain extension --------------------------------------------------------------

struct LURecord {
    PointPair element;  // a chain element (piece start)
    PointPair lu;
};

struct ChainExtension {
    Order order = Order::Ominus;
    ChainStructure input;
    ChainStructure extension;  // input pieces with connecting segments interleaved
    std::vector<LURecord> lu;
};

/// CE(G): each chain element is joined to the (L,U) profile of its strict
/// predecessors. For a finite chain this is exactly the polyline through
/// the sorted points.
inline ChainExtension chain_extension(const SegmentComplex& complex) {
    ChainExtension ce;
    ce.order = complex.order;
    ce.input = make_chain_structure(complex);
    ce.extension.order = complex.order;
    for (std::size_t k = 0; k < ce.input.pieces.size(); ++k) {
        const Piece& piece = ce.input.pieces[k];
        PointPair lu;
        if (k == 0) {
            lu = piece.a;  // minimal element: L = U = the point itself
        } else {
            double sup_x = kNegInf;
            double bound_y = complex.order == Order::Ominus ? kPosInf : kNegInf;
            for (std::size_t j = 0; j < k; ++j) {
                const PointPair& end = ce.input.pieces[j].b;
                sup_x = std::max(sup_x, end.x[0]);
                bound_y = complex.order == Order::Ominus ? std::min(bound_y, end.y[0])
                                                         : std::max(bound_y, end.y[0]);
            }
            lu.x = {sup_x};
            lu.y = {bound_y};
        }
        ce.lu.push_back({piece.a, lu});
        if (k > 0 && !(lu.x == piece.a.x && lu.y == piece.a.y)) {
            Piece conn;
            conn.a = lu;
            conn.b = piece.a;
            conn.connector = true;
            if (!chain_leq(complex.order, conn.a, conn.b)) {
                throw ChainError("connector violates the chain order");
            }
            ce.extension.pieces.push_back(std::move(conn));
        }
        ce.extension.pieces.push_back(piece);
    }
    return ce;
}

}  // namespace potlab
