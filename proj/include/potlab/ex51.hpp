#pragma once

#include "potlab/chainext.hpp"

namespace potlab {

/// Finite truncation of the two-family segment set
///   G1 = ∪ [alpha_n, beta_n] × {eps_n},   G2 = ∪ {eps_n} × [alpha_n, beta_n]
/// under the restricted Dirichlet-polar cost, with the parameter window
///   alpha_n, beta_n ∈ ] 1/eps_n, min(1/eps_{n+1}, (M+1)/eps_n) [.
struct Ex51Truncation {
    std::vector<double> eps{0.5, 0.25, 0.125};
    std::vector<double> alpha{2.5, 5.0, 10.0};
    std::vector<double> beta{3.5, 7.0, 14.0};
    double big_m = 4.0;
    int samples_per_segment = 10;

    int levels() const { return static_cast<int>(eps.size()); }

    void validate() const {
        if (eps.size() != alpha.size() || eps.size() != beta.size() || eps.empty()) {
            throw ChainError("ex51: parameter lists must have equal nonzero length");
        }
        for (int n = 0; n < levels(); ++n) {
            if (n + 1 < levels() && !(eps[n] > eps[n + 1])) {
                throw ChainError("ex51: eps must strictly decrease");
            }
            double lo = 1.0 / eps[n];
            double hi = (big_m + 1.0) / eps[n];
            if (n + 1 < levels()) hi = std::min(hi, 1.0 / eps[n + 1]);
            if (!(lo < alpha[n] && alpha[n] < beta[n] && beta[n] < hi)) {
                throw ChainError("ex51: alpha/beta outside the admissible interval at level " +
                                 std::to_string(n));
            }
        }
    }

    CostSpec cost_spec() const {
        CostSpec s;
        s.kind = CostKind::Example51;
        s.branch = DomainBranch::D1;
        return s;
    }

    /// All segments in chain orientation for the ⊖ order: the vertical
    /// family from the highest level down, then the horizontal family up.
    SegmentComplex complex() const {
        validate();
        SegmentComplex c;
        c.order = Order::Ominus;
        for (int n = levels() - 1; n >= 0; --n) {
            Segment s;
            s.a = PointPair(eps[n], beta[n]);
            s.b = PointPair(eps[n], alpha[n]);
            s.samples = samples_per_segment;
            c.segments.push_back(s);
        }
        for (int n = 0; n < levels(); ++n) {
            Segment s;
            s.a = PointPair(alpha[n], eps[n]);
            s.b = PointPair(beta[n], eps[n]);
            s.samples = samples_per_segment;
            c.segments.push_back(s);
        }
        return c;
    }

    Instance instance(double tolerance = 1e-9, std::uint64_t seed = 51) const {
        Instance inst;
        inst.spec = cost_spec();
        inst.cost = make_cost(*inst.spec);
        inst.segments = complex().segments;
        inst.tolerance = tolerance;
        inst.seed = seed;
        finalize_instance(inst);
        return inst;
    }

    struct SegRef {
        bool horizontal;  // G1 when true, G2 when false
        int level;
    };

    std::optional<SegRef> classify(const PointPair& p) const {
        for (int n = 0; n < levels(); ++n) {
            if (p.sy() == eps[n] && alpha[n] <= p.sx() && p.sx() <= beta[n]) {
                return SegRef{true, n};
            }
            if (p.sx() == eps[n] && alpha[n] <= p.sy() && p.sy() <= beta[n]) {
                return SegRef{false, n};
            }
        }
        return std::nullopt;
    }

    /// Closed-form upper bound, assembled per the case analysis on the
    /// start/end segment families, for the maximal inner variation between
    /// points of those segments; -inf when no path can exist.
    ExtReal walk_bound(const Cost& c, SegRef s, SegRef e) const {
        auto cv = [&](double x, double y) { return c.eval({x}, {y}).value(); };
        if (!s.horizontal && !e.horizontal) {
            // vertical to vertical: levels can only descend
            if (e.level > s.level) return ExtReal::neg_inf();
            double b = 0.0;
            for (int j = 0; j < s.level - e.level; ++j) {
                int k = s.level - j;
                b += cv(eps[k], alpha[k]) - cv(eps[k - 1], alpha[k]);
            }
            return ExtReal::finite(b);
        }
        if (s.horizontal && e.horizontal) {
            // horizontal to horizontal: levels can only ascend
            if (e.level < s.level) return ExtReal::neg_inf();
            double b = cv(alpha[s.level], eps[s.level]) - cv(beta[s.level], eps[s.level]);
            for (int n = s.level; n < e.level; ++n) {
                b += cv(alpha[n], eps[n]) - cv(alpha[n + 1], eps[n]);
            }
            for (int n = s.level; n <= e.level; ++n) {
                b += 2.0 * (cv(alpha[n], eps[n]) - cv(beta[n], eps[n]));
            }
            return ExtReal::finite(b);
        }
        if (!s.horizontal && e.horizontal) {
            // vertical to horizontal
            double b = cv(eps[0], alpha[0]) - cv(alpha[0], alpha[0]);
            for (int i = 0; i < s.level; ++i) {
                int k = s.level - i;
                b += 2.0 * (cv(eps[k], alpha[k]) - cv(eps[k - 1], alpha[k]));
            }
            for (int n = 0; n <= e.level; ++n) {
                b += 4.0 * (cv(alpha[n], eps[n]) - cv(beta[n], eps[n]));
            }
            for (int n = 0; n < e.level; ++n) {
                b += cv(alpha[n], eps[n]) - cv(alpha[n + 1], eps[n]);
            }
            return ExtReal::finite(b);
        }
        // horizontal to vertical: blocked entirely
        return ExtReal::neg_inf();
    }
};

}  // namespace potlab
