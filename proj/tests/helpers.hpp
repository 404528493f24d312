#pragma once

#include <random>

#include "potlab/demo.hpp"

namespace potlab::testing {

/// Random tabulated-cost instance on the diagonal grid {(i,i)}: entries are
/// exact quarter-integers, so walk sums carry no rounding at all and
/// positive cycles are separated from zero by at least 1/4. A zero
/// finite_prob draws the density per instance, giving both dense cyclic
/// graphs and sparse bounded ones.
inline Instance random_table_instance(std::mt19937_64& rng, int n, double finite_prob = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> quarters(-8, 8);
    if (finite_prob == 0.0) finite_prob = 0.25 + 0.6 * u(rng);
    TabulatedParams tp;
    for (int i = 0; i < n; ++i) {
        tp.xs.push_back(double(i));
        tp.ys.push_back(double(i));
    }
    tp.values.assign(n, std::vector<ExtReal>(n, ExtReal::pos_inf()));
    for (int xi = 0; xi < n; ++xi) {
        for (int yj = 0; yj < n; ++yj) {
            if (xi == yj || u(rng) < finite_prob) {
                tp.values[xi][yj] = ExtReal::finite(quarters(rng) * 0.25);
            }
        }
    }
    CostSpec spec;
    spec.kind = CostKind::Tabulated;
    spec.table = tp;
    Instance inst;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    for (int i = 0; i < n; ++i) inst.points.push_back(PointPair(double(i), double(i)));
    inst.seed = rng();
    finalize_instance(inst);
    return inst;
}

inline Instance random_path_bounded_instance(std::mt19937_64& rng, int n) {
    for (int tries = 0; tries < 10'000; ++tries) {
        Instance inst = random_table_instance(rng, n);
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, 1e-9);
        if (m.path_bounded) return inst;
    }
    throw std::runtime_error("no path-bounded instance found");
}

inline Instance random_coulomb_instance(std::mt19937_64& rng, int n, std::size_t dim = 1) {
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    Instance inst;
    CostSpec spec;
    spec.kind = CostKind::Coulomb;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    while (static_cast<int>(inst.points.size()) < n) {
        PointPair p;
        for (std::size_t d = 0; d < dim; ++d) p.x.push_back(u(rng));
        for (std::size_t d = 0; d < dim; ++d) p.y.push_back(u(rng));
        if (euclid(p.x, p.y) > 0.3) inst.points.push_back(std::move(p));
    }
    inst.seed = rng();
    finalize_instance(inst);
    return inst;
}

/// Strict ⊖-chain inside the convex polar branch D1 (x > 0, xy > 1).
inline std::vector<PointPair> random_polar_chain(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<PointPair> pts;
    double x = 0.6 + u(rng);
    double y = 1.0 / x + 0.1 + 2.0 * u(rng);
    pts.push_back(PointPair(x, y));
    for (int k = 1; k < n; ++k) {
        x += 0.05 + 0.5 * u(rng);
        double gap = y - 1.0 / x;  // positive: y_prev > 1/x_prev > 1/x
        y = 1.0 / x + gap * (0.05 + 0.9 * u(rng));
        pts.push_back(PointPair(x, y));
    }
    return pts;
}

/// Strict ⊕-chain in the plane (any point set works for the square Bregman cost).
inline std::vector<PointPair> random_oplus_chain(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<PointPair> pts;
    double x = -2.0 + u(rng), y = -2.0 + u(rng);
    for (int k = 0; k < n; ++k) {
        pts.push_back(PointPair(x, y));
        x += u(rng);
        y += u(rng);
    }
    return pts;
}

/// Strict ⊖-chain with no domain constraint (for chain-extension geometry).
inline std::vector<PointPair> random_ominus_chain(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<PointPair> pts;
    double x = -3.0 + u(rng), y = 3.0 + u(rng);
    for (int k = 0; k < n; ++k) {
        pts.push_back(PointPair(x, y));
        x += u(rng);
        y -= u(rng);
    }
    return pts;
}

inline Instance points_instance(CostSpec spec, std::vector<PointPair> pts,
                                std::uint64_t seed = 1) {
    Instance inst;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    inst.points = std::move(pts);
    inst.seed = seed;
    finalize_instance(inst);
    return inst;
}

inline CostSpec polar_d1_spec() {
    CostSpec s;
    s.kind = CostKind::Polar;
    s.branch = DomainBranch::D1;
    return s;
}

inline CostSpec bregman_square_spec() {
    CostSpec s;
    s.kind = CostKind::Bregman;
    s.generator = BregmanGenerator::Square;
    return s;
}

}  // namespace potlab::testing
