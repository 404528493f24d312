#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace potlab;
using Catch::Approx;

namespace {

Instance coulomb4() {
    Instance inst;
    CostSpec spec;
    spec.kind = CostKind::Coulomb;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    inst.points = {PointPair(2.0, 1.0), PointPair(3.0, 2.0), PointPair(3.5, 2.0),
                   PointPair(4.0, 2.0)};
    finalize_instance(inst);
    return inst;
}

Instance diagonal3() {
    Instance inst;
    CostSpec spec;
    spec.kind = CostKind::HalflineDiag;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    inst.points = {PointPair(0.0, 0.0), PointPair(1.0, 1.0), PointPair(2.0, 2.0)};
    finalize_instance(inst);
    return inst;
}

}  // namespace

TEST_CASE("maximal inner variations on the worked instances", "[variation]") {
    VariationGraph g = build_variation_graph(coulomb4());
    CHECK(max_inner_variation(g, 1, 3).value() == Approx(0.5));          // fiber telescope
    CHECK(max_inner_variation(g, 0, 3).value() == Approx(1.0));          // Case-3 bound attained
    CHECK(max_inner_variation(g, 0, 2).value() == Approx(5.0 / 6.0));
    CHECK(max_inner_variation(g, 1, 0).is_neg_inf());                    // no way out of the hole
    CHECK(max_inner_variation(g, 0, 0).value() == 0.0);
    CHECK_THROWS_AS(max_inner_variation(g, 0, 9), std::out_of_range);

    VariationGraph d = build_variation_graph(diagonal3());
    CHECK(max_inner_variation(d, 0, 2).value() == 2.0);
    CHECK(max_inner_variation(d, 2, 0).is_neg_inf());
}

TEST_CASE("all-pairs table sets the two flags", "[variation]") {
    VariationMatrix m = all_pairs_variation(build_variation_graph(coulomb4()), 1e-9);
    CHECK(m.path_bounded);
    CHECK(m.cyclically_monotone);
    for (int v = 0; v < m.n; ++v) CHECK(m.raw(v, v) == 0.0);

    // c = -xy on {(0,1),(1,0)}: the 2-cycle weighs +1, so both flags drop
    CostSpec pairing;
    pairing.kind = CostKind::ClassicalPairing;
    Instance bad = testing::points_instance(pairing, {PointPair(0.0, 1.0), PointPair(1.0, 0.0)});
    VariationMatrix mb = all_pairs_variation(build_variation_graph(bad), 1e-9);
    CHECK_FALSE(mb.cyclically_monotone);
    CHECK_FALSE(mb.path_bounded);
    CHECK(mb.at(0, 0).is_pos_inf());

    Instance single = testing::points_instance(pairing, {PointPair(0.0, 1.0)});
    VariationMatrix ms = all_pairs_variation(build_variation_graph(single), 1e-9);
    CHECK(ms.path_bounded);
    CHECK(ms.cyclically_monotone);
    CHECK(ms.raw(0, 0) == 0.0);
}

TEST_CASE("diagonal entries live in {0, +inf}", "[variation]") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = testing::random_table_instance(rng, 2 + int(rng() % 9));
        VariationMatrix m = all_pairs_variation(build_variation_graph(inst), 1e-9);
        for (int v = 0; v < m.n; ++v) {
            CHECK((m.raw(v, v) == 0.0 || m.at(v, v).is_pos_inf()));
        }
    }
}

TEST_CASE("exact relaxation equals exhaustive walk enumeration", "[variation]") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + int(rng() % 6);
        Instance inst = testing::random_table_instance(rng, n);
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, 1e-9);
        int L = n * (n + 1);
        for (int s = 0; s < n; ++s) {
            for (int e = 0; e < n; ++e) {
                ExtReal fast = m.at(s, e);
                bool reachable = !enumerate_walks(g, s, e, n - 1).is_neg_inf();
                bool pumped = false;
                for (int v = 0; v < n && !pumped; ++v) {
                    pumped = !enumerate_walks(g, s, v, n - 1).is_neg_inf() &&
                             !enumerate_walks(g, v, e, n - 1).is_neg_inf() &&
                             enumerate_walks(g, v, v, n) > ExtReal::finite(0.0);
                }
                CHECK(fast.is_neg_inf() == !reachable);
                CHECK(fast.is_pos_inf() == pumped);
                if (fast.is_finite()) {
                    CHECK(fast == enumerate_walks(g, s, e, L));  // bit-exact: dyadic weights
                }
            }
        }
    }
}

TEST_CASE("triangle inequality for F on path-bounded instances", "[variation]") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        Instance inst = testing::random_path_bounded_instance(rng, 2 + int(rng() % 7));
        VariationMatrix m = all_pairs_variation(build_variation_graph(inst), 1e-9);
        for (int s = 0; s < m.n; ++s) {
            for (int mid = 0; mid < m.n; ++mid) {
                for (int e = 0; e < m.n; ++e) {
                    ExtReal lhs1 = m.at(s, mid), lhs2 = m.at(mid, e);
                    if (lhs1.is_neg_inf() || lhs2.is_neg_inf()) continue;  // -inf <= anything
                    CHECK(lhs1.value() + lhs2.value() <= m.raw(s, e) + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("one-step transitions bound F from below", "[variation]") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        Instance inst = testing::random_table_instance(rng, 2 + int(rng() % 7));
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, 1e-9);
        for (int i = 0; i < g.n(); ++i) {
            for (const auto& e : g.out[i]) {
                ExtReal f = m.at(i, e.to);
                CHECK((f.is_pos_inf() || e.w <= f.value() + 1e-9));
            }
        }
    }
}

TEST_CASE("positive cycles are caught by their sum, not per-edge slack", "[variation]") {
    // a 4-cycle gaining 1e-9 per edge: every edge sits at the tolerance,
    // but the lap gains 4e-9 > eps and the sup is +inf
    TabulatedParams tp;
    for (int i = 0; i < 4; ++i) {
        tp.xs.push_back(double(i));
        tp.ys.push_back(double(i));
    }
    tp.values.assign(4, std::vector<ExtReal>(4, ExtReal::pos_inf()));
    for (int i = 0; i < 4; ++i) {
        tp.values[i][i] = ExtReal::finite(0.0);
        tp.values[(i + 1) % 4][i] = ExtReal::finite(-1.0e-9);
    }
    CostSpec spec;
    spec.kind = CostKind::Tabulated;
    spec.table = tp;
    std::vector<PointPair> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(PointPair(double(i), double(i)));
    VariationGraph g = build_variation_graph(*make_cost(spec), pts);
    CHECK(has_positive_cycle(g, 1e-9));
    VariationMatrix m = all_pairs_variation(g, 1e-9);
    CHECK_FALSE(m.cyclically_monotone);
    CHECK_FALSE(m.path_bounded);
    CHECK(m.at(0, 0).is_pos_inf());
}

TEST_CASE("path bounded iff cyclically monotone on finite instances", "[variation]") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 60; ++trial) {
        Instance inst = testing::random_table_instance(rng, 2 + int(rng() % 9));
        VariationMatrix m = all_pairs_variation(build_variation_graph(inst), 1e-9);
        CHECK(m.path_bounded == m.cyclically_monotone);
        CHECK(has_positive_cycle(build_variation_graph(inst), 1e-9) == !m.cyclically_monotone);
    }
}

TEST_CASE("refining the instance can only grow F", "[variation]") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + int(rng() % 6);
        Instance big = testing::random_table_instance(rng, n);
        // subset keeping the first k points (same cost table)
        int k = 2 + int(rng() % (n - 2));
        Instance small = big;
        small.points.assign(big.points.begin(), big.points.begin() + k);
        VariationMatrix ms = all_pairs_variation(build_variation_graph(small), 1e-9);
        VariationMatrix mb = all_pairs_variation(build_variation_graph(big), 1e-9);
        for (int s = 0; s < k; ++s) {
            for (int e = 0; e < k; ++e) {
                CHECK(ms.at(s, e) <= mb.at(s, e));
            }
        }
    }
}

TEST_CASE("the remaining registry costs run the full flow", "[variation]") {
    // entropy-Bregman on a product box: everything is strongly connected
    CostSpec ent;
    ent.kind = CostKind::Bregman;
    ent.generator = BregmanGenerator::NegativeEntropy;
    std::vector<PointPair> kl{PointPair(0.5, 0.25), PointPair(1.0, 1.0), PointPair(2.0, 3.0)};
    Instance ki = testing::points_instance(ent, kl);
    VariationGraph kg = build_variation_graph(ki);
    CHECK(condensation(kg).count() == 1);
    VariationMatrix km = all_pairs_variation(kg, 1e-9);
    CHECK(km.path_bounded == km.cyclically_monotone);
    if (km.path_bounded) {
        Antiderivative f = construct_incremental(km, identity_order(km.n), 1e-9);
        CHECK(verify_antiderivative(kg, f.values, 1e-9).all_ok());
    }

    // Hellinger-Kantorovich fiber: every cycle telescopes to zero
    CostSpec hk;
    hk.kind = CostKind::HellingerKantorovich;
    std::vector<PointPair> hpts{PointPair(0.0, 0.5), PointPair(0.3, 0.5), PointPair(-0.4, 0.5)};
    Instance hi = testing::points_instance(hk, hpts);
    VariationGraph hg = build_variation_graph(hi);
    VariationMatrix hm = all_pairs_variation(hg, 1e-9);
    CHECK(hm.path_bounded);
    Antiderivative hf = construct_incremental(hm, identity_order(hm.n), 1e-9);
    CHECK(verify_antiderivative(hg, hf.values, 1e-9).all_ok());
    Potential hp = extend_potential(hg, hi.cost, collapse_to_psi(hg, hf.values, 1e-9), 1e-9);
    CHECK(check_subdifferential(hg, hp, {{0.15}}, 1e-9).ok);
}

TEST_CASE("growth across nested refinements", "[variation]") {
    // a fixed finite instance repeated at all levels gives a constant sequence
    Instance c4 = coulomb4();
    std::vector<std::vector<PointPair>> fixed{c4.points, c4.points, c4.points};
    GrowthResult gr = variation_growth(*c4.cost, fixed, c4.points[0], c4.points[3], 1e-9);
    CHECK(gr.monotone_certificate);
    CHECK(gr.values[0] == gr.values[2]);

    // Coulomb fiber refinements keep F = c(x_s,2) - c(x_e,2) at every level
    CostSpec spec;
    spec.kind = CostKind::Coulomb;
    CostPtr coulomb = make_cost(spec);
    std::vector<std::vector<PointPair>> fiber;
    for (int lv = 1; lv <= 4; ++lv) {
        std::vector<PointPair> pts;
        std::int64_t den = std::int64_t{1} << lv;
        for (std::int64_t j = 0; j <= den; ++j) pts.push_back(PointPair(3.0 + double(j) / den, 2.0));
        fiber.push_back(std::move(pts));
    }
    GrowthResult gf = variation_growth(*coulomb, fiber, PointPair(3.0, 2.0), PointPair(4.0, 2.0), 1e-9);
    for (const auto& v : gf.values) CHECK(v.value() == Approx(0.5).margin(1e-9));

    // polar dyadic refinements grow strictly toward the divergence
    CostSpec pol;
    pol.kind = CostKind::Polar;
    CostPtr polar = make_cost(pol);
    auto levels = polar_divergence_levels(6);
    GrowthResult gp =
        variation_growth(*polar, levels, PointPair(0.75, 1.5), PointPair(1.5, 0.75), 1e-9);
    CHECK(gp.monotone_certificate);
    for (std::size_t i = 1; i < gp.values.size(); ++i) CHECK(gp.values[i] > gp.values[i - 1]);
    for (bool cyc : gp.level_cyclically_monotone) CHECK(cyc);

    // missing query point or broken nesting are errors
    CHECK_THROWS_AS(
        variation_growth(*coulomb, fiber, PointPair(3.0, 2.0), PointPair(9.0, 2.0), 1e-9),
        InstanceError);
    std::vector<std::vector<PointPair>> not_nested{fiber[1], fiber[0]};
    CHECK_THROWS_AS(variation_growth(*coulomb, not_nested, PointPair(3.0, 2.0),
                                     PointPair(4.0, 2.0), 1e-9),
                    InstanceError);
}
