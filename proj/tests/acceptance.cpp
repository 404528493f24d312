// Acceptance suite: one scenario per criterion, each printing a single
// PASS/FAIL line with its runtime. The binary exits nonzero when any
// criterion fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>

#include "helpers.hpp"
#include "potlab/ex51.hpp"
#include "potlab/fixtures.hpp"
#include "potlab/pipeline.hpp"

using namespace potlab;

namespace {

struct Criterion {
    std::string name;
    double time_limit_s;
    std::function<bool(std::ostream&)> run;
};

constexpr double kEps = 1e-9;

bool near(double a, double b, double tol = kEps) { return std::abs(a - b) <= tol; }

// 1. Coulomb black-hole instance at fiber step 0.25 plus (2,1).
bool criterion1(std::ostream& log) {
    Instance inst = make_coulomb_blackhole(5);
    VariationGraph g = build_variation_graph(inst);
    VariationMatrix m = all_pairs_variation(g, kEps);
    bool ok = m.path_bounded && m.cyclically_monotone;
    for (int i = 1; i < g.n(); ++i) {
        for (int j = 1; j < g.n(); ++j) {
            double xs = g.points[i].sx(), xe = g.points[j].sx();
            double want = 1.0 / (xs - 2.0) - 1.0 / (xe - 2.0);
            if (!near(m.raw(i, j), want)) {
                log << "fiber entry (" << xs << "," << xe << ") off by "
                    << m.raw(i, j) - want << "; ";
                ok = false;
            }
        }
        if (!m.at(i, 0).is_neg_inf()) {
            log << "expected -inf into (2,1); ";
            ok = false;
        }
    }
    if (!near(m.raw(0, g.n() - 1), 1.0)) {
        log << "F((2,1),(4,2)) = " << m.raw(0, g.n() - 1) << " != 1; ";
        ok = false;
    }
    return ok;
}

// 2. Finite-instance equivalence + construction on 200 random tables.
bool criterion2(std::ostream& log) {
    std::mt19937_64 rng(20250202);
    int built = 0, refused = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + int(rng() % 11);
        Instance inst = testing::random_table_instance(rng, n);
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, kEps);
        if (m.path_bounded != m.cyclically_monotone) {
            log << "equivalence broken at trial " << trial << "; ";
            return false;
        }
        if (m.path_bounded) {
            Antiderivative f = construct_incremental(m, identity_order(m.n), kEps);
            if (!verify_antiderivative(g, f.values, kEps).all_ok()) {
                log << "verification failed at trial " << trial << "; ";
                return false;
            }
            ++built;
        } else {
            auto terms = select_terminals_auto(condensation(g));
            BoundaryConstruction bc = construct_from_boundary(m, BoundaryDirection::Sinks, terms);
            if (bc.ok || bc.unbounded_nodes.empty()) {
                log << "missing +inf obstruction at trial " << trial << "; ";
                return false;
            }
            ++refused;
        }
    }
    log << built << " built, " << refused << " obstructed; ";
    return built > 0 && refused > 0;
}

// 3. Oracle equivalence on 100 random instances with n <= 7. The oracle
// classifies an entry +inf when some node v with a positive cycle through
// it (a closed walk of <= n edges with positive sum) lies on a simple path
// from s to e, and -inf when no simple path reaches e at all.
bool criterion3(std::ostream& log) {
    std::mt19937_64 rng(20250203);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + int(rng() % 6);
        Instance inst = testing::random_table_instance(rng, n);
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, kEps);
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
                if (fast.is_neg_inf() != !reachable || fast.is_pos_inf() != pumped) {
                    log << "classification mismatch at trial " << trial << " (" << s << "," << e
                        << "); ";
                    return false;
                }
                if (fast.is_finite() && !(enumerate_walks(g, s, e, L) == fast)) {
                    // exact: the dyadic weights add without rounding
                    log << "finite mismatch at trial " << trial << " (" << s << "," << e << "); ";
                    return false;
                }
            }
        }
    }
    return true;
}

// 4. Triangle inequality over all triples of 100 random path-bounded instances.
bool criterion4(std::ostream& log) {
    std::mt19937_64 rng(20250204);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = testing::random_path_bounded_instance(rng, 2 + int(rng() % 8));
        VariationMatrix m = all_pairs_variation(build_variation_graph(inst), kEps);
        for (int s = 0; s < m.n; ++s) {
            for (int mid = 0; mid < m.n; ++mid) {
                for (int e = 0; e < m.n; ++e) {
                    ExtReal a = m.at(s, mid), b = m.at(mid, e);
                    if (a.is_neg_inf() || b.is_neg_inf()) continue;
                    if (a.value() + b.value() > m.raw(s, e) + kEps) {
                        log << "violated at trial " << trial << " (" << s << "," << mid << ","
                            << e << "); ";
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

// 5. Polar divergence on nested dyadic samples up to 2^12 points.
bool criterion5(std::ostream& log) {
    CostSpec spec;
    spec.kind = CostKind::Polar;
    CostPtr cost = make_cost(spec);
    auto levels = polar_divergence_levels(12);
    GrowthResult gr =
        variation_growth(*cost, levels, PointPair(0.75, 1.5), PointPair(1.5, 0.75), kEps);
    bool ok = true;
    if (!gr.monotone_certificate) {
        log << "sequence not non-decreasing; ";
        ok = false;
    }
    if (!(gr.values.back().is_finite() && gr.values.back().value() > 10.0)) {
        log << "final F = " << gr.values.back().to_string() << " <= 10; ";
        ok = false;
    }
    for (std::size_t lv = 0; lv < gr.level_cyclically_monotone.size(); ++lv) {
        if (!gr.level_cyclically_monotone[lv]) {
            log << "positive cycle at level " << lv + 1 << "; ";
            ok = false;
        }
    }
    log << "F grows to " << gr.values.back().to_string() << "; ";
    return ok;
}

// 6. The diagonal example on a 20-point grid.
bool criterion6(std::ostream& log) {
    Instance inst = make_diagonal_grid(20);
    VariationGraph g = build_variation_graph(inst);
    VariationMatrix m = all_pairs_variation(g, kEps);
    for (int a = 0; a < 20; ++a) {
        for (int b = 0; b < 20; ++b) {
            if (a <= b && m.raw(a, b) != double(b - a)) {
                log << "F law broken at (" << a << "," << b << "); ";
                return false;
            }
            if (a > b && !m.at(a, b).is_neg_inf()) {
                log << "expected -inf at (" << a << "," << b << "); ";
                return false;
            }
        }
    }
    std::vector<double> f;
    for (const auto& p : inst.points) f.push_back(-p.sx());
    if (!verify_antiderivative(g, f, kEps).all_ok()) {
        log << "f(x,x) = -x did not verify; ";
        return false;
    }
    BoundaryConstruction bc = construct_from_boundary(m, BoundaryDirection::Sinks, {10});
    std::vector<int> expect;
    for (int k = 11; k < 20; ++k) expect.push_back(k);
    if (bc.ok || bc.unreachable_nodes != expect) {
        log << "sinks witnesses wrong; ";
        return false;
    }
    return true;
}

// 7. Chain characterization for the polar (ominus) and Bregman (oplus) costs.
bool criterion7(std::ostream& log) {
    std::mt19937_64 rng(20250207);
    auto polar1 = make_cost(testing::polar_d1_spec());
    auto breg = make_cost(testing::bregman_square_spec());
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto chain = testing::random_polar_chain(rng, 2 + int(rng() % 7));
        if (!all_pairs_variation(build_variation_graph(*polar1, chain), kEps).cyclically_monotone) {
            log << "polar chain not monotone at trial " << trial << "; ";
            return false;
        }
        auto oplus = testing::random_oplus_chain(rng, 2 + int(rng() % 7));
        if (!all_pairs_variation(build_variation_graph(*breg, oplus), kEps).cyclically_monotone) {
            log << "bregman chain not monotone at trial " << trial << "; ";
            return false;
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        auto chain = testing::random_polar_chain(rng, 2 + int(rng() % 6));
        std::size_t k = rng() % chain.size();
        chain.push_back(PointPair(chain[k].sx() + u(rng), chain[k].sy() + u(rng)));
        ChainCheck cc = is_chain(chain, Order::Ominus);
        VariationMatrix m = all_pairs_variation(build_variation_graph(*polar1, chain), kEps);
        bool witness = false;
        for (int v = 0; v < m.n; ++v) witness = witness || m.at(v, v).is_pos_inf();
        if (cc.chain || m.cyclically_monotone || !witness || cc.bad_a < 0) {
            log << "polar violation not witnessed at trial " << trial << "; ";
            return false;
        }
        auto oplus = testing::random_oplus_chain(rng, 2 + int(rng() % 6));
        std::size_t j = rng() % oplus.size();
        oplus.push_back(PointPair(oplus[j].sx() + u(rng), oplus[j].sy() - u(rng)));
        ChainCheck cb = is_chain(oplus, Order::Oplus);
        VariationMatrix mb = all_pairs_variation(build_variation_graph(*breg, oplus), kEps);
        bool bwitness = false;
        for (int v = 0; v < mb.n; ++v) bwitness = bwitness || mb.at(v, v).is_pos_inf();
        if (cb.chain || mb.cyclically_monotone || !bwitness || cb.bad_a < 0) {
            log << "bregman violation not witnessed at trial " << trial << "; ";
            return false;
        }
    }
    return true;
}

// 8. Chain-extension properties on 100 random chains plus ex51 truncations.
bool criterion8(std::ostream& log) {
    std::mt19937_64 rng(20250208);
    auto check_structure = [&](const ChainExtension& ce, const std::vector<PointPair>& input,
                               Order order) {
        auto sample = ce.extension.sample(4.0);
        if (!is_chain(sample, order).chain) return std::string("extension is not a chain");
        for (const auto& p : input) {
            if (!ce.extension.contains(p)) return std::string("input point missing");
        }
        auto sorted = is_chain(input, order).sorted_indices;
        if (!(ce.extension.min_element() == input[sorted.front()]) ||
            !(ce.extension.max_element() == input[sorted.back()])) {
            return std::string("min/max not preserved");
        }
        for (const auto& piece : ce.extension.pieces) {
            if (!ce.extension.contains(piece.a) || !ce.extension.contains(piece.b)) {
                return std::string("extension not closed");
            }
        }
        for (const auto& q : sample) {
            PointPair lu = lu_query(ce.extension, q);
            if (std::abs(lu.sx() - q.sx()) > 1e-12 || std::abs(lu.sy() - q.sy()) > 1e-12) {
                return std::string("L/U idempotence failed");
            }
        }
        return std::string();
    };

    for (int trial = 0; trial < 100; ++trial) {
        auto pts = testing::random_ominus_chain(rng, 2 + int(rng() % 9));
        SegmentComplex complex;
        complex.order = Order::Ominus;
        complex.isolated = pts;
        std::string err = check_structure(chain_extension(complex), pts, Order::Ominus);
        if (!err.empty()) {
            log << err << " at trial " << trial << "; ";
            return false;
        }
    }
    for (int samples : {3, 10}) {
        Ex51Truncation tr;
        tr.samples_per_segment = samples;
        Instance inst = tr.instance();
        std::string err =
            check_structure(chain_extension(tr.complex()), inst.points, Order::Ominus);
        if (!err.empty()) {
            log << err << " on the ex51 truncation; ";
            return false;
        }
    }
    return true;
}

// 9. The full ex51 pipeline with the canonical parameters.
bool criterion9(std::ostream& log) {
    Ex51Truncation tr;  // eps = (1/2, 1/4, 1/8), M = 4, 10 samples per segment
    Instance inst = tr.instance();
    PipelineResult pr = extension_pipeline(inst, Order::Ominus);
    for (const auto& h : pr.hypotheses) {
        if (!h.ok) {
            log << h.name << " failed: " << h.note << "; ";
            return false;
        }
    }
    if (!pr.extension_strongly_connected) {
        log << "extension not strongly connected; ";
        return false;
    }
    if (!pr.ok || !pr.extension_verify.all_ok() || !pr.restricted_verify.all_ok()) {
        log << "antiderivative construction/verification failed; ";
        return false;
    }

    Ex51Truncation small = tr;
    small.samples_per_segment = 3;
    Instance si = small.instance();
    VariationGraph sg = build_variation_graph(si);
    int L = sg.n() * (sg.n() + 1);
    for (int a = 0; a < sg.n(); ++a) {
        for (int b = 0; b < sg.n(); ++b) {
            auto ca = small.classify(sg.points[a]);
            auto cb = small.classify(sg.points[b]);
            if (!ca || !cb) {
                log << "sample point not classifiable; ";
                return false;
            }
            ExtReal best = enumerate_walks(sg, a, b, L, 200'000'000ull);
            if (!best.is_finite()) continue;
            ExtReal bound = small.walk_bound(*si.cost, *ca, *cb);
            if (!bound.is_finite() || best.value() > bound.value() + kEps) {
                log << "walk bound broken at (" << a << "," << b << "); ";
                return false;
            }
        }
    }
    log << "extension has " << pr.extension_instance.points.size() << " points; ";
    return true;
}

// 10. Ball chains: the disk toy, refinement of the condensation, and the
//     continuity extension on the Coulomb fiber.
bool criterion10(std::ostream& log) {
    Instance disk;
    disk.cost = std::make_shared<fixtures::DiskCost>();
    disk.points = {PointPair(0.0, 0.0), PointPair(0.1, 0.0)};
    finalize_instance(disk);
    if (ball_chain_components(disk).component_count != 1) {
        log << "disk toy did not give one class; ";
        return false;
    }

    std::mt19937_64 rng(20250210);
    for (int trial = 0; trial < 40; ++trial) {
        Instance inst =
            testing::random_coulomb_instance(rng, 3 + int(rng() % 10), 1 + (trial % 2));
        BallStructure b = ball_chain_components(inst);
        Condensation c = condensation(build_variation_graph(inst));
        for (std::size_t i = 0; i < inst.points.size(); ++i) {
            for (std::size_t j = 0; j < inst.points.size(); ++j) {
                if (b.component_id[i] == b.component_id[j] &&
                    c.component_id[i] != c.component_id[j]) {
                    log << "refinement violated at trial " << trial << "; ";
                    return false;
                }
            }
        }
    }

    Instance fiber;
    CostSpec coulomb;
    coulomb.kind = CostKind::Coulomb;
    fiber.spec = coulomb;
    fiber.cost = make_cost(coulomb);
    Segment s;
    s.a = PointPair(3.0, 2.0);
    s.b = PointPair(4.0, 2.0);
    s.samples = 11;
    fiber.segments.push_back(s);
    finalize_instance(fiber);
    VariationGraph fg = build_variation_graph(fiber);
    auto f = [](const PointPair& p) { return 1.0 / (p.sx() - 2.0); };
    for (int k = 0; k < 10; ++k) {
        double xq = 3.02 + 0.0937 * k;
        PointPair query(xq, 2.0);
        double got = continuity_extension(fg, *fiber.cost, f, query,
                                          make_segment_selector(fiber, query), 1e-8);
        if (std::abs(got - 1.0 / (xq - 2.0)) > 1e-6) {
            log << "continuity extension off at x* = " << xq << "; ";
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"coulomb black-hole fiber law", 1.0, criterion1},
        {"equivalence + construction on 200 random instances", 30.0, criterion2},
        {"oracle equivalence on 100 random instances", 60.0, criterion3},
        {"triangle inequality over all triples", 60.0, criterion4},
        {"polar divergence up to 2^12 points", 120.0, criterion5},
        {"diagonal example on the 20-point grid", 10.0, criterion6},
        {"chain characterization, 2x200 random sets", 60.0, criterion7},
        {"chain-extension properties, 100 chains + ex51", 60.0, criterion8},
        {"ex51 pipeline with canonical parameters", 10.0, criterion9},
        {"ball chains, refinement, continuity extension", 60.0, criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::ostringstream log;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criteria[i].run(log);
        } catch (const std::exception& e) {
            log << "exception: " << e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > criteria[i].time_limit_s) {
            ok = false;
            log << "over the " << criteria[i].time_limit_s << " s budget; ";
        }
        std::cout << (ok ? "PASS" : "FAIL") << " criterion-" << i + 1 << ": " << criteria[i].name
                  << " [" << std::fixed << std::setprecision(2) << secs << " s] " << log.str()
                  << "\n";
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
