#pragma once

#include <ostream>

#include "potlab/fixtures.hpp"
#include "potlab/report.hpp"

namespace potlab {

// --- shared scenario builders ---------------------------------------------------

/// Remark-style black-hole instance: {(2,1)} plus [3,4] × {2} discretized.
inline Instance make_coulomb_blackhole(int fiber_samples = 5) {
    Instance inst;
    CostSpec spec;
    spec.kind = CostKind::Coulomb;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    inst.points.push_back(PointPair(2.0, 1.0));
    Segment s;
    s.a = PointPair(3.0, 2.0);
    s.b = PointPair(4.0, 2.0);
    s.samples = fiber_samples;
    inst.segments.push_back(s);
    inst.seed = 7;
    finalize_instance(inst);
    return inst;
}

/// Nested dyadic samples of { (x, 3-2x) : 3/4 <= x < 1 } ∪ {(3/2, 3/4)}.
/// Level l holds 2^l curve points (right endpoint excluded) plus the
/// isolated point; all coordinates are exact dyadics, so the levels nest
/// bit-for-bit.
inline std::vector<std::vector<PointPair>> polar_divergence_levels(int max_pow) {
    std::vector<std::vector<PointPair>> levels;
    for (int l = 1; l <= max_pow; ++l) {
        std::vector<PointPair> pts;
        double step = std::ldexp(0.25, -l);  // (1/4) / 2^l
        std::int64_t count = std::int64_t{1} << l;
        for (std::int64_t j = 0; j < count; ++j) {
            double x = 0.75 + j * step;
            pts.push_back(PointPair(x, 3.0 - 2.0 * x));
        }
        pts.push_back(PointPair(1.5, 0.75));
        levels.push_back(std::move(pts));
    }
    return levels;
}

/// The diagonal set {(k,k)} under c(x,y) = y-x for y <= x.
inline Instance make_diagonal_grid(int count = 20) {
    Instance inst;
    CostSpec spec;
    spec.kind = CostKind::HalflineDiag;
    inst.spec = spec;
    inst.cost = make_cost(spec);
    for (int k = 0; k < count; ++k) inst.points.push_back(PointPair(double(k), double(k)));
    inst.seed = 3;
    finalize_instance(inst);
    return inst;
}

// --- demo harness ---------------------------------------------------------------

namespace detail {

struct DemoChecks {
    std::ostream& os;
    bool ok = true;

    void check(bool cond, const std::string& what) {
        os << "  [" << (cond ? "ok" : "FAIL") << "] " << what << "\n";
        ok = ok && cond;
    }
};

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace detail

inline int run_demo(const std::string& name, std::ostream& os) {
    detail::DemoChecks d{os};
    const double tol = 1e-9;

    if (name == "coulomb-blackhole") {
        Instance inst = make_coulomb_blackhole();
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, tol);
        d.check(m.path_bounded, "G is c-path bounded");
        d.check(m.cyclically_monotone, "G is c-cyclically monotone");
        // fiber points start at index 1; F between fiber points telescopes
        for (int i = 1; i < g.n(); ++i) {
            for (int j = 1; j < g.n(); ++j) {
                double xs = g.points[i].sx(), xe = g.points[j].sx();
                double want = 1.0 / (xs - 2.0) - 1.0 / (xe - 2.0);
                if (!detail::near(m.raw(i, j), want, tol)) {
                    d.check(false, "fiber entries follow c(x_s,2) - c(x_e,2)");
                    break;
                }
            }
        }
        d.check(m.at(1, 0).is_neg_inf(), "the black hole cannot reach (2,1): F = -inf");
        d.check(detail::near(m.raw(0, g.n() - 1), 1.0, tol),
                "F((2,1),(4,2)) = 1 = 3/2 - 1/(x_e-2) at x_e = 4");
        Condensation c = condensation(g);
        d.check(c.count() == 2, "two strongly connected components");
        return d.ok ? 0 : 1;
    }

    if (name == "polar-divergence") {
        CostSpec spec;
        spec.kind = CostKind::Polar;
        CostPtr cost = make_cost(spec);
        auto levels = polar_divergence_levels(12);
        GrowthResult gr =
            variation_growth(*cost, levels, PointPair(0.75, 1.5), PointPair(1.5, 0.75), tol);
        d.check(gr.monotone_certificate, "F sequence is non-decreasing across refinements");
        d.check(gr.values.back().is_finite() && gr.values.back().value() > 10.0,
                "F exceeds 10 within 2^12 sample points (got " +
                    gr.values.back().to_string() + ")");
        bool cyc = true;
        for (bool b : gr.level_cyclically_monotone) cyc = cyc && b;
        d.check(cyc, "every level stays c-cyclically monotone");
        return d.ok ? 0 : 1;
    }

    if (name == "diagonal") {
        Instance inst = make_diagonal_grid();
        VariationGraph g = build_variation_graph(inst);
        VariationMatrix m = all_pairs_variation(g, tol);
        bool law = true;
        for (int a = 0; a < g.n(); ++a) {
            for (int b = 0; b < g.n(); ++b) {
                if (a <= b) {
                    law = law && detail::near(m.raw(a, b), double(b - a), tol);
                } else {
                    law = law && m.at(a, b).is_neg_inf();
                }
            }
        }
        d.check(law, "F((a,a),(b,b)) = b-a for a <= b and -inf otherwise");
        std::vector<double> f;
        for (const auto& p : inst.points) f.push_back(-p.sx());
        d.check(verify_antiderivative(g, f, tol).all_ok(), "f(x,x) = -x verifies");
        auto sinks = construct_from_boundary(m, BoundaryDirection::Sinks, {10});
        bool witnesses = !sinks.ok && sinks.unreachable_nodes.size() == 9;
        for (int v : sinks.unreachable_nodes) witnesses = witnesses && v > 10;
        d.check(witnesses, "sinks at (10,10) fails exactly at the points to its right");
        return d.ok ? 0 : 1;
    }

    if (name == "bregman-equivalence") {
        CostSpec spec;
        spec.kind = CostKind::Bregman;
        spec.generator = BregmanGenerator::Square;
        CostPtr cost = make_cost(spec);
        auto run = [&](const std::vector<PointPair>& pts) {
            VariationGraph g = build_variation_graph(*cost, pts);
            VariationMatrix m = all_pairs_variation(g, tol);
            bool chain = is_chain(pts, Order::Oplus).chain;
            return std::tuple{m.path_bounded, m.cyclically_monotone, chain, g, m};
        };
        std::vector<PointPair> chain_set;
        for (int k = 0; k < 6; ++k) chain_set.push_back(PointPair(double(k), 1.5 * k));
        auto [pb1, cm1, ch1, g1, m1] = run(chain_set);
        d.check(pb1 && cm1 && ch1, "an oplus-chain is path bounded and cyclically monotone");
        Antiderivative f = construct_incremental(m1, identity_order(m1.n), tol);
        d.check(verify_antiderivative(g1, f.values, tol).all_ok(),
                "incremental antiderivative verifies");
        std::vector<PointPair> bad{PointPair(0.0, 1.0), PointPair(1.0, 0.0)};
        auto [pb2, cm2, ch2, g2, m2] = run(bad);
        d.check(!pb2 && !cm2 && !ch2,
                "a comparability violation kills all three properties at once");
        return d.ok ? 0 : 1;
    }

    if (name == "ex51-pipeline") {
        Ex51Truncation tr;
        Instance inst = tr.instance();
        PipelineResult pr = extension_pipeline(inst, Order::Ominus);
        for (const auto& h : pr.hypotheses) d.check(h.ok, h.name + ": " + h.note);
        d.check(pr.extension_strongly_connected, "extension has one condensation component");
        d.check(pr.extension_path_bounded, "extension stays c-path bounded");
        d.check(pr.ok, "antiderivative verified on the extension and on the sample");

        Ex51Truncation small = tr;
        small.samples_per_segment = 3;
        Instance si = small.instance();
        VariationGraph sg = build_variation_graph(si);
        int L = sg.n() * (sg.n() + 1);
        bool bounds = true;
        for (int a = 0; a < sg.n() && bounds; ++a) {
            for (int b = 0; b < sg.n() && bounds; ++b) {
                auto ca = small.classify(sg.points[a]);
                auto cb = small.classify(sg.points[b]);
                ExtReal best = enumerate_walks(sg, a, b, L, 100'000'000ull);
                ExtReal bound = small.walk_bound(*si.cost, *ca, *cb);
                if (best.is_finite()) {
                    bounds = bound.is_finite() && best.value() <= bound.value() + tol;
                }
            }
        }
        d.check(bounds, "every enumerated walk sum respects the closed-form bound");
        return d.ok ? 0 : 1;
    }

    if (name == "disk-ballchain") {
        Instance inst;
        inst.cost = std::make_shared<fixtures::DiskCost>();
        inst.points.push_back(PointPair(0.0, 0.0));
        inst.points.push_back(PointPair(0.1, 0.0));
        finalize_instance(inst);
        BallStructure bs = ball_chain_components(inst);
        d.check(bs.component_count == 1, "ball chain connected (one class)");
        d.check(bs.radii[0].exact && detail::near(bs.radii[0].radius.value(), 1.0, tol),
                "rho((0,0)) = 1");
        d.check(detail::near(bs.radii[1].radius.value(), 0.9, tol), "rho((0.1,0)) = 0.9");
        VariationGraph g = build_variation_graph(inst);
        Condensation c = condensation(g);
        d.check(c.count() == 1, "ball-chain connectedness implies strong connectedness");
        return d.ok ? 0 : 1;
    }

    os << "unknown demo: " << name << "\n";
    os << "available: coulomb-blackhole polar-divergence diagonal bregman-equivalence "
          "ex51-pipeline disk-ballchain\n";
    return 2;
}

}  // namespace potlab
