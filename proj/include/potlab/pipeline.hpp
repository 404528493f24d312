#pragma once

#include <random>

#include "potlab/chainext.hpp"

namespace potlab {

struct HypothesisReport {
    std::string name;
    bool ok = false;
    std::string note;
};

struct PipelineOptions {
    double density = 10.0;            // samples per unit length on extension segments
    int convexity_probes = 1000;
    int audit_probes = 500;
    int blowup_rays = 8;
    double blowup_threshold = 1e6;
    int ball_probes = 16;
};

struct PipelineResult {
    std::vector<HypothesisReport> hypotheses;
    bool hypotheses_ok = false;
    std::string failure;

    ChainExtension ce;
    Instance extension_instance;
    std::size_t dropped_off_domain = 0;    // sampled extension points outside D
    bool extension_strongly_connected = false;
    bool extension_path_bounded = false;
    Antiderivative extension_f;
    std::vector<double> restricted_values;  // per original instance point
    VerifyResult extension_verify;
    VerifyResult restricted_verify;
    bool ok = false;
};

namespace detail {

inline PointPair lerp_pair(const PointPair& p, const PointPair& q, double t) {
    PointPair m;
    m.x.resize(p.x.size());
    m.y.resize(p.y.size());
    for (std::size_t i = 0; i < p.x.size(); ++i) m.x[i] = p.x[i] + t * (q.x[i] - p.x[i]);
    for (std::size_t i = 0; i < p.y.size(); ++i) m.y[i] = p.y[i] + t * (q.y[i] - p.y[i]);
    return m;
}

/// (i) Domain convexity, corroborated by random in-domain pairs and interior
/// interpolation probes.
inline HypothesisReport probe_convexity(const Instance& inst, std::mt19937_64& rng, int probes) {
    HypothesisReport rep{"(i) domain convexity", true, ""};
    std::uniform_int_distribution<std::size_t> pick(0, inst.points.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < probes; ++k) {
        const PointPair& p = inst.points[pick(rng)];
        const PointPair& q = inst.points[pick(rng)];
        PointPair m = lerp_pair(p, q, unit(rng));
        if (!inst.cost->in_domain(m.x, m.y)) {
            rep.ok = false;
            rep.note = "midpoint probe left dom c";
            return rep;
        }
    }
    rep.note = "corroborated (sampled, " + std::to_string(probes) + " probes)";
    return rep;
}

/// (ii) Declared monotonicity, audited on random instance pairs.
inline HypothesisReport probe_monotonicity(const Instance& inst, Order order, std::mt19937_64& rng,
                                           int probes) {
    HypothesisReport rep{"(ii) monotone cost", true, ""};
    std::uniform_int_distribution<std::size_t> pick(0, inst.points.size() - 1);
    std::vector<std::pair<PointPair, PointPair>> pairs;
    for (int k = 0; k < probes; ++k) {
        pairs.emplace_back(inst.points[pick(rng)], inst.points[pick(rng)]);
    }
    AuditReport audit = monotonicity_audit(*inst.cost, pairs, inst.tolerance);
    bool ok = order == Order::Ominus ? audit.consistent_ominus : audit.consistent_oplus;
    rep.ok = ok;
    rep.note = ok ? "corroborated (sampled, " + std::to_string(probes) + " probe pairs)"
                  : "rectangle-sum witness against the declared order";
    return rep;
}

/// (iii) Local boundedness: a ball around every sampled point with finite
/// cost supremum.
inline HypothesisReport probe_local_boundedness(const Instance& inst, int ball_probes) {
    HypothesisReport rep{"(iii) local boundedness", true, ""};
    auto dirs = detail::probe_directions(2 * inst.dim(), ball_probes);
    for (const auto& p : inst.points) {
        BallRadius br = maximal_ball_radius(*inst.cost, p);
        double r = br.radius.is_pos_inf() ? 1.0 : 0.5 * br.radius.value();
        bool bounded = false;
        for (int shrink = 0; shrink < 6 && !bounded; ++shrink, r *= 0.5) {
            bool all_finite = true;
            for (const auto& d : dirs) {
                PointPair q = detail::offset(p, d, r);
                if (!inst.cost->eval(q.x, q.y, q.y_irrational()).is_finite()) {
                    all_finite = false;
                    break;
                }
            }
            bounded = all_finite;
        }
        if (!bounded) {
            rep.ok = false;
            rep.note = "no probed ball with finite supremum";
            return rep;
        }
    }
    rep.note = "corroborated (sampled balls)";
    return rep;
}

/// (iv) Boundary blow-up: march rays from sampled points until they leave
/// dom c, then approach the crossing geometrically. Corroborated when the
/// cost exceeds the threshold or keeps increasing until the bracket hits
/// the precision floor. Rays that never leave the domain are vacuous.
inline HypothesisReport probe_boundary_blowup(const Instance& inst, std::mt19937_64& rng, int rays,
                                              double threshold) {
    HypothesisReport rep{"(iv) boundary blow-up", true, ""};
    std::uniform_int_distribution<std::size_t> pick(0, inst.points.size() - 1);
    auto dirs = detail::probe_directions(2 * inst.dim(), std::max(rays, 4));
    int crossings = 0;
    for (int k = 0; k < rays; ++k) {
        const PointPair& base = inst.points[pick(rng)];
        const auto& d = dirs[k % dirs.size()];
        double t_out = 1e-3;
        bool left = false;
        for (int g = 0; g < 80; ++g) {
            PointPair q = detail::offset(base, d, t_out);
            if (!inst.cost->in_domain(q.x, q.y)) {
                left = true;
                break;
            }
            t_out *= 2.0;
        }
        if (!left) continue;  // unbounded direction
        ++crossings;
        double t_in = 0.0;
        bool exceeded = false;
        double first = kPosInf;
        std::vector<double> tail;  // last few in-domain values
        while (t_out - t_in > 0.0) {
            double mid = 0.5 * (t_in + t_out);
            if (mid == t_in || mid == t_out) break;  // precision floor
            PointPair q = detail::offset(base, d, mid);
            ExtReal cv = inst.cost->eval(q.x, q.y, q.y_irrational());
            if (cv.is_finite()) {
                if (first == kPosInf) first = cv.value();
                tail.push_back(cv.value());
                if (tail.size() > 4) tail.erase(tail.begin());
                if (cv.value() > threshold) {
                    exceeded = true;
                    break;
                }
                t_in = mid;
            } else {
                t_out = mid;
            }
        }
        // The bracket floor is relative precision, so a log-type blow-up
        // tops out near -ln(1e-16) ~ 37 and may plateau there for the last
        // bracket or two. Accept a non-decreasing tail that climbed well
        // above where the approach started; a bounded cost stays flat.
        bool tail_climbing = tail.size() >= 3 && tail.back() >= first + 10.0;
        for (std::size_t k = 1; k < tail.size() && tail_climbing; ++k) {
            tail_climbing = tail[k] >= tail[k - 1];
        }
        if (!(exceeded || tail_climbing)) {
            rep.ok = false;
            rep.note = "cost stays bounded along a boundary approach";
            return rep;
        }
    }
    rep.note = crossings == 0
                   ? "vacuous (no boundary reachable from the sample)"
                   : "corroborated (" + std::to_string(crossings) + " boundary approaches)";
    return rep;
}

}  // namespace detail

/// The full chain-extension pipeline: certify hypotheses (i)-(vi), build
/// CE(closure) ∩ D, discretize it, certify strong connectivity and path
/// boundedness, construct an antiderivative there, and restrict it to the
/// original sample.
inline PipelineResult extension_pipeline(const Instance& inst, Order order,
                                         PipelineOptions opts = {}) {
    if (inst.dim() != 1) throw ChainError("extension_pipeline: 2-coordinate cost required");
    PipelineResult res;
    std::mt19937_64 rng(inst.seed ^ 0xce5ull);

    VariationGraph g = build_variation_graph(inst);
    res.hypotheses.push_back(detail::probe_convexity(inst, rng, opts.convexity_probes));
    res.hypotheses.push_back(detail::probe_monotonicity(inst, order, rng, opts.audit_probes));
    res.hypotheses.push_back(detail::probe_local_boundedness(inst, opts.ball_probes));
    res.hypotheses.push_back(
        detail::probe_boundary_blowup(inst, rng, opts.blowup_rays, opts.blowup_threshold));

    VariationMatrix m = all_pairs_variation(g, inst.tolerance);
    {
        HypothesisReport rep{"(v) c-path bounded sample", m.path_bounded, ""};
        if (!m.path_bounded) {
            rep.note = m.cyclically_monotone ? "a +inf variation entry"
                                             : "cyclic-monotonicity witness: positive cycle";
        } else {
            rep.note = "all " + std::to_string(m.n) + "^2 variation entries finite";
        }
        res.hypotheses.push_back(rep);
    }
    {
        SemiConnectivity sc = semi_connectivity(g);
        HypothesisReport rep{"(vi) no disconnected partition", sc.connected,
                             sc.connected ? "semi-connectivity holds (1 block)"
                                          : std::to_string(sc.block_count) + " mutually unreachable blocks"};
        res.hypotheses.push_back(rep);
    }
    res.hypotheses_ok = true;
    for (const auto& h : res.hypotheses) res.hypotheses_ok = res.hypotheses_ok && h.ok;
    if (!res.hypotheses_ok) {
        res.failure = "hypothesis certificate failed";
        return res;
    }

    // G~ := CE(closure) ∩ D, discretized. Sampled extension points outside
    // dom c (minimal/maximal elements can sit on bdry D) are dropped.
    res.ce = chain_extension(complex_from_instance(inst, order));
    std::vector<PointPair> sampled = res.ce.extension.sample(opts.density);
    Instance ext;
    ext.cost = inst.cost;
    ext.spec = inst.spec;
    ext.tolerance = inst.tolerance;
    ext.seed = inst.seed;
    for (auto& p : sampled) {
        if (inst.cost->in_domain(p.x, p.y)) {
            ext.points.push_back(std::move(p));
        } else {
            ++res.dropped_off_domain;
        }
    }
    ext.explicit_count = ext.points.size();
    res.extension_instance = ext;

    VariationGraph eg = build_variation_graph(ext);
    Condensation cond = condensation(eg);
    res.extension_strongly_connected = cond.count() == 1;
    if (!res.extension_strongly_connected) {
        res.failure = "extension discretization is not strongly connected; raise --density";
        return res;
    }
    VariationMatrix em = all_pairs_variation(eg, ext.tolerance);
    res.extension_path_bounded = em.path_bounded;
    if (!em.path_bounded) {
        res.failure = "extension discretization is not c-path bounded";
        return res;
    }
    res.extension_f = construct_incremental(em, identity_order(em.n), ext.tolerance);
    res.extension_verify = verify_antiderivative(eg, res.extension_f.values, ext.tolerance);

    res.restricted_values.resize(inst.points.size());
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < ext.points.size(); ++j) {
            if (ext.points[j].x == inst.points[i].x && ext.points[j].y == inst.points[i].y) {
                res.restricted_values[i] = res.extension_f.values[j];
                found = true;
                break;
            }
        }
        if (!found) {
            res.failure = "an input point is missing from the extension sample";
            return res;
        }
    }
    res.restricted_verify = verify_antiderivative(g, res.restricted_values, inst.tolerance);
    res.ok = res.extension_verify.all_ok() && res.restricted_verify.all_ok();
    if (!res.ok) res.failure = "antiderivative verification failed";
    return res;
}

}  // namespace potlab
