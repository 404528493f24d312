#pragma once

#include <iomanip>

#include "potlab/ex51.hpp"
#include "potlab/pipeline.hpp"

namespace potlab {

inline nlohmann::json conventions_json(const Instance& inst) {
    return {
        {"trivial_path", "the empty walk from a point to itself is a path (N = 0)"},
        {"cyclic_monotonicity", "no strictly positive cycle, i.e. F(p,p) = 0 for all p"},
        {"sup_empty", "-inf"},
        {"inf_empty", "+inf"},
        {"tolerance", inst.tolerance},
        {"seed", inst.seed},
    };
}

inline nlohmann::json matrix_to_json(const VariationMatrix& m, bool full_table) {
    nlohmann::json j;
    j["nodes"] = m.n;
    j["path_bounded"] = m.path_bounded;
    j["cyclically_monotone"] = m.cyclically_monotone;
    int negs = 0, poss = 0;
    double lo = kPosInf, hi = kNegInf;
    for (int s = 0; s < m.n; ++s) {
        for (int e = 0; e < m.n; ++e) {
            double v = m.raw(s, e);
            if (v == kNegInf) {
                ++negs;
            } else if (v == kPosInf) {
                ++poss;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    j["entries_neg_inf"] = negs;
    j["entries_pos_inf"] = poss;
    if (lo <= hi) {
        j["finite_min"] = lo;
        j["finite_max"] = hi;
    }
    if (full_table) {
        nlohmann::json rows = nlohmann::json::array();
        for (int s = 0; s < m.n; ++s) {
            nlohmann::json row = nlohmann::json::array();
            for (int e = 0; e < m.n; ++e) row.push_back(extreal_to_json(m.at(s, e)));
            rows.push_back(row);
        }
        j["table"] = rows;
    }
    return j;
}

inline nlohmann::json condensation_to_json(const Condensation& c) {
    nlohmann::json j;
    j["components"] = c.count();
    j["members"] = c.members;
    nlohmann::json edges = nlohmann::json::array();
    for (int k = 0; k < c.count(); ++k) {
        for (int w : c.dag_out[k]) edges.push_back({k, w});
    }
    j["dag_edges"] = edges;
    return j;
}

inline nlohmann::json ball_structure_to_json(const BallStructure& b) {
    nlohmann::json j;
    nlohmann::json radii = nlohmann::json::array();
    for (const auto& r : b.radii) {
        radii.push_back({{"radius", extreal_to_json(r.radius)},
                         {"exact", r.exact}});
    }
    j["radii"] = radii;
    j["component_id"] = b.component_id;
    j["components"] = b.component_count;
    return j;
}

inline nlohmann::json verify_to_json(const VerifyResult& v) {
    nlohmann::json j;
    j["ok"] = v.all_ok();
    j["worst_violation"] = v.worst_violation;
    if (!v.ok) j["witness_pair"] = {v.witness_i, v.witness_j};
    j["fiber_constant"] = v.fiber_ok;
    if (!v.fiber_ok) j["fiber_witness"] = {v.fiber_i, v.fiber_j};
    return j;
}

struct AnalyzeOptions {
    bool full_matrix = false;
    bool with_balls = true;
    std::size_t ball_chain_limit = 512;  // the class computation is cubic
    int oracle_max_len = 0;  // > 0: cross-check finite entries on small instances
    std::uint64_t walk_budget = 10'000'000;
};

inline nlohmann::json analyze_report(const Instance& inst, const AnalyzeOptions& opts = {}) {
    nlohmann::json j;
    j["schema"] = "potlab-report/1";
    j["instance_digest"] = instance_digest(inst);
    j["cost"] = inst.cost->name();
    j["nodes"] = inst.points.size();
    j["conventions"] = conventions_json(inst);

    VariationGraph g = build_variation_graph(inst);
    VariationMatrix m = all_pairs_variation(g, inst.tolerance);
    j["variation"] = matrix_to_json(m, opts.full_matrix || m.n <= 16);

    Condensation c = condensation(g);
    j["condensation"] = condensation_to_json(c);
    SemiConnectivity sc = semi_connectivity(g);
    j["semi_connectivity"] = {{"connected", sc.connected}, {"blocks", sc.block_count}};

    if (inst.dim() == 1) {
        auto cm = is_chain(inst.points, Order::Ominus);
        auto cp = is_chain(inst.points, Order::Oplus);
        j["chain"] = {{"ominus", cm.chain}, {"oplus", cp.chain}};
        if (!cm.chain) j["chain"]["ominus_witness"] = {cm.bad_a, cm.bad_b};
        if (!cp.chain) j["chain"]["oplus_witness"] = {cp.bad_a, cp.bad_b};
    }

    if (opts.with_balls && inst.cost->domain_open()) {
        if (inst.points.size() <= opts.ball_chain_limit) {
            j["ball_chain"] = ball_structure_to_json(ball_chain_components(inst));
        } else {
            j["ball_chain"] = {{"skipped", "instance larger than " +
                                               std::to_string(opts.ball_chain_limit) + " points"}};
        }
    }

    if (opts.oracle_max_len > 0) {
        int agree = 0, total = 0;
        for (int s = 0; s < m.n; ++s) {
            for (int e = 0; e < m.n; ++e) {
                ExtReal oracle = enumerate_walks(g, s, e, opts.oracle_max_len, opts.walk_budget);
                ExtReal fast = m.at(s, e);
                ++total;
                if (fast.is_pos_inf()) {
                    ExtReal shorter = enumerate_walks(g, s, e, std::max(0, m.n - 1), opts.walk_budget);
                    if (oracle > shorter) ++agree;
                } else if (fast == oracle) {
                    ++agree;
                }
            }
        }
        j["oracle_crosscheck"] = {{"entries", total}, {"agreeing", agree},
                                  {"max_len", opts.oracle_max_len}};
    }
    return j;
}

// --- text rendering -----------------------------------------------------------

inline std::string render_text(const nlohmann::json& j, int indent = 0) {
    std::ostringstream os;
    std::string pad(indent, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || (it.value().is_array() && !it.value().empty() &&
                                           (it.value()[0].is_object() || it.value()[0].is_array()))) {
                os << pad << it.key() << ":\n" << render_text(it.value(), indent + 2);
            } else {
                os << pad << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) os << render_text(v, indent) << "\n";
    } else {
        os << pad << j.dump();
    }
    return os.str();
}

// --- SVG plotting (2-coordinate instances) --------------------------------------

inline std::string svg_plot(const Instance& inst, const BallStructure* balls = nullptr,
                            const ChainStructure* extension = nullptr) {
    if (inst.dim() != 1) throw InstanceError("svg_plot: 2-coordinate instances only");
    double x0 = kPosInf, x1 = kNegInf, y0 = kPosInf, y1 = kNegInf;
    auto grow = [&](double x, double y, double r = 0.0) {
        x0 = std::min(x0, x - r);
        x1 = std::max(x1, x + r);
        y0 = std::min(y0, y - r);
        y1 = std::max(y1, y + r);
    };
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        double r = 0.0;
        if (balls && balls->radii[i].radius.is_finite()) r = balls->radii[i].radius.value();
        grow(inst.points[i].sx(), inst.points[i].sy(), r);
    }
    if (extension) {
        for (const auto& p : extension->pieces) {
            grow(p.a.sx(), p.a.sy());
            grow(p.b.sx(), p.b.sy());
        }
    }
    double w = std::max(x1 - x0, 1e-9), h = std::max(y1 - y0, 1e-9);
    double margin = 0.05 * std::max(w, h);
    x0 -= margin; x1 += margin; y0 -= margin; y1 += margin;
    w = x1 - x0; h = y1 - y0;
    const double size = 640.0;
    auto mx = [&](double x) { return (x - x0) / w * size; };
    auto my = [&](double y) { return size - (y - y0) / h * size; };

    std::ostringstream os;
    os << std::setprecision(10);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    if (balls) {
        for (std::size_t i = 0; i < inst.points.size(); ++i) {
            if (!balls->radii[i].radius.is_finite()) continue;
            double r = balls->radii[i].radius.value();
            os << "  <circle cx=\"" << mx(inst.points[i].sx()) << "\" cy=\""
               << my(inst.points[i].sy()) << "\" r=\"" << r / w * size
               << "\" fill=\"#9ecae1\" fill-opacity=\"0.25\" stroke=\"#6baed6\"/>\n";
        }
    }
    if (extension) {
        for (const auto& p : extension->pieces) {
            os << "  <line x1=\"" << mx(p.a.sx()) << "\" y1=\"" << my(p.a.sy()) << "\" x2=\""
               << mx(p.b.sx()) << "\" y2=\"" << my(p.b.sy())
               << "\" stroke=\"#fd8d3c\" stroke-width=\"2\"" << (p.connector ? " stroke-dasharray=\"6 3\"" : "")
               << "/>\n";
        }
    }
    for (const auto& s : inst.segments) {
        os << "  <line x1=\"" << mx(s.a.sx()) << "\" y1=\"" << my(s.a.sy()) << "\" x2=\""
           << mx(s.b.sx()) << "\" y2=\"" << my(s.b.sy())
           << "\" stroke=\"#3182bd\" stroke-width=\"2.5\"/>\n";
    }
    for (const auto& p : inst.points) {
        os << "  <circle cx=\"" << mx(p.sx()) << "\" cy=\"" << my(p.sy())
           << "\" r=\"2.5\" fill=\"#252525\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace potlab
