#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "potlab/cost.hpp"
#include "potlab/extreal.hpp"
#include "potlab/point.hpp"

namespace potlab {

struct InstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A closed (or right-open) segment in the plane X×Y with a sampling count.
/// Right-open segments exclude the endpoint b from sampling; they exist for
/// sets like { (x, 3-2x) : 3/4 <= x < 1 } whose closure leaves the domain.
struct Segment {
    PointPair a, b;
    int samples = 2;
    bool half_open = false;
    std::set<std::string> tags;

    double length() const { return product_dist(a, b); }

    PointPair at(double t) const {
        PointPair p;
        // endpoints exactly: a + 1*(b-a) need not round back to b
        if (t == 0.0) {
            p.x = a.x;
            p.y = a.y;
        } else if (t == 1.0) {
            p.x = b.x;
            p.y = b.y;
        } else {
            p.x = {a.x[0] + t * (b.x[0] - a.x[0])};
            p.y = {a.y[0] + t * (b.y[0] - a.y[0])};
        }
        p.tags = tags;
        return p;
    }

    std::vector<PointPair> sample() const {
        std::vector<PointPair> out;
        if (samples < (half_open ? 1 : 2)) {
            throw InstanceError("segment needs at least " + std::string(half_open ? "1" : "2") +
                                " samples");
        }
        for (int j = 0; j < samples; ++j) {
            double t = half_open ? double(j) / double(samples)
                                 : double(j) / double(samples - 1);
            out.push_back(at(t));
        }
        return out;
    }
};

/// The desk-scale stand-in for G: a finite point list in dom c, plus the
/// cost and the run conventions (tolerance, seed).
struct Instance {
    CostPtr cost;
    std::optional<CostSpec> spec;  // present when the cost came from the registry
    std::vector<PointPair> points;
    std::size_t explicit_count = 0;  // points[0..explicit_count) were listed verbatim
    std::vector<Segment> segments;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points[0].dim(); }
};

inline void validate_instance(Instance& inst) {
    if (!inst.cost) throw InstanceError("instance has no cost");
    if (!(inst.tolerance > 0.0)) throw InstanceError("tolerance must be > 0");
    if (!inst.segments.empty()) {
        for (const auto& s : inst.segments) {
            if (s.a.dim() != 1 || s.b.dim() != 1) {
                throw InstanceError("segments are permitted only for 2-coordinate instances");
            }
        }
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < inst.points.size(); ++i) {
        const auto& p = inst.points[i];
        if (p.x.size() != p.y.size() || p.x.empty()) {
            throw InstanceError("point " + std::to_string(i) + ": x and y dimensions differ");
        }
        if (d == 0) d = p.dim();
        if (p.dim() != d) {
            throw InstanceError("point " + std::to_string(i) + ": inconsistent dimension");
        }
        ExtReal v = inst.cost->eval(p);
        if (!v.is_finite()) {
            std::ostringstream os;
            os << "point " << i << " lies outside dom c (cost " << v.to_string() << ")";
            throw InstanceError(os.str());
        }
    }
    if (inst.points.empty()) throw InstanceError("instance has no points");
}

/// Samples all segments, appends the samples after the explicit points, and
/// validates every point against the domain.
inline void finalize_instance(Instance& inst) {
    inst.explicit_count = inst.points.size();
    for (const auto& s : inst.segments) {
        auto pts = s.sample();
        inst.points.insert(inst.points.end(), pts.begin(), pts.end());
    }
    validate_instance(inst);
}

// --- JSON encoding ----------------------------------------------------------

inline nlohmann::json extreal_to_json(const ExtReal& v) {
    if (v.is_pos_inf()) return "+inf";
    if (v.is_neg_inf()) return "-inf";
    return v.value();
}

inline ExtReal extreal_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return ExtReal::pos_inf();
        if (s == "-inf") return ExtReal::neg_inf();
        throw InstanceError("bad extended-real literal: " + s);
    }
    return ExtReal::finite(j.get<double>());
}

inline std::vector<double> coords_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>()};
    return j.get<std::vector<double>>();
}

inline nlohmann::json point_to_json(const PointPair& p) {
    nlohmann::json j;
    j["x"] = p.x;
    j["y"] = p.y;
    if (!p.tags.empty()) j["tags"] = p.tags;
    return j;
}

inline PointPair point_from_json(const nlohmann::json& j) {
    PointPair p;
    p.x = coords_from_json(j.at("x"));
    p.y = coords_from_json(j.at("y"));
    if (j.contains("tags")) {
        for (const auto& t : j.at("tags")) p.tags.insert(t.get<std::string>());
    }
    return p;
}

inline nlohmann::json perturbation_to_json(const PerturbationSpec& p) {
    nlohmann::json j;
    switch (p.kind) {
        case PerturbationSpec::Kind::None: j["kind"] = "none"; break;
        case PerturbationSpec::Kind::Linear:
            j["kind"] = "linear";
            j["a"] = p.a;
            j["b"] = p.b;
            break;
        case PerturbationSpec::Kind::Quadratic:
            j["kind"] = "quadratic";
            j["a"] = p.a;
            j["b"] = p.b;
            j["c"] = p.c;
            break;
        case PerturbationSpec::Kind::Table: {
            j["kind"] = "table";
            nlohmann::json e = nlohmann::json::array();
            for (const auto& [t, v] : p.table) e.push_back({t, v});
            j["entries"] = e;
            break;
        }
    }
    return j;
}

inline PerturbationSpec perturbation_from_json(const nlohmann::json& j) {
    PerturbationSpec p;
    std::string k = j.value("kind", "none");
    if (k == "none") {
        p.kind = PerturbationSpec::Kind::None;
    } else if (k == "linear") {
        p.kind = PerturbationSpec::Kind::Linear;
        p.a = j.value("a", 0.0);
        p.b = j.value("b", 0.0);
    } else if (k == "quadratic") {
        p.kind = PerturbationSpec::Kind::Quadratic;
        p.a = j.value("a", 0.0);
        p.b = j.value("b", 0.0);
        p.c = j.value("c", 0.0);
    } else if (k == "table") {
        p.kind = PerturbationSpec::Kind::Table;
        for (const auto& e : j.at("entries")) {
            p.table[e.at(0).get<double>()] = e.at(1).get<double>();
        }
    } else {
        throw InstanceError("unknown perturbation kind: " + k);
    }
    return p;
}

inline std::string cost_kind_name(CostKind k) {
    switch (k) {
        case CostKind::ClassicalPairing: return "classical_pairing";
        case CostKind::Polar: return "polar";
        case CostKind::Coulomb: return "coulomb";
        case CostKind::Bregman: return "bregman";
        case CostKind::HellingerKantorovich: return "hellinger_kantorovich";
        case CostKind::HalflineDiag: return "halfline_diag";
        case CostKind::Example51: return "example51";
        case CostKind::Tabulated: return "tabulated";
    }
    return "?";
}

inline nlohmann::json cost_spec_to_json(const CostSpec& s) {
    nlohmann::json j;
    j["kind"] = cost_kind_name(s.kind);
    if (s.kind == CostKind::ClassicalPairing) j["sign"] = s.pairing_sign;
    if (s.kind == CostKind::Polar || s.kind == CostKind::Example51) {
        j["branch"] = s.branch == DomainBranch::Full ? "full"
                      : s.branch == DomainBranch::D1 ? "d1"
                                                     : "d2";
    }
    if (s.kind == CostKind::Bregman) {
        j["generator"] =
            s.generator == BregmanGenerator::Square ? "square" : "negative_entropy";
    }
    if (s.kind == CostKind::Tabulated) {
        nlohmann::json t;
        t["xs"] = s.table.xs;
        t["ys"] = s.table.ys;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : s.table.values) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto& v : row) r.push_back(extreal_to_json(v));
            rows.push_back(r);
        }
        t["values"] = rows;
        j["table"] = t;
    }
    if (s.declared) j["declared_monotonicity"] = to_string(*s.declared);
    if (s.g.active() || s.h.active()) {
        j["perturbation"] = {{"g", perturbation_to_json(s.g)}, {"h", perturbation_to_json(s.h)}};
    }
    return j;
}

inline CostSpec cost_spec_from_json(const nlohmann::json& j) {
    CostSpec s;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "classical_pairing") {
        s.kind = CostKind::ClassicalPairing;
        s.pairing_sign = j.value("sign", -1.0);
    } else if (kind == "polar") {
        s.kind = CostKind::Polar;
    } else if (kind == "coulomb") {
        s.kind = CostKind::Coulomb;
    } else if (kind == "bregman") {
        s.kind = CostKind::Bregman;
        std::string g = j.value("generator", "square");
        if (g == "square") {
            s.generator = BregmanGenerator::Square;
        } else if (g == "negative_entropy") {
            s.generator = BregmanGenerator::NegativeEntropy;
        } else {
            throw InstanceError("unknown bregman generator: " + g);
        }
    } else if (kind == "hellinger_kantorovich") {
        s.kind = CostKind::HellingerKantorovich;
    } else if (kind == "halfline_diag") {
        s.kind = CostKind::HalflineDiag;
    } else if (kind == "example51") {
        s.kind = CostKind::Example51;
    } else if (kind == "tabulated") {
        s.kind = CostKind::Tabulated;
        const auto& t = j.at("table");
        s.table.xs = t.at("xs").get<std::vector<double>>();
        s.table.ys = t.at("ys").get<std::vector<double>>();
        for (const auto& row : t.at("values")) {
            std::vector<ExtReal> r;
            for (const auto& v : row) r.push_back(extreal_from_json(v));
            s.table.values.push_back(std::move(r));
        }
    } else {
        throw InstanceError("unknown cost kind: " + kind);
    }
    if (j.contains("branch")) {
        std::string b = j.at("branch").get<std::string>();
        s.branch = b == "full" ? DomainBranch::Full
                 : b == "d1"  ? DomainBranch::D1
                 : b == "d2"  ? DomainBranch::D2
                              : throw InstanceError("unknown branch: " + b);
    }
    if (j.contains("declared_monotonicity")) {
        std::string m = j.at("declared_monotonicity").get<std::string>();
        s.declared = m == "ominus" ? Monotonicity::Ominus
                   : m == "oplus" ? Monotonicity::Oplus
                                  : Monotonicity::None;
    }
    if (j.contains("perturbation")) {
        s.g = perturbation_from_json(j.at("perturbation").at("g"));
        s.h = perturbation_from_json(j.at("perturbation").at("h"));
    }
    return s;
}

inline constexpr const char* kInstanceSchema = "potlab-instance/1";

inline nlohmann::json instance_to_json(const Instance& inst) {
    if (!inst.spec) throw InstanceError("only registry-cost instances can be serialized");
    nlohmann::json j;
    j["schema"] = kInstanceSchema;
    j["cost"] = cost_spec_to_json(*inst.spec);
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.explicit_count; ++i) pts.push_back(point_to_json(inst.points[i]));
    j["points"] = pts;
    if (!inst.segments.empty()) {
        nlohmann::json segs = nlohmann::json::array();
        for (const auto& s : inst.segments) {
            nlohmann::json sj;
            sj["a"] = point_to_json(s.a);
            sj["b"] = point_to_json(s.b);
            sj["samples"] = s.samples;
            if (s.half_open) sj["half_open"] = true;
            segs.push_back(sj);
        }
        j["segments"] = segs;
    }
    j["tolerance"] = inst.tolerance;
    j["seed"] = inst.seed;
    return j;
}

inline Instance instance_from_json_unchecked(const nlohmann::json& j) {
    if (j.value("schema", "") != kInstanceSchema) {
        throw InstanceError("unsupported instance schema (want " + std::string(kInstanceSchema) +
                            ")");
    }
    Instance inst;
    inst.spec = cost_spec_from_json(j.at("cost"));
    inst.cost = make_cost(*inst.spec);
    if (j.contains("points")) {
        for (const auto& p : j.at("points")) inst.points.push_back(point_from_json(p));
    }
    if (j.contains("segments")) {
        for (const auto& sj : j.at("segments")) {
            Segment s;
            s.a = point_from_json(sj.at("a"));
            s.b = point_from_json(sj.at("b"));
            s.samples = sj.value("samples", 2);
            s.half_open = sj.value("half_open", false);
            s.tags = s.a.tags;
            inst.segments.push_back(s);
        }
    }
    inst.tolerance = j.value("tolerance", 1e-9);
    inst.seed = j.value("seed", std::uint64_t{0});
    finalize_instance(inst);
    return inst;
}

inline Instance instance_from_json(const nlohmann::json& j) {
    try {
        return instance_from_json_unchecked(j);
    } catch (const nlohmann::json::exception& e) {
        throw InstanceError("instance schema violation: " + std::string(e.what()));
    }
}

inline Instance parse_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError("cannot open instance file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InstanceError("instance file is not valid JSON: " + std::string(e.what()));
    }
    return instance_from_json(j);
}

/// FNV-1a digest of the canonical encoding; reports embed it so every claim
/// can be traced back to the exact input.
inline std::string instance_digest(const Instance& inst) {
    std::string enc;
    if (inst.spec) {
        enc = instance_to_json(inst).dump();
    } else {
        std::ostringstream os;
        os << inst.cost->name() << '|' << inst.tolerance << '|' << inst.seed;
        for (const auto& p : inst.points) {
            for (double v : p.x) os << ',' << v;
            for (double v : p.y) os << ';' << v;
            for (const auto& t : p.tags) os << '#' << t;
        }
        enc = os.str();
    }
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : enc) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace potlab
