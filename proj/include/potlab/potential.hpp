#pragma once

#include <map>
#include <optional>
#include <vector>

#include "potlab/variation.hpp"

namespace potlab {

struct PotentialError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Construction { Incremental, Sinks, Sources, CondensationAuto, UserSupplied };

inline std::string to_string(Construction c) {
    switch (c) {
        case Construction::Incremental: return "incremental";
        case Construction::Sinks: return "sinks";
        case Construction::Sources: return "sources";
        case Construction::CondensationAuto: return "condensation_auto";
        case Construction::UserSupplied: return "user_supplied";
    }
    return "?";
}

struct IncrementalStep {
    int node;
    ExtReal alpha, beta;
    double gamma;
};

/// A real value per node of G satisfying c(x,y) - c(u,y) <= f(x,y) - f(u,v).
struct Antiderivative {
    std::vector<double> values;
    Construction construction = Construction::UserSupplied;
    std::vector<IncrementalStep> trace;  // incremental construction only
};

// --- incremental construction (countable-set recursion) ----------------------

/// Processes nodes in the given order; step n+1 squeezes gamma into
/// [alpha, beta] with
///   alpha = max_i F(z_{n+1}, z_i) + f(z_i),
///   beta  = min_j f(z_j) - F(z_j, z_{n+1}).
/// Requires a path-bounded matrix; alpha <= beta is then guaranteed by the
/// triangle inequality and any numeric breach is reported.
inline Antiderivative construct_incremental(const VariationMatrix& m,
                                            const std::vector<int>& order, double eps) {
    if (!m.path_bounded) {
        throw PotentialError("construct_incremental: instance is not c-path bounded");
    }
    if (order.size() != static_cast<std::size_t>(m.n) || m.n == 0) {
        throw PotentialError("construct_incremental: order must permute all nodes");
    }
    Antiderivative f;
    f.construction = Construction::Incremental;
    f.values.assign(m.n, 0.0);
    f.trace.push_back({order[0], ExtReal::neg_inf(), ExtReal::pos_inf(), 0.0});
    f.values[order[0]] = 0.0;

    for (std::size_t k = 1; k < order.size(); ++k) {
        int z = order[k];
        ExtReal alpha = ExtReal::neg_inf();
        ExtReal beta = ExtReal::pos_inf();
        for (std::size_t i = 0; i < k; ++i) {
            int zi = order[i];
            ExtReal fwd = m.at(z, zi);   // F(z_{n+1}, z_i)
            ExtReal bwd = m.at(zi, z);   // F(z_i, z_{n+1})
            if (fwd.is_pos_inf() || bwd.is_pos_inf()) {
                throw PotentialError("construct_incremental: +inf entry in a path-bounded matrix");
            }
            if (fwd.is_finite()) {
                alpha = ExtReal::max(alpha, ExtReal::finite(fwd.value() + f.values[zi]));
            }
            if (bwd.is_finite()) {
                beta = ExtReal::min(beta, ExtReal::finite(f.values[zi] - bwd.value()));
            }
        }
        if (alpha.is_finite() && beta.is_finite() && alpha.value() > beta.value() + eps) {
            throw PotentialError("construct_incremental: internal consistency failure, alpha=" +
                                 alpha.to_string() + " > beta=" + beta.to_string() + " at node " +
                                 std::to_string(z));
        }
        double gamma;
        if (alpha.is_finite() && beta.is_finite()) {
            gamma = 0.5 * (alpha.value() + beta.value());
        } else if (alpha.is_neg_inf() && beta.is_finite()) {
            gamma = beta.value();
        } else if (beta.is_pos_inf() && alpha.is_finite()) {
            gamma = alpha.value();
        } else {
            gamma = 0.0;
        }
        f.values[z] = gamma;
        f.trace.push_back({z, alpha, beta, gamma});
    }
    return f;
}

inline std::vector<int> identity_order(int n) {
    std::vector<int> o(n);
    std::iota(o.begin(), o.end(), 0);
    return o;
}

// --- boundary (sinks / sources) constructions ---------------------------------

enum class BoundaryDirection { Sinks, Sources };

struct BoundaryConstruction {
    bool ok = false;
    Antiderivative f;                    // meaningful iff ok
    std::vector<int> unreachable_nodes;  // sup over terminals is -inf
    std::vector<int> unbounded_nodes;    // sup over terminals is +inf (path-bound obstruction)
};

/// Sinks:   f(p) = max over w in terminals of F(p, w).
/// Sources: f(p) = -max over a in terminals of F(a, p).
/// Succeeds iff every value is finite; otherwise reports the offending nodes.
inline BoundaryConstruction construct_from_boundary(const VariationMatrix& m,
                                                    BoundaryDirection dir,
                                                    const std::vector<int>& terminals) {
    if (terminals.empty()) throw PotentialError("construct_from_boundary: empty terminal set");
    BoundaryConstruction out;
    out.f.construction = dir == BoundaryDirection::Sinks ? Construction::Sinks : Construction::Sources;
    out.f.values.assign(m.n, 0.0);
    out.ok = true;
    for (int p = 0; p < m.n; ++p) {
        ExtReal best = ExtReal::neg_inf();
        for (int t : terminals) {
            ExtReal v = dir == BoundaryDirection::Sinks ? m.at(p, t) : m.at(t, p);
            best = ExtReal::max(best, v);
        }
        if (best.is_neg_inf()) {
            out.unreachable_nodes.push_back(p);
            out.ok = false;
        } else if (best.is_pos_inf()) {
            out.unbounded_nodes.push_back(p);
            out.ok = false;
        } else {
            out.f.values[p] = dir == BoundaryDirection::Sinks ? best.value() : -best.value();
        }
    }
    return out;
}

/// One representative per strongly connected component (lowest node index).
/// Every node reaches its representative, so sinks with this terminal set
/// succeeds on every path-bounded finite instance.
inline std::vector<int> select_terminals_auto(const Condensation& c) {
    std::vector<int> reps;
    reps.reserve(c.count());
    for (const auto& comp : c.members) reps.push_back(comp.front());
    return reps;
}

// --- verification -------------------------------------------------------------

struct VerifyResult {
    bool ok = true;
    double worst_violation = 0.0;  // max over pairs of lhs - (f_i - f_j)
    int witness_i = -1, witness_j = -1;
    bool fiber_ok = true;
    int fiber_i = -1, fiber_j = -1;

    bool all_ok() const { return ok && fiber_ok; }
};

/// Exhaustive check of c(x,y) - c(u,y) <= f(x,y) - f(u,v) over ordered node
/// pairs, plus fiber constancy (equal f on nodes sharing x). The left side
/// is -inf exactly when the cross term is +inf, i.e. when there is no edge.
inline VerifyResult verify_antiderivative(const VariationGraph& g,
                                          const std::vector<double>& values, double eps) {
    if (values.size() != static_cast<std::size_t>(g.n())) {
        throw PotentialError("verify_antiderivative: f must be defined on all nodes");
    }
    VerifyResult r;
    for (int i = 0; i < g.n(); ++i) {
        for (const auto& e : g.out[i]) {
            if (e.to == i) continue;
            double viol = e.w - (values[i] - values[e.to]);
            if (viol > r.worst_violation) {
                r.worst_violation = viol;
                r.witness_i = i;
                r.witness_j = e.to;
            }
        }
    }
    r.ok = r.worst_violation <= eps;
    for (int i = 0; i < g.n() && r.fiber_ok; ++i) {
        for (int j = i + 1; j < g.n(); ++j) {
            if (g.points[i].same_x(g.points[j]) &&
                std::abs(values[i] - values[j]) > eps) {
                r.fiber_ok = false;
                r.fiber_i = i;
                r.fiber_j = j;
                break;
            }
        }
    }
    return r;
}

// --- psi on P_X(G) and the extension Psi ---------------------------------------

using XKey = std::vector<double>;

/// psi(x) = f(x, y_x) for any selection y_x; requires fiber constancy.
inline std::map<XKey, double> collapse_to_psi(const VariationGraph& g,
                                              const std::vector<double>& values, double eps) {
    std::map<XKey, double> psi;
    for (int i = 0; i < g.n(); ++i) {
        auto [it, inserted] = psi.emplace(g.points[i].x, values[i]);
        if (!inserted && std::abs(it->second - values[i]) > eps) {
            throw PotentialError("collapse_to_psi: fiber inconsistency at node " +
                                 std::to_string(i));
        }
    }
    return psi;
}

/// psi on P_X(G) together with the evaluable extension
///   Psi(x) = inf over (u,v) in G of c(x,v) - c(u,v) + psi(u).
struct Potential {
    CostPtr cost;
    std::vector<PointPair> nodes;
    std::vector<double> cost_at;
    std::vector<double> psi_at_node;
    std::map<XKey, double> psi;

    ExtReal evaluate(const XKey& x) const {
        ExtReal best = ExtReal::pos_inf();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            ExtReal cv = cost->eval(x, nodes[i].y, nodes[i].y_irrational());
            if (!cv.is_finite()) continue;
            best = ExtReal::min(best,
                                ExtReal::finite(cv.value() - cost_at[i] + psi_at_node[i]));
        }
        return best;
    }
};

/// Builds Psi after verifying the defining system
///   c(x,y) - c(u,y) <= psi(x) - psi(u)
/// on G, and checks that Psi restricted to P_X(G) reproduces psi.
inline Potential extend_potential(const VariationGraph& g, CostPtr cost,
                                  const std::map<XKey, double>& psi, double eps) {
    Potential pot;
    pot.cost = std::move(cost);
    pot.nodes = g.points;
    pot.cost_at = g.cost_at;
    pot.psi = psi;
    pot.psi_at_node.resize(g.n());
    for (int i = 0; i < g.n(); ++i) {
        auto it = psi.find(g.points[i].x);
        if (it == psi.end()) {
            throw PotentialError("extend_potential: psi undefined at node " + std::to_string(i));
        }
        pot.psi_at_node[i] = it->second;
    }
    for (int i = 0; i < g.n(); ++i) {
        for (const auto& e : g.out[i]) {
            if (e.to == i) continue;
            if (e.w > pot.psi_at_node[i] - pot.psi_at_node[e.to] + eps) {
                throw PotentialError("extend_potential: psi violates the defining system at pair (" +
                                     std::to_string(i) + "," + std::to_string(e.to) + ")");
            }
        }
    }
    for (const auto& [x, v] : pot.psi) {
        ExtReal ext = pot.evaluate(x);
        if (!ext.is_finite() || std::abs(ext.value() - v) > eps) {
            throw PotentialError("extend_potential: Psi does not extend psi at an x of P_X(G)");
        }
    }
    return pot;
}

// --- c-subdifferential check ----------------------------------------------------

struct SubdiffWitness {
    int node;
    XKey z;
    double violation;
};

struct SubdiffResult {
    bool ok = true;
    std::vector<SubdiffWitness> witnesses;
};

/// Verifies G ⊆ gra ∂_c Psi on P_X(G) plus an optional probe grid: for every
/// (x,y) in G and probed z, c(x,y) - c(z,y) <= Psi(x) - Psi(z). On P_X(G)
/// the potential's contract pins Psi to psi, so psi values are compared
/// directly there; off-grid probes evaluate the inf formula.
inline SubdiffResult check_subdifferential(const VariationGraph& g, const Potential& pot,
                                           const std::vector<XKey>& extra_probes, double eps) {
    SubdiffResult res;
    std::vector<XKey> zs;
    std::vector<ExtReal> psi_z;
    for (const auto& [x, v] : pot.psi) {
        zs.push_back(x);
        psi_z.push_back(ExtReal::finite(v));
    }
    for (const auto& z : extra_probes) {
        zs.push_back(z);
        auto it = pot.psi.find(z);
        psi_z.push_back(it != pot.psi.end() ? ExtReal::finite(it->second) : pot.evaluate(z));
    }

    for (int i = 0; i < g.n(); ++i) {
        ExtReal px = ExtReal::finite(pot.psi_at_node[i]);
        for (std::size_t k = 0; k < zs.size(); ++k) {
            ExtReal cz = pot.cost->eval(zs[k], g.points[i].y, g.points[i].y_irrational());
            if (!cz.is_finite()) continue;  // lhs is -inf
            double lhs = g.cost_at[i] - cz.value();
            ExtReal rhs = psi_z[k].is_pos_inf()   ? ExtReal::neg_inf()
                          : psi_z[k].is_neg_inf() ? ExtReal::pos_inf()
                                                  : ExtReal::finite(px.value() - psi_z[k].value());
            bool holds = rhs.is_pos_inf() || (rhs.is_finite() && lhs <= rhs.value() + eps);
            if (!holds) {
                res.ok = false;
                double gap = rhs.is_finite() ? lhs - rhs.value() : kPosInf;
                res.witnesses.push_back({i, zs[k], gap});
            }
        }
    }
    return res;
}

// --- gluing across disconnected domain parts ------------------------------------

/// Concatenates per-part antiderivatives over a partition with no cross
/// edges (in either direction); the result is an antiderivative of all of G.
inline Antiderivative combine_components(const VariationGraph& g, const std::vector<int>& labels,
                                         const std::map<int, std::vector<double>>& per_part) {
    if (labels.size() != static_cast<std::size_t>(g.n())) {
        throw PotentialError("combine_components: one label per node required");
    }
    for (int i = 0; i < g.n(); ++i) {
        for (const auto& e : g.out[i]) {
            if (labels[i] != labels[e.to]) {
                throw PotentialError("combine_components: cross-part edge " + std::to_string(i) +
                                     " -> " + std::to_string(e.to) + " (partition invalid)");
            }
        }
    }
    Antiderivative f;
    f.construction = Construction::UserSupplied;
    f.values.assign(g.n(), 0.0);
    std::map<int, std::size_t> cursor;
    for (int i = 0; i < g.n(); ++i) {
        auto it = per_part.find(labels[i]);
        if (it == per_part.end()) {
            throw PotentialError("combine_components: no antiderivative for part " +
                                 std::to_string(labels[i]));
        }
        std::size_t k = cursor[labels[i]]++;
        if (k >= it->second.size()) {
            throw PotentialError("combine_components: part " + std::to_string(labels[i]) +
                                 " has too few values");
        }
        f.values[i] = it->second[k];
    }
    return f;
}

}  // namespace potlab
