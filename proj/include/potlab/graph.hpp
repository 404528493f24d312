#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include "potlab/instance.hpp"

namespace potlab {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Weighted digraph of one-step transitions on a finite instance.
/// Edge i->j exists iff c(x_j, y_i) < +inf, with weight
/// w(i->j) = c(x_i,y_i) - c(x_j,y_i); the self-edge i->i always exists
/// with weight exactly 0.
struct VariationGraph {
    struct Edge {
        int to;
        double w;
    };

    std::vector<PointPair> points;
    std::vector<double> cost_at;  // c(x_i, y_i), finite by instance validation
    std::vector<std::vector<Edge>> out;
    std::vector<std::vector<Edge>> in;

    int n() const { return static_cast<int>(points.size()); }

    std::optional<double> weight(int i, int j) const {
        for (const auto& e : out[i]) {
            if (e.to == j) return e.w;
        }
        return std::nullopt;
    }

    VariationGraph reversed() const {
        VariationGraph r;
        r.points = points;
        r.cost_at = cost_at;
        r.out = in;
        r.in = out;
        return r;
    }

    /// Nodes reachable from s (forward) or co-reaching s (backward),
    /// including s itself via the trivial path.
    std::vector<char> reach_mask(int s, bool forward = true) const {
        std::vector<char> seen(points.size(), 0);
        std::deque<int> q{s};
        seen[s] = 1;
        const auto& adj = forward ? out : in;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (const auto& e : adj[u]) {
                if (!seen[e.to]) {
                    seen[e.to] = 1;
                    q.push_back(e.to);
                }
            }
        }
        return seen;
    }
};

inline VariationGraph build_variation_graph(const Cost& cost,
                                            const std::vector<PointPair>& points) {
    VariationGraph g;
    g.points = points;
    int n = g.n();
    g.cost_at.resize(n);
    g.out.assign(n, {});
    g.in.assign(n, {});
    for (int i = 0; i < n; ++i) {
        ExtReal v = cost.eval(points[i]);
        if (!v.is_finite()) throw InstanceError("graph node outside dom c");
        g.cost_at[i] = v.value();
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            ExtReal cross = i == j ? ExtReal::finite(g.cost_at[i])
                                   : cost.eval_cross(points[j], points[i]);
            if (!cross.is_finite()) continue;
            double w = i == j ? 0.0 : g.cost_at[i] - cross.value();
            g.out[i].push_back({j, w});
            g.in[j].push_back({i, w});
        }
    }
    return g;
}

inline VariationGraph build_variation_graph(const Instance& inst) {
    return build_variation_graph(*inst.cost, inst.points);
}

// --- condensation -----------------------------------------------------------

/// Strongly connected components (mutual reachability classes, reflexive via
/// the trivial path) and the acyclic graph between them. Component ids are
/// in topological order: edges go from lower to higher ids.
struct Condensation {
    std::vector<int> component_id;
    std::vector<std::vector<int>> members;   // ascending node indices per component
    std::vector<std::vector<int>> dag_out;   // unique component edges

    int count() const { return static_cast<int>(members.size()); }
};

inline Condensation condensation(const VariationGraph& g) {
    int n = g.n();
    Condensation c;
    c.component_id.assign(n, -1);

    // Iterative Tarjan; instances can be thousands of nodes deep.
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;  // (node, next edge position)
    int next_index = 0;
    std::vector<std::vector<int>> comps;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (pos < g.out[v].size()) {
                int w = g.out[v][pos].to;
                ++pos;
                if (index[w] == -1) {
                    call.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<int> comp;
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                    if (w == v) break;
                }
                comps.push_back(std::move(comp));
            }
            int finished = v;
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }

    // Tarjan emits components in reverse topological order.
    int m = static_cast<int>(comps.size());
    c.members.resize(m);
    for (int k = 0; k < m; ++k) {
        auto& comp = comps[m - 1 - k];
        std::sort(comp.begin(), comp.end());
        for (int v : comp) c.component_id[v] = k;
        c.members[k] = std::move(comp);
    }
    c.dag_out.assign(m, {});
    for (int i = 0; i < n; ++i) {
        for (const auto& e : g.out[i]) {
            int a = c.component_id[i], b = c.component_id[e.to];
            if (a != b) c.dag_out[a].push_back(b);
        }
    }
    for (auto& adj : c.dag_out) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return c;
}

/// Reachability between components of the condensation DAG, as one bitset
/// row per component (includes the component itself).
inline std::vector<std::vector<std::uint64_t>> component_reachability(const Condensation& c) {
    int m = c.count();
    std::size_t words = (static_cast<std::size_t>(m) + 63) / 64;
    std::vector<std::vector<std::uint64_t>> reach(m, std::vector<std::uint64_t>(words, 0));
    // Component ids are topological, so process sinks first.
    for (int v = m - 1; v >= 0; --v) {
        reach[v][v / 64] |= std::uint64_t{1} << (v % 64);
        for (int w : c.dag_out[v]) {
            for (std::size_t k = 0; k < words; ++k) reach[v][k] |= reach[w][k];
        }
    }
    return reach;
}

// --- semi-connectivity ------------------------------------------------------

/// Connected components of the undirected relation "i reaches j or j
/// reaches i" (multi-step). One block means no partition of the instance
/// can separate it into mutually unreachable halves.
struct SemiConnectivity {
    bool connected = false;
    int block_count = 0;
    std::vector<int> block_id;  // per node
};

inline SemiConnectivity semi_connectivity(const VariationGraph& g) {
    Condensation c = condensation(g);
    auto reach = component_reachability(c);
    int m = c.count();

    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    auto test = [&](int a, int b) {
        return (reach[a][b / 64] >> (b % 64)) & 1;
    };
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            if (test(a, b) || test(b, a)) parent[find(a)] = find(b);
        }
    }
    std::vector<int> label(m, -1);
    SemiConnectivity sc;
    for (int k = 0; k < m; ++k) {
        int r = find(k);
        if (label[r] == -1) label[r] = sc.block_count++;
        label[k] = label[r];
    }
    sc.block_id.resize(g.n());
    for (int v = 0; v < g.n(); ++v) sc.block_id[v] = label[c.component_id[v]];
    sc.connected = sc.block_count == 1;
    return sc;
}

// --- walk enumeration oracle --------------------------------------------------

/// Exact maximum weight over all walks s -> e with at most max_len edges;
/// -inf when there is none (the empty walk covers s == e at length 0).
///
/// Exhaustive enumeration folded by walk length: round k holds the best
/// weight over walks with exactly k edges, so the result is the same
/// maximum a depth-first enumeration of all walks would produce. Work is
/// capped by a node-expansion budget.
inline ExtReal enumerate_walks(const VariationGraph& g, int s, int e, int max_len,
                               std::uint64_t budget = 10'000'000) {
    if (max_len < 0) throw std::invalid_argument("enumerate_walks: max_len must be >= 0");
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> cur(g.n(), ninf), nxt;
    cur[s] = 0.0;
    double best = (s == e) ? 0.0 : ninf;
    std::uint64_t visits = 0;
    for (int k = 1; k <= max_len; ++k) {
        nxt.assign(g.n(), ninf);
        bool any = false;
        for (int u = 0; u < g.n(); ++u) {
            if (cur[u] == ninf) continue;
            for (const auto& edge : g.out[u]) {
                if (++visits > budget) {
                    throw BudgetError("enumerate_walks: node-expansion budget exceeded");
                }
                double cand = cur[u] + edge.w;
                if (cand > nxt[edge.to]) {
                    nxt[edge.to] = cand;
                    any = true;
                }
            }
        }
        cur.swap(nxt);
        if (cur[e] > best) best = cur[e];
        if (!any) break;
    }
    return best == ninf ? ExtReal::neg_inf() : ExtReal::finite(best);
}

// --- DOT export ---------------------------------------------------------------

inline std::string condensation_to_dot(const Condensation& c) {
    std::ostringstream os;
    os << "digraph condensation {\n";
    for (int k = 0; k < c.count(); ++k) {
        os << "  c" << k << " [label=\"{";
        for (std::size_t i = 0; i < c.members[k].size(); ++i) {
            if (i) os << ",";
            os << c.members[k][i];
        }
        os << "}\"];\n";
    }
    for (int k = 0; k < c.count(); ++k) {
        for (int w : c.dag_out[k]) os << "  c" << k << " -> c" << w << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace potlab
