#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "potlab/extreal.hpp"
#include "potlab/point.hpp"

namespace potlab {

struct CostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Monotonicity { None, Ominus, Oplus };

inline std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::Ominus: return "ominus";
        case Monotonicity::Oplus: return "oplus";
        default: return "none";
    }
}

enum class CostKind {
    ClassicalPairing,
    Polar,
    Coulomb,
    Bregman,
    HellingerKantorovich,
    HalflineDiag,
    Example51,
    Tabulated,
};

enum class DomainBranch { Full, D1, D2 };

enum class BregmanGenerator { Square, NegativeEntropy };

/// A separable perturbation term g(x) or h(y) on a scalar coordinate.
struct PerturbationSpec {
    enum class Kind { None, Linear, Quadratic, Table } kind = Kind::None;
    double a = 0.0, b = 0.0, c = 0.0;      // a*t + b  /  a*t^2 + b*t + c
    std::map<double, double> table;        // exact-key lookup

    bool active() const { return kind != Kind::None; }

    double operator()(double t) const {
        switch (kind) {
            case Kind::None: return 0.0;
            case Kind::Linear: return a * t + b;
            case Kind::Quadratic: return (a * t + b) * t + c;
            case Kind::Table: {
                auto it = table.find(t);
                if (it == table.end()) {
                    throw CostError("perturbation table has no entry for " + std::to_string(t));
                }
                return it->second;
            }
        }
        return 0.0;
    }
};

struct TabulatedParams {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::vector<ExtReal>> values;  // values[i][j] = c(xs[i], ys[j])
};

/// Serializable description of a registry cost. `declared` left unset picks
/// the per-kind default.
struct CostSpec {
    CostKind kind = CostKind::Coulomb;
    double pairing_sign = -1.0;                 // classical_pairing: c = sign * <x,y>
    DomainBranch branch = DomainBranch::Full;   // polar / example51
    BregmanGenerator generator = BregmanGenerator::Square;
    TabulatedParams table;
    std::optional<Monotonicity> declared;
    PerturbationSpec g;  // added to finite values as g(x)
    PerturbationSpec h;  // added to finite values as h(y)
};

/// An evaluable cost c: X×Y → R ∪ {+inf}. Evaluation is pure; all queries
/// are safe for concurrent read-only use.
class Cost {
public:
    virtual ~Cost() = default;

    ExtReal eval(const std::vector<double>& x, const std::vector<double>& y,
                 bool y_irrational = false) const {
        check_dims(x, y);
        if (!in_domain_raw(x, y)) return ExtReal::pos_inf();
        double v = value_in_domain(x, y, y_irrational);
        if (g_.active() || h_.active()) {
            v += g_(x[0]) + h_(y[0]);
        }
        return ExtReal::finite(v);
    }

    ExtReal eval(const PointPair& p) const { return eval(p.x, p.y, p.y_irrational()); }

    /// Cross term c(x_of.x, y_of.y); the y rationality marker travels with
    /// the point contributing the y coordinate.
    ExtReal eval_cross(const PointPair& x_of, const PointPair& y_of) const {
        return eval(x_of.x, y_of.y, y_of.y_irrational());
    }

    bool in_domain(const std::vector<double>& x, const std::vector<double>& y) const {
        check_dims(x, y);
        return in_domain_raw(x, y);
    }
    bool in_domain(const PointPair& p) const { return in_domain(p.x, p.y); }

    /// 0 means any coordinate dimension is accepted.
    virtual std::size_t fixed_dim() const { return 0; }
    virtual bool domain_open() const = 0;
    virtual bool continuous_on_domain() const = 0;
    virtual std::string name() const = 0;

    /// Exact product-metric distance from an in-domain point to bdry(D),
    /// when a closed form is known. +inf means D is the whole space.
    virtual std::optional<ExtReal> boundary_distance(const PointPair&) const {
        return std::nullopt;
    }

    Monotonicity declared_monotonicity() const { return declared_; }
    void set_declared_monotonicity(Monotonicity m) { declared_ = m; }
    void set_perturbation(PerturbationSpec g, PerturbationSpec h) {
        if ((g.active() || h.active()) && fixed_dim() != 1) {
            // Separable perturbations are part of the planar theory only.
            if (fixed_dim() > 1) throw CostError("perturbation requires scalar coordinates");
        }
        g_ = std::move(g);
        h_ = std::move(h);
    }
    bool perturbed() const { return g_.active() || h_.active(); }
    const PerturbationSpec& perturbation_g() const { return g_; }
    const PerturbationSpec& perturbation_h() const { return h_; }

protected:
    virtual bool in_domain_raw(const std::vector<double>& x,
                               const std::vector<double>& y) const = 0;
    virtual double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                                   bool y_irrational) const = 0;

    void check_dims(const std::vector<double>& x, const std::vector<double>& y) const {
        if (x.size() != y.size() || x.empty()) {
            throw CostError(name() + ": x and y must have equal dimension >= 1");
        }
        if (fixed_dim() != 0 && x.size() != fixed_dim()) {
            throw CostError(name() + ": requires coordinate dimension " +
                            std::to_string(fixed_dim()));
        }
        if ((g_.active() || h_.active()) && x.size() != 1) {
            throw CostError(name() + ": perturbation requires scalar coordinates");
        }
    }

private:
    Monotonicity declared_ = Monotonicity::None;
    PerturbationSpec g_, h_;
};

using CostPtr = std::shared_ptr<const Cost>;

namespace costs {

class ClassicalPairing final : public Cost {
public:
    explicit ClassicalPairing(double sign = -1.0) : sign_(sign) {
        set_declared_monotonicity(sign < 0 ? Monotonicity::Oplus : Monotonicity::Ominus);
    }
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override { return sign_ < 0 ? "classical_pairing" : "classical_pairing(+)"; }
    std::optional<ExtReal> boundary_distance(const PointPair&) const override {
        return ExtReal::pos_inf();
    }

protected:
    bool in_domain_raw(const std::vector<double>&, const std::vector<double>&) const override {
        return true;
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        return sign_ * dot(x, y);
    }

private:
    double sign_;
};

class Polar final : public Cost {
public:
    explicit Polar(DomainBranch branch = DomainBranch::Full) : branch_(branch) {
        if (branch != DomainBranch::Full) set_declared_monotonicity(Monotonicity::Ominus);
    }
    std::size_t fixed_dim() const override { return branch_ == DomainBranch::Full ? 0 : 1; }
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override {
        switch (branch_) {
            case DomainBranch::D1: return "polar[d1]";
            case DomainBranch::D2: return "polar[d2]";
            default: return "polar";
        }
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        double p = dot(x, y);
        switch (branch_) {
            case DomainBranch::D1: return x[0] > 0.0 && p > 1.0;
            case DomainBranch::D2: return x[0] < 0.0 && p > 1.0;
            default: return p > 1.0;
        }
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        return -std::log(dot(x, y) - 1.0);
    }

private:
    DomainBranch branch_;
};

class Coulomb final : public Cost {
public:
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override { return "coulomb"; }
    std::optional<ExtReal> boundary_distance(const PointPair& p) const override {
        return ExtReal::finite(euclid(p.x, p.y) / std::sqrt(2.0));
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        return sq_norm(x, y) > 0.0;
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        return 1.0 / euclid(x, y);
    }
};

class Bregman final : public Cost {
public:
    explicit Bregman(BregmanGenerator gen) : gen_(gen) {
        set_declared_monotonicity(Monotonicity::Oplus);
    }
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override {
        return gen_ == BregmanGenerator::Square ? "bregman[square]" : "bregman[negative_entropy]";
    }
    std::optional<ExtReal> boundary_distance(const PointPair& p) const override {
        if (gen_ == BregmanGenerator::Square) return ExtReal::pos_inf();
        double m = std::numeric_limits<double>::infinity();
        for (double t : p.x) m = std::min(m, t);
        for (double t : p.y) m = std::min(m, t);
        return ExtReal::finite(m);
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        if (gen_ == BregmanGenerator::Square) return true;
        for (double t : x) {
            if (!(t > 0.0)) return false;
        }
        for (double t : y) {
            if (!(t > 0.0)) return false;
        }
        return true;
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        if (gen_ == BregmanGenerator::Square) {
            // f(t) = |t|^2/2, so c(x,y) = |x-y|^2/2.
            return 0.5 * sq_norm(x, y);
        }
        // f(t) = sum t_i ln t_i - t_i on ]0,inf[^n gives the KL form.
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += x[i] * std::log(x[i] / y[i]) - x[i] + y[i];
        }
        return s;
    }

private:
    BregmanGenerator gen_;
};

class HellingerKantorovich final : public Cost {
public:
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override { return "hellinger_kantorovich"; }
    std::optional<ExtReal> boundary_distance(const PointPair& p) const override {
        constexpr double half_pi = 1.5707963267948966;
        return ExtReal::finite((half_pi - euclid(p.x, p.y)) / std::sqrt(2.0));
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        constexpr double half_pi = 1.5707963267948966;
        return euclid(x, y) < half_pi;
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        double d = euclid(x, y);
        return -2.0 * std::log(std::cos(d));
    }
};

/// c(x,y) = y - x for y <= x, +inf for x < y. The domain is a closed
/// half-plane, so the metric machinery refuses this cost.
class HalflineDiag final : public Cost {
public:
    std::size_t fixed_dim() const override { return 1; }
    bool domain_open() const override { return false; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override { return "halfline_diag"; }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        return y[0] <= x[0];
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        return y[0] - x[0];
    }
};

/// The polar cost plus the Dirichlet indicator of rational y. Floating
/// point cannot see rationality, so the "irrational-y" point tag decides:
/// absent tag means rational and the +1 is applied.
class Example51 final : public Cost {
public:
    explicit Example51(DomainBranch branch = DomainBranch::Full) : branch_(branch) {
        if (branch != DomainBranch::Full) set_declared_monotonicity(Monotonicity::Ominus);
    }
    std::size_t fixed_dim() const override { return 1; }
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return false; }
    std::string name() const override {
        switch (branch_) {
            case DomainBranch::D1: return "example51[d1]";
            case DomainBranch::D2: return "example51[d2]";
            default: return "example51";
        }
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        double p = x[0] * y[0];
        switch (branch_) {
            case DomainBranch::D1: return x[0] > 0.0 && p > 1.0;
            case DomainBranch::D2: return x[0] < 0.0 && p > 1.0;
            default: return p > 1.0;
        }
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool y_irrational) const override {
        double v = -std::log(x[0] * y[0] - 1.0);
        return y_irrational ? v : v + 1.0;
    }

private:
    DomainBranch branch_;
};

/// Finite cost table over scalar grids; coordinates off the grid are
/// outside the domain.
class Tabulated final : public Cost {
public:
    explicit Tabulated(TabulatedParams p) : p_(std::move(p)) {
        if (p_.values.size() != p_.xs.size()) {
            throw CostError("tabulated: row count must match xs");
        }
        for (const auto& row : p_.values) {
            if (row.size() != p_.ys.size()) throw CostError("tabulated: column count must match ys");
            for (const auto& v : row) {
                if (v.is_neg_inf()) throw CostError("tabulated: -inf is not a cost value");
            }
        }
    }
    std::size_t fixed_dim() const override { return 1; }
    bool domain_open() const override { return false; }
    bool continuous_on_domain() const override { return false; }
    std::string name() const override { return "tabulated"; }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        auto i = index_of(p_.xs, x[0]);
        auto j = index_of(p_.ys, y[0]);
        if (!i || !j) return false;
        return p_.values[*i][*j].is_finite();
    }
    double value_in_domain(const std::vector<double>& x, const std::vector<double>& y,
                           bool) const override {
        return p_.values[*index_of(p_.xs, x[0])][*index_of(p_.ys, y[0])].value();
    }

private:
    static std::optional<std::size_t> index_of(const std::vector<double>& v, double t) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == t) return i;
        }
        return std::nullopt;
    }
    TabulatedParams p_;
};

}  // namespace costs

inline CostPtr make_cost(const CostSpec& spec) {
    std::shared_ptr<Cost> c;
    switch (spec.kind) {
        case CostKind::ClassicalPairing:
            c = std::make_shared<costs::ClassicalPairing>(spec.pairing_sign);
            break;
        case CostKind::Polar:
            c = std::make_shared<costs::Polar>(spec.branch);
            break;
        case CostKind::Coulomb:
            c = std::make_shared<costs::Coulomb>();
            break;
        case CostKind::Bregman:
            c = std::make_shared<costs::Bregman>(spec.generator);
            break;
        case CostKind::HellingerKantorovich:
            c = std::make_shared<costs::HellingerKantorovich>();
            break;
        case CostKind::HalflineDiag:
            c = std::make_shared<costs::HalflineDiag>();
            break;
        case CostKind::Example51:
            c = std::make_shared<costs::Example51>(spec.branch);
            break;
        case CostKind::Tabulated:
            c = std::make_shared<costs::Tabulated>(spec.table);
            break;
    }
    if (spec.declared) c->set_declared_monotonicity(*spec.declared);
    c->set_perturbation(spec.g, spec.h);
    return c;
}

// --- c-conjugates -----------------------------------------------------------

/// psi^c(query_y) = inf { c(x, query_y) - psi(x) : x in sample, (x, query_y) in D }.
/// The restriction X_y is taken internally; inf over an empty slice is +inf.
inline ExtReal conjugate_transform(const Cost& c, const std::vector<std::vector<double>>& sample_x,
                                   const std::function<double(const std::vector<double>&)>& psi,
                                   const std::vector<double>& query_y, bool y_irrational = false) {
    if (sample_x.empty()) throw CostError("conjugate_transform: empty sample");
    ExtReal best = ExtReal::pos_inf();
    for (const auto& x : sample_x) {
        ExtReal cv = c.eval(x, query_y, y_irrational);
        if (!cv.is_finite()) continue;
        best = ExtReal::min(best, ExtReal::finite(cv.value() - psi(x)));
    }
    return best;
}

/// Mirrored transform: phi^cbar(query_x) = inf over the Y_x slice.
inline ExtReal conjugate_transform_bar(const Cost& c,
                                       const std::vector<std::vector<double>>& sample_y,
                                       const std::function<double(const std::vector<double>&)>& phi,
                                       const std::vector<double>& query_x) {
    if (sample_y.empty()) throw CostError("conjugate_transform_bar: empty sample");
    ExtReal best = ExtReal::pos_inf();
    for (const auto& y : sample_y) {
        ExtReal cv = c.eval(query_x, y);
        if (!cv.is_finite()) continue;
        best = ExtReal::min(best, ExtReal::finite(cv.value() - phi(y)));
    }
    return best;
}

// --- monotonicity audit -----------------------------------------------------

inline bool leq_ominus(const PointPair& p, const PointPair& q) {
    return p.sx() <= q.sx() && p.sy() >= q.sy();
}
inline bool leq_oplus(const PointPair& p, const PointPair& q) {
    return p.sx() <= q.sx() && p.sy() <= q.sy();
}
inline bool strictly_oplus(const PointPair& p, const PointPair& q) {
    return p.sx() < q.sx() && p.sy() < q.sy();
}
inline bool strictly_ominus(const PointPair& p, const PointPair& q) {
    return p.sx() < q.sx() && p.sy() > q.sy();
}

struct AuditWitness {
    PointPair a, b;
    ExtReal rectangle_sum;
    bool corner_out_of_domain = false;
};

struct AuditReport {
    bool consistent_ominus = true;
    bool consistent_oplus = true;
    std::vector<AuditWitness> ominus_witnesses;
    std::vector<AuditWitness> oplus_witnesses;
    std::vector<AuditWitness> domain_convexity_counterexamples;
    // grid mode: sign statistics of the central finite-difference d2c/dxdy
    std::size_t grid_positive = 0, grid_negative = 0, grid_near_zero = 0;
};

/// Rectangle-sum audit of the monotone-cost implication. A probe pair that
/// is strictly comparable in the opposite order yet has rectangle sum
/// <= eps witnesses a violation; a missing corner where the implication
/// needs one in D is recorded as a domain-convexity counterexample.
inline AuditReport monotonicity_audit(const Cost& c,
                                      const std::vector<std::pair<PointPair, PointPair>>& probes,
                                      double eps) {
    AuditReport rep;
    for (const auto& [p, q] : probes) {
        if (p.dim() != 1 || q.dim() != 1) throw CostError("monotonicity_audit: 2-coordinate cost only");
        ExtReal cp = c.eval(p), cq = c.eval(q);
        if (!cp.is_finite() || !cq.is_finite()) {
            throw CostError("monotonicity_audit: probe pair outside the domain");
        }
        ExtReal c_qx_py = c.eval_cross(q, p);  // c(x_e, y_s)
        ExtReal c_px_qy = c.eval_cross(p, q);  // c(x_s, y_e)
        bool corners_ok = c_qx_py.is_finite() && c_px_qy.is_finite();
        ExtReal sum = corners_ok
                          ? ExtReal::finite(cp.value() - c_qx_py.value() + cq.value() - c_px_qy.value())
                          : ExtReal::neg_inf();

        bool strict_plus = strictly_oplus(p, q) || strictly_oplus(q, p);
        bool strict_minus = strictly_ominus(p, q) || strictly_ominus(q, p);

        if (strict_plus && sum <= ExtReal::finite(eps)) {
            AuditWitness w{p, q, sum, !corners_ok};
            rep.ominus_witnesses.push_back(w);
            rep.consistent_ominus = false;
            if (!corners_ok) rep.domain_convexity_counterexamples.push_back(w);
        }
        if (strict_minus && sum <= ExtReal::finite(eps)) {
            AuditWitness w{p, q, sum, !corners_ok};
            rep.oplus_witnesses.push_back(w);
            rep.consistent_oplus = false;
            if (!corners_ok) rep.domain_convexity_counterexamples.push_back(w);
        }
    }
    return rep;
}

/// Grid mode: central finite-difference estimate of d2c/dxdy at each grid
/// point with step h; tallies the sign pattern.
inline AuditReport monotonicity_audit_grid(const Cost& c, const std::vector<PointPair>& grid,
                                           double h, double eps) {
    AuditReport rep;
    for (const auto& p : grid) {
        if (p.dim() != 1) throw CostError("monotonicity_audit: 2-coordinate cost only");
        double x = p.sx(), y = p.sy();
        ExtReal pp = c.eval({x + h}, {y + h});
        ExtReal pm = c.eval({x + h}, {y - h});
        ExtReal mp = c.eval({x - h}, {y + h});
        ExtReal mm = c.eval({x - h}, {y - h});
        if (!(pp.is_finite() && pm.is_finite() && mp.is_finite() && mm.is_finite())) continue;
        double fd = (pp.value() - pm.value() - mp.value() + mm.value()) / (4.0 * h * h);
        if (fd > eps) {
            ++rep.grid_positive;
        } else if (fd < -eps) {
            ++rep.grid_negative;
        } else {
            ++rep.grid_near_zero;
        }
    }
    rep.consistent_ominus = rep.grid_negative == 0;  // d2c/dxdy > 0 everywhere
    rep.consistent_oplus = rep.grid_positive == 0;   // d2c/dxdy < 0 everywhere
    return rep;
}

}  // namespace potlab
