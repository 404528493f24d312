#pragma once

#include "potlab/cost.hpp"

namespace potlab::fixtures {

/// c = 0 on the open unit disk of the product plane, +inf outside.
class DiskCost final : public Cost {
public:
    std::size_t fixed_dim() const override { return 1; }
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override { return "disk"; }
    std::optional<ExtReal> boundary_distance(const PointPair& p) const override {
        double r = std::sqrt(p.sx() * p.sx() + p.sy() * p.sy());
        return ExtReal::finite(1.0 - r);
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        return x[0] * x[0] + y[0] * y[0] < 1.0;
    }
    double value_in_domain(const std::vector<double>&, const std::vector<double>&,
                           bool) const override {
        return 0.0;
    }
};

/// c = 0 on {x,y > 0} ∪ {x,y < 0}, +inf elsewhere: two quadrants whose
/// points are pairwise disconnected across the split.
class TwoQuadrantCost final : public Cost {
public:
    std::size_t fixed_dim() const override { return 1; }
    bool domain_open() const override { return true; }
    bool continuous_on_domain() const override { return true; }
    std::string name() const override { return "two_quadrant"; }
    std::optional<ExtReal> boundary_distance(const PointPair& p) const override {
        return ExtReal::finite(std::min(std::abs(p.sx()), std::abs(p.sy())));
    }

protected:
    bool in_domain_raw(const std::vector<double>& x, const std::vector<double>& y) const override {
        return (x[0] > 0.0 && y[0] > 0.0) || (x[0] < 0.0 && y[0] < 0.0);
    }
    double value_in_domain(const std::vector<double>&, const std::vector<double>&,
                           bool) const override {
        return 0.0;
    }
};

}  // namespace potlab::fixtures
