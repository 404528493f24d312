#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace potlab {

/// A pair (x, y) ∈ X × Y with X = Y = R^n, plus free-form string markers.
/// Tags are carried verbatim through every operation; the only one the
/// library interprets is "irrational-y" (see the example51 cost).
struct PointPair {
    std::vector<double> x;
    std::vector<double> y;
    std::set<std::string> tags;

    PointPair() = default;
    PointPair(std::vector<double> xs, std::vector<double> ys, std::set<std::string> t = {})
        : x(std::move(xs)), y(std::move(ys)), tags(std::move(t)) {}
    PointPair(double xs, double ys, std::set<std::string> t = {})
        : x{xs}, y{ys}, tags(std::move(t)) {}

    std::size_t dim() const { return x.size(); }

    // Scalar accessors for 2-coordinate instances.
    double sx() const { return x.at(0); }
    double sy() const { return y.at(0); }

    bool has_tag(const std::string& t) const { return tags.count(t) != 0; }
    bool y_irrational() const { return has_tag("irrational-y"); }

    bool same_x(const PointPair& o) const { return x == o.x; }

    bool operator==(const PointPair& o) const { return x == o.x && y == o.y && tags == o.tags; }
};

inline double sq_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    return std::sqrt(sq_norm(a, b));
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Product metric on X × Y: sqrt(d_X(x,u)^2 + d_Y(y,v)^2).
inline double product_dist(const PointPair& p, const PointPair& q) {
    return std::sqrt(sq_norm(p.x, q.x) + sq_norm(p.y, q.y));
}

}  // namespace potlab
