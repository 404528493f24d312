#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace potlab {

struct ExtRealError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A value in the extended real line R ∪ {-inf, +inf}.
///
/// Conventions: sup over an empty collection is -inf, inf over an empty
/// collection is +inf, and (+inf) + (-inf) is a reported error rather than
/// a silent value.
class ExtReal {
public:
    enum class Tag { Finite, NegInf, PosInf };

    ExtReal() : tag_(Tag::Finite), value_(0.0) {}

    static ExtReal finite(double v) {
        if (!std::isfinite(v)) {
            throw ExtRealError("ExtReal::finite called with non-finite double");
        }
        ExtReal r;
        r.tag_ = Tag::Finite;
        r.value_ = v;
        return r;
    }
    static ExtReal neg_inf() {
        ExtReal r;
        r.tag_ = Tag::NegInf;
        return r;
    }
    static ExtReal pos_inf() {
        ExtReal r;
        r.tag_ = Tag::PosInf;
        return r;
    }

    Tag tag() const { return tag_; }
    bool is_finite() const { return tag_ == Tag::Finite; }
    bool is_neg_inf() const { return tag_ == Tag::NegInf; }
    bool is_pos_inf() const { return tag_ == Tag::PosInf; }

    double value() const {
        if (!is_finite()) {
            throw ExtRealError("ExtReal::value on " + to_string());
        }
        return value_;
    }

    /// Finite value, or the IEEE infinity matching the tag. Handy for
    /// comparisons and hot loops that use sentinel doubles.
    double as_double() const {
        switch (tag_) {
            case Tag::Finite: return value_;
            case Tag::NegInf: return -std::numeric_limits<double>::infinity();
            case Tag::PosInf: return std::numeric_limits<double>::infinity();
        }
        return 0.0;
    }

    /// Build from a sentinel double (IEEE ±inf map to the infinite tags).
    static ExtReal from_double(double v) {
        if (std::isnan(v)) throw ExtRealError("ExtReal::from_double(NaN)");
        if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
        return finite(v);
    }

    ExtReal operator+(const ExtReal& o) const {
        if (is_pos_inf()) {
            if (o.is_neg_inf()) throw ExtRealError("(+inf) + (-inf) is undefined");
            return pos_inf();
        }
        if (is_neg_inf()) {
            if (o.is_pos_inf()) throw ExtRealError("(-inf) + (+inf) is undefined");
            return neg_inf();
        }
        if (!o.is_finite()) return o;
        return finite(value_ + o.value_);
    }

    ExtReal operator-() const {
        if (is_pos_inf()) return neg_inf();
        if (is_neg_inf()) return pos_inf();
        return finite(-value_);
    }

    ExtReal operator-(const ExtReal& o) const { return *this + (-o); }

    // Total order: -inf < every finite < +inf.
    bool operator<(const ExtReal& o) const {
        if (tag_ == o.tag_) {
            return is_finite() && value_ < o.value_;
        }
        if (is_neg_inf()) return true;
        if (is_pos_inf()) return false;
        return o.is_pos_inf();
    }
    bool operator>(const ExtReal& o) const { return o < *this; }
    bool operator<=(const ExtReal& o) const { return !(o < *this); }
    bool operator>=(const ExtReal& o) const { return !(*this < o); }
    bool operator==(const ExtReal& o) const {
        return tag_ == o.tag_ && (!is_finite() || value_ == o.value_);
    }
    bool operator!=(const ExtReal& o) const { return !(*this == o); }

    static ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
    static ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

    /// sup of a range of ExtReal; sup ∅ = -inf.
    template <typename Range>
    static ExtReal sup(const Range& r) {
        ExtReal best = neg_inf();
        for (const auto& v : r) best = max(best, v);
        return best;
    }

    /// inf of a range of ExtReal; inf ∅ = +inf.
    template <typename Range>
    static ExtReal inf(const Range& r) {
        ExtReal best = pos_inf();
        for (const auto& v : r) best = min(best, v);
        return best;
    }

    std::string to_string() const {
        switch (tag_) {
            case Tag::NegInf: return "-inf";
            case Tag::PosInf: return "+inf";
            case Tag::Finite: break;
        }
        std::string s = std::to_string(value_);
        return s;
    }

private:
    Tag tag_;
    double value_;
};

}  // namespace potlab
