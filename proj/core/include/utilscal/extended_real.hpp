#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>

namespace utilscal {

/// A value of R ∪ {-inf}. Minus infinity is a semantic state (outside the
/// utility domain), never encoded as NaN, and is kept distinct from a finite
/// double so serialization and comparisons stay unambiguous.
class ExtendedReal {
public:
    constexpr ExtendedReal() = default;
    constexpr explicit ExtendedReal(double v) : value_(v), finite_(true) {}

    static constexpr ExtendedReal negative_infinity() { return ExtendedReal{}; }

    [[nodiscard]] constexpr bool is_finite() const { return finite_; }
    [[nodiscard]] constexpr bool is_negative_infinity() const { return !finite_; }

    /// Finite payload. Precondition: is_finite().
    [[nodiscard]] constexpr double value() const { return value_; }

    /// Lossy view for numeric consumers: -inf maps to -HUGE_VAL.
    [[nodiscard]] double as_double() const
    {
        return finite_ ? value_ : -std::numeric_limits<double>::infinity();
    }

    friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b)
    {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }

    friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b)
    {
        if (!a.finite_ && !b.finite_) return std::partial_ordering::equivalent;
        if (!a.finite_) return std::partial_ordering::less;
        if (!b.finite_) return std::partial_ordering::greater;
        return a.value_ <=> b.value_;
    }

    friend constexpr bool operator==(const ExtendedReal& a, double b) { return a == ExtendedReal(b); }
    friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, double b)
    {
        return a <=> ExtendedReal(b);
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& v)
    {
        if (v.finite_) return os << v.value_;
        return os << "-inf";
    }

private:
    double value_ = 0.0;
    bool finite_ = false;
};

}  // namespace utilscal
