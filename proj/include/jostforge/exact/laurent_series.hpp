#pragma once

#include "jostforge/exact/rational_function.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jostforge::exact {

/// A finite point of C or the point at infinity.
class ExpansionPoint {
public:
    static ExpansionPoint at(GaussianRational s) { return ExpansionPoint(std::move(s)); }
    static ExpansionPoint infinity() { return ExpansionPoint(); }

    bool is_infinity() const noexcept { return !point_.has_value(); }
    const GaussianRational& location() const;

    friend bool operator==(const ExpansionPoint& a, const ExpansionPoint& b) { return a.point_ == b.point_; }

private:
    ExpansionPoint() = default;
    explicit ExpansionPoint(GaussianRational s) : point_(std::move(s)) {}
    std::optional<GaussianRational> point_;
};

/// Truncated Laurent expansion in the local parameter t = x - s, or t = 1/x
/// at infinity. Coefficients are known for t-orders in [start, bound); every
/// operation propagates the bound so results never claim precision the
/// operands did not have.
///
/// Orders exposed through coefficient() are powers of x: at a finite point
/// they coincide with t-orders, at infinity x^j corresponds to t^-j.
class LaurentSeries {
public:
    LaurentSeries(ExpansionPoint center, int start, std::vector<GaussianRational> coeffs, int bound);

    const ExpansionPoint& center() const noexcept { return center_; }

    /// Coefficient of x^order; throws std::out_of_range when the order is
    /// beyond the guaranteed truncation.
    GaussianRational coefficient(int order) const;
    /// Leading x-order (lowest at a finite point, highest at infinity).
    int min_order() const;
    /// Last x-order whose coefficient is guaranteed.
    int truncation_order() const;

    /// Local-parameter view.
    int t_valuation() const;
    int t_bound() const noexcept { return bound_; }
    GaussianRational t_coefficient(int t_order) const;
    bool known_zero() const;

    LaurentSeries derivative() const;
    LaurentSeries inverse() const;
    /// Copy keeping only x-orders up to (finite) or down to (infinity) the given order.
    LaurentSeries truncated_through(int order) const;
    LaurentSeries scaled(const GaussianRational& c) const;

    LaurentSeries& operator+=(const LaurentSeries& o);
    LaurentSeries& operator-=(const LaurentSeries& o);
    LaurentSeries& operator*=(const LaurentSeries& o);
    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
    friend LaurentSeries operator*(LaurentSeries a, const LaurentSeries& b) { return a *= b; }

    /// Exact sum of the known terms as a rational function of x.
    RationalFunction resum() const;

    std::string to_string() const;

private:
    void check_center(const LaurentSeries& o) const;
    ExpansionPoint center_;
    int start_;
    std::vector<GaussianRational> coeffs_;
    int bound_;
};

/// Laurent expansion of f at a point, guaranteed through the given x-order
/// (ascending at a finite point, descending at infinity).
LaurentSeries laurent_expand(const RationalFunction& f, const ExpansionPoint& at, int through_order);

/// Square root with the principal branch for the leading coefficient.
/// Throws std::domain_error for odd leading order and when the leading
/// coefficient has no square root in Q(i) (see factored_sqrt for that case).
LaurentSeries series_sqrt(const LaurentSeries& s);

/// sqrt(s) = sqrt(radicand) * series with every coefficient in Q(i):
/// radicand is the leading coefficient of s, and the returned series has
/// leading coefficient 1. Throws std::domain_error for odd leading order.
std::pair<GaussianRational, LaurentSeries> factored_sqrt(const LaurentSeries& s);

/// [g]_s for a finite center (orders -l..-2) or [g]_inf at infinity (orders 0..l),
/// as an exact finite sum.
RationalFunction polar_part(const LaurentSeries& g);

}  // namespace jostforge::exact
