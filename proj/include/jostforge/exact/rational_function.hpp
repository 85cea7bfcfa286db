#pragma once

#include "jostforge/exact/poly.hpp"

#include <complex>
#include <string>

namespace jostforge::exact {

/// Element of Q(i)(x) in canonical form: coprime numerator and denominator,
/// monic denominator. Two equal functions have identical representations.
class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(Poly p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)
    RationalFunction(GaussianRational c) : RationalFunction(Poly(std::move(c))) {}  // NOLINT(google-explicit-constructor)
    RationalFunction(long c) : RationalFunction(Poly(c)) {}  // NOLINT(google-explicit-constructor)

    /// Canonical form of num/den; throws std::invalid_argument when den is zero.
    static RationalFunction normalize(const Poly& num, const Poly& den);
    static RationalFunction x() { return RationalFunction(Poly::x()); }

    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const noexcept { return den_.degree() == 0; }
    /// deg den - deg num: the order of vanishing at infinity.
    int order_at_infinity() const;

    RationalFunction derivative() const;
    /// Throws std::domain_error at a pole.
    GaussianRational operator()(const GaussianRational& at) const;
    std::complex<double> eval(std::complex<double> at) const;

    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);
    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
    RationalFunction operator-() const;
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string to_string(const std::string& var = "x") const;

private:
    RationalFunction(Poly num, Poly den, bool /*canonical*/) : num_(std::move(num)), den_(std::move(den)) {}
    Poly num_;
    Poly den_;
};

RationalFunction pow(const RationalFunction& f, int exponent);

}  // namespace jostforge::exact
