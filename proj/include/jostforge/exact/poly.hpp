#pragma once

#include "jostforge/exact/gaussian_rational.hpp"

#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace jostforge::exact {

/// Dense univariate polynomial over Q(i), coefficients lowest degree first.
/// The coefficient vector never carries trailing zeros; the zero polynomial is empty.
class Poly {
public:
    Poly() = default;
    Poly(GaussianRational c);  // NOLINT(google-explicit-constructor)
    Poly(long c) : Poly(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
    explicit Poly(std::vector<GaussianRational> coeffs);
    Poly(std::initializer_list<GaussianRational> coeffs) : Poly(std::vector<GaussianRational>(coeffs)) {}

    static Poly x() { return Poly({GaussianRational(0), GaussianRational(1)}); }
    static Poly monomial(const GaussianRational& c, int degree);
    /// (x - root)
    static Poly linear_factor(const GaussianRational& root) { return Poly({-root, GaussianRational(1)}); }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }
    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<GaussianRational>& coeffs() const noexcept { return coeffs_; }
    GaussianRational coeff(int j) const;
    const GaussianRational& leading() const;

    Poly monic() const;
    Poly derivative() const;
    GaussianRational operator()(const GaussianRational& at) const;
    std::complex<double> eval(std::complex<double> at) const;
    /// p(x + s)
    Poly shifted(const GaussianRational& s) const;
    /// x^deg p(1/x) for deg = degree().
    Poly reversed() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    Poly operator-() const;
    friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<GaussianRational> coeffs_;
};

/// Quotient and remainder; throws std::domain_error for a zero divisor.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Monic greatest common divisor (zero only when both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);
Poly pow(const Poly& p, int exponent);

/// Square-free factorisation (Yun): returns (factor, multiplicity) pairs with
/// monic, pairwise coprime, square-free factors whose product is p.monic().
std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p);

}  // namespace jostforge::exact
