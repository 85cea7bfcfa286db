#pragma once

#include "jostforge/exact/gaussian_rational.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace jostforge::exact {

/// Finite Q(i)-linear combination of principal square roots of Gaussian
/// rationals, kept with pairwise distinct square classes. Square roots of
/// distinct square classes are linearly independent over Q(i), so zero and
/// integrality tests on the canonical form are exact.
class RadicalSum {
public:
    struct Term {
        GaussianRational radicand;  // 1 for the rational part
        GaussianRational coeff;
    };

    RadicalSum() = default;
    RadicalSum(GaussianRational q);  // NOLINT(google-explicit-constructor)
    RadicalSum(long q) : RadicalSum(GaussianRational(q)) {}  // NOLINT(google-explicit-constructor)

    /// Principal square root (nonnegative real part; nonnegative imaginary part on the cut).
    static RadicalSum sqrt(const GaussianRational& d);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::optional<GaussianRational> as_rational() const;
    bool is_nonnegative_integer() const;
    std::complex<double> to_complex() const;

    RadicalSum& operator+=(const RadicalSum& o);
    RadicalSum& operator-=(const RadicalSum& o);
    RadicalSum& operator*=(const RadicalSum& o);
    friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
    friend RadicalSum operator-(RadicalSum a, const RadicalSum& b) { return a -= b; }
    friend RadicalSum operator*(RadicalSum a, const RadicalSum& b) { return a *= b; }
    RadicalSum operator-() const;
    friend bool operator==(const RadicalSum& a, const RadicalSum& b) { return (a - b).is_zero(); }

    std::string to_string() const;

private:
    void add_term(const GaussianRational& radicand, const GaussianRational& coeff);
    std::vector<Term> terms_;
};

/// Principal complex square root with the branch convention used throughout.
std::complex<double> principal_sqrt(std::complex<double> z);

}  // namespace jostforge::exact
