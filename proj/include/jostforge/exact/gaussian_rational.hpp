#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace jostforge::exact {

/// Exact element of Q(i): a pair of arbitrary-precision rationals.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(mpq_class re, mpq_class im = 0);

    static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }
    /// Parses "p/q", "p", or a terminating decimal such as "-0.25".
    static mpq_class parse_rational(std::string_view text);
    static GaussianRational from_strings(std::string_view re, std::string_view im = "0");

    const mpq_class& re() const noexcept { return re_; }
    const mpq_class& im() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const noexcept { return sgn(im_) == 0; }
    bool is_one() const noexcept { return re_ == 1 && sgn(im_) == 0; }
    bool is_integer() const;
    /// Integer value when is_integer(); throws otherwise.
    long to_long() const;

    GaussianRational conj() const { return {re_, -im_}; }
    mpq_class norm() const { return re_ * re_ + im_ * im_; }
    GaussianRational inverse() const;

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// Principal square root if it lies in Q(i): nonnegative real part,
    /// nonnegative imaginary part when the real part is zero.
    std::optional<GaussianRational> exact_sqrt() const;

    std::string to_string() const;

    GaussianRational& operator+=(const GaussianRational& o);
    GaussianRational& operator-=(const GaussianRational& o);
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    GaussianRational operator-() const { return {-re_, -im_}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    /// Arbitrary total order (real part first) for use as a sort key.
    friend bool lex_less(const GaussianRational& a, const GaussianRational& b) {
        if (a.re_ != b.re_) return a.re_ < b.re_;
        return a.im_ < b.im_;
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& q) {
        return os << q.to_string();
    }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

/// Exact square root of a nonnegative rational, if it is rational.
std::optional<mpq_class> rational_sqrt(const mpq_class& q);

GaussianRational pow(const GaussianRational& base, int exponent);

}  // namespace jostforge::exact
