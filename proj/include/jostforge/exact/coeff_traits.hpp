#pragma once

#include "jostforge/exact/gaussian_rational.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace jostforge::exact {

/// Coefficient-field hooks shared by the multivariate containers.
template <class C>
struct Coeff;

template <>
struct Coeff<GaussianRational> {
    static constexpr bool exact = true;
    static bool is_zero(const GaussianRational& c) { return c.is_zero(); }
    static std::complex<double> to_complex(const GaussianRational& c) { return c.to_complex(); }
    static GaussianRational from_long(long v) { return GaussianRational(v); }
    static std::string to_string(const GaussianRational& c) { return c.to_string(); }
};

template <>
struct Coeff<std::complex<double>> {
    static constexpr bool exact = false;
    static bool is_zero(const std::complex<double>& c) { return c == std::complex<double>(0.0, 0.0); }
    static std::complex<double> to_complex(const std::complex<double>& c) { return c; }
    static std::complex<double> from_long(long v) { return {static_cast<double>(v), 0.0}; }
    static std::string to_string(const std::complex<double>& c) {
        char buf[96];
        if (c.imag() == 0.0) {
            std::snprintf(buf, sizeof buf, "%.17g", c.real());
        } else if (c.real() == 0.0) {
            std::snprintf(buf, sizeof buf, "%.17g*i", c.imag());
        } else {
            std::snprintf(buf, sizeof buf, "(%.17g%+.17g*i)", c.real(), c.imag());
        }
        return buf;
    }
};

}  // namespace jostforge::exact
