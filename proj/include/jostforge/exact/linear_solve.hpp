#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jostforge::exact {

/// Field hooks for the elimination routine. Exact fields pivot on the first
/// nonzero entry; floating fields pivot on the largest magnitude.
template <class T>
struct FieldTraits {
    static bool is_zero(const T& v) { return v.is_zero(); }
    static double pivot_weight(const T& v) { return v.is_zero() ? 0.0 : 1.0; }
    static T zero_like(const T&) { return T(0); }
    static T one_like(const T&) { return T(1); }
    static constexpr bool exact = true;
};

template <>
struct FieldTraits<std::complex<double>> {
    static bool is_zero(const std::complex<double>& v) { return std::abs(v) == 0.0; }
    static double pivot_weight(const std::complex<double>& v) { return std::abs(v); }
    static std::complex<double> zero_like(const std::complex<double>&) { return {0.0, 0.0}; }
    static std::complex<double> one_like(const std::complex<double>&) { return {1.0, 0.0}; }
    static constexpr bool exact = false;
};

enum class SolutionKind { unique, parametric, inconsistent };

template <class T>
struct SolutionSet {
    SolutionKind kind = SolutionKind::inconsistent;
    /// One solution (free parameters set to zero); empty when inconsistent.
    std::vector<T> particular;
    /// Basis of the homogeneous solution space.
    std::vector<std::vector<T>> nullspace;
};

/// Solves A y = b by Gauss-Jordan elimination over the field T. A may be
/// rectangular. For floating fields, entries below `tolerance` times the
/// largest pivot candidate are treated as zero.
template <class T>
SolutionSet<T> solve_linear_exact(std::vector<std::vector<T>> a, std::vector<T> b, double tolerance = 1e-12) {
    using Tr = FieldTraits<T>;
    const std::size_t rows = a.size();
    if (b.size() != rows) throw std::invalid_argument("right-hand side length does not match the matrix");
    const std::size_t cols = rows ? a[0].size() : 0;
    for (const auto& r : a) {
        if (r.size() != cols) throw std::invalid_argument("ragged coefficient matrix");
    }
    double scale = 0.0;
    if constexpr (!Tr::exact) {
        for (const auto& r : a)
            for (const auto& v : r) scale = std::max(scale, Tr::pivot_weight(v));
        for (const auto& v : b) scale = std::max(scale, Tr::pivot_weight(v));
    }
    auto negligible = [&](const T& v) {
        if constexpr (Tr::exact) return Tr::is_zero(v);
        else return Tr::pivot_weight(v) <= tolerance * scale;
    };

    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t best = rows;
        double best_w = 0.0;
        for (std::size_t r = row; r < rows; ++r) {
            if (negligible(a[r][col])) continue;
            double w = Tr::pivot_weight(a[r][col]);
            if (best == rows || (!Tr::exact && w > best_w)) {
                best = r;
                best_w = w;
                if (Tr::exact) break;
            }
        }
        if (best == rows) continue;
        std::swap(a[row], a[best]);
        std::swap(b[row], b[best]);
        T inv = Tr::one_like(a[row][col]) / a[row][col];
        for (std::size_t c = col; c < cols; ++c) a[row][c] = a[row][c] * inv;
        b[row] = b[row] * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || Tr::is_zero(a[r][col])) continue;
            T f = a[r][col];
            for (std::size_t c = col; c < cols; ++c) a[r][c] = a[r][c] - f * a[row][c];
            b[r] = b[r] - f * b[row];
        }
        pivot_cols.push_back(col);
        ++row;
    }

    SolutionSet<T> out;
    for (std::size_t r = row; r < rows; ++r) {
        if (!negligible(b[r])) return out;
    }
    if (cols == 0) {
        out.kind = SolutionKind::unique;
        return out;
    }
    const T zero = Tr::zero_like(a[0][0]);
    const T one = Tr::one_like(a[0][0]);
    out.particular.assign(cols, zero);
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) out.particular[pivot_cols[r]] = b[r];
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<T> v(cols, zero);
        v[free] = one;
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = zero - a[r][free];
        out.nullspace.push_back(std::move(v));
    }
    out.kind = out.nullspace.empty() ? SolutionKind::unique : SolutionKind::parametric;
    return out;
}

}  // namespace jostforge::exact
