#pragma once

#include "jostforge/exact/exp_rational.hpp"
#include "jostforge/exact/gaussian_rational.hpp"
#include "jostforge/exact/rational_function.hpp"

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace jostforge::synthesis {

using exact::EvalResult;
using exact::ExpBasis;
using exact::ExpRational;
using exact::GaussianRational;
using Complex = std::complex<double>;

/// One zero k of a(k) in the upper half plane. a_jet holds a^(m)(k) for
/// m = nu .. 2nu-1 (longer jets are accepted), b_jet holds b^(r)(k) for r < nu.
template <class C>
struct BoundState {
    C k{};
    int nu = 1;
    std::vector<C> a_jet;
    std::vector<C> b_jet;
};

template <class C>
struct SpectralData {
    std::vector<BoundState<C>> entries;
};

using ExactSpectralData = SpectralData<GaussianRational>;
using NumericSpectralData = SpectralData<Complex>;

/// Throws std::invalid_argument on Im k <= 0, repeated k, short jets or a zero leading a-jet entry.
template <class C>
void validate(const SpectralData<C>& data);

/// sum_q coeffs[q] w^q with w = 1 / (k + k_j).
template <class C>
struct WPoly {
    std::vector<C> coeffs;
    WPoly derivative() const;  // d/dk
    C at(const C& k, const C& kj) const;
    bool is_zero() const;
};

/// Residue at kappa = k_j of M(x; kappa) / ((k + kappa) a(kappa)) as a linear
/// form in N_j^0 .. N_j^{nu-1}, with k left symbolic.
template <class C>
struct ResidueForm {
    std::size_t entry = 0;
    std::vector<WPoly<C>> coeffs;
    C inhomogeneous{};
};

template <class C>
ResidueForm<C> residue_at(const BoundState<C>& entry, std::size_t j = 0);

/// Constants d_m with 2i Res M/a = sum_m d_m N_j^m, the contribution of k_j to u before the x-derivative.
template <class C>
std::vector<C> potential_weights(const BoundState<C>& entry);

struct Unknown {
    std::size_t j = 0;
    int r = 0;
};

template <class C>
using BasisPtr = typename ExpRational<C>::Basis;

/// E_j = exp(2 i k_j x).
template <class C>
BasisPtr<C> make_basis(const SpectralData<C>& data);

template <class C>
struct LinearSystem {
    BasisPtr<C> basis;
    std::vector<Unknown> unknowns;  // (j ascending, r ascending)
    std::vector<std::vector<ExpRational<C>>> matrix;
    std::vector<ExpRational<C>> rhs;
};

template <class C>
LinearSystem<C> assemble_system(const SpectralData<C>& data);

template <class C>
struct Solution {
    BasisPtr<C> basis;
    std::vector<Unknown> unknowns;
    std::vector<ExpRational<C>> values;
    /// values[i] = numerators[i] / denominator before reduction to lowest terms.
    std::vector<exact::MPoly<C>> numerators;
    exact::MPoly<C> denominator;
    const ExpRational<C>& n(std::size_t j, int r) const;
};

/// Cramer's rule with polynomial determinants after clearing the exponential
/// row denominators; exact Gauss-Jordan over ExpRational for larger exact
/// systems. Throws std::runtime_error when the system is singular.
template <class C>
Solution<C> solve_system(const LinearSystem<C>& system);

/// psi(x; k) = envelope * exp(i k x); the envelope depends on x, the E_j and k.
template <class C>
struct PsiExpr {
    ExpRational<C> envelope;
    Complex evaluate(Complex x, Complex k) const;
};

template <class C>
PsiExpr<C> jost_psi_expr(const SpectralData<C>& data, const Solution<C>& solution);

template <class C>
ExpRational<C> potential_expr(const SpectralData<C>& data, const Solution<C>& solution);

/// Whether psi'' + (k^2 + u) psi = 0 holds identically, checked on the cleared
/// numerator. Floating coefficients pass when the defect is below rel_tol times
/// the size of its summands.
template <class C>
bool satisfies_schrodinger(const PsiExpr<C>& psi, const ExpRational<C>& u, double rel_tol = 1e-9);

enum class Direction { plus_infinity, minus_infinity };

/// Limit of an expression as x -> +-inf with Im k_j > 0, as an expression in k
/// alone. Throws std::domain_error when the limit does not exist.
template <class C>
ExpRational<C> asymptotic_leading(const ExpRational<C>& expr, Direction direction);

/// Converts an expression free of x and E_j to a univariate rational function
/// (whose variable stands for k).
exact::RationalFunction to_rational_in_k(const ExpRational<GaussianRational>& expr);

template <class C>
EvalResult eval_expr(const ExpRational<C>& expr, Complex x, Complex k = {0.0, 0.0}, double pole_tol = 1e-12);

struct RealPole {
    double x = 0.0;
    int order = 0;
    double relative_denominator = 0.0;
};

/// Real zeros of the denominator on [lo, hi]: sampled minima of the scaled
/// denominator modulus, golden-section refinement, order from successive
/// x-derivatives, and a final Newton polish on the last vanishing derivative.
template <class C>
std::vector<RealPole> real_poles(const ExpRational<C>& expr, double lo, double hi, std::size_t samples = 4000,
                                 double accept = 1e-7);

template <class C>
struct Synthesis {
    SpectralData<C> data;
    LinearSystem<C> system;
    Solution<C> solution;
    PsiExpr<C> psi;
    ExpRational<C> u;
};

template <class C>
Synthesis<C> synthesize(const SpectralData<C>& data);

/// Numeric copy of exact data.
NumericSpectralData to_numeric(const ExactSpectralData& data);

}  // namespace jostforge::synthesis
