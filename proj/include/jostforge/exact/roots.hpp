#pragma once

#include "jostforge/exact/poly.hpp"

#include <complex>
#include <vector>

namespace jostforge::exact {

struct PolyRoot {
    std::complex<double> value;
    GaussianRational exact_value;  // meaningful only when exact
    int multiplicity = 1;
    bool exact = false;
};

/// Roots of p with multiplicities. Multiplicities come from the square-free
/// decomposition, so they are exact; each square-free factor's roots are
/// located numerically (companion eigenvalues), then promoted to exact
/// Gaussian rationals when a small-denominator reconstruction divides the
/// factor exactly. Roots that cannot be promoted are returned with
/// exact = false. Numerically coincident roots (within cluster_tol) of one
/// factor are merged.
std::vector<PolyRoot> poly_roots(const Poly& p, double cluster_tol = 1e-10);

/// Continued-fraction reconstruction of a double as p/q with q <= max_den,
/// accepting the first convergent within rel_tol.
bool reconstruct_rational(double v, mpq_class& out, long max_den = 1000000, double rel_tol = 1e-9);

}  // namespace jostforge::exact
