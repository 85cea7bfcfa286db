#include "jostforge/exact/roots.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace jostforge::exact {

bool reconstruct_rational(double v, mpq_class& out, long max_den, double rel_tol) {
    if (!std::isfinite(v)) return false;
    const double tol = rel_tol * std::max(1.0, std::fabs(v));
    // convergents h/k of the continued fraction of v
    long double h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    long double rest = v;
    for (int iter = 0; iter < 64; ++iter) {
        long double a = std::floor(rest);
        long double h = a * h0 + h1, k = a * k0 + k1;
        if (k > static_cast<long double>(max_den)) return false;
        if (std::fabs(static_cast<double>(h / k) - v) <= tol) {
            out = mpq_class(mpz_class(static_cast<long>(h)), mpz_class(static_cast<long>(k)));
            out.canonicalize();
            return true;
        }
        h1 = h0; h0 = h;
        k1 = k0; k0 = k;
        long double frac = rest - a;
        if (frac == 0) return false;
        rest = 1 / frac;
    }
    return false;
}

namespace {

std::vector<std::complex<double>> numeric_roots(const Poly& monic_factor) {
    const int n = monic_factor.degree();
    std::vector<std::complex<double>> out;
    if (n <= 0) return out;
    if (n == 1) {
        out.push_back((-monic_factor.coeff(0)).to_complex());
        return out;
    }
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -monic_factor.coeff(i).to_complex();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    for (int i = 0; i < n; ++i) {
        std::complex<double> z = solver.eigenvalues()(i);
        // two Newton steps on the factor itself
        Poly d = monic_factor.derivative();
        for (int s = 0; s < 2; ++s) {
            std::complex<double> dz = d.eval(z);
            if (std::abs(dz) == 0.0) break;
            z -= monic_factor.eval(z) / dz;
        }
        out.push_back(z);
    }
    return out;
}

}  // namespace

std::vector<PolyRoot> poly_roots(const Poly& p, double cluster_tol) {
    std::vector<PolyRoot> roots;
    for (auto& [factor, mult] : squarefree_decomposition(p)) {
        Poly rest = factor;
        for (auto z : numeric_roots(factor)) {
            mpq_class re, im;
            if (rest.degree() >= 1 && reconstruct_rational(z.real(), re) &&
                (std::fabs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)) ? (im = 0, true)
                                                                             : reconstruct_rational(z.imag(), im))) {
                GaussianRational q(re, im);
                if (rest(q).is_zero()) {
                    rest = divmod(rest, Poly::linear_factor(q)).first;
                    roots.push_back({q.to_complex(), q, mult, true});
                    continue;
                }
            }
            bool merged = false;
            for (auto& r : roots) {
                if (!r.exact && r.multiplicity == mult && std::abs(r.value - z) <= cluster_tol * std::max(1.0, std::abs(z))) {
                    merged = true;
                    break;
                }
            }
            if (!merged) roots.push_back({z, GaussianRational(), mult, false});
        }
    }
    return roots;
}

}  // namespace jostforge::exact
