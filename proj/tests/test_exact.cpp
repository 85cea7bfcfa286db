#include "jostforge/exact/exp_rational.hpp"
#include "jostforge/exact/laurent_series.hpp"
#include "jostforge/exact/linear_solve.hpp"
#include "jostforge/exact/radical.hpp"
#include "jostforge/exact/roots.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace jostforge::exact;
using GR = GaussianRational;

namespace {

GR q(long p, long d = 1) { return GR(mpq_class(p, d)); }

RationalFunction over(const Poly& n, const Poly& d) { return RationalFunction::normalize(n, d); }

// u = -5/16 x^-2 - 5/16 (x-1)^-2 - 7/8 x^-1 + 5/24 (x-1)^-1
RationalFunction two_pole_potential() {
    Poly x = Poly::x(), xm1 = Poly::x() - Poly(1);
    return over(Poly(q(-5, 16)), x * x) + over(Poly(q(-5, 16)), xm1 * xm1) + over(Poly(q(-7, 8)), x) +
           over(Poly(q(5, 24)), xm1);
}

// direct evaluation of the partial-fraction form, independent of RationalFunction
GR two_pole_direct(const GR& x) {
    GR xm1 = x - GR(1);
    return q(-5, 16) / (x * x) + q(-5, 16) / (xm1 * xm1) + q(-7, 8) / x + q(5, 24) / xm1;
}

Poly random_poly(std::mt19937& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg), c(-4, 4);
    std::vector<GR> v;
    int d = deg(rng);
    for (int j = 0; j <= d; ++j) v.emplace_back(mpq_class(c(rng)), mpq_class(c(rng) / 2));
    if (v.back().is_zero()) v.back() = GR(1);
    return Poly(std::move(v));
}

GR det(std::vector<std::vector<GR>> m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    GR acc;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<GR>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<GR> row;
            for (std::size_t cc = 0; cc < n; ++cc)
                if (cc != c) row.push_back(m[r][cc]);
            minor.push_back(row);
        }
        GR term = m[0][c] * det(minor);
        acc = (c % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace

TEST(GaussianRational, ArithmeticAndParsing) {
    GR a = GR::from_strings("1/2", "-3/4");
    GR b = GR::from_strings("-0.25", "2");
    EXPECT_EQ(a + b, GR::from_strings("1/4", "5/4"));
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(GR::i() * GR::i(), GR(-1));
    EXPECT_EQ(GR(mpq_class(-4)).exact_sqrt().value(), GR(0, 2));
    EXPECT_EQ(GR(0, 2).exact_sqrt().value(), GR(1, 1));
    EXPECT_FALSE(GR(2).exact_sqrt().has_value());
    EXPECT_THROW(GR().inverse(), std::domain_error);
}

TEST(Normalize, CancelsCommonFactor) {
    auto f = over(Poly({GR(2), GR(2)}), Poly({GR(0), GR(2), GR(2)}));
    EXPECT_EQ(f.num(), Poly(1));
    EXPECT_EQ(f.den(), Poly::x());
}

TEST(Normalize, PolynomialOverOneIsIdentity) {
    Poly p({q(3), q(-1, 2), GR(0, 5)});
    auto f = over(p, Poly(1));
    EXPECT_EQ(f.num(), p);
    EXPECT_EQ(f.den(), Poly(1));
}

TEST(Normalize, RejectsZeroDenominator) { EXPECT_THROW(over(Poly(1), Poly()), std::invalid_argument); }

TEST(Normalize, TwoPolePartialFractionsCombine) {
    auto u = two_pole_potential();
    Poly x = Poly::x(), xm1 = Poly::x() - Poly(1);
    EXPECT_EQ(u.den(), x * x * xm1 * xm1);
    EXPECT_EQ(u.num().degree(), 3);
    for (long p = 2; p < 9; ++p) {
        GR at = q(2 * p + 1, 4);
        EXPECT_EQ(u(at), two_pole_direct(at));
    }
}

TEST(LaurentExpand, TwoPoleAtInfinity) {
    auto u = two_pole_potential();
    auto s = laurent_expand(u, ExpansionPoint::infinity(), -3);
    EXPECT_EQ(s.coefficient(0), GR(0));
    // leading behaviour of num/den: lc(num)/lc(den) at degree gap one
    GR oracle = u.num().leading() / u.den().leading();
    EXPECT_EQ(u.den().degree() - u.num().degree(), 1);
    EXPECT_EQ(s.coefficient(-1), oracle);
    EXPECT_EQ(s.coefficient(-1), q(-2, 3));
}

TEST(LaurentExpand, SimplePoles) {
    auto f = over(Poly(1), Poly::x());
    auto s = laurent_expand(f, ExpansionPoint::at(GR(0)), 3);
    EXPECT_EQ(s.min_order(), -1);
    EXPECT_EQ(s.coefficient(-1), GR(1));
    for (int j = 0; j <= 3; ++j) EXPECT_EQ(s.coefficient(j), GR(0));

    Poly xm1 = Poly::x() - Poly(1);
    auto g = over(Poly(-2), xm1 * xm1);
    auto t = laurent_expand(g, ExpansionPoint::at(GR(1)), 2);
    EXPECT_EQ(t.min_order(), -2);
    EXPECT_EQ(t.coefficient(-2), GR(-2));
    EXPECT_EQ(t.coefficient(-1), GR(0));
}

TEST(LaurentExpand, TruncationIsEnforced) {
    auto f = over(Poly(1), Poly::x() - Poly(1));
    auto s = laurent_expand(f, ExpansionPoint::at(GR(0)), 2);
    EXPECT_THROW(s.coefficient(3), std::out_of_range);
    auto prod = s * s;
    EXPECT_EQ(prod.truncation_order(), 2);
}

TEST(SeriesSqrt, ConstantFour) {
    auto s = laurent_expand(RationalFunction(4), ExpansionPoint::infinity(), -3);
    EXPECT_EQ(series_sqrt(s).coefficient(0), GR(2));
}

TEST(SeriesSqrt, OnePlusTwoOverX) {
    auto f = over(Poly({GR(2), GR(1)}), Poly::x());  // 1 + 2/x
    auto s = laurent_expand(f, ExpansionPoint::infinity(), -2);
    auto r = series_sqrt(s);
    EXPECT_EQ(r.coefficient(0), GR(1));
    EXPECT_EQ(r.coefficient(-1), GR(1));
    EXPECT_EQ(r.coefficient(-2), q(-1, 2));
    auto sq = r * r;
    EXPECT_EQ(sq.coefficient(0), GR(1));
    EXPECT_EQ(sq.coefficient(-1), GR(2));
    EXPECT_EQ(sq.coefficient(-2), GR(0));
}

TEST(SeriesSqrt, LeadingCoefficientIsIk) {
    for (GR k : {GR(2), q(3, 5), q(7, 2)}) {
        auto r = RationalFunction(-(k * k)) - two_pole_potential();
        auto s = series_sqrt(laurent_expand(r, ExpansionPoint::infinity(), -3));
        EXPECT_EQ(s.coefficient(0), GR::i() * k);
    }
}

TEST(SeriesSqrt, OddOrderRejected) {
    auto s = laurent_expand(over(Poly(1), Poly::x()), ExpansionPoint::at(GR(0)), 2);
    EXPECT_THROW(series_sqrt(s), std::domain_error);
}

TEST(Radical, CanonicalForms) {
    EXPECT_EQ(RadicalSum::sqrt(q(9, 16)).as_rational().value(), q(3, 4));
    auto s = RadicalSum::sqrt(GR(2)) + RadicalSum::sqrt(GR(8));
    ASSERT_EQ(s.terms().size(), 1u);
    EXPECT_EQ(s, RadicalSum(GR(3)) * RadicalSum::sqrt(GR(2)));
    EXPECT_EQ((RadicalSum::sqrt(GR(2)) * RadicalSum::sqrt(GR(2))).as_rational().value(), GR(2));
    auto kappa = RadicalSum(q(1, 2)) + RadicalSum(q(1, 2)) * RadicalSum::sqrt(GR(9));
    EXPECT_TRUE(kappa.is_nonnegative_integer());
    EXPECT_FALSE((RadicalSum(GR(1)) + RadicalSum::sqrt(GR(2))).is_nonnegative_integer());
    EXPECT_EQ(RadicalSum::sqrt(GR(-4)).as_rational().value(), GR(0, 2));
}

TEST(LinearSolve, IdentityReturnsRightHandSide) {
    std::vector<std::vector<GR>> a{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<GR> b{q(1, 3), GR(0, 2), GR(-5)};
    auto s = solve_linear_exact(a, b);
    ASSERT_EQ(s.kind, SolutionKind::unique);
    EXPECT_EQ(s.particular, b);
}

TEST(LinearSolve, ParametricAndInconsistent) {
    std::vector<std::vector<GR>> a{{1, 1}, {2, 2}};
    auto p = solve_linear_exact(a, {GR(1), GR(2)});
    EXPECT_EQ(p.kind, SolutionKind::parametric);
    EXPECT_EQ(p.nullspace.size(), 1u);
    auto bad = solve_linear_exact(a, {GR(1), GR(3)});
    EXPECT_EQ(bad.kind, SolutionKind::inconsistent);
}

namespace {

// Coefficient rows of the P equation for P = x + p0 after clearing denominators,
// built directly from the operator with exact rational-function arithmetic.
std::pair<std::vector<std::vector<GR>>, std::vector<GR>> two_pole_p_system(const GR& k2) {
    auto u = two_pole_potential();
    auto r = RationalFunction(-k2) - u;
    Poly x = Poly::x(), xm1 = Poly::x() - Poly(1);
    auto theta = over(Poly(q(-1, 2)), x) + over(Poly(q(-1, 2)), xm1);
    auto t1 = theta.derivative(), t2 = t1.derivative();
    auto c1 = RationalFunction(3) * theta * theta + RationalFunction(3) * t1 - RationalFunction(4) * r;
    auto c0 = t2 + RationalFunction(3) * theta * t1 + theta * theta * theta - RationalFunction(4) * r * theta -
              RationalFunction(2) * r.derivative();
    // P = x + p0: P' = 1, P'' = P''' = 0
    auto unknown = c0;                                    // coefficient of p0
    auto fixed = c1 + c0 * RationalFunction(Poly::x());   // p0-free part
    Poly a = unknown.num() * fixed.den(), b = fixed.num() * unknown.den();
    int deg = std::max(a.degree(), b.degree());
    std::vector<std::vector<GR>> rows;
    std::vector<GR> rhs;
    for (int j = 0; j <= deg; ++j) {
        rows.push_back({a.coeff(j)});
        rhs.push_back(-b.coeff(j));
    }
    return {rows, rhs};
}

}  // namespace

TEST(LinearSolve, TwoPoleOverdeterminedSystem) {
    auto [a, b] = two_pole_p_system(q(4, 3));
    auto s = solve_linear_exact(a, b);
    ASSERT_EQ(s.kind, SolutionKind::unique);
    EXPECT_EQ(s.particular[0], q(-1, 4));
    auto [a1, b1] = two_pole_p_system(GR(1));
    EXPECT_EQ(solve_linear_exact(a1, b1).kind, SolutionKind::inconsistent);
}

TEST(LinearSolve, RationalFunctionEntries) {
    auto x = RationalFunction::x();
    std::vector<std::vector<RationalFunction>> a{{x, RationalFunction(1)}, {RationalFunction(1), x}};
    std::vector<RationalFunction> b{RationalFunction(1), RationalFunction(0)};
    auto s = solve_linear_exact(a, b);
    ASSERT_EQ(s.kind, SolutionKind::unique);
    // inverse of [[x,1],[1,x]] applied to e1
    auto d = x * x - RationalFunction(1);
    EXPECT_EQ(s.particular[0], x / d);
    EXPECT_EQ(s.particular[1], RationalFunction(-1) / d);
}

TEST(LinearSolve, FloatingPivoting) {
    using Cd = std::complex<double>;
    std::vector<std::vector<Cd>> a{{1e-14, 1.0}, {1.0, 1.0}};
    auto s = solve_linear_exact(a, {Cd(1.0), Cd(2.0)});
    ASSERT_EQ(s.kind, SolutionKind::unique);
    EXPECT_NEAR(s.particular[0].real(), 1.0, 1e-12);
    EXPECT_NEAR(s.particular[1].real(), 1.0, 1e-12);
}

TEST(Roots, MultiplicitiesAndExactness) {
    Poly xm1 = Poly::x() - Poly(1);
    Poly p = xm1 * xm1 * (Poly::x() + Poly(q(1, 2))) * (Poly::x() * Poly::x() + Poly(1));
    auto roots = poly_roots(p);
    ASSERT_EQ(roots.size(), 4u);
    int total = 0;
    for (const auto& r : roots) {
        EXPECT_TRUE(r.exact);
        EXPECT_TRUE(p(r.exact_value).is_zero());
        total += r.multiplicity;
        if (r.exact_value == GR(1)) EXPECT_EQ(r.multiplicity, 2);
    }
    EXPECT_EQ(total, 5);
    auto irr = poly_roots(Poly::x() * Poly::x() - Poly(2));
    ASSERT_EQ(irr.size(), 2u);
    EXPECT_FALSE(irr[0].exact);
    EXPECT_NEAR(std::abs(irr[0].value), std::sqrt(2.0), 1e-12);
}

TEST(MPoly, GcdOfBivariate) {
    using P = MPoly<GR>;
    P xv = P::variable(2, 0), yv = P::variable(2, 1);
    P a = (xv + yv) * (xv - yv), b = (xv + yv) * (xv + yv) * yv;
    EXPECT_EQ(gcd(a, b), xv + yv);
    EXPECT_TRUE(gcd(xv + P::constant(2, GR(1)), yv).is_constant());
}

TEST(ExpRational, OneSolitonPotentialFromN) {
    auto basis = std::make_shared<const ExpBasis<GR>>(ExpBasis<GR>{{GR(-2)}});  // E = exp(-2x)
    using ER = ExpRational<GR>;
    ER one = ER::constant(basis, GR(1));
    ER e_inv = ER::exp_power(basis, 0, -1);  // exp(2x)
    ER n0 = one / (one + e_inv);
    ER u = (n0.scaled(GR(-4))).derivative_x();
    // 8 e^{2x} / (1 + e^{2x})^2
    ER oracle = (e_inv.scaled(GR(8))) / ((one + e_inv) * (one + e_inv));
    EXPECT_EQ(u, oracle);
    EXPECT_NEAR(u.evaluate(0.0).value.real(), 2.0, 1e-14);
    EXPECT_NEAR(u.evaluate(30.0).value.real(), 8.0 * std::exp(-60.0), 1e-30);
    EXPECT_NEAR(u.evaluate(-400.0).value.real(), 0.0, 1e-300);
}

// ---- properties ---------------------------------------------------------

TEST(Properties, NormalizeCancelsSharedFactor) {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        Poly p = random_poly(rng, 3), f = random_poly(rng, 2), r = random_poly(rng, 3);
        if (f.is_zero() || r.is_zero()) continue;
        EXPECT_EQ(over(p * f, f * r), over(p, r));
    }
}

TEST(Properties, PartialFractionResumReproducesProperPart) {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> root(-6, 6), mult(1, 3);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::pair<GR, int>> poles;
        Poly den(1);
        for (int j = 0; j < 3; ++j) {
            GR s = q(root(rng), 2);
            bool dup = false;
            for (auto& [t, m] : poles) dup = dup || t == s;
            if (dup) continue;
            int m = mult(rng);
            poles.emplace_back(s, m);
            den = den * pow(Poly::linear_factor(s), m);
        }
        Poly num = divmod(random_poly(rng, den.degree() + 2), den).second;
        if (num.is_zero()) continue;
        auto f = over(num, den);
        RationalFunction sum;
        for (auto& [s, m] : poles) sum += laurent_expand(f, ExpansionPoint::at(s), -1).resum();
        for (long p = 0; p < 5; ++p) {
            GR at = q(2 * p + 1, 11);
            EXPECT_EQ(sum(at), f(at));
        }
    }
}

TEST(Properties, SeriesSqrtSquaresBack) {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> c(-5, 5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<GR> coeffs{GR(mpq_class(c(rng) * c(rng) + 1)) * GR(mpq_class(1))};
        coeffs[0] = coeffs[0] * coeffs[0];  // perfect-square leading coefficient
        for (int j = 1; j < 6; ++j) coeffs.emplace_back(mpq_class(c(rng)), mpq_class(c(rng)));
        for (auto center : {ExpansionPoint::at(q(1, 3)), ExpansionPoint::infinity()}) {
            LaurentSeries s(center, -2, coeffs, 4);
            auto r = series_sqrt(s);
            auto sq = r * r;
            for (int t = s.t_valuation(); t < sq.t_bound(); ++t) EXPECT_EQ(sq.t_coefficient(t), s.t_coefficient(t));
            EXPECT_GE(sq.t_bound(), 4);
        }
    }
}

TEST(Properties, LinearSolveMatchesCramer) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> c(-6, 6), dim(1, 4);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        int n = dim(rng);
        std::vector<std::vector<GR>> a(n, std::vector<GR>(n));
        std::vector<GR> b(n);
        for (auto& row : a)
            for (auto& e : row) e = q(c(rng), 1 + std::abs(c(rng)));
        for (auto& e : b) e = q(c(rng), 1 + std::abs(c(rng)));
        GR d = det(a);
        auto s = solve_linear_exact(a, b);
        if (d.is_zero()) {
            EXPECT_NE(s.kind, SolutionKind::unique);
            continue;
        }
        ASSERT_EQ(s.kind, SolutionKind::unique);
        for (int i = 0; i < n; ++i) {
            auto ai = a;
            for (int r = 0; r < n; ++r) ai[r][i] = b[r];
            EXPECT_EQ(s.particular[i], det(ai) / d);
        }
        ++checked;
    }
    EXPECT_GT(checked, 50);
}
