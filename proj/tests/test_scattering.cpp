#include "spectral_fixtures.hpp"

#include "jostforge/scattering/scattering.hpp"
#include "jostforge/synthesis/synthesis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace jostforge::scattering;
using testing_fixtures::q;
using jostforge::exact::Poly;
using jostforge::exact::RationalFunction;

namespace {

constexpr Complex I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

PotentialEval sech2(double beta = 1.0) {
    Complex pole{0.0, kPi / (2 * beta)};
    return PotentialEval::from_function(
        [beta](Complex x) {
            Complex c = std::cosh(beta * x);
            return 2.0 * beta * beta / (c * c);
        },
        {{pole, 2}, {-pole, 2}}, 20.0 / beta);
}

PotentialEval gaussian_bump() {
    return PotentialEval::from_function([](Complex x) { return std::exp(-x * x); }, {}, 9.0);
}

const PotentialEval& negaton_potential() {
    static const PotentialEval u = [] {
        auto syn = jostforge::synthesis::synthesize(testing_fixtures::negaton_data());
        return PotentialEval::from_exp_rational(syn.u);
    }();
    return u;
}

Complex one_soliton_a(Complex k, double beta = 1.0) { return (k - I * beta) / (k + I * beta); }

std::vector<double> symmetric_grid() {
    std::vector<double> g;
    for (int i = 0; i < 11; ++i) g.push_back(0.3 + 0.27 * i);
    for (int i = 0; i < 11; ++i) g.push_back(-g[i]);
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(Potential, RationalEvaluatorMatchesAndRejectsPoles) {
    auto u = RationalFunction::normalize(Poly(q(3)), Poly::linear_factor(q(1)) * Poly::linear_factor(q(1)));
    auto pe = PotentialEval::from_rational(u);
    ASSERT_EQ(pe.poles().size(), 1u);
    EXPECT_EQ(pe.poles()[0].order, 2);
    EXPECT_TRUE(pe.has_real_poles());
    EXPECT_EQ(pe.decay().degree_gap, 2);
    for (double x : {-3.0, 0.25, 4.5}) EXPECT_EQ(pe(Complex(x, 0.7)), u.eval(Complex(x, 0.7)));
    EXPECT_THROW(pe(Complex(1.0, 0.0)), PoleEvaluation);
}

TEST(Potential, ExpRationalRejectsRealPole) {
    const auto& u = negaton_potential();
    ASSERT_TRUE(u.has_real_poles(1e-9));
    EXPECT_NEAR(u.poles()[0].location.real(), 0.864558, 1e-5);
    EXPECT_THROW(u(u.poles()[0].location), PoleEvaluation);
    EXPECT_LT(u.clearance(Complex(0.864558, 0.0)), 1e-4);
}

TEST(Contour, ParameterizationAndChoice) {
    auto c = Contour::deformed(20.0, 1.0);
    EXPECT_EQ(c.at(0.0), Complex(0.0, 1.0));
    // derivative against a central difference
    for (double xi : {-1.3, 0.2, 2.0}) {
        Complex fd = (c.at(xi + 1e-6) - c.at(xi - 1e-6)) / 2e-6;
        EXPECT_LT(std::abs(fd - c.derivative(xi)), 1e-8);
    }
    EXPECT_EQ(auto_contour(sech2()).kind, ContourKind::real_line);
    auto chosen = auto_contour(negaton_potential());
    EXPECT_EQ(chosen.kind, ContourKind::deformed);
    EXPECT_GT(chosen.clearance(negaton_potential()), 0.05);
}

TEST(Contour, RealLineThroughPoleRejected) {
    const auto& u = negaton_potential();
    EXPECT_THROW(scattering_coeffs(u, 1.0, Contour::real_line(20.0)), ScatteringFailure);
}

TEST(Contour, CoulombTailRejected) {
    auto u = RationalFunction::normalize(Poly(q(1)), Poly::x() * Poly::x() + Poly(q(1)));
    auto coulomb = RationalFunction::normalize(Poly::x(), Poly::x() * Poly::x() + Poly(q(1)));
    EXPECT_NO_THROW(scattering_coeffs(PotentialEval::from_rational(u), 1.0, Contour::real_line(50.0)));
    EXPECT_THROW(scattering_coeffs(PotentialEval::from_rational(coulomb), 1.0, Contour::real_line(50.0)),
                 std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(Jost, ZeroPotentialIsExact) {
    auto u = PotentialEval::zero();
    auto c = Contour::real_line(10.0);
    for (Complex k : {Complex(0.7, 0), Complex(-2, 0), Complex(0.3, 1.2)}) {
        auto ends = jost_solutions(u, k, c);
        for (const auto& s : {ends.phi_left, ends.phi_right, ends.psi_left, ends.psi_right}) {
            EXPECT_EQ(s.m, Complex(1.0, 0.0));
            EXPECT_EQ(s.m_x, Complex(0.0, 0.0));
        }
        auto ab = scattering_coeffs(u, k, c);
        EXPECT_LT(std::abs(ab.a - 1.0), 1e-15);
        EXPECT_LT(std::abs(ab.b), 1e-15);
    }
}

TEST(Jost, OneSolitonPsiMatchesClosedForm) {
    // psi = e^{ikx}(1 - 2i/((k+i)(1+e^{2x})))
    auto u = sech2();
    auto c = Contour::real_line(20.0);
    for (Complex k : {Complex(1, 0), Complex(-0.6, 0), Complex(0.4, 0.8)}) {
        std::vector<double> nodes{-6.0, -1.0, 0.0, 2.5};
        auto samples = integrate_jost(u, k, c, Side::right, nodes);
        for (const auto& s : samples) {
            Complex expect = 1.0 - 2.0 * I / ((k + I) * (1.0 + std::exp(2.0 * s.x)));
            EXPECT_LT(std::abs(s.m - expect), 1e-8) << "k=" << k << " x=" << s.x;
        }
    }
    auto ends = jost_solutions(u, 1.0, c);
    EXPECT_TRUE(std::isfinite(std::abs(ends.phi(ends.phi_right, 1.0) * std::exp(I * 20.0))));
}

TEST(Jost, NegatonDeformedIntegrationSucceeds) {
    const auto& u = negaton_potential();
    auto ends = jost_solutions(u, 1.0, Contour::deformed(20.0, 1.0));
    EXPECT_TRUE(std::isfinite(std::abs(ends.phi_right.m)));
    EXPECT_TRUE(std::isfinite(std::abs(ends.psi_left.m)));
}

TEST(Jost, WronskianIsConstant) {
    for (auto [u, c] : {std::pair{sech2(), Contour::real_line(20.0)}, std::pair{gaussian_bump(), Contour::real_line(9.0)},
                        std::pair{negaton_potential(), Contour::deformed(20.0, 1.0)}}) {
        double L = c.half_length;
        auto r = wronskian_residuals(u, 1.3, c, {-0.75 * L, -0.2 * L, 0.0, 0.86, 0.15 * L, 0.95 * L});
        for (double v : r) EXPECT_LT(v, 1e-8);
    }
}

// ---------------------------------------------------------------------------

TEST(Coefficients, OneSolitonOracle) {
    auto u = sech2();
    auto c = Contour::real_line(20.0);
    auto ab = scattering_coeffs(u, 1.0, c);
    EXPECT_LT(std::abs(ab.a - Complex(0, -1)), 1e-6);
    EXPECT_LT(std::abs(ab.b), 1e-6);
    for (Complex k : {Complex(2.5, 0), Complex(-0.4, 0), Complex(0.3, 0.5), Complex(-1, 2.2)})
        EXPECT_LT(std::abs(coefficient_a(u, k, c) - one_soliton_a(k)), 1e-8) << k;
}

TEST(Coefficients, NegatonOnDeformedContour) {
    auto ab = scattering_coeffs(negaton_potential(), 1.0, Contour::deformed(20.0, 1.0));
    EXPECT_LT(std::abs(ab.a + 1.0), 1e-5);
    EXPECT_LT(std::abs(ab.b), 1e-5);
}

TEST(Coefficients, MatchingPointAndContourInvariance) {
    auto u = sech2();
    JostOptions shifted;
    shifted.match_xi = 3.7;
    for (double k : {0.5, 1.7, -2.2}) {
        auto base = scattering_coeffs(u, k, Contour::real_line(20.0));
        auto moved = scattering_coeffs(u, k, Contour::real_line(20.0), shifted);
        auto lifted = scattering_coeffs(u, k, Contour::deformed(20.0, 0.8));
        EXPECT_LT(std::abs(base.a - moved.a), 1e-8);
        EXPECT_LT(std::abs(base.a - lifted.a), 1e-8);
        EXPECT_LT(std::abs(base.b - lifted.b), 1e-8);
    }
    auto bump = gaussian_bump();
    auto base = scattering_coeffs(bump, 0.9, Contour::real_line(9.0));
    auto moved = scattering_coeffs(bump, 0.9, Contour::real_line(9.0), shifted);
    auto lifted = scattering_coeffs(bump, 0.9, Contour::deformed(9.0, 1.0));
    EXPECT_LT(std::abs(base.b - moved.b), 1e-8);
    EXPECT_LT(std::abs(base.b - lifted.b), 1e-8);
    EXPECT_GT(std::abs(base.b), 1e-2);
}

TEST(Coefficients, AlgebraicTailDoublingL) {
    // u = 1/(1+x^2): degree gap 2, so a and b move by O(1/L) at most when L doubles
    auto u = PotentialEval::from_rational(
        RationalFunction::normalize(Poly(q(1)), Poly::x() * Poly::x() + Poly(q(1))));
    auto ref = scattering_coeffs(u, 1.0, Contour::real_line(1600.0));
    for (double L : {50.0, 100.0, 200.0}) {
        auto a1 = scattering_coeffs(u, 1.0, Contour::real_line(L));
        auto a2 = scattering_coeffs(u, 1.0, Contour::real_line(2 * L));
        EXPECT_LT(std::abs(a1.a - a2.a) + std::abs(a1.b - a2.b), 1.0 / L);
    }
    // the WKB phase correction beats plain seeding at the same L
    JostOptions plain;
    plain.wkb = false;
    auto with = scattering_coeffs(u, 1.0, Contour::real_line(50.0));
    auto without = scattering_coeffs(u, 1.0, Contour::real_line(50.0), plain);
    EXPECT_LT(std::abs(with.a - ref.a) * 10, std::abs(without.a - ref.a));
}

// ---------------------------------------------------------------------------

TEST(Reflection, ZeroPotential) {
    auto scan = scan_reflection(PotentialEval::zero(), symmetric_grid(), Contour::real_line(10.0));
    EXPECT_TRUE(scan.reflectionless);
    EXPECT_EQ(scan.max_rho, 0.0);
    EXPECT_LT(scan.record.diagnostics.unitarity_residual, 1e-15);
}

TEST(Reflection, OneSolitonReflectionless) {
    auto scan = scan_reflection(sech2(), symmetric_grid(), Contour::real_line(20.0));
    EXPECT_TRUE(scan.reflectionless);
    EXPECT_TRUE(scan.record.diagnostics.unitarity_checked);
    EXPECT_LT(scan.record.diagnostics.unitarity_residual, 1e-6);
    EXPECT_LT(scan.record.diagnostics.wronskian_residual, 1e-8);
    for (std::size_t i = 0; i < scan.record.k_grid.size(); ++i) {
        EXPECT_LT(std::abs(scan.record.a_values[i] - one_soliton_a(scan.record.k_grid[i])), 1e-6);
        ASSERT_TRUE(scan.record.rho_values[i].has_value());
    }
}

TEST(Reflection, GaussianBumpReflects) {
    auto scan = scan_reflection(gaussian_bump(), symmetric_grid(), Contour::real_line(9.0));
    EXPECT_FALSE(scan.reflectionless);
    EXPECT_GT(scan.max_rho, 1e-2);
    EXPECT_LT(scan.record.diagnostics.unitarity_residual, 1e-6);
}

TEST(Reflection, NegatonDeformedUnitarity) {
    auto scan = scan_reflection(negaton_potential(), symmetric_grid(), Contour::deformed(20.0, 1.0));
    EXPECT_TRUE(scan.reflectionless);
    EXPECT_LT(scan.record.diagnostics.unitarity_residual, 1e-4);
    for (std::size_t i = 0; i < scan.record.k_grid.size(); ++i) {
        Complex k = scan.record.k_grid[i];
        EXPECT_LT(std::abs(scan.record.a_values[i] - std::pow(one_soliton_a(k), 2)), 1e-6);
    }
}

// ---------------------------------------------------------------------------

TEST(BoundStates, ZeroPotentialHasNone) {
    auto found = find_bound_states(PotentialEval::zero(), Contour::real_line(10.0));
    EXPECT_TRUE(found.states.empty());
    EXPECT_EQ(found.winding_total, 0);
}

TEST(BoundStates, OneSoliton) {
    auto found = find_bound_states(sech2(), Contour::real_line(20.0));
    ASSERT_EQ(found.states.size(), 1u);
    EXPECT_EQ(found.states[0].nu, 1);
    EXPECT_LT(std::abs(found.states[0].k - I), 1e-8);
    EXPECT_EQ(found.winding_total, 1);
}

TEST(BoundStates, NegatonDoubleZero) {
    auto found = find_bound_states(negaton_potential(), Contour::deformed(20.0, 1.0));
    ASSERT_EQ(found.states.size(), 1u);
    EXPECT_EQ(found.states[0].nu, 2);
    EXPECT_LT(std::abs(found.states[0].k - I), 1e-5);
}

TEST(BoundStates, TwoSolitonsSeparated) {
    // 6 sech^2 x: a = (k-i)(k-2i)/((k+i)(k+2i))
    auto u = PotentialEval::from_function(
        [](Complex x) {
            Complex c = std::cosh(x);
            return 6.0 / (c * c);
        },
        {{Complex(0, kPi / 2), 2}, {Complex(0, -kPi / 2), 2}}, 20.0);
    auto found = find_bound_states(u, Contour::real_line(20.0));
    ASSERT_EQ(found.states.size(), 2u);
    EXPECT_LT(std::abs(found.states[0].k - I), 1e-8);
    EXPECT_LT(std::abs(found.states[1].k - 2.0 * I), 1e-8);
    int total = 0;
    for (const auto& s : found.states) total += s.nu;
    EXPECT_EQ(total, found.winding_total);
}

TEST(BoundStates, RejectsBoxTouchingRealAxis) {
    SearchBox box;
    box.im_lo = 0.0;
    EXPECT_THROW(find_bound_states(sech2(), Contour::real_line(20.0), box), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(Jets, OneSoliton) {
    auto jets = extract_jets(sech2(), I, 1, Contour::real_line(20.0));
    ASSERT_EQ(jets.a_jet.size(), 1u);
    EXPECT_LT(std::abs(jets.a_jet[0] - Complex(0, -0.5)), 1e-8);
    EXPECT_LT(std::abs(jets.b_jet[0] - 1.0), 1e-8);
}

TEST(Jets, Negaton) {
    // a = ((k-i)/(k+i))^2 gives a_kk(i) = -1/2 and a_kkk(i) = -3i/2; the b-jet
    // then follows from the polar part of b/a, which is what the data fix.
    auto jets = extract_jets(negaton_potential(), I, 2, Contour::deformed(20.0, 1.0));
    ASSERT_EQ(jets.a_jet.size(), 2u);
    ASSERT_EQ(jets.b_jet.size(), 2u);
    EXPECT_LT(std::abs(jets.a_jet[0] + 0.5), 1e-4);
    EXPECT_LT(std::abs(jets.a_jet[1] - Complex(0, -1.5)), 1e-4);
    EXPECT_LT(std::abs(jets.b_jet[0] - 1.0), 1e-4);
    EXPECT_LT(std::abs(jets.b_jet[1] - I), 1e-4);
}

TEST(Jets, NegatonPolarPartOfReflectionRatio) {
    // b/a = p2 t^-2 + p1 t^-1 + ... with p2 = 2 b0/a2, p1 = (2/a2)(b1 - b0 a3/(3 a2))
    auto polar = [](Complex a2, Complex a3, Complex b0, Complex b1) {
        return std::pair{2.0 * b0 / a2, 2.0 / a2 * (b1 - b0 * a3 / (3.0 * a2))};
    };
    auto jets = extract_jets(negaton_potential(), I, 2, Contour::deformed(20.0, 1.0));
    auto measured = polar(jets.a_jet[0], jets.a_jet[1], jets.b_jet[0], jets.b_jet[1]);
    auto given = polar(-0.5, 0.0, 1.0, 0.0);
    EXPECT_LT(std::abs(measured.first - given.first), 1e-4);
    EXPECT_LT(std::abs(measured.second - given.second), 1e-4);
}

TEST(Jets, MultiplicityMismatchDetected) {
    EXPECT_THROW(extract_jets(sech2(), I, 2, Contour::real_line(20.0)), ScatteringFailure);
    EXPECT_THROW(extract_jets(negaton_potential(), I, 1, Contour::deformed(20.0, 1.0)), ScatteringFailure);
}

// ---------------------------------------------------------------------------

TEST(HighK, Limits) {
    auto zero = high_k_limits(PotentialEval::zero(), Contour::real_line(10.0));
    for (const auto& s : zero.samples) {
        EXPECT_EQ(s.a_error, 0.0);
        EXPECT_EQ(s.b_size, 0.0);
    }
    auto one = high_k_limits(sech2(), Contour::real_line(20.0));
    const auto& last = one.samples.back();
    EXPECT_EQ(last.k, 50.0);
    EXPECT_LT(last.a_error, 0.05);
    EXPECT_LT(last.b_size, 0.05);
    EXPECT_NEAR(one.a_rate, 1.0, 0.05);
    auto negaton = high_k_limits(negaton_potential(), Contour::deformed(20.0, 1.0));
    EXPECT_LT(negaton.samples.back().a_error, 0.1);
}

// ---------------------------------------------------------------------------

TEST(Properties, ScaledSolitonsMatchOracle) {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> beta_dist(0.5, 2.0), k_dist(0.3, 3.0);
    for (int trial = 0; trial < 3; ++trial) {
        double beta = beta_dist(rng);
        double k = k_dist(rng) * (trial % 2 == 0 ? 1.0 : -1.0);
        auto u = sech2(beta);
        auto c = Contour::real_line(u.suggested_half_length());
        auto ab = scattering_coeffs(u, k, c);
        EXPECT_LT(std::abs(ab.a - one_soliton_a(k, beta)), 1e-8) << beta;
        EXPECT_LT(std::abs(ab.b), 1e-8);
        auto found = find_bound_states(u, c);
        ASSERT_EQ(found.states.size(), 1u) << beta;
        EXPECT_LT(std::abs(found.states[0].k - I * beta), 1e-8);
    }
}
