#include "spectral_fixtures.hpp"

#include "jostforge/harness/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace jostforge::harness;
using jostforge::scattering::Contour;
using jostforge::scattering::PotentialEval;
using testing_fixtures::two_pole_potential;
using testing_fixtures::pole_term;
using testing_fixtures::q;
using jostforge::exact::GaussianRational;

namespace {

constexpr Complex I{0.0, 1.0};

PotentialEval sech2() {
    constexpr double half_pi = std::numbers::pi / 2;
    return PotentialEval::from_function(
        [](Complex x) {
            Complex c = std::cosh(x);
            return 2.0 / (c * c);
        },
        {{Complex(0, half_pi), 2}, {Complex(0, -half_pi), 2}}, 20.0);
}

PotentialEval bump() { return PotentialEval::from_function([](Complex x) { return std::exp(-x * x); }, {}, 9.0); }

std::vector<double> unit_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 100; ++i) g.push_back(0.5 + 0.01 * i);
    return g;
}

const Check* find(const VerificationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST(Unitarity, ZeroSolitonAndBump) {
    auto grid = symmetric_grid();
    ASSERT_EQ(grid.size(), 42u);
    auto zero = jostforge::scattering::scan_reflection(PotentialEval::zero(), grid, Contour::real_line(10.0));
    EXPECT_EQ(check_unitarity(zero.record).residual, 0.0);
    auto one = jostforge::scattering::scan_reflection(sech2(), grid, Contour::real_line(20.0));
    auto c1 = check_unitarity(one.record);
    EXPECT_TRUE(c1.pass);
    EXPECT_LT(c1.residual, 1e-6);
    auto g = jostforge::scattering::scan_reflection(bump(), grid, Contour::real_line(9.0));
    auto c2 = check_unitarity(g.record);
    EXPECT_TRUE(c2.pass);
    EXPECT_GT(g.max_rho, 1e-2);
}

TEST(Unitarity, AsymmetricGridRejected) {
    auto scan = jostforge::scattering::scan_reflection(sech2(), {0.5, 1.0, -0.5}, Contour::real_line(20.0));
    EXPECT_THROW(check_unitarity(scan.record), std::invalid_argument);
}

TEST(Stokes, ZeroIsIdentity) {
    auto s = check_stokes(1.0, 0.0, 0.0, 1.0);
    EXPECT_TRUE(s.determinant.pass);
    EXPECT_TRUE(s.inverse.pass);
    EXPECT_EQ(s.s_minus[0][0], Complex(1.0));
    EXPECT_EQ(s.s_minus[0][1], Complex(0.0));
}

TEST(Stokes, OneSolitonDiagonal) {
    auto c = Contour::real_line(20.0);
    auto p = jostforge::scattering::scattering_coeffs(sech2(), 1.0, c);
    auto m = jostforge::scattering::scattering_coeffs(sech2(), -1.0, c);
    auto s = check_stokes(p.a, p.b, m.b, m.a);
    EXPECT_LT(std::abs(s.s_minus[0][0] + I), 1e-8);
    EXPECT_LT(std::abs(s.s_minus[1][1] - I), 1e-8);
    EXPECT_LT(std::abs(s.s_minus[0][1]), 1e-8);
    EXPECT_TRUE(s.inverse.pass);
}

TEST(Stokes, BumpDeterminant) {
    auto c = Contour::real_line(9.0);
    auto p = jostforge::scattering::scattering_coeffs(bump(), 1.0, c);
    auto m = jostforge::scattering::scattering_coeffs(bump(), -1.0, c);
    auto s = check_stokes(p.a, p.b, m.b, m.a);
    EXPECT_LT(s.determinant.residual, 1e-6);
    EXPECT_TRUE(s.inverse.pass);
}

TEST(Stokes, PropertyDetOneIffInverse) {
    std::mt19937 rng(606);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        Complex a(n(rng), n(rng)), b(n(rng), n(rng)), bn(n(rng), n(rng));
        if (std::abs(a) < 0.1) continue;
        Complex an = (1.0 + b * bn) / a;
        auto good = check_stokes(a, b, bn, an, 1e-9);
        EXPECT_TRUE(good.determinant.pass && good.inverse.pass);
        auto bad = check_stokes(a, b, bn, an + 1e-3, 1e-9);
        EXPECT_FALSE(bad.determinant.pass);
        EXPECT_FALSE(bad.inverse.pass);
    }
}

TEST(PolarPart, MatchesContourIntegral) {
    // b/a with a = ((k-i)/(k+i))^nu (k-2)/(k+3) and b = 1 + k + k^3; oracle: trapezoid rule on a circle
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (int nu = 1; nu <= 3; ++nu) {
        Complex p0(c(rng), c(rng)), p1(c(rng), c(rng)), p3(c(rng), c(rng));
        auto a = [&](Complex k) { return std::pow((k - I) / (k + I), nu) * (k - 2.0) / (k + 3.0); };
        auto b = [&](Complex k) { return p0 + p1 * k + p3 * k * k * k; };
        const double rho = 0.3;
        const int N = 128;
        auto cauchy = [&](auto f, int m) {  // f^(m)(i) / m!
            Complex acc{};
            for (int s = 0; s < N; ++s) {
                Complex w = std::polar(1.0, 2 * std::numbers::pi * s / N);
                acc += f(I + rho * w) * std::pow(w, -m);
            }
            return acc / (static_cast<double>(N) * std::pow(rho, m));
        };
        std::vector<Complex> a_jet, b_jet;
        for (int m = nu; m < 2 * nu; ++m) a_jet.push_back(cauchy(a, m) * std::tgamma(m + 1.0));
        for (int r = 0; r < nu; ++r) b_jet.push_back(cauchy(b, r) * std::tgamma(r + 1.0));
        auto got = reflection_polar_part(a_jet, b_jet, nu);
        for (int s = 0; s < nu; ++s) {
            // coefficient of t^(s-nu) of b/a
            auto ratio = [&](Complex k) { return b(k) / a(k); };
            Complex want = cauchy(ratio, s - nu);
            EXPECT_LT(std::abs(got[s] - want), 1e-9) << nu << " " << s;
        }
    }
}

TEST(Roundtrip, EmptyDataPasses) {
    auto r = roundtrip({});
    EXPECT_TRUE(r.passed());
}

TEST(Roundtrip, Negaton) {
    auto r = roundtrip(testing_fixtures::negaton_data());
    EXPECT_TRUE(r.passed()) << r.to_text();
    const auto* bs = find(r, "bound states");
    ASSERT_NE(bs, nullptr);
    EXPECT_LT(bs->residual, 1e-5);
    const auto* polar = find(r, "reflection polar part");
    ASSERT_NE(polar, nullptr);
    auto jets = polar->extra["measured_jets"][0];
    EXPECT_NEAR(jets["b_jet"][0][0].get<double>(), 1.0, 1e-4);
    EXPECT_NEAR(jets["b_jet"][0][1].get<double>(), 0.0, 1e-4);
    EXPECT_NEAR(jets["a_jet"][0][0].get<double>(), -0.5, 1e-4);
}

TEST(Roundtrip, OneSolitonPotentialIsSech2) {
    auto syn = jostforge::synthesis::synthesize(testing_fixtures::one_soliton_data());
    for (double x : {-7.0, -1.2, 0.0, 0.4, 3.3, 9.0}) {
        auto v = jostforge::synthesis::eval_expr(syn.u, x);
        EXPECT_LT(std::abs(v.value - 2.0 / std::pow(std::cosh(x), 2)), 1e-10);
    }
    auto r = roundtrip(testing_fixtures::one_soliton_data());
    EXPECT_TRUE(r.passed()) << r.to_text();
}

TEST(Roundtrip, TwoSoliton) {
    auto r = roundtrip(testing_fixtures::two_soliton_data());
    EXPECT_TRUE(r.passed()) << r.to_text();
    EXPECT_EQ(find(r, "bound states")->extra["winding_total"].get<int>(), 2);
}

TEST(Roundtrip, InvalidDataFailsAtSynthesis) {
    auto data = testing_fixtures::one_soliton_data();
    data.entries.push_back(data.entries[0]);
    auto r = roundtrip(data);
    EXPECT_FALSE(r.passed());
    EXPECT_EQ(r.failed_stage, "synthesis");
}

TEST(Roundtrip, InconsistentLeadingJetIsReported) {
    // a_k(i) = -i differs from the -i/2 of (k-i)/(k+i); the polar part of b/a still has to match
    auto data = testing_fixtures::one_soliton_data();
    data.entries[0].a_jet = {GaussianRational(0, -1)};
    auto r = roundtrip(data);
    EXPECT_TRUE(find(r, "reflection polar part")->pass);
    EXPECT_FALSE(find(r, "leading jets")->pass);
}

TEST(Kovacic, TwoPoleConsistentWithIsolatedException) {
    auto c = check_kovacic_consistency(two_pole_potential(), unit_grid());
    EXPECT_TRUE(c.pass) << c.detail;
    ASSERT_EQ(c.extra["exceptional"].size(), 1u);
    EXPECT_NEAR(c.extra["exceptional"][0]["k"].get<double>(), 2.0 / std::sqrt(3.0), 1e-6);
    EXPECT_LT(c.extra["widest_bracket"].get<double>(), 1e-6);
}

TEST(Kovacic, CoulombNeverSolvable) {
    auto c = check_kovacic_consistency(pole_term(q(1), q(0), 1), unit_grid());
    EXPECT_TRUE(c.pass);
    EXPECT_TRUE(c.extra["exceptional"].empty());
}

TEST(Kovacic, DegreeGapTwoOutOfDomain) {
    EXPECT_THROW(check_kovacic_consistency(pole_term(q(1), q(0), 2), unit_grid()), std::invalid_argument);
}

TEST(Report, JsonIsDeterministicAndComplete) {
    auto a = roundtrip(testing_fixtures::one_soliton_data());
    auto b = roundtrip(testing_fixtures::one_soliton_data());
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
    auto j = nlohmann::json::parse(a.to_json().dump());
    EXPECT_EQ(j["suite"], "roundtrip");
    EXPECT_TRUE(j["passed"].get<bool>());
    for (const auto& c : j["checks"]) {
        EXPECT_FALSE(c["identity"].get<std::string>().empty());
        EXPECT_TRUE(c.contains("residual") && c.contains("tolerance") && c.contains("pass"));
    }
}

TEST(Report, UnknownSuite) { EXPECT_THROW(run_suite("nope"), std::invalid_argument); }

TEST(Report, KovacicSuitePasses) {
    auto r = run_suite("kovacic");
    EXPECT_TRUE(r.passed()) << r.to_text();
    EXPECT_EQ(r.checks.size(), 2u);
}
