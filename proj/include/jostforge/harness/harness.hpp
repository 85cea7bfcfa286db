#pragma once

#include "jostforge/exact/rational_function.hpp"
#include "jostforge/scattering/scattering.hpp"
#include "jostforge/synthesis/synthesis.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace jostforge::harness {

using Complex = std::complex<double>;

struct Check {
    std::string name;
    std::string identity;  // the relation being tested, in words or symbols
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
    nlohmann::json extra = nlohmann::json::object();
};

struct VerificationReport {
    std::string suite;
    std::map<std::string, std::string> inputs;
    std::vector<Check> checks;
    std::string failed_stage;  // empty unless a stage threw

    bool passed() const;
    void add(Check c) { checks.push_back(std::move(c)); }
    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// max |a(k)a(-k) - b(k)b(-k) - 1| over the grid. Throws std::invalid_argument
/// unless every grid point has its negative in the grid.
Check check_unitarity(const scattering::ScatteringRecord& record, double tol = 1e-6);

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

struct StokesCheck {
    Matrix2 s_minus{};
    Matrix2 s_plus{};
    Check determinant;
    Check inverse;
};

/// S- = [[a(k), b(-k)], [b(k), a(-k)]] and S+ = [[a(-k), -b(-k)], [-b(k), a(k)]].
StokesCheck check_stokes(Complex a, Complex b, Complex b_neg, Complex a_neg, double tol = 1e-6);

/// Laurent coefficients of b/a at a zero of order nu, orders -nu .. -1, from the jets.
std::vector<Complex> reflection_polar_part(const std::vector<Complex>& a_jet, const std::vector<Complex>& b_jet, int nu);

struct RoundtripTolerances {
    double reflection = 1e-6;  // max |rho| on the grid
    double unitarity = 1e-4;
    double bound_state = 1e-5;
    double jets = 1e-4;
    double psi = 1e-6;
};

/// synthesize -> numerical scattering of the synthesized u -> compare. Each
/// stage that throws ends the report with failed_stage set.
VerificationReport roundtrip(const synthesis::ExactSpectralData& data, const RoundtripTolerances& tol = {});

/// For rational u with degree gap 1: every grid k is NotSolvable and each
/// exceptional k found by refinement is isolated (bracket narrower than width_tol).
Check check_kovacic_consistency(const exact::RationalFunction& u, const std::vector<double>& k_grid,
                                double width_tol = 1e-6);

/// Bundled spectral data: "negaton", "one_soliton", "two_soliton".
std::map<std::string, synthesis::ExactSpectralData> corpus();

/// Suites: "identities", "roundtrip", "kovacic", "all". Throws std::invalid_argument on an unknown name.
VerificationReport run_suite(const std::string& name);
std::vector<std::string> suite_names();

/// per_side points evenly spaced on [lo, hi], mirrored to negative k.
std::vector<double> symmetric_grid(int per_side = 21, double lo = 0.3, double hi = 3.0);

}  // namespace jostforge::harness
