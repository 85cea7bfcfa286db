#pragma once

#include "jostforge/exact/radical.hpp"
#include "jostforge/exact/rational_function.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace jostforge::kovacic {

using exact::GaussianRational;
using exact::Poly;
using exact::RadicalSum;
using exact::RationalFunction;

struct Pole {
    GaussianRational location;  // meaningful when exact
    std::complex<double> value;
    int order = 0;
    bool exact = true;
};

struct PoleProfile {
    std::vector<Pole> poles;  // sorted by location
    int order_at_infinity = 0;
    bool exact = true;
};

struct ProfileOptions {
    bool numeric_fallback = false;
    double cluster_tol = 1e-10;
};

/// Poles of r with orders, plus deg den - deg num. Throws std::invalid_argument
/// for constant r and std::domain_error when a pole is not a Gaussian rational
/// and the numeric fallback is off.
PoleProfile pole_profile(const RationalFunction& r, const ProfileOptions& opts = {});

struct NecessaryConditions {
    bool a = false;
    bool b = false;
    bool c = false;
};

NecessaryConditions necessary_conditions(const PoleProfile& profile);

/// constant + per_k / k. per_k is nonzero only for kappa at infinity when k is
/// kept symbolic in r = -k^2 - u.
struct KappaValue {
    RadicalSum constant;
    GaussianRational per_k;
    std::complex<double> at(std::complex<double> k) const;
    std::string to_string() const;
};

struct KappaPair {
    KappaValue plus;
    KappaValue minus;
};

struct DValue {
    std::vector<int> signs;  // +1/-1 per pole (profile order), then infinity last
    KappaValue d;
};

enum class CaseAVerdict { excluded, inconclusive };

struct CaseAScreen {
    std::vector<KappaPair> pole_kappas;
    KappaPair infinity_kappa;
    std::vector<DValue> d_values;
    CaseAVerdict verdict = CaseAVerdict::excluded;
    bool symbolic_k = false;
    /// Symbolic screens only: real k != 0 at which some d_c lands in N0.
    std::vector<double> exceptional_k;
    bool exceptional_family = false;  // infinitely many (discrete) exceptional k
};

/// Case (a) screen for an exact r whose order at infinity is zero.
CaseAScreen case_a_screen(const RationalFunction& r, const PoleProfile& profile);

/// Case (a) screen for r = -k^2 - u with k symbolic (alpha = i k at infinity);
/// the verdict is for all real k != 0.
CaseAScreen case_a_screen_symbolic(const RationalFunction& u, const PoleProfile& profile);

/// Verdict of a symbolic screen at one numeric k.
CaseAVerdict case_a_verdict_at(const CaseAScreen& screen, double k, double tol = 1e-9);

using Families = std::vector<std::vector<long>>;  // per pole, ascending

Families case_b_families(const RationalFunction& r, const PoleProfile& profile);

struct CaseBCandidate {
    std::vector<long> e;
    long d_e = 0;
    RationalFunction theta;
};

std::vector<CaseBCandidate> case_b_candidates(const Families& families, const PoleProfile& profile);

struct CaseBSolution {
    Poly p;
    RationalFunction theta_hat;
    RationalFunction radicand;  // 4r - theta_hat^2 - 2 theta_hat'
    RationalFunction r;
    /// omega = (theta_hat + branch * sqrt(radicand)) / 2 and its derivative at x.
    std::complex<double> omega(std::complex<double> x, int branch) const;
    std::complex<double> omega_prime(std::complex<double> x, int branch) const;
    /// |v'' - r v| / (1 + |v''|) for v = exp(int omega), normalised to v(x) = 1.
    double residual(std::complex<double> x, int branch) const;
};

std::optional<CaseBSolution> case_b_solve(const RationalFunction& r, const RationalFunction& theta, long d_e);

/// Coefficient matrix of the linear system for P = sum_{j<=d} p_j x^j with p_d = 1 as
/// columns 0..d, split as M0 + k^2 M1 for r = -k^2 - u.
struct PSystem {
    std::vector<std::vector<GaussianRational>> m0;
    std::vector<std::vector<GaussianRational>> m1;
    /// sigma_min / sigma_max of M0 + k2 M1.
    double singular_ratio(std::complex<double> k2) const;
};

PSystem p_system(const RationalFunction& u, const RationalFunction& theta, long d_e);

struct CaseBResult {
    Families families;
    std::vector<CaseBCandidate> candidates;
    std::optional<CaseBSolution> solution;
    std::optional<std::size_t> solved_candidate;
};

enum class Verdict { solvable_case_b, not_solvable, inconclusive };

std::string to_string(Verdict v);
std::string to_string(CaseAVerdict v);

struct KovacicReport {
    std::optional<GaussianRational> k2;  // exact evaluation point
    std::optional<double> k;              // grid evaluation point
    PoleProfile profile;
    NecessaryConditions necessary;
    std::optional<CaseAScreen> case_a;
    CaseBResult case_b;
    Verdict verdict = Verdict::inconclusive;
    bool near_solvable = false;
    double min_singular_ratio = 1.0;
};

/// Exact report at r = -k2 - u.
KovacicReport analyze_exact(const RationalFunction& u, const GaussianRational& k2);

struct ExceptionalCandidate {
    double k = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double ratio = 1.0;
    std::size_t candidate = 0;
    std::optional<GaussianRational> confirmed_k2;  // exact k^2 at which the P system is singular
};

struct ScanResult {
    std::vector<KovacicReport> reports;
    std::vector<ExceptionalCandidate> exceptional;
    CaseAScreen symbolic_screen;
};

struct ScanOptions {
    double flag_ratio = 1e-8;
    double refine_width = 1e-10;
    double kappa_tol = 1e-9;
};

/// Reports at exact k^2 values.
std::vector<KovacicReport> solvability_scan(const RationalFunction& u, const std::vector<GaussianRational>& k2_values);

/// Reports on a real k grid, with minimal-singular-value refinement of exceptional k.
ScanResult solvability_scan(const RationalFunction& u, const std::vector<double>& k_grid, const ScanOptions& opts = {});

struct AsymptoticBranch {
    int branch = 1;
    GaussianRational exponent_constant;
    GaussianRational exponent_per_k;  // power-law exponent = exponent_constant + exponent_per_k / k
    GaussianRational rate_per_k;      // exponential rate = rate_per_k * k
};

/// Leading behaviour of omega at infinity: omega = rate + exponent / x + O(x^-2).
std::vector<AsymptoticBranch> asymptotic_exponents(const CaseBSolution& solution);

}  // namespace jostforge::kovacic
