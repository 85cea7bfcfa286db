#pragma once

#include "jostforge/exact/exp_rational.hpp"
#include "jostforge/exact/gaussian_rational.hpp"
#include "jostforge/exact/rational_function.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jostforge::scattering {

using Complex = std::complex<double>;

struct PolePoint {
    Complex location;
    int order = 1;
};

/// Evaluation of u at a point listed in pole_set.
class PoleEvaluation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integration or clearance trouble that a caller may want to report as a diagnostic.
class ScatteringFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DecayKind { none, algebraic, exponential };

struct DecayClass {
    DecayKind kind = DecayKind::exponential;
    int degree_gap = 0;  // m2 - m1 for rational u
};

/// u as a callable with the data the integrator needs: poles to clear, tail
/// behavior for truncation and a local distance-to-singularity estimate.
class PotentialEval {
public:
    using Fn = std::function<Complex(Complex)>;

    PotentialEval() = default;
    PotentialEval(Fn fn, std::vector<PolePoint> poles, DecayClass decay, double half_length);

    static PotentialEval zero();
    static PotentialEval from_rational(const exact::RationalFunction& u);
    template <class C>
    static PotentialEval from_exp_rational(const exact::ExpRational<C>& u, double scan_half_length = 30.0);
    /// A closure with optional known poles; decay assumed exponential.
    static PotentialEval from_function(Fn fn, std::vector<PolePoint> poles = {}, double half_length = 20.0);

    /// Throws PoleEvaluation within pole_tol of a listed pole.
    Complex operator()(Complex x) const;

    const std::vector<PolePoint>& poles() const noexcept { return poles_; }
    const DecayClass& decay() const noexcept { return decay_; }
    double suggested_half_length() const noexcept { return half_length_; }
    bool has_real_poles(double eps = 1e-9) const;

    /// Estimated distance from x to the nearest singularity (listed or detected).
    double clearance(Complex x) const;

    /// WKB phase integrals: int_x^inf u and int_-inf^x u, zero when unknown.
    Complex tail_right(Complex x) const;
    Complex tail_left(Complex x) const;

    double pole_tol = 1e-12;

private:
    Fn fn_;
    std::vector<PolePoint> poles_;
    DecayClass decay_;
    double half_length_ = 20.0;
    std::function<double(Complex)> distance_;
    std::vector<Complex> tail_coeffs_;  // coefficient of x^-n at index n, rational u only
};

enum class ContourKind { real_line, deformed };

/// xi -> gamma(xi) on [-L, L]; gamma = xi or xi + i c sech xi.
struct Contour {
    ContourKind kind = ContourKind::real_line;
    double half_length = 20.0;
    double height = 0.0;

    static Contour real_line(double half_length);
    static Contour deformed(double half_length, double height);

    Complex at(double xi) const;
    Complex derivative(double xi) const;

    /// Smallest u.clearance along the contour sampled on `samples` points.
    double clearance(const PotentialEval& u, int samples = 4001) const;
};

/// RealLine when u has no real poles, otherwise the first height in
/// {1, 0.75, 0.5, 0.25} whose contour keeps min_clearance from every singularity.
/// Throws ScatteringFailure when none does.
Contour auto_contour(const PotentialEval& u, std::optional<double> half_length = std::nullopt,
                     std::optional<double> height = std::nullopt, double min_clearance = 0.05);

struct JostOptions {
    double tol = 1e-10;
    /// Unset: 0 on the real line; on a deformed contour L/2 for Re k >= 0 and
    /// -L/2 otherwise, so the solution crossing the hump is the one that grows there.
    std::optional<double> match_xi;
    bool wkb = true;
    double min_clearance = 0.02;
};

/// Values of the Jost envelope m and dm/dx at a contour node.
/// phi = exp(-ikx) m with m -> 1 at -inf, psi = exp(ikx) m with m -> 1 at +inf.
struct JostSample {
    double xi = 0.0;
    Complex x;
    Complex m, m_x;
};

enum class Side { left, right };

/// Integrates one Jost envelope from its end of the contour and records it at
/// the requested nodes (sorted along the integration direction internally).
std::vector<JostSample> integrate_jost(const PotentialEval& u, Complex k, const Contour& contour, Side side,
                                       const std::vector<double>& nodes, const JostOptions& opts = {});

struct JostEndpoints {
    JostSample phi_left, phi_right;  // phi at xi = -L and xi = +L
    JostSample psi_left, psi_right;
    Complex phi(const JostSample& s, Complex k) const { return std::exp(Complex(0, -1) * k * s.x) * s.m; }
    Complex psi(const JostSample& s, Complex k) const { return std::exp(Complex(0, 1) * k * s.x) * s.m; }
};

JostEndpoints jost_solutions(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts = {});

struct Coefficients {
    Complex a, b;
};

/// a = W(phi, psi)/(2ik), b = -W(phi, psi(-k))/(2ik) at the matching node.
/// b needs a third integration and is only stable for real k.
Coefficients scattering_coeffs(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts = {});
Complex coefficient_a(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts = {});

/// W(phi(k), phi(-k)) - 2ik at each node, relative to |2k|.
std::vector<double> wronskian_residuals(const PotentialEval& u, Complex k, const Contour& contour,
                                        const std::vector<double>& nodes, const JostOptions& opts = {});

struct BoundStateEstimate {
    Complex k;
    int nu = 1;
};

struct Jets {
    std::vector<Complex> a_jet;  // a^(m)(k_j), m = nu .. 2nu-1
    std::vector<Complex> b_jet;  // b^(r)(k_j), r = 0 .. nu-1
};

struct Diagnostics {
    double unitarity_residual = 0.0;
    double wronskian_residual = 0.0;
    bool unitarity_checked = false;
};

struct ScatteringRecord {
    std::vector<Complex> k_grid;
    std::vector<Complex> a_values, b_values;
    std::vector<std::optional<Complex>> rho_values;  // empty where a = 0
    std::vector<BoundStateEstimate> bound_states;
    std::vector<Jets> jets;
    Diagnostics diagnostics;
};

struct ReflectionScan {
    ScatteringRecord record;
    bool reflectionless = false;
    double max_rho = 0.0;
    double threshold = 1e-6;
};

/// a, b over a real grid; the unitarity residual covers every pair (k, -k) in the grid.
ReflectionScan scan_reflection(const PotentialEval& u, const std::vector<double>& k_grid, const Contour& contour,
                               const JostOptions& opts = {}, double threshold = 1e-6);

struct SearchBox {
    double re_lo = -2.0, re_hi = 2.0;
    double im_lo = 0.25, im_hi = 3.25;
};

struct BoundStateSearch {
    std::vector<BoundStateEstimate> states;
    int winding_total = 0;
    int evaluations = 0;
};

/// Zeros of a in the box: winding numbers on a quadtree of sub-boxes, then
/// power sums of the zeros from log-derivative integrals on small circles.
BoundStateSearch find_bound_states(const PotentialEval& u, const Contour& contour, const SearchBox& box = {},
                                   const JostOptions& opts = {});

/// Cauchy-integral jets on `nodes` points of the circle |k - k_j| = radius
/// (default 0.1 Im k_j). The b-jet comes from W(chi, phi)/W(chi, psi), chi
/// carrying exp(-ikx) data at the matching node (default xi = 0), which agrees
/// with b to order nu.
Jets extract_jets(const PotentialEval& u, Complex kj, int nu, const Contour& contour,
                  std::optional<double> radius = std::nullopt, const JostOptions& opts = {}, int nodes = 64);

struct HighKSample {
    double k = 0.0;
    Complex a, b;
    double a_error = 0.0;  // |a - 1|
    double b_size = 0.0;
};

struct HighKRecord {
    std::vector<HighKSample> samples;
    double a_rate = 0.0;  // fitted exponent p in |a - 1| ~ k^-p (0 when a = 1 exactly)
    double b_rate = 0.0;
};

/// On a deformed contour each k uses the largest height c/2^j with 2|k|c <= 12
/// that still clears the poles.
HighKRecord high_k_limits(const PotentialEval& u, const Contour& contour,
                          const std::vector<double>& ladder = {5.0, 10.0, 20.0, 50.0}, const JostOptions& opts = {});

}  // namespace jostforge::scattering
