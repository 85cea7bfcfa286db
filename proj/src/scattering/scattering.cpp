#include "jostforge/scattering/scattering.hpp"

#include "jostforge/exact/laurent_series.hpp"
#include "jostforge/exact/roots.hpp"
#include "jostforge/synthesis/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace jostforge::scattering {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

double min_distance(const std::vector<PolePoint>& poles, Complex x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : poles) d = std::min(d, std::abs(x - p.location));
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// PotentialEval

PotentialEval::PotentialEval(Fn fn, std::vector<PolePoint> poles, DecayClass decay, double half_length)
    : fn_(std::move(fn)), poles_(std::move(poles)), decay_(decay), half_length_(half_length) {}

PotentialEval PotentialEval::zero() {
    return PotentialEval([](Complex) { return Complex{}; }, {}, {DecayKind::none, 0}, 10.0);
}

PotentialEval PotentialEval::from_rational(const exact::RationalFunction& u) {
    if (u.is_zero()) return zero();
    std::vector<PolePoint> poles;
    for (const auto& r : exact::poly_roots(u.den())) poles.push_back({r.value, r.multiplicity});
    int gap = u.order_at_infinity();
    PotentialEval out([u](Complex x) { return u.eval(x); }, std::move(poles), {DecayKind::algebraic, gap},
                      gap >= 2 ? 200.0 : 20.0);
    if (gap >= 2) {
        constexpr int terms = 16;
        auto series = exact::laurent_expand(u, exact::ExpansionPoint::infinity(), -(gap + terms));
        out.tail_coeffs_.assign(gap + terms + 1, Complex{});
        for (int n = gap; n <= gap + terms; ++n) out.tail_coeffs_[n] = series.coefficient(-n).to_complex();
    }
    return out;
}

template <class C>
PotentialEval PotentialEval::from_exp_rational(const exact::ExpRational<C>& u, double scan_half_length) {
    if (u.is_zero()) return zero();
    const auto& basis = u.basis();
    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& r : basis->rates) slowest = std::min(slowest, std::abs(exact::Coeff<C>::to_complex(r).real()));
    if (basis->size() == 0 || !(slowest > 0.0))
        throw std::invalid_argument("exp-rational potential without decaying exponentials");

    std::vector<PolePoint> poles;
    for (const auto& p : synthesis::real_poles(u, -scan_half_length, scan_half_length))
        poles.push_back({Complex(p.x, 0.0), p.order});

    double L = std::max(12.0, 44.0 / slowest);
    PotentialEval out(
        [u](Complex x) {
            auto r = u.evaluate(x);
            if (r.pole) throw PoleEvaluation("potential evaluated at a pole");
            return r.value;
        },
        std::move(poles), {DecayKind::exponential, 0}, L);

    auto dden = exact::ExpRational<C>(basis, u.den(), exact::MPoly<C>::constant(basis->nvars(), C(1))).derivative_x();
    if (!dden.is_zero()) {
        exact::ExpRational<C> newton(basis, u.den(), dden.num());
        out.distance_ = [newton](Complex x) {
            auto r = newton.evaluate(x);
            return r.pole ? std::numeric_limits<double>::infinity() : std::abs(r.value);
        };
    }
    return out;
}

PotentialEval PotentialEval::from_function(Fn fn, std::vector<PolePoint> poles, double half_length) {
    return PotentialEval(std::move(fn), std::move(poles), {DecayKind::exponential, 0}, half_length);
}

Complex PotentialEval::operator()(Complex x) const {
    if (min_distance(poles_, x) <= pole_tol) throw PoleEvaluation("potential evaluated at a listed pole");
    return fn_(x);
}

bool PotentialEval::has_real_poles(double eps) const {
    return std::any_of(poles_.begin(), poles_.end(), [&](const PolePoint& p) { return std::abs(p.location.imag()) <= eps; });
}

double PotentialEval::clearance(Complex x) const {
    double d = min_distance(poles_, x);
    if (distance_) d = std::min(d, distance_(x));
    return d;
}

Complex PotentialEval::tail_right(Complex x) const {
    Complex s{};
    for (std::size_t n = 2; n < tail_coeffs_.size(); ++n)
        s += tail_coeffs_[n] * std::pow(x, 1.0 - static_cast<double>(n)) / static_cast<double>(n - 1);
    return s;
}

Complex PotentialEval::tail_left(Complex x) const { return -tail_right(x); }

// ---------------------------------------------------------------------------
// Contour

Contour Contour::real_line(double half_length) { return {ContourKind::real_line, half_length, 0.0}; }

Contour Contour::deformed(double half_length, double height) { return {ContourKind::deformed, half_length, height}; }

Complex Contour::at(double xi) const {
    if (kind == ContourKind::real_line) return {xi, 0.0};
    return {xi, height / std::cosh(xi)};
}

Complex Contour::derivative(double xi) const {
    if (kind == ContourKind::real_line) return {1.0, 0.0};
    return {1.0, -height * std::tanh(xi) / std::cosh(xi)};
}

double Contour::clearance(const PotentialEval& u, int samples) const {
    double d = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        double xi = -half_length + 2.0 * half_length * s / (samples - 1);
        d = std::min(d, u.clearance(at(xi)));
    }
    return d;
}

Contour auto_contour(const PotentialEval& u, std::optional<double> half_length, std::optional<double> height,
                     double min_clearance) {
    double L = half_length.value_or(u.suggested_half_length());
    if (height) {
        if (*height == 0.0) return Contour::real_line(L);
        return Contour::deformed(L, *height);
    }
    if (!u.has_real_poles()) return Contour::real_line(L);
    for (double c : {1.0, 0.75, 0.5, 0.25}) {
        auto contour = Contour::deformed(L, c);
        if (contour.clearance(u) >= min_clearance) return contour;
    }
    throw ScatteringFailure("no contour height in {1, 0.75, 0.5, 0.25} clears the poles of u");
}

// ---------------------------------------------------------------------------
// Jost integration

namespace {

using State = std::array<Complex, 2>;

void ensure_admissible(const PotentialEval& u, const Contour& contour, const JostOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (u.decay().kind == DecayKind::algebraic && u.decay().degree_gap < 2)
        throw std::invalid_argument("potential is not integrable at infinity (degree gap below 2)");
    if (contour.kind == ContourKind::real_line && u.has_real_poles())
        throw ScatteringFailure("real-line contour with real poles of u");
    double c = contour.clearance(u, 2001);
    if (c < opts.min_clearance) {
        std::ostringstream os;
        os << "contour passes within " << c << " of a singularity of u";
        throw ScatteringFailure(os.str());
    }
}

/// Jost envelope equation m'' = 2 i sigma k m' - u m along the contour, with
/// sigma = +1 for phi (left) and -1 for psi (right).
struct EnvelopeSystem {
    const PotentialEval* u;
    const Contour* contour;
    Complex k;
    double sigma;
    void operator()(const State& s, State& ds, double xi) const {
        Complex g = contour->derivative(xi);
        Complex x = contour->at(xi);
        ds[0] = g * s[1];
        ds[1] = g * (2.0 * kI * sigma * k * s[1] - (*u)(x) * s[0]);
    }
};

std::vector<JostSample> integrate_envelope(const PotentialEval& u, Complex k, const Contour& contour, Side side,
                                           std::vector<double> nodes, const JostOptions& opts) {
    if (k == Complex{}) throw std::invalid_argument("Jost solutions need k != 0");
    const double L = contour.half_length;
    const double start = side == Side::left ? -L : L;
    const double sigma = side == Side::left ? 1.0 : -1.0;
    for (double n : nodes)
        if (n < -L || n > L) throw std::invalid_argument("node outside the contour");

    Complex x0 = contour.at(start);
    Complex u0 = u(x0);
    Complex tail = opts.wkb ? (side == Side::left ? u.tail_left(x0) : u.tail_right(x0)) : Complex{};
    State state{std::exp(tail / (2.0 * kI * k)), Complex{}};
    state[1] = (side == Side::left ? 1.0 : -1.0) * (opts.wkb ? u0 : Complex{}) / (2.0 * kI * k) * state[0];

    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return side == Side::left ? nodes[a] < nodes[b] : nodes[a] > nodes[b];
    });

    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(opts.tol * 1e-2, opts.tol);
    EnvelopeSystem sys{&u, &contour, k, sigma};
    std::vector<JostSample> out(nodes.size());
    double t = start;
    double dt = (side == Side::left ? 1.0 : -1.0) * 1e-2;
    for (std::size_t idx : order) {
        double target = nodes[idx];
        if (target != t) {
            try {
                odeint::integrate_adaptive(stepper, sys, state, t, target, dt);
            } catch (const PoleEvaluation&) {
                throw;
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << "integration stalled between xi = " << t << " and " << target << ": " << e.what();
                throw ScatteringFailure(os.str());
            }
            t = target;
        }
        if (!std::isfinite(std::abs(state[0])) || !std::isfinite(std::abs(state[1])))
            throw ScatteringFailure("Jost envelope overflowed");
        out[idx] = {target, contour.at(target), state[0], state[1]};
    }
    return out;
}

double match_node(const Contour& contour, Complex k, const JostOptions& opts) {
    if (opts.match_xi) return *opts.match_xi;
    if (contour.kind == ContourKind::real_line) return 0.0;
    return (k.real() >= 0.0 ? 0.5 : -0.5) * contour.half_length;
}

struct Match {
    JostSample phi, psi;
};

Match match_at(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts, double xi) {
    return {integrate_envelope(u, k, contour, Side::left, {xi}, opts)[0],
            integrate_envelope(u, k, contour, Side::right, {xi}, opts)[0]};
}

Match match_at(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts) {
    return match_at(u, k, contour, opts, match_node(contour, k, opts));
}

Complex a_from(const Match& m, Complex k) {
    return (m.phi.m * m.psi.m_x - m.phi.m_x * m.psi.m + 2.0 * kI * k * m.phi.m * m.psi.m) / (2.0 * kI * k);
}

Coefficients coeffs_unchecked(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts) {
    double xi = match_node(contour, k, opts);
    auto m = match_at(u, k, contour, opts, xi);
    auto psi_neg = integrate_envelope(u, -k, contour, Side::right, {xi}, opts)[0];
    Complex x = m.phi.x;
    Complex w = m.phi.m * psi_neg.m_x - m.phi.m_x * psi_neg.m;
    return {a_from(m, k), -std::exp(-2.0 * kI * k * x) * w / (2.0 * kI * k)};
}

Complex a_unchecked(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts) {
    return a_from(match_at(u, k, contour, opts), k);
}

/// b~ = W(chi, phi)/W(chi, psi) with chi = exp(-ikx) data at the matching node.
Complex b_tilde(const Match& m, Complex k) {
    return std::exp(-2.0 * kI * k * m.phi.x) * m.phi.m_x / (m.psi.m_x + 2.0 * kI * k * m.psi.m);
}

}  // namespace

std::vector<JostSample> integrate_jost(const PotentialEval& u, Complex k, const Contour& contour, Side side,
                                       const std::vector<double>& nodes, const JostOptions& opts) {
    ensure_admissible(u, contour, opts);
    return integrate_envelope(u, k, contour, side, nodes, opts);
}

JostEndpoints jost_solutions(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts) {
    ensure_admissible(u, contour, opts);
    const double L = contour.half_length;
    auto phi = integrate_envelope(u, k, contour, Side::left, {-L, L}, opts);
    auto psi = integrate_envelope(u, k, contour, Side::right, {-L, L}, opts);
    return {phi[0], phi[1], psi[0], psi[1]};
}

Coefficients scattering_coeffs(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts) {
    ensure_admissible(u, contour, opts);
    return coeffs_unchecked(u, k, contour, opts);
}

Complex coefficient_a(const PotentialEval& u, Complex k, const Contour& contour, const JostOptions& opts) {
    ensure_admissible(u, contour, opts);
    return a_unchecked(u, k, contour, opts);
}

std::vector<double> wronskian_residuals(const PotentialEval& u, Complex k, const Contour& contour,
                                        const std::vector<double>& nodes, const JostOptions& opts) {
    ensure_admissible(u, contour, opts);
    auto plus = integrate_envelope(u, k, contour, Side::left, nodes, opts);
    auto minus = integrate_envelope(u, -k, contour, Side::left, nodes, opts);
    std::vector<double> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& p = plus[i];
        const auto& q = minus[i];
        Complex w = p.m * q.m_x - p.m_x * q.m + 2.0 * kI * k * p.m * q.m;
        out.push_back(std::abs(w - 2.0 * kI * k) / std::abs(2.0 * k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reflection scan

ReflectionScan scan_reflection(const PotentialEval& u, const std::vector<double>& k_grid, const Contour& contour,
                               const JostOptions& opts, double threshold) {
    ensure_admissible(u, contour, opts);
    ReflectionScan scan;
    scan.threshold = threshold;
    auto& rec = scan.record;
    for (double k : k_grid) {
        if (k == 0.0) throw std::invalid_argument("k grid must avoid 0");
        auto c = coeffs_unchecked(u, k, contour, opts);
        rec.k_grid.emplace_back(k, 0.0);
        rec.a_values.push_back(c.a);
        rec.b_values.push_back(c.b);
        if (std::abs(c.a) > 1e-14) {
            rec.rho_values.emplace_back(c.b / c.a);
            scan.max_rho = std::max(scan.max_rho, std::abs(c.b / c.a));
        } else {
            rec.rho_values.emplace_back(std::nullopt);
        }
    }
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (k_grid[i] <= 0.0) continue;
        for (std::size_t j = 0; j < k_grid.size(); ++j) {
            if (std::abs(k_grid[j] + k_grid[i]) > 1e-12 * std::abs(k_grid[i])) continue;
            Complex r = rec.a_values[i] * rec.a_values[j] - rec.b_values[i] * rec.b_values[j] - 1.0;
            rec.diagnostics.unitarity_residual = std::max(rec.diagnostics.unitarity_residual, std::abs(r));
            rec.diagnostics.unitarity_checked = true;
        }
    }
    if (!k_grid.empty()) {
        const double L = contour.half_length;
        auto w = wronskian_residuals(u, k_grid[k_grid.size() / 2], contour, {-L / 2, 0.0, L / 2}, opts);
        rec.diagnostics.wronskian_residual = *std::max_element(w.begin(), w.end());
    }
    scan.reflectionless = scan.max_rho < threshold;
    return scan;
}

// ---------------------------------------------------------------------------
// Bound states

namespace {

class ACache {
public:
    ACache(const PotentialEval& u, const Contour& contour, const JostOptions& opts)
        : u_(u), contour_(contour), opts_(opts) {}
    Complex operator()(Complex k) {
        auto key = std::make_pair(k.real(), k.imag());
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Complex a = a_unchecked(u_, k, contour_, opts_);
        cache_.emplace(key, a);
        return a;
    }
    int evaluations() const { return static_cast<int>(cache_.size()); }

private:
    const PotentialEval& u_;
    const Contour& contour_;
    JostOptions opts_;
    std::map<std::pair<double, double>, Complex> cache_;
};

struct BoundaryZero {};

struct Box {
    double x0, x1, y0, y1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    Complex center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
    bool contains(Complex z, double slack) const {
        return z.real() >= x0 - slack && z.real() <= x1 + slack && z.imag() >= y0 - slack && z.imag() <= y1 + slack;
    }
};

double arg_change(ACache& a, Complex p, Complex q, Complex ap, Complex aq, double scale, int depth) {
    double d = std::arg(aq / ap);
    if (std::abs(d) <= kPi / 4 || depth >= 14) return d;
    Complex m = 0.5 * (p + q);
    Complex am = a(m);
    if (std::abs(am) < 1e-12 * scale) throw BoundaryZero{};
    return arg_change(a, p, m, ap, am, scale, depth + 1) + arg_change(a, m, q, am, aq, scale, depth + 1);
}

int winding(ACache& a, const Box& b) {
    std::array<Complex, 4> corners{Complex(b.x0, b.y0), Complex(b.x1, b.y0), Complex(b.x1, b.y1), Complex(b.x0, b.y1)};
    constexpr int pieces = 6;
    std::vector<Complex> pts;
    for (int e = 0; e < 4; ++e)
        for (int s = 0; s < pieces; ++s)
            pts.push_back(corners[e] + (corners[(e + 1) % 4] - corners[e]) * (static_cast<double>(s) / pieces));
    std::vector<Complex> vals;
    double scale = 0.0;
    for (auto p : pts) {
        vals.push_back(a(p));
        scale = std::max(scale, std::abs(vals.back()));
    }
    for (auto v : vals)
        if (std::abs(v) < 1e-12 * scale) throw BoundaryZero{};
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t j = (i + 1) % pts.size();
        total += arg_change(a, pts[i], pts[j], vals[i], vals[j], scale, 0);
    }
    double w = total / (2 * kPi);
    return static_cast<int>(std::lround(w));
}

struct CircleMoments {
    int count = 0;
    bool clean = false;
    std::vector<Complex> roots;  // absolute positions
};

/// Zeros of a inside |k - c| < rho from the power sums of the zeros, which
/// come from trapezoid integrals of w^p a'/a with a' obtained spectrally.
CircleMoments circle_roots(ACache& a, Complex c, double rho, int nodes = 64) {
    std::vector<Complex> vals(nodes), unit(nodes);
    for (int s = 0; s < nodes; ++s) {
        unit[s] = std::polar(1.0, 2 * kPi * s / nodes);
        vals[s] = a(c + rho * unit[s]);
    }
    std::vector<Complex> coef(nodes);
    for (int n = 0; n < nodes; ++n) {
        Complex acc{};
        for (int s = 0; s < nodes; ++s) acc += vals[s] * std::conj(std::pow(unit[s], n));
        coef[n] = acc / static_cast<double>(nodes);
    }
    // a'(z) * rho * w at w = unit[s], i.e. sum_n n coef_n w^n
    std::vector<Complex> logd(nodes);
    for (int s = 0; s < nodes; ++s) {
        Complex acc{};
        Complex wp{1.0, 0.0};
        for (int n = 0; n < nodes / 2; ++n) {
            acc += static_cast<double>(n) * coef[n] * wp;
            wp *= unit[s];
        }
        logd[s] = acc / vals[s];
    }
    auto power_sum = [&](int p) {
        Complex acc{};
        for (int s = 0; s < nodes; ++s) acc += logd[s] * std::pow(unit[s], p);
        return acc / static_cast<double>(nodes);
    };
    CircleMoments out;
    Complex s0 = power_sum(0);
    out.count = static_cast<int>(std::lround(s0.real()));
    out.clean = std::abs(s0 - static_cast<double>(out.count)) < 1e-3 && out.count >= 0 && out.count <= 8;
    if (!out.clean || out.count == 0) return out;
    int n = out.count;
    std::vector<Complex> ps(n + 1), e(n + 1);
    for (int p = 1; p <= n; ++p) ps[p] = power_sum(p);
    e[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        Complex acc{};
        for (int i = 1; i <= m; ++i) acc += (i % 2 == 1 ? 1.0 : -1.0) * e[m - i] * ps[i];
        e[m] = acc / static_cast<double>(m);
    }
    // w^n - e1 w^(n-1) + e2 w^(n-2) - ...
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) {
        int m = n - i;  // coefficient of w^i is (-1)^m e_m
        comp(i, n - 1) = -((m % 2 == 0 ? 1.0 : -1.0) * e[m]);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp);
    for (int i = 0; i < n; ++i) out.roots.push_back(c + rho * solver.eigenvalues()[i]);
    return out;
}

std::vector<BoundStateEstimate> cluster(const std::vector<Complex>& roots, double tol) {
    std::vector<BoundStateEstimate> out;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        Complex sum = roots[i];
        int count = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (!used[j] && std::abs(roots[j] - roots[i]) < tol) {
                used[j] = true;
                sum += roots[j];
                ++count;
            }
        out.push_back({sum / static_cast<double>(count), count});
    }
    return out;
}

}  // namespace

BoundStateSearch find_bound_states(const PotentialEval& u, const Contour& contour, const SearchBox& box,
                                   const JostOptions& opts) {
    if (!(box.im_lo > 0.0) || box.im_hi <= box.im_lo || box.re_hi <= box.re_lo)
        throw std::invalid_argument("search box must lie in the open upper half plane");
    ensure_admissible(u, contour, opts);
    ACache a(u, contour, opts);
    BoundStateSearch result;

    auto safe_winding = [&](Box b) {
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                return std::make_pair(winding(a, b), b);
            } catch (const BoundaryZero&) {
                double d = 1e-3 * (attempt + 1) * std::max(b.width(), b.height());
                b = {b.x0 - d, b.x1 + 0.7 * d, b.y0 + 0.6 * d, b.y1 + 0.9 * d};
            }
        }
        throw ScatteringFailure("a(k) vanishes on the search box boundary after perturbation");
    };

    auto [total, root] = safe_winding({box.re_lo, box.re_hi, box.im_lo, box.im_hi});
    result.winding_total = total;
    std::vector<Complex> roots;
    std::vector<std::pair<Box, int>> stack;
    if (total > 0) stack.push_back({root, total});
    while (!stack.empty()) {
        auto [b, w] = stack.back();
        stack.pop_back();
        double rho = 0.5 * std::hypot(b.width(), b.height()) * 1.02;
        Complex c = b.center();
        if (rho <= 0.3 && c.imag() - rho > 0.05) {
            auto moments = circle_roots(a, c, rho);
            if (moments.clean) {
                std::vector<Complex> inside;
                for (auto z : moments.roots)
                    if (b.contains(z, 1e-9)) inside.push_back(z);
                if (static_cast<int>(inside.size()) == w) {
                    roots.insert(roots.end(), inside.begin(), inside.end());
                    continue;
                }
            }
        }
        if (std::max(b.width(), b.height()) < 1e-3) throw ScatteringFailure("bound-state quadtree did not resolve");
        // off-center splits keep symmetric zeros (such as k = i) off the new edges
        std::vector<std::pair<Box, int>> kids;
        bool split = false;
        for (double f : {0.4871, 0.5317, 0.4523, 0.5589}) {
            double xm = b.x0 + f * b.width(), ym = b.y0 + (1.0 - f) * b.height();
            kids.clear();
            int sum = 0;
            try {
                for (Box kb : {Box{b.x0, xm, b.y0, ym}, Box{xm, b.x1, b.y0, ym}, Box{b.x0, xm, ym, b.y1},
                               Box{xm, b.x1, ym, b.y1}}) {
                    int kw = winding(a, kb);
                    sum += kw;
                    if (kw > 0) kids.push_back({kb, kw});
                }
            } catch (const BoundaryZero&) {
                continue;
            }
            if (sum == w) {
                split = true;
                break;
            }
        }
        if (!split) throw ScatteringFailure("winding numbers of sub-boxes do not add up");
        stack.insert(stack.end(), kids.begin(), kids.end());
    }

    for (auto est : cluster(roots, 1e-4)) {
        for (int pass = 0; pass < 2; ++pass) {
            double rho = 0.1 * est.k.imag();
            auto m = circle_roots(a, est.k, rho);
            if (!m.clean || m.count != est.nu) throw ScatteringFailure("multiplicity changed during refinement");
            Complex sum{};
            for (auto z : m.roots) sum += z;
            est.k = sum / static_cast<double>(est.nu);
        }
        result.states.push_back(est);
    }
    std::sort(result.states.begin(), result.states.end(), [](const auto& p, const auto& q) {
        return p.k.imag() != q.k.imag() ? p.k.imag() < q.k.imag() : p.k.real() < q.k.real();
    });
    result.evaluations = a.evaluations();
    return result;
}

Jets extract_jets(const PotentialEval& u, Complex kj, int nu, const Contour& contour, std::optional<double> radius,
                  const JostOptions& opts, int nodes) {
    if (nu < 1) throw std::invalid_argument("multiplicity must be positive");
    if (!(kj.imag() > 0.0)) throw std::invalid_argument("bound state must lie in the upper half plane");
    double rho = radius.value_or(0.1 * kj.imag());
    if (!(rho > 0.0) || rho >= kj.imag()) throw std::invalid_argument("jet circle must stay in the upper half plane");
    ensure_admissible(u, contour, opts);

    std::vector<Complex> av(nodes), bv(nodes), unit(nodes);
    double amax = 0.0;
    // at the far node m_x ~ exp(2ikx) is tiny and b~ loses digits
    const double xi = opts.match_xi.value_or(0.0);
    for (int s = 0; s < nodes; ++s) {
        unit[s] = std::polar(1.0, 2 * kPi * s / nodes);
        Complex k = kj + rho * unit[s];
        auto m = match_at(u, k, contour, opts, xi);
        av[s] = a_from(m, k);
        bv[s] = b_tilde(m, k);
        amax = std::max(amax, std::abs(av[s]));
    }
    auto taylor = [&](const std::vector<Complex>& v, int n) {
        Complex acc{};
        for (int s = 0; s < nodes; ++s) acc += v[s] * std::conj(std::pow(unit[s], n));
        return acc / static_cast<double>(nodes);
    };
    auto deriv = [&](Complex t, int n) { return t * std::tgamma(n + 1.0) / std::pow(rho, n); };

    for (int m = 0; m < nu; ++m)
        if (std::abs(taylor(av, m)) > 1e-6 * amax)
            throw ScatteringFailure("a does not vanish to the stated order at the bound state");
    if (std::abs(taylor(av, nu)) < 1e-6 * amax)
        throw ScatteringFailure("leading a-derivative vanishes: multiplicity is higher than stated");

    Jets jets;
    for (int m = nu; m < 2 * nu; ++m) jets.a_jet.push_back(deriv(taylor(av, m), m));
    for (int r = 0; r < nu; ++r) jets.b_jet.push_back(deriv(taylor(bv, r), r));
    return jets;
}

HighKRecord high_k_limits(const PotentialEval& u, const Contour& contour, const std::vector<double>& ladder,
                          const JostOptions& opts) {
    ensure_admissible(u, contour, opts);
    HighKRecord rec;
    for (double k : ladder) {
        Contour path = contour;
        if (path.kind == ContourKind::deformed) {
            while (2.0 * std::abs(k) * path.height > 12.0) {
                Contour lower = Contour::deformed(path.half_length, path.height / 2);
                if (lower.clearance(u, 2001) < opts.min_clearance) break;
                path = lower;
            }
        }
        auto c = coeffs_unchecked(u, k, path, opts);
        rec.samples.push_back({k, c.a, c.b, std::abs(c.a - 1.0), std::abs(c.b)});
    }
    auto rate = [&](auto field) {
        const HighKSample* first = nullptr;
        const HighKSample* last = nullptr;
        for (const auto& s : rec.samples) {
            if (field(s) <= 1e-14) continue;
            if (!first) first = &s;
            last = &s;
        }
        if (!first || first == last) return 0.0;
        return -std::log(field(*last) / field(*first)) / std::log(last->k / first->k);
    };
    rec.a_rate = rate([](const HighKSample& s) { return s.a_error; });
    rec.b_rate = rate([](const HighKSample& s) { return s.b_size; });
    return rec;
}

template PotentialEval PotentialEval::from_exp_rational<exact::GaussianRational>(
    const exact::ExpRational<exact::GaussianRational>&, double);
template PotentialEval PotentialEval::from_exp_rational<Complex>(const exact::ExpRational<Complex>&, double);

}  // namespace jostforge::scattering
