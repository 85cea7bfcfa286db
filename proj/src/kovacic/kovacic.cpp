#include "jostforge/kovacic/kovacic.hpp"

#include "jostforge/exact/laurent_series.hpp"
#include "jostforge/exact/linear_solve.hpp"
#include "jostforge/exact/roots.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace jostforge::kovacic {

using exact::ExpansionPoint;
using exact::LaurentSeries;
using exact::laurent_expand;

namespace {

GaussianRational half() { return GaussianRational(mpq_class(1, 2)); }

RationalFunction rf(const GaussianRational& c) { return RationalFunction(c); }

bool is_integer_value(const RadicalSum& v, long& out) {
    auto q = v.as_rational();
    if (!q || !q->is_integer()) return false;
    out = q->to_long();
    return true;
}

const Pole& require_exact(const Pole& p) {
    if (!p.exact) throw std::domain_error("pole location is not exact; recipes need exact poles");
    return p;
}

KappaPair pole_kappa(const RationalFunction& r, const Pole& pole) {
    require_exact(pole);
    const auto at = ExpansionPoint::at(pole.location);
    KappaPair out;
    if (pole.order == 1) {
        out.plus.constant = RadicalSum(GaussianRational(1));
        out.minus.constant = RadicalSum(GaussianRational(1));
        return out;
    }
    if (pole.order == 2) {
        GaussianRational beta = laurent_expand(r, at, -2).coefficient(-2);
        RadicalSum s = RadicalSum::sqrt(GaussianRational(1) + GaussianRational(4) * beta);
        out.plus.constant = RadicalSum(half()) + RadicalSum(half()) * s;
        out.minus.constant = RadicalSum(half()) - RadicalSum(half()) * s;
        return out;
    }
    if (pole.order % 2 != 0) {
        throw std::domain_error("case (a) recipes do not cover poles of odd order greater than one");
    }
    const int l = pole.order / 2;
    auto series = laurent_expand(r, at, 0);
    auto [c, g] = exact::factored_sqrt(series);
    RationalFunction gpol = exact::polar_part(g);
    RationalFunction diff = r - rf(c) * gpol * gpol;
    GaussianRational beta = laurent_expand(diff, at, -(l + 1)).coefficient(-(l + 1));
    // beta / alpha with alpha = sqrt(c): (beta / c) sqrt(c)
    RadicalSum ratio = RadicalSum(beta / c) * RadicalSum::sqrt(c);
    RadicalSum base(GaussianRational(mpq_class(l, 2)));
    out.plus.constant = base + RadicalSum(half()) * ratio;
    out.minus.constant = base - RadicalSum(half()) * ratio;
    return out;
}

KappaValue combine(const KappaValue& a, const KappaValue& b, int sign) {
    KappaValue out;
    out.constant = sign > 0 ? a.constant + b.constant : a.constant - b.constant;
    out.per_k = sign > 0 ? a.per_k + b.per_k : a.per_k - b.per_k;
    return out;
}

void fill_d_values(CaseAScreen& screen) {
    const std::size_t n = screen.pole_kappas.size();
    const std::size_t count = std::size_t{1} << (n + 1);
    for (std::size_t mask = 0; mask < count; ++mask) {
        DValue d;
        d.signs.resize(n + 1);
        for (std::size_t j = 0; j <= n; ++j) d.signs[j] = ((mask >> (n - j)) & 1U) ? -1 : 1;
        d.d = d.signs[n] > 0 ? screen.infinity_kappa.plus : screen.infinity_kappa.minus;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& kp = screen.pole_kappas[j];
            d.d = combine(d.d, d.signs[j] > 0 ? kp.plus : kp.minus, -1);
        }
        screen.d_values.push_back(std::move(d));
    }
}

bool near_nonnegative_integer(std::complex<double> v, double tol) {
    if (std::fabs(v.imag()) > tol) return false;
    double n = std::round(v.real());
    return n >= 0.0 && std::fabs(v.real() - n) <= tol;
}

// Operator coefficients of the P equation: c2 = 3 theta, c1, c0.
struct POperator {
    RationalFunction c2, c1, c0;
};

POperator p_operator(const RationalFunction& r, const RationalFunction& theta) {
    auto t1 = theta.derivative();
    auto t2 = t1.derivative();
    POperator op;
    op.c2 = rf(3) * theta;
    op.c1 = rf(3) * theta * theta + rf(3) * t1 - rf(4) * r;
    op.c0 = t2 + rf(3) * theta * t1 + theta * theta * theta - rf(4) * r * theta - rf(2) * r.derivative();
    return op;
}

// L(x^j)
RationalFunction apply_monomial(const POperator& op, long j) {
    auto mono = [](long c, long deg) {
        if (deg < 0 || c == 0) return RationalFunction();
        return RationalFunction(Poly::monomial(GaussianRational(c), static_cast<int>(deg)));
    };
    return mono(j * (j - 1) * (j - 2), j - 3) + op.c2 * mono(j * (j - 1), j - 2) + op.c1 * mono(j, j - 1) +
           op.c0 * mono(1, j);
}

Poly lcm(const Poly& a, const Poly& b) { return exact::divmod(a * b, exact::gcd(a, b)).first; }

// Coefficient columns of L(x^j) * D for a common denominator D.
std::vector<std::vector<GaussianRational>> columns(const std::vector<RationalFunction>& images, const Poly& common,
                                                   int rows) {
    std::vector<std::vector<GaussianRational>> m(static_cast<std::size_t>(rows),
                                                 std::vector<GaussianRational>(images.size()));
    for (std::size_t j = 0; j < images.size(); ++j) {
        Poly cleared = images[j].num() * exact::divmod(common, images[j].den()).first;
        for (int i = 0; i < rows; ++i) m[static_cast<std::size_t>(i)][j] = cleared.coeff(i);
    }
    return m;
}

int cleared_rows(const std::vector<RationalFunction>& images, const Poly& common) {
    int deg = 0;
    for (const auto& f : images) {
        if (f.is_zero()) continue;
        deg = std::max(deg, f.num().degree() + common.degree() - f.den().degree());
    }
    return deg + 1;
}

void require_decay(const RationalFunction& u) {
    if (u.is_constant()) throw std::invalid_argument("potential must be a nonconstant rational function");
    if (u.order_at_infinity() < 1) {
        throw std::invalid_argument("potential does not decay at infinity (deg den must exceed deg num)");
    }
}

}  // namespace

std::complex<double> KappaValue::at(std::complex<double> k) const {
    return constant.to_complex() + per_k.to_complex() / k;
}

std::string KappaValue::to_string() const {
    std::string c = constant.to_string();
    if (per_k.is_zero()) return c;
    std::string pk = "(" + per_k.to_string() + ")/k";
    if (constant.is_zero()) return pk;
    return c + " + " + pk;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::solvable_case_b: return "SolvableCaseB";
        case Verdict::not_solvable: return "NotSolvable";
        case Verdict::inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::string to_string(CaseAVerdict v) { return v == CaseAVerdict::excluded ? "Excluded" : "Inconclusive"; }

PoleProfile pole_profile(const RationalFunction& r, const ProfileOptions& opts) {
    if (r.is_constant()) throw std::invalid_argument("r must be a nonconstant rational function");
    PoleProfile out;
    out.order_at_infinity = r.order_at_infinity();
    for (const auto& root : exact::poly_roots(r.den(), opts.cluster_tol)) {
        if (!root.exact && !opts.numeric_fallback) {
            throw std::domain_error("denominator has a root outside Q(i); enable the numeric fallback");
        }
        out.exact = out.exact && root.exact;
        out.poles.push_back({root.exact_value, root.value, root.multiplicity, root.exact});
    }
    std::sort(out.poles.begin(), out.poles.end(), [](const Pole& a, const Pole& b) {
        if (a.exact && b.exact) return lex_less(a.location, b.location);
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

NecessaryConditions necessary_conditions(const PoleProfile& profile) {
    NecessaryConditions f;
    const int inf = profile.order_at_infinity;
    bool odd_high = false, has_b = false, all_small = true;
    for (const auto& p : profile.poles) {
        if (p.order % 2 != 0 && p.order > 1) odd_high = true;
        if (p.order == 2 || (p.order % 2 != 0 && p.order > 2)) has_b = true;
        if (p.order > 2) all_small = false;
    }
    f.a = !odd_high && !(inf % 2 != 0 && inf < 2);
    f.b = has_b;
    f.c = all_small && inf > 1;
    return f;
}

CaseAScreen case_a_screen(const RationalFunction& r, const PoleProfile& profile) {
    if (profile.order_at_infinity != 0) {
        throw std::domain_error("case (a) screen is implemented for order zero at infinity only");
    }
    if (!necessary_conditions(profile).a) throw std::domain_error("condition (a) fails; case (a) cannot occur");
    CaseAScreen screen;
    for (const auto& p : profile.poles) screen.pole_kappas.push_back(pole_kappa(r, p));
    auto s = laurent_expand(r, ExpansionPoint::infinity(), -1);
    GaussianRational r0 = s.coefficient(0), beta = s.coefficient(-1);
    // beta / (2 alpha) with alpha = sqrt(r0):  beta alpha / (2 r0)
    RadicalSum k_inf = RadicalSum(beta / (GaussianRational(2) * r0)) * RadicalSum::sqrt(r0);
    screen.infinity_kappa.plus.constant = k_inf;
    screen.infinity_kappa.minus.constant = -k_inf;
    fill_d_values(screen);
    screen.verdict = CaseAVerdict::excluded;
    for (const auto& d : screen.d_values) {
        if (d.d.constant.is_nonnegative_integer()) screen.verdict = CaseAVerdict::inconclusive;
    }
    return screen;
}

CaseAScreen case_a_screen_symbolic(const RationalFunction& u, const PoleProfile& profile) {
    require_decay(u);
    if (!necessary_conditions(profile).a) throw std::domain_error("condition (a) fails; case (a) cannot occur");
    const RationalFunction r1 = rf(-1) - u;  // pole data do not depend on k
    CaseAScreen screen;
    screen.symbolic_k = true;
    for (const auto& p : profile.poles) screen.pole_kappas.push_back(pole_kappa(r1, p));
    // alpha = i k, beta = coefficient of 1/x in r = -(coefficient in u):  +-beta/(2ik) = -+ (i beta / 2) / k
    GaussianRational beta = -laurent_expand(u, ExpansionPoint::infinity(), -1).coefficient(-1);
    GaussianRational per_k = -(GaussianRational::i() * beta) / GaussianRational(2);
    screen.infinity_kappa.plus.per_k = per_k;
    screen.infinity_kappa.minus.per_k = -per_k;
    fill_d_values(screen);
    screen.verdict = CaseAVerdict::excluded;
    constexpr double tol = 1e-12;
    for (const auto& d : screen.d_values) {
        const auto a = d.d.constant.to_complex();
        const auto b = d.d.per_k.to_complex();
        if (d.d.per_k.is_zero()) {
            if (d.d.constant.is_nonnegative_integer()) {
                screen.verdict = CaseAVerdict::inconclusive;
                screen.exceptional_family = true;
            }
            continue;
        }
        if (std::fabs(b.imag()) > tol) {
            // Im d = Im a + Im b / k = 0 fixes k
            if (std::fabs(a.imag()) <= tol) continue;
            double k = -b.imag() / a.imag();
            if (near_nonnegative_integer(a + b / k, 1e-10)) screen.exceptional_k.push_back(k);
            continue;
        }
        // real per_k: any integer n >= 0 with n != Re a gives k = b / (n - Re a)
        if (std::fabs(a.imag()) <= tol) screen.exceptional_family = true;
    }
    if (!screen.exceptional_k.empty() || screen.exceptional_family) screen.verdict = CaseAVerdict::inconclusive;
    return screen;
}

CaseAVerdict case_a_verdict_at(const CaseAScreen& screen, double k, double tol) {
    if (!screen.symbolic_k) return screen.verdict;
    for (const auto& d : screen.d_values) {
        if (near_nonnegative_integer(d.d.at(k), tol)) return CaseAVerdict::inconclusive;
    }
    return CaseAVerdict::excluded;
}

Families case_b_families(const RationalFunction& r, const PoleProfile& profile) {
    Families out;
    for (const auto& p : profile.poles) {
        std::vector<long> e;
        if (p.order == 1) {
            e = {4};
        } else if (p.order == 2) {
            require_exact(p);
            GaussianRational beta = laurent_expand(r, ExpansionPoint::at(p.location), -2).coefficient(-2);
            RadicalSum s = RadicalSum::sqrt(GaussianRational(1) + GaussianRational(4) * beta);
            e.push_back(2);
            for (long l : {-2L, 2L}) {
                long v = 0;
                if (is_integer_value(RadicalSum(GaussianRational(2)) + RadicalSum(GaussianRational(l)) * s, v)) {
                    e.push_back(v);
                }
            }
        } else {
            e = {static_cast<long>(p.order)};
        }
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<CaseBCandidate> case_b_candidates(const Families& families, const PoleProfile& profile) {
    std::vector<CaseBCandidate> out;
    if (families.empty()) return out;
    std::vector<std::size_t> idx(families.size(), 0);
    while (true) {
        long sum = 0;
        std::vector<long> e(families.size());
        for (std::size_t j = 0; j < families.size(); ++j) {
            e[j] = families[j][idx[j]];
            sum += e[j];
        }
        if (sum <= 0 && sum % 2 == 0) {
            CaseBCandidate c;
            c.e = e;
            c.d_e = -sum / 2;
            for (std::size_t j = 0; j < e.size(); ++j) {
                require_exact(profile.poles[j]);
                c.theta += RationalFunction::normalize(Poly(GaussianRational(mpq_class(e[j], 2))),
                                                       Poly::linear_factor(profile.poles[j].location));
            }
            out.push_back(std::move(c));
        }
        // odometer, last index fastest
        std::size_t j = families.size();
        while (j > 0) {
            --j;
            if (++idx[j] < families[j].size()) break;
            idx[j] = 0;
            if (j == 0) return out;
        }
    }
}

std::optional<CaseBSolution> case_b_solve(const RationalFunction& r, const RationalFunction& theta, long d_e) {
    if (d_e < 0) return std::nullopt;
    POperator op = p_operator(r, theta);
    std::vector<RationalFunction> images;
    Poly common(1);
    for (long j = 0; j <= d_e; ++j) {
        images.push_back(apply_monomial(op, j));
        common = lcm(common, images.back().den());
    }
    const int rows = cleared_rows(images, common);
    auto m = columns(images, common, rows);
    std::vector<std::vector<GaussianRational>> a(static_cast<std::size_t>(rows));
    std::vector<GaussianRational> b(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
        auto& row = m[static_cast<std::size_t>(i)];
        a[static_cast<std::size_t>(i)].assign(row.begin(), row.end() - 1);
        b[static_cast<std::size_t>(i)] = -row.back();
    }
    Poly p = Poly::monomial(GaussianRational(1), static_cast<int>(d_e));
    if (d_e > 0) {
        auto sol = exact::solve_linear_exact(a, b);
        if (sol.kind == exact::SolutionKind::inconsistent) return std::nullopt;
        std::vector<GaussianRational> c = sol.particular;
        c.push_back(GaussianRational(1));
        p = Poly(std::move(c));
    } else {
        for (const auto& v : b)
            if (!v.is_zero()) return std::nullopt;
    }
    CaseBSolution out;
    out.p = p;
    out.r = r;
    out.theta_hat = theta + RationalFunction::normalize(p.derivative(), p);
    out.radicand = rf(4) * r - out.theta_hat * out.theta_hat - rf(2) * out.theta_hat.derivative();
    return out;
}

std::complex<double> CaseBSolution::omega(std::complex<double> x, int branch) const {
    auto s = exact::principal_sqrt(radicand.eval(x));
    return 0.5 * (theta_hat.eval(x) + static_cast<double>(branch) * s);
}

std::complex<double> CaseBSolution::omega_prime(std::complex<double> x, int branch) const {
    auto s = exact::principal_sqrt(radicand.eval(x));
    auto ds = radicand.derivative().eval(x) / (2.0 * s);
    return 0.5 * (theta_hat.derivative().eval(x) + static_cast<double>(branch) * ds);
}

double CaseBSolution::residual(std::complex<double> x, int branch) const {
    auto w = omega(x, branch);
    auto vpp = omega_prime(x, branch) + w * w;  // v''/v
    return std::abs(vpp - r.eval(x)) / (1.0 + std::abs(vpp));
}

PSystem p_system(const RationalFunction& u, const RationalFunction& theta, long d_e) {
    std::vector<RationalFunction> img0, img1;
    Poly common(1);
    POperator op0 = p_operator(-u, theta), op1 = p_operator(rf(-1) - u, theta);
    for (long j = 0; j <= d_e; ++j) {
        img0.push_back(apply_monomial(op0, j));
        img1.push_back(apply_monomial(op1, j));
        common = lcm(lcm(common, img0.back().den()), img1.back().den());
    }
    const int rows = std::max(cleared_rows(img0, common), cleared_rows(img1, common));
    PSystem sys;
    sys.m0 = columns(img0, common, rows);
    auto m1 = columns(img1, common, rows);
    sys.m1 = m1;
    for (std::size_t i = 0; i < m1.size(); ++i)
        for (std::size_t j = 0; j < m1[i].size(); ++j) sys.m1[i][j] = m1[i][j] - sys.m0[i][j];
    return sys;
}

double PSystem::singular_ratio(std::complex<double> k2) const {
    const auto rows = static_cast<Eigen::Index>(m0.size());
    const auto cols = rows ? static_cast<Eigen::Index>(m0[0].size()) : 0;
    if (rows < cols) return 0.0;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = m0[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].to_complex() +
                      k2 * m1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].to_complex();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

KovacicReport analyze_exact(const RationalFunction& u, const GaussianRational& k2) {
    require_decay(u);
    if (k2.is_zero()) throw std::invalid_argument("k = 0 is outside the analyzer's domain");
    KovacicReport rep;
    rep.k2 = k2;
    const RationalFunction r = rf(-k2) - u;
    rep.profile = pole_profile(r);
    rep.necessary = necessary_conditions(rep.profile);
    if (rep.necessary.a) rep.case_a = case_a_screen(r, rep.profile);
    if (rep.necessary.b) {
        rep.case_b.families = case_b_families(r, rep.profile);
        rep.case_b.candidates = case_b_candidates(rep.case_b.families, rep.profile);
        for (std::size_t i = 0; i < rep.case_b.candidates.size(); ++i) {
            const auto& c = rep.case_b.candidates[i];
            if (auto sol = case_b_solve(r, c.theta, c.d_e)) {
                rep.case_b.solution = std::move(sol);
                rep.case_b.solved_candidate = i;
                break;
            }
        }
    }
    if (rep.case_b.solution) {
        rep.verdict = Verdict::solvable_case_b;
    } else if ((rep.case_a && rep.case_a->verdict == CaseAVerdict::inconclusive) || rep.necessary.c) {
        rep.verdict = Verdict::inconclusive;
    } else {
        rep.verdict = Verdict::not_solvable;
    }
    return rep;
}

std::vector<KovacicReport> solvability_scan(const RationalFunction& u, const std::vector<GaussianRational>& k2_values) {
    std::vector<KovacicReport> out;
    out.reserve(k2_values.size());
    for (const auto& k2 : k2_values) out.push_back(analyze_exact(u, k2));
    return out;
}

namespace {

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, double width, double& fmin) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > width) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    fmin = f(x);
    return x;
}

}  // namespace

ScanResult solvability_scan(const RationalFunction& u, const std::vector<double>& k_grid, const ScanOptions& opts) {
    require_decay(u);
    ScanResult res;
    const RationalFunction r1 = rf(-1) - u;
    const PoleProfile profile = pole_profile(r1);
    const NecessaryConditions nec = necessary_conditions(profile);
    if (nec.a) res.symbolic_screen = case_a_screen_symbolic(u, profile);
    CaseBResult cb;
    std::vector<PSystem> systems;
    if (nec.b) {
        cb.families = case_b_families(r1, profile);
        cb.candidates = case_b_candidates(cb.families, profile);
        for (const auto& c : cb.candidates) systems.push_back(p_system(u, c.theta, c.d_e));
    }
    auto ratio_at = [&](double k, std::size_t* which) {
        double best = 1.0;
        for (std::size_t i = 0; i < systems.size(); ++i) {
            double v = systems[i].singular_ratio(k * k);
            if (v < best) {
                best = v;
                if (which) *which = i;
            }
        }
        return best;
    };
    std::vector<double> ratios;
    for (double k : k_grid) {
        if (k == 0.0) throw std::invalid_argument("k = 0 is outside the analyzer's domain");
        KovacicReport rep;
        rep.k = k;
        rep.profile = profile;
        rep.necessary = nec;
        rep.case_b = cb;
        if (nec.a) {
            rep.case_a = res.symbolic_screen;
            rep.case_a->verdict = case_a_verdict_at(res.symbolic_screen, k, opts.kappa_tol);
        }
        rep.min_singular_ratio = ratio_at(k, nullptr);
        ratios.push_back(rep.min_singular_ratio);
        rep.near_solvable = rep.min_singular_ratio < opts.flag_ratio;
        bool a_open = rep.case_a && rep.case_a->verdict == CaseAVerdict::inconclusive;
        rep.verdict = (rep.near_solvable || a_open || nec.c) ? Verdict::inconclusive : Verdict::not_solvable;
        res.reports.push_back(std::move(rep));
    }
    for (std::size_t i = 1; i + 1 < k_grid.size(); ++i) {
        if (!(ratios[i] < ratios[i - 1] && ratios[i] <= ratios[i + 1])) continue;
        double lo = std::min(k_grid[i - 1], k_grid[i + 1]), hi = std::max(k_grid[i - 1], k_grid[i + 1]);
        double fmin = 1.0;
        double k = golden_minimize([&](double t) { return ratio_at(t, nullptr); }, lo, hi, opts.refine_width, fmin);
        if (fmin >= opts.flag_ratio) continue;
        ExceptionalCandidate ex;
        ex.k = k;
        ex.lo = k - opts.refine_width / 2;
        ex.hi = k + opts.refine_width / 2;
        ex.ratio = fmin;
        ratio_at(k, &ex.candidate);
        mpq_class q;
        if (exact::reconstruct_rational(k * k, q, 100000, 1e-8)) {
            GaussianRational k2(q);
            const auto& c = cb.candidates[ex.candidate];
            if (case_b_solve(rf(-k2) - u, c.theta, c.d_e)) ex.confirmed_k2 = k2;
        }
        res.exceptional.push_back(ex);
    }
    return res;
}

std::vector<AsymptoticBranch> asymptotic_exponents(const CaseBSolution& solution) {
    auto rs = laurent_expand(solution.radicand, ExpansionPoint::infinity(), -1);
    auto ts = laurent_expand(solution.theta_hat, ExpansionPoint::infinity(), -1);
    if (rs.coefficient(0).is_zero()) throw std::domain_error("radicand vanishes at infinity");
    GaussianRational r_1 = rs.coefficient(-1);
    std::vector<AsymptoticBranch> out;
    for (int b : {1, -1}) {
        AsymptoticBranch br;
        br.branch = b;
        // sqrt(R) = 2ik (1 + R_{-1} / (2 R_0 x)) with R_0 = -4k^2
        br.rate_per_k = GaussianRational::i() * GaussianRational(b);
        br.exponent_constant = ts.coefficient(-1) * half();
        br.exponent_per_k = -(GaussianRational::i() * GaussianRational(b) * r_1) / GaussianRational(8);
        out.push_back(br);
    }
    return out;
}

}  // namespace jostforge::kovacic
