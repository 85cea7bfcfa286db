#include "jostforge/synthesis/synthesis.hpp"

#include "jostforge/exact/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>
#include <stdexcept>

namespace jostforge::synthesis {

using exact::Coeff;
using exact::Monomial;
using exact::MPoly;

namespace {

template <class C>
C from_long(long v) {
    return Coeff<C>::from_long(v);
}

template <class C>
C imag_unit() {
    if constexpr (Coeff<C>::exact) return GaussianRational::i();
    else return Complex(0.0, 1.0);
}

template <class C>
bool is_zero(const C& c) {
    return Coeff<C>::is_zero(c);
}

long binomial(int n, int m) {
    long out = 1;
    for (int i = 1; i <= m; ++i) out = out * (n - m + i) / i;
    return out;
}

long factorial(int n) {
    long out = 1;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

template <class C>
std::vector<C> inverse_series(const std::vector<C>& alpha, std::size_t len) {
    std::vector<C> inv(len);
    inv[0] = from_long<C>(1) / alpha[0];
    for (std::size_t n = 1; n < len; ++n) {
        C acc{};
        for (std::size_t q = 1; q <= n && q < alpha.size(); ++q) acc = acc + alpha[q] * inv[n - q];
        inv[n] = C{} - acc / alpha[0];
    }
    return inv;
}

// Taylor coefficients of M at k_j: mcoef[r][m] multiplies N_j^m at t^r
template <class C>
std::vector<std::vector<C>> m_coefficients(const BoundState<C>& e) {
    std::vector<std::vector<C>> out(static_cast<std::size_t>(e.nu), std::vector<C>(static_cast<std::size_t>(e.nu)));
    for (int r = 0; r < e.nu; ++r)
        for (int m = 0; m <= r; ++m)
            out[r][m] = e.b_jet[r - m] / from_long<C>(factorial(r - m) * factorial(m));
    return out;
}

// 1/a = t^-nu * sum inv[p] t^p
template <class C>
std::vector<C> inverse_a(const BoundState<C>& e) {
    std::vector<C> alpha(static_cast<std::size_t>(e.nu));
    for (int q = 0; q < e.nu; ++q) alpha[q] = e.a_jet[q] / from_long<C>(factorial(e.nu + q));
    return inverse_series(alpha, static_cast<std::size_t>(e.nu));
}

template <class C>
Complex to_c(const C& c) {
    return Coeff<C>::to_complex(c);
}

}  // namespace

template <class C>
void validate(const SpectralData<C>& data) {
    for (std::size_t j = 0; j < data.entries.size(); ++j) {
        const auto& e = data.entries[j];
        if (e.nu < 1) throw std::invalid_argument("multiplicity must be positive");
        if (!(to_c(e.k).imag() > 0.0)) throw std::invalid_argument("bound state k must lie in the upper half plane");
        if (e.a_jet.size() < static_cast<std::size_t>(e.nu)) throw std::invalid_argument("a-jet needs nu entries");
        if (e.b_jet.size() < static_cast<std::size_t>(e.nu)) throw std::invalid_argument("b-jet needs nu entries");
        if (is_zero(e.a_jet[0]) || std::abs(to_c(e.a_jet[0])) < 1e-300)
            throw std::invalid_argument("leading a-jet entry vanishes: multiplicity is higher than stated");
        for (std::size_t i = 0; i < j; ++i) {
            if (data.entries[i].k == e.k) throw std::invalid_argument("bound states must be distinct");
        }
    }
}

template <class C>
WPoly<C> WPoly<C>::derivative() const {
    WPoly out;
    if (coeffs.empty()) return out;
    out.coeffs.assign(coeffs.size() + 1, C{});
    for (std::size_t q = 1; q < coeffs.size(); ++q) out.coeffs[q + 1] = C{} - coeffs[q] * from_long<C>(static_cast<long>(q));
    return out;
}

template <class C>
C WPoly<C>::at(const C& k, const C& kj) const {
    C s = k + kj;
    if (synthesis::is_zero(s)) throw std::domain_error("k = -k_j is a pole of the residue form");
    C w = from_long<C>(1) / s, p = from_long<C>(1), acc{};
    for (const auto& c : coeffs) {
        acc = acc + c * p;
        p = p * w;
    }
    return acc;
}

template <class C>
bool WPoly<C>::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const C& c) { return synthesis::is_zero(c); });
}

template <class C>
ResidueForm<C> residue_at(const BoundState<C>& e, std::size_t j) {
    SpectralData<C> one{{e}};
    validate(one);
    const int nu = e.nu;
    auto mc = m_coefficients(e);
    auto inv = inverse_a(e);
    ResidueForm<C> out;
    out.entry = j;
    out.coeffs.assign(static_cast<std::size_t>(nu), WPoly<C>{std::vector<C>(static_cast<std::size_t>(nu) + 1)});
    // coefficient of t^(nu-1) in M * inv * sum_s (-1)^s w^(s+1) t^s
    for (int r = 0; r < nu; ++r)
        for (int p = 0; r + p < nu; ++p) {
            int s = nu - 1 - r - p;
            C sign = from_long<C>(s % 2 == 0 ? 1 : -1);
            for (int m = 0; m <= r; ++m) {
                auto& slot = out.coeffs[m].coeffs[s + 1];
                slot = slot + mc[r][m] * inv[p] * sign;
            }
        }
    return out;
}

template <class C>
std::vector<C> potential_weights(const BoundState<C>& e) {
    SpectralData<C> one{{e}};
    validate(one);
    auto mc = m_coefficients(e);
    auto inv = inverse_a(e);
    std::vector<C> d(static_cast<std::size_t>(e.nu));
    C two_i = from_long<C>(2) * imag_unit<C>();
    for (int r = 0; r < e.nu; ++r) {
        int p = e.nu - 1 - r;
        for (int m = 0; m <= r; ++m) d[m] = d[m] + two_i * mc[r][m] * inv[p];
    }
    return d;
}

template <class C>
BasisPtr<C> make_basis(const SpectralData<C>& data) {
    auto b = std::make_shared<ExpBasis<C>>();
    C two_i = from_long<C>(2) * imag_unit<C>();
    for (const auto& e : data.entries) b->rates.push_back(two_i * e.k);
    return b;
}

template <class C>
LinearSystem<C> assemble_system(const SpectralData<C>& data) {
    validate(data);
    LinearSystem<C> sys;
    sys.basis = make_basis(data);
    using ER = ExpRational<C>;
    const auto& B = sys.basis;
    std::vector<std::size_t> offset;
    for (std::size_t j = 0; j < data.entries.size(); ++j) {
        offset.push_back(sys.unknowns.size());
        for (int r = 0; r < data.entries[j].nu; ++r) sys.unknowns.push_back({j, r});
    }
    const std::size_t n = sys.unknowns.size();
    std::vector<ResidueForm<C>> forms;
    for (std::size_t j = 0; j < data.entries.size(); ++j) forms.push_back(residue_at(data.entries[j], j));

    ER minus_2ix = ER::x(B).scaled(C{} - from_long<C>(2) * imag_unit<C>());
    for (std::size_t i = 0; i < data.entries.size(); ++i) {
        const auto& ei = data.entries[i];
        ER e_inv = ER::exp_power(B, i, -1);
        // r-th k-derivatives of the residue forms
        std::vector<ResidueForm<C>> deriv = forms;
        for (int r = 0; r < ei.nu; ++r) {
            std::vector<ER> row(n, ER(B));
            for (int m = 0; m <= r; ++m) {
                ER t = e_inv.scaled(from_long<C>(binomial(r, m)));
                for (int p = 0; p < r - m; ++p) t *= minus_2ix;
                row[offset[i] + m] += t;
            }
            for (std::size_t j = 0; j < data.entries.size(); ++j)
                for (int m = 0; m < data.entries[j].nu; ++m) {
                    C c = deriv[j].coeffs[m].at(ei.k, data.entries[j].k);
                    if (!is_zero(c)) row[offset[j] + m] += ER::constant(B, c);
                }
            sys.matrix.push_back(std::move(row));
            sys.rhs.push_back(r == 0 ? ER::constant(B, from_long<C>(1)) : ER(B));
            for (auto& f : deriv)
                for (auto& w : f.coeffs) w = w.derivative();
        }
    }
    return sys;
}

template <class C>
const ExpRational<C>& Solution<C>::n(std::size_t j, int r) const {
    for (std::size_t i = 0; i < unknowns.size(); ++i)
        if (unknowns[i].j == j && unknowns[i].r == r) return values[i];
    throw std::out_of_range("no such unknown");
}

namespace {

template <class C>
MPoly<C> poly_dx(const BasisPtr<C>& b, const MPoly<C>& p) {
    const auto one = MPoly<C>::constant(b->nvars(), from_long<C>(1));
    return ExpRational<C>(b, p, one).derivative_x().num();
}

template <class C>
MPoly<C> leibniz_det(const std::vector<std::vector<MPoly<C>>>& a, std::size_t nv) {
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    MPoly<C> det(nv);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        MPoly<C> t = MPoly<C>::constant(nv, from_long<C>(inversions % 2 == 0 ? 1 : -1));
        for (std::size_t i = 0; i < n && !t.is_zero(); ++i) t = t * a[i][perm[i]];
        det += t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

// divides out a monomial denominator: p / m where m = single term
template <class C>
bool monomial_denominator(const MPoly<C>& den, Monomial& mono, C& coeff) {
    if (den.terms().size() != 1) return false;
    mono = den.terms().begin()->first;
    coeff = den.terms().begin()->second;
    return true;
}

constexpr std::size_t kLeibnizLimit = 7;

}  // namespace

template <class C>
Solution<C> solve_system(const LinearSystem<C>& system) {
    const auto& B = system.basis;
    const std::size_t n = system.unknowns.size(), nv = B->nvars();
    Solution<C> out{B, system.unknowns, {}, {}, MPoly<C>::constant(nv, from_long<C>(1))};
    if (n == 0) return out;

    // clear monomial denominators row by row
    std::vector<std::vector<MPoly<C>>> a(n, std::vector<MPoly<C>>(n, MPoly<C>(nv)));
    std::vector<MPoly<C>> rhs(n, MPoly<C>(nv));
    bool cleared = true;
    for (std::size_t i = 0; i < n && cleared; ++i) {
        Monomial lcm(nv, 0), mono;
        C coeff{};
        auto visit = [&](const ExpRational<C>& e) {
            if (!monomial_denominator(e.den(), mono, coeff)) return false;
            for (std::size_t v = 0; v < nv; ++v) lcm[v] = std::max(lcm[v], mono[v]);
            return true;
        };
        for (const auto& e : system.matrix[i]) cleared = cleared && visit(e);
        cleared = cleared && visit(system.rhs[i]);
        if (!cleared) break;
        auto lift = [&](const ExpRational<C>& e) {
            monomial_denominator(e.den(), mono, coeff);
            Monomial shift(nv);
            for (std::size_t v = 0; v < nv; ++v) shift[v] = lcm[v] - mono[v];
            return e.num().shifted(shift).scaled(from_long<C>(1) / coeff);
        };
        for (std::size_t j = 0; j < n; ++j) a[i][j] = lift(system.matrix[i][j]);
        rhs[i] = lift(system.rhs[i]);
    }

    if (cleared && n <= kLeibnizLimit) {
        MPoly<C> det = leibniz_det(a, nv);
        if constexpr (!Coeff<C>::exact) det.prune(1e-13);
        if (det.is_zero()) throw std::runtime_error("singular residue system: spectral data are not admissible");
        for (std::size_t m = 0; m < n; ++m) {
            auto am = a;
            for (std::size_t i = 0; i < n; ++i) am[i][m] = rhs[i];
            MPoly<C> num = leibniz_det(am, nv);
            if constexpr (!Coeff<C>::exact) num.prune(1e-13);
            out.values.emplace_back(B, num, det);
            out.numerators.push_back(std::move(num));
        }
        out.denominator = std::move(det);
        return out;
    }
    if constexpr (!Coeff<C>::exact) {
        throw std::invalid_argument("floating synthesis supports at most 7 unknowns");
    } else {
        auto sol = exact::solve_linear_exact(system.matrix, system.rhs);
        if (sol.kind != exact::SolutionKind::unique)
            throw std::runtime_error("singular residue system: spectral data are not admissible");
        out.values = std::move(sol.particular);
        MPoly<C> d = out.values[0].den();
        for (const auto& v : out.values) {
            if (v.den() == d) continue;
            MPoly<C> g = exact::gcd(d, v.den());
            d = d * exact::exact_divide(v.den(), g);
        }
        for (const auto& v : out.values) out.numerators.push_back(v.num() * exact::exact_divide(d, v.den()));
        out.denominator = d;
        return out;
    }
}

template <class C>
Complex PsiExpr<C>::evaluate(Complex x, Complex k) const {
    auto v = envelope.evaluate(x, k);
    if (v.pole) return {std::nan(""), std::nan("")};
    return v.value * std::exp(Complex(0.0, 1.0) * k * x);
}

template <class C>
PsiExpr<C> jost_psi_expr(const SpectralData<C>& data, const Solution<C>& solution) {
    const auto& B = solution.basis;
    const std::size_t nv = B->nvars();
    const auto one = MPoly<C>::constant(nv, from_long<C>(1));
    // c_{j,m}(k) = P_{j,m}(k) / K_j with K_j = (k + k_j)^nu_j; envelope = 1 - sum c N over W det, W = prod K_j
    std::vector<MPoly<C>> kpk, kj_pow;
    MPoly<C> w = one;
    for (const auto& e : data.entries) {
        kpk.push_back(MPoly<C>::variable(nv, B->k_index()) + MPoly<C>::constant(nv, e.k));
        MPoly<C> p = one;
        for (int i = 0; i < e.nu; ++i) p = p * kpk.back();
        kj_pow.push_back(p);
        w = w * p;
    }
    MPoly<C> num = w * solution.denominator;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < data.entries.size(); ++j) {
        const auto& e = data.entries[j];
        auto form = residue_at(e, j);
        MPoly<C> others = one;
        for (std::size_t l = 0; l < data.entries.size(); ++l)
            if (l != j) others = others * kj_pow[l];
        for (int m = 0; m < e.nu; ++m, ++idx) {
            MPoly<C> p(nv);
            for (std::size_t q = 0; q < form.coeffs[m].coeffs.size(); ++q) {
                const C& c = form.coeffs[m].coeffs[q];
                if (is_zero(c)) continue;
                MPoly<C> t = MPoly<C>::constant(nv, c);
                for (int s = 0; s < e.nu - static_cast<int>(q); ++s) t = t * kpk[j];
                p += t;
            }
            num -= p * others * solution.numerators[idx];
        }
    }
    return PsiExpr<C>{ExpRational<C>(B, num, w * solution.denominator)};
}

template <class C>
ExpRational<C> potential_expr(const SpectralData<C>& data, const Solution<C>& solution) {
    const auto& B = solution.basis;
    MPoly<C> num(B->nvars());
    std::size_t idx = 0;
    for (const auto& e : data.entries) {
        auto d = potential_weights(e);
        for (int m = 0; m < e.nu; ++m, ++idx)
            if (!is_zero(d[m])) num += solution.numerators[idx].scaled(d[m]);
    }
    return ExpRational<C>(B, num, solution.denominator).derivative_x();
}

template <class C>
bool satisfies_schrodinger(const PsiExpr<C>& psi, const ExpRational<C>& u, double rel_tol) {
    // envelope P/Q, u = U/V: Psi'' + 2ik Psi' + u Psi cleared by Q^3 V
    const auto& B = psi.envelope.basis();
    const std::size_t nv = B->nvars();
    const MPoly<C>&P = psi.envelope.num(), &Q = psi.envelope.den(), &U = u.num(), &V = u.den();
    MPoly<C> P1 = poly_dx(B, P), P2 = poly_dx(B, P1), Q1 = poly_dx(B, Q), Q2 = poly_dx(B, Q1);
    MPoly<C> two_ik = MPoly<C>::variable(nv, B->k_index()).scaled(from_long<C>(2) * imag_unit<C>());
    std::vector<MPoly<C>> parts{
        V * (P2 * Q * Q - (P1 * Q1 * Q).scaled(from_long<C>(2)) - P * Q2 * Q + (P * Q1 * Q1).scaled(from_long<C>(2))),
        two_ik * V * Q * (P1 * Q - P * Q1), U * P * Q * Q};
    MPoly<C> total(nv);
    for (const auto& p : parts) total += p;
    if constexpr (Coeff<C>::exact) {
        (void)rel_tol;
        return total.is_zero();
    } else {
        double scale = 0.0, defect = 0.0;
        for (const auto& p : parts)
            for (const auto& [m, c] : p.terms()) scale = std::max(scale, std::abs(c));
        for (const auto& [m, c] : total.terms()) defect = std::max(defect, std::abs(c));
        return defect <= rel_tol * scale;
    }
}

namespace {

// Top growth class of p at x -> +-inf: largest Re(rate) in the direction of
// travel, then largest x-degree. All rate groups in that class are kept, so a
// caller can tell a unique leading exponential from an oscillating tie.
template <class C>
struct Dominant {
    double growth = 0.0;
    int xdeg = 0;
    std::vector<std::pair<Complex, MPoly<C>>> groups;
};

template <class C>
std::optional<Dominant<C>> dominant_part(const MPoly<C>& p, const ExpBasis<C>& b, Direction dir) {
    struct Group {
        C rate;
        int xdeg;
        MPoly<C> coeff;
    };
    std::vector<Group> groups;
    const std::size_t nv = b.nvars();
    for (const auto& [m, c] : p.terms()) {
        C rate{};
        for (std::size_t j = 0; j < b.size(); ++j)
            if (m[j] != 0) rate = rate + b.rates[j] * from_long<C>(m[j]);
        int xd = m[b.x_index()];
        Monomial km(nv, 0);
        km[b.k_index()] = m[b.k_index()];
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            if (g.xdeg != xd) return false;
            if constexpr (Coeff<C>::exact) return g.rate == rate;
            else return std::abs(to_c(g.rate) - to_c(rate)) <= 1e-12 * (1.0 + std::abs(to_c(rate)));
        });
        if (it == groups.end()) {
            groups.push_back({rate, xd, MPoly<C>(nv)});
            it = std::prev(groups.end());
        }
        it->coeff.add_term(km, c);
    }
    if constexpr (!Coeff<C>::exact) {
        for (auto& g : groups) g.coeff.prune(1e-12);
    }
    groups.erase(std::remove_if(groups.begin(), groups.end(), [](const Group& g) { return g.coeff.is_zero(); }),
                 groups.end());
    if (groups.empty()) return std::nullopt;
    const double sgn = dir == Direction::plus_infinity ? 1.0 : -1.0;
    auto growth = [&](const Group& g) { return sgn * to_c(g.rate).real(); };
    auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x) + std::abs(y)); };
    Dominant<C> out;
    out.growth = growth(groups[0]);
    out.xdeg = groups[0].xdeg;
    for (const auto& g : groups) {
        double gg = growth(g);
        if ((!same(gg, out.growth) && gg > out.growth) || (same(gg, out.growth) && g.xdeg > out.xdeg)) {
            out.growth = gg;
            out.xdeg = g.xdeg;
        }
    }
    for (const auto& g : groups)
        if (same(growth(g), out.growth) && g.xdeg == out.xdeg) out.groups.emplace_back(to_c(g.rate), g.coeff);
    return out;
}

}  // namespace

template <class C>
ExpRational<C> asymptotic_leading(const ExpRational<C>& expr, Direction dir) {
    const auto& b = *expr.basis();
    for (const auto& r : b.rates)
        if (!(to_c(r).real() < 0.0)) throw std::domain_error("asymptotics need Im k_j > 0");
    if (expr.is_zero()) return expr;
    auto dn = dominant_part(expr.num(), b, dir);
    auto dd = dominant_part(expr.den(), b, dir);
    if (!dd) throw std::domain_error("zero denominator");
    if (!dn) return ExpRational<C>(expr.basis());
    double tol = 1e-12 * (1.0 + std::abs(dn->growth) + std::abs(dd->growth));
    bool tie = std::abs(dn->growth - dd->growth) <= tol;
    if ((!tie && dn->growth < dd->growth) || (tie && dn->xdeg < dd->xdeg)) return ExpRational<C>(expr.basis());
    if (!tie || dn->xdeg > dd->xdeg) throw std::domain_error("expression grows without bound");
    if (dn->groups.size() != 1 || dd->groups.size() != 1 ||
        std::abs(dn->groups[0].first - dd->groups[0].first) > tol)
        throw std::domain_error("oscillating leading behaviour: the limit does not exist");
    return ExpRational<C>(expr.basis(), dn->groups[0].second, dd->groups[0].second);
}

exact::RationalFunction to_rational_in_k(const ExpRational<GaussianRational>& expr) {
    const auto& b = *expr.basis();
    auto to_poly = [&](const MPoly<GaussianRational>& p) {
        std::vector<GaussianRational> c(static_cast<std::size_t>(std::max(0, p.degree_in(b.k_index())) + 1));
        for (const auto& [m, v] : p.terms()) {
            for (std::size_t i = 0; i < m.size(); ++i)
                if (i != b.k_index() && m[i] != 0) throw std::invalid_argument("expression depends on x or an exponential");
            c[m[b.k_index()]] = v;
        }
        return exact::Poly(std::move(c));
    };
    return exact::RationalFunction::normalize(to_poly(expr.num()), to_poly(expr.den()));
}

template <class C>
EvalResult eval_expr(const ExpRational<C>& expr, Complex x, Complex k, double pole_tol) {
    return expr.evaluate(x, k, pole_tol);
}

template <class C>
std::vector<RealPole> real_poles(const ExpRational<C>& expr, double lo, double hi, std::size_t samples, double accept) {
    using ER = ExpRational<C>;
    const auto& B = expr.basis();
    const std::size_t nv = B->nvars();
    if (expr.den().degree_in(B->k_index()) > 0) throw std::invalid_argument("denominator depends on k");
    const MPoly<C> one = MPoly<C>::constant(nv, from_long<C>(1));
    auto rel = [&](const MPoly<C>& p, double x) { return ER(B, one, p).relative_denominator(x); };
    const MPoly<C>& den = expr.den();
    std::vector<RealPole> out;
    if (den.is_constant() || samples < 3) return out;

    std::vector<double> xs(samples), fs(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        fs[i] = rel(den, xs[i]);
    }
    std::vector<MPoly<C>> derivs{den};
    auto dpoly = [&](std::size_t m) -> const MPoly<C>& {
        while (derivs.size() <= m) derivs.push_back(ER(B, derivs.back(), one).derivative_x().num());
        return derivs[m];
    };
    auto value = [&](const MPoly<C>& p, double x) { return ER(B, p, one).evaluate(x).value; };
    for (std::size_t i = 1; i + 1 < samples; ++i) {
        if (!(fs[i] <= fs[i - 1] && fs[i] < fs[i + 1])) continue;
        double a = xs[i - 1], c = xs[i + 1];
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = c - g * (c - a), x2 = a + g * (c - a);
        double f1 = rel(den, x1), f2 = rel(den, x2);
        while (c - a > 1e-13 * (1.0 + std::abs(a))) {
            if (f1 < f2) {
                c = x2;
                x2 = x1;
                f2 = f1;
                x1 = c - g * (c - a);
                f1 = rel(den, x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (c - a);
                f2 = rel(den, x2);
            }
        }
        double x0 = 0.5 * (a + c);
        if (rel(den, x0) > 1e-4) continue;
        int order = 1;
        while (order < 8 && rel(dpoly(static_cast<std::size_t>(order)), x0) < 1e-5) ++order;
        // polish on the derivative with a simple zero
        const auto& f = dpoly(static_cast<std::size_t>(order - 1));
        const auto& fp = dpoly(static_cast<std::size_t>(order));
        for (int it = 0; it < 8; ++it) {
            Complex d = value(fp, x0);
            if (d == Complex(0.0, 0.0)) break;
            double step = (value(f, x0) / d).real();
            if (!std::isfinite(step) || std::abs(step) > 1e-3) break;
            x0 -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(x0))) break;
        }
        double r0 = rel(den, x0);
        if (r0 > accept) continue;
        if (!out.empty() && std::abs(out.back().x - x0) < 1e-9) continue;
        out.push_back({x0, order, r0});
    }
    return out;
}

template <class C>
Synthesis<C> synthesize(const SpectralData<C>& data) {
    auto sys = assemble_system(data);
    auto sol = solve_system(sys);
    auto psi = jost_psi_expr(data, sol);
    auto u = potential_expr(data, sol);
    return Synthesis<C>{data, std::move(sys), std::move(sol), std::move(psi), std::move(u)};
}

NumericSpectralData to_numeric(const ExactSpectralData& data) {
    NumericSpectralData out;
    for (const auto& e : data.entries) {
        BoundState<Complex> n;
        n.k = e.k.to_complex();
        n.nu = e.nu;
        for (const auto& a : e.a_jet) n.a_jet.push_back(a.to_complex());
        for (const auto& b : e.b_jet) n.b_jet.push_back(b.to_complex());
        out.entries.push_back(std::move(n));
    }
    return out;
}

#define JOSTFORGE_INSTANTIATE(C)                                                                                 \
    template void validate<C>(const SpectralData<C>&);                                                          \
    template struct WPoly<C>;                                                                                    \
    template ResidueForm<C> residue_at<C>(const BoundState<C>&, std::size_t);                                    \
    template std::vector<C> potential_weights<C>(const BoundState<C>&);                                          \
    template BasisPtr<C> make_basis<C>(const SpectralData<C>&);                                                  \
    template LinearSystem<C> assemble_system<C>(const SpectralData<C>&);                                         \
    template struct Solution<C>;                                                                                 \
    template Solution<C> solve_system<C>(const LinearSystem<C>&);                                                \
    template struct PsiExpr<C>;                                                                                  \
    template PsiExpr<C> jost_psi_expr<C>(const SpectralData<C>&, const Solution<C>&);                            \
    template ExpRational<C> potential_expr<C>(const SpectralData<C>&, const Solution<C>&);                       \
    template bool satisfies_schrodinger<C>(const PsiExpr<C>&, const ExpRational<C>&, double);                   \
    template ExpRational<C> asymptotic_leading<C>(const ExpRational<C>&, Direction);                             \
    template EvalResult eval_expr<C>(const ExpRational<C>&, Complex, Complex, double);                           \
    template std::vector<RealPole> real_poles<C>(const ExpRational<C>&, double, double, std::size_t, double);    \
    template Synthesis<C> synthesize<C>(const SpectralData<C>&);

JOSTFORGE_INSTANTIATE(GaussianRational)
JOSTFORGE_INSTANTIATE(Complex)

#undef JOSTFORGE_INSTANTIATE

}  // namespace jostforge::synthesis
