#pragma once

#include "jostforge/exact/coeff_traits.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace jostforge::exact {

using Monomial = std::vector<int>;

/// Sparse multivariate polynomial. Terms are kept in a map keyed by exponent
/// vectors, so iteration is lexicographic with variable 0 most significant
/// and the leading term is the last entry.
template <class C>
class MPoly {
public:
    using Traits = Coeff<C>;

    explicit MPoly(std::size_t nvars = 0) : nvars_(nvars) {}

    static MPoly constant(std::size_t nvars, const C& c) {
        MPoly p(nvars);
        p.add_term(Monomial(nvars, 0), c);
        return p;
    }
    static MPoly variable(std::size_t nvars, std::size_t v, int power = 1) {
        MPoly p(nvars);
        Monomial m(nvars, 0);
        m.at(v) = power;
        p.add_term(m, Traits::from_long(1));
        return p;
    }

    std::size_t nvars() const noexcept { return nvars_; }
    const std::map<Monomial, C>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && is_unit_monomial(terms_.begin()->first));
    }
    C constant_term() const {
        auto it = terms_.find(Monomial(nvars_, 0));
        return it == terms_.end() ? C{} : it->second;
    }

    void add_term(const Monomial& m, const C& c) {
        if (m.size() != nvars_) throw std::invalid_argument("monomial arity mismatch");
        if (Traits::is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second = it->second + c;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw std::domain_error("leading term of the zero polynomial");
        return terms_.rbegin()->first;
    }
    const C& leading_coeff() const {
        if (terms_.empty()) throw std::domain_error("leading term of the zero polynomial");
        return terms_.rbegin()->second;
    }

    int degree_in(std::size_t v) const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m[v]);
        return d;
    }
    /// Componentwise minimum exponent over all terms (zero vector for the zero polynomial).
    Monomial min_exponents() const {
        if (terms_.empty()) return Monomial(nvars_, 0);
        Monomial lo = terms_.begin()->first;
        for (const auto& [m, c] : terms_)
            for (std::size_t v = 0; v < nvars_; ++v) lo[v] = std::min(lo[v], m[v]);
        return lo;
    }

    MPoly shifted(const Monomial& by) const {
        MPoly out(nvars_);
        for (const auto& [m, c] : terms_) {
            Monomial n = m;
            for (std::size_t v = 0; v < nvars_; ++v) n[v] += by[v];
            out.terms_.emplace(std::move(n), c);
        }
        return out;
    }

    MPoly scaled(const C& s) const {
        MPoly out(nvars_);
        if (Traits::is_zero(s)) return out;
        for (const auto& [m, c] : terms_) out.add_term(m, c * s);
        return out;
    }

    MPoly derivative(std::size_t v) const {
        MPoly out(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m[v] == 0) continue;
            Monomial n = m;
            --n[v];
            out.add_term(n, c * Traits::from_long(m[v]));
        }
        return out;
    }

    /// Coefficients with respect to variable v, indexed by degree; each
    /// coefficient has exponent zero in v.
    std::vector<MPoly> coefficients_in(std::size_t v) const {
        std::vector<MPoly> out(static_cast<std::size_t>(std::max(0, degree_in(v)) + 1), MPoly(nvars_));
        for (const auto& [m, c] : terms_) {
            Monomial n = m;
            n[v] = 0;
            out[static_cast<std::size_t>(m[v])].terms_.emplace(std::move(n), c);
        }
        return out;
    }

    MPoly& operator+=(const MPoly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, C{} - c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check(b);
        MPoly out(a.nvars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (std::size_t v = 0; v < m.size(); ++v) m[v] += mb[v];
                out.add_term(m, ca * cb);
            }
        }
        return out;
    }
    MPoly operator-() const { return scaled(Traits::from_long(-1)); }
    friend bool operator==(const MPoly& a, const MPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// Drops terms whose magnitude is below rel times the largest one.
    void prune(double rel) {
        double big = 0.0;
        for (const auto& [m, c] : terms_) big = std::max(big, std::abs(Traits::to_complex(c)));
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(Traits::to_complex(it->second)) <= rel * big) it = terms_.erase(it);
            else ++it;
        }
    }

private:
    static bool is_unit_monomial(const Monomial& m) {
        return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    }
    void check(const MPoly& o) const {
        if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial arity mismatch");
    }

    std::size_t nvars_;
    std::map<Monomial, C> terms_;
};

/// Exact quotient a / b; throws std::domain_error when b does not divide a.
template <class C>
MPoly<C> exact_divide(MPoly<C> a, const MPoly<C>& b) {
    if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
    MPoly<C> q(a.nvars());
    const Monomial& lb = b.leading_monomial();
    const C inv = C(1) / b.leading_coeff();
    while (!a.is_zero()) {
        Monomial m = a.leading_monomial();
        for (std::size_t v = 0; v < m.size(); ++v) {
            m[v] -= lb[v];
            if (m[v] < 0) throw std::domain_error("inexact multivariate division");
        }
        MPoly<C> t(a.nvars());
        t.add_term(m, a.leading_coeff() * inv);
        q += t;
        a -= t * b;
    }
    return q;
}

template <class C>
MPoly<C> make_monic(const MPoly<C>& p) {
    if (p.is_zero()) return p;
    return p.scaled(C(1) / p.leading_coeff());
}

namespace detail {

template <class C>
MPoly<C> from_coefficients(const std::vector<MPoly<C>>& cs, std::size_t v, std::size_t nvars) {
    MPoly<C> out(nvars);
    for (std::size_t d = 0; d < cs.size(); ++d) {
        Monomial shift(nvars, 0);
        shift[v] = static_cast<int>(d);
        out += cs[d].shifted(shift);
    }
    return out;
}

template <class C>
int first_variable(const MPoly<C>& a, const MPoly<C>& b) {
    for (std::size_t v = 0; v < a.nvars(); ++v) {
        if (a.degree_in(v) > 0 || b.degree_in(v) > 0) return static_cast<int>(v);
    }
    return -1;
}

// lc(b)^(da-db+1) * a mod b, viewed as polynomials in v
template <class C>
MPoly<C> pseudo_remainder(const MPoly<C>& a, const MPoly<C>& b, std::size_t v) {
    auto bc = b.coefficients_in(v);
    const int db = static_cast<int>(bc.size()) - 1;
    const MPoly<C>& lb = bc.back();
    MPoly<C> r = a;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        auto rc = r.coefficients_in(v);
        const int dr = static_cast<int>(rc.size()) - 1;
        Monomial shift(a.nvars(), 0);
        shift[v] = dr - db;
        r = lb * r - (rc.back() * b).shifted(shift);
    }
    return r;
}

// coefficients in v (ascending) after substituting point[w] for every other variable
template <class C>
std::vector<C> univariate_image(const MPoly<C>& p, std::size_t v, const std::vector<long>& point) {
    std::vector<C> out(static_cast<std::size_t>(std::max(0, p.degree_in(v)) + 1));
    for (const auto& [m, c] : p.terms()) {
        C t = c;
        for (std::size_t w = 0; w < m.size(); ++w)
            for (int e = 0; w != v && e < m[w]; ++e) t = t * Coeff<C>::from_long(point[w]);
        out[static_cast<std::size_t>(m[v])] = out[static_cast<std::size_t>(m[v])] + t;
    }
    return out;
}

template <class C>
void trim(std::vector<C>& a) {
    while (!a.empty() && Coeff<C>::is_zero(a.back())) a.pop_back();
}

template <class C>
int univariate_gcd_degree(std::vector<C> a, std::vector<C> b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        while (a.size() >= b.size()) {
            C f = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - f * b[i];
            a.pop_back();
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

// True only when a and b are certainly coprime: for each shared variable the
// images at an integer point keep their degrees and have a constant gcd.
template <class C>
bool coprime_certificate(const MPoly<C>& a, const MPoly<C>& b) {
    const std::size_t n = a.nvars();
    for (std::size_t v = 0; v < n; ++v) {
        const int da = a.degree_in(v), db = b.degree_in(v);
        if (da <= 0 || db <= 0) continue;
        bool settled = false;
        for (int attempt = 0; attempt < 3 && !settled; ++attempt) {
            std::vector<long> point(n);
            for (std::size_t w = 0; w < n; ++w) point[w] = 2 + static_cast<long>((w * 7 + attempt * 13 + v * 3) % 23);
            auto ia = univariate_image(a, v, point), ib = univariate_image(b, v, point);
            if (Coeff<C>::is_zero(ia.back()) || Coeff<C>::is_zero(ib.back())) continue;
            if (univariate_gcd_degree(ia, ib) > 0) return false;
            settled = true;
        }
        if (!settled) return false;
    }
    return true;
}

}  // namespace detail

template <class C>
MPoly<C> gcd(const MPoly<C>& a, const MPoly<C>& b);

/// gcd of the coefficients of p with respect to variable v.
template <class C>
MPoly<C> content_in(const MPoly<C>& p, std::size_t v) {
    MPoly<C> g(p.nvars());
    for (const auto& c : p.coefficients_in(v)) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

/// Monic greatest common divisor over an exact field (recursive primitive
/// pseudo-remainder sequence).
template <class C>
MPoly<C> gcd(const MPoly<C>& a, const MPoly<C>& b) {
    static_assert(Coeff<C>::exact, "multivariate gcd needs an exact coefficient field");
    const std::size_t n = a.nvars();
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    const int first = detail::first_variable(a, b);
    if (first < 0) return MPoly<C>::constant(n, C(1));
    const auto v = static_cast<std::size_t>(first);
    if (a.degree_in(v) == 0) return gcd(a, content_in(b, v));
    if (b.degree_in(v) == 0) return gcd(content_in(a, v), b);
    if (detail::coprime_certificate(a, b)) return MPoly<C>::constant(n, C(1));

    MPoly<C> ca = content_in(a, v), cb = content_in(b, v);
    MPoly<C> g = gcd(ca, cb);
    MPoly<C> pa = exact_divide(a, ca), pb = exact_divide(b, cb);
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    while (true) {
        MPoly<C> r = detail::pseudo_remainder(pa, pb, v);
        if (r.is_zero()) break;
        if (r.degree_in(v) <= 0) {
            pb = MPoly<C>::constant(n, C(1));
            break;
        }
        pa = std::move(pb);
        pb = exact_divide(r, content_in(r, v));
    }
    if (pb.degree_in(v) > 0) pb = exact_divide(pb, content_in(pb, v));
    return make_monic(g * pb);
}

}  // namespace jostforge::exact
