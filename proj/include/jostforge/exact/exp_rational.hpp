#pragma once

#include "jostforge/exact/linear_solve.hpp"
#include "jostforge/exact/mpoly.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jostforge::exact {

/// The exponentials E_j = exp(rate_j * x) shared by a family of ExpRational values.
template <class C>
struct ExpBasis {
    std::vector<C> rates;
    std::size_t size() const noexcept { return rates.size(); }
    /// Variable indices: E_1..E_n, then x, then the spectral parameter k.
    std::size_t x_index() const noexcept { return rates.size(); }
    std::size_t k_index() const noexcept { return rates.size() + 1; }
    std::size_t nvars() const noexcept { return rates.size() + 2; }
};

struct EvalResult {
    std::complex<double> value;
    bool pole = false;
};

/// Ratio of polynomials in (E_1..E_n, x, k). Exact coefficient fields are kept
/// in lowest terms with the lex-leading coefficient of the denominator equal
/// to one, so equality is structural. Floating fields only strip common
/// monomial factors and normalize the denominator's leading coefficient.
template <class C>
class ExpRational {
public:
    using Poly = MPoly<C>;
    using Basis = std::shared_ptr<const ExpBasis<C>>;
    using Traits = Coeff<C>;

    explicit ExpRational(Basis basis)
        : basis_(std::move(basis)), num_(basis_->nvars()), den_(Poly::constant(basis_->nvars(), C(1))) {}
    ExpRational(Basis basis, Poly num, Poly den) : basis_(std::move(basis)), num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static ExpRational constant(Basis b, const C& c) {
        auto n = b->nvars();
        return ExpRational(b, Poly::constant(n, c), Poly::constant(n, C(1)));
    }
    /// E_j^power; negative powers land in the denominator.
    static ExpRational exp_power(Basis b, std::size_t j, int power = 1) {
        auto n = b->nvars();
        if (power >= 0) return ExpRational(b, Poly::variable(n, j, power), Poly::constant(n, C(1)));
        return ExpRational(b, Poly::constant(n, C(1)), Poly::variable(n, j, -power));
    }
    static ExpRational x(Basis b) { return ExpRational(b, Poly::variable(b->nvars(), b->x_index()), Poly::constant(b->nvars(), C(1))); }
    static ExpRational k(Basis b) { return ExpRational(b, Poly::variable(b->nvars(), b->k_index()), Poly::constant(b->nvars(), C(1))); }

    const Basis& basis() const noexcept { return basis_; }
    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }

    ExpRational& operator+=(const ExpRational& o) {
        if (den_ == o.den_) return assign(num_ + o.num_, den_, o);
        return assign(num_ * o.den_ + o.num_ * den_, den_ * o.den_, o);
    }
    ExpRational& operator-=(const ExpRational& o) {
        if (den_ == o.den_) return assign(num_ - o.num_, den_, o);
        return assign(num_ * o.den_ - o.num_ * den_, den_ * o.den_, o);
    }
    ExpRational& operator*=(const ExpRational& o) { return assign(num_ * o.num_, den_ * o.den_, o); }
    ExpRational& operator/=(const ExpRational& o) {
        if (o.is_zero()) throw std::domain_error("division by the zero ExpRational");
        return assign(num_ * o.den_, den_ * o.num_, o);
    }
    friend ExpRational operator+(ExpRational a, const ExpRational& b) { return a += b; }
    friend ExpRational operator-(ExpRational a, const ExpRational& b) { return a -= b; }
    friend ExpRational operator*(ExpRational a, const ExpRational& b) { return a *= b; }
    friend ExpRational operator/(ExpRational a, const ExpRational& b) { return a /= b; }
    ExpRational operator-() const { return ExpRational(basis_, -num_, den_); }
    friend bool operator==(const ExpRational& a, const ExpRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    ExpRational scaled(const C& c) const { return ExpRational(basis_, num_.scaled(c), den_); }

    /// d/dx with dE_j/dx = rate_j E_j.
    ExpRational derivative_x() const {
        Poly dn = poly_dx(num_), dd = poly_dx(den_);
        return ExpRational(basis_, dn * den_ - num_ * dd, den_ * den_);
    }

    /// Evaluates at (x, k) with a shared exponential scale so that large
    /// |E_j| neither overflow nor lose the ratio. pole is set when the scaled
    /// denominator is below pole_tol relative to its term magnitudes.
    EvalResult evaluate(std::complex<double> xv, std::complex<double> kv = {0.0, 0.0}, double pole_tol = 1e-12) const {
        const auto& b = *basis_;
        std::vector<std::complex<double>> lam(b.size());
        for (std::size_t j = 0; j < b.size(); ++j) lam[j] = Traits::to_complex(b.rates[j]);
        auto phase = [&](const Monomial& m) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t j = 0; j < b.size(); ++j) s += static_cast<double>(m[j]) * lam[j];
            return s * xv;
        };
        double shift = -std::numeric_limits<double>::infinity();
        for (const auto* p : {&num_, &den_})
            for (const auto& [m, c] : p->terms()) shift = std::max(shift, phase(m).real());
        if (!std::isfinite(shift)) shift = 0.0;
        auto sum = [&](const Poly& p, double& mag) {
            std::complex<double> acc{0.0, 0.0};
            mag = 0.0;
            for (const auto& [m, c] : p.terms()) {
                std::complex<double> t = Traits::to_complex(c) * std::exp(phase(m) - shift);
                t *= std::pow(xv, m[b.x_index()]) * std::pow(kv, m[b.k_index()]);
                acc += t;
                mag += std::abs(t);
            }
            return acc;
        };
        double nmag = 0.0, dmag = 0.0;
        auto nv = sum(num_, nmag);
        auto dv = sum(den_, dmag);
        EvalResult out;
        if (std::abs(dv) <= pole_tol * dmag || dv == std::complex<double>(0.0, 0.0)) {
            out.pole = true;
            out.value = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
            return out;
        }
        out.value = nv / dv;
        return out;
    }

    /// Scaled denominator modulus |den| / sum |den terms| at real or complex x.
    double relative_denominator(std::complex<double> xv, std::complex<double> kv = {0.0, 0.0}) const {
        return evaluate_den_only(xv, kv);
    }

    std::string to_string() const { return render(false); }
    std::string to_latex() const { return render(true); }

    /// Polynomial text of one side, in the canonical term order (descending lex).
    std::string poly_string(const Poly& p, bool latex) const {
        if (p.is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
            std::string coeff = Traits::to_string(it->second);
            std::string mono = monomial_string(it->first, latex);
            bool negative = !coeff.empty() && coeff[0] == '-' && coeff.find_first_of("+-", 1) == std::string::npos;
            if (!first) os << (negative ? " - " : " + ");
            else if (negative) os << "-";
            std::string mag = negative ? coeff.substr(1) : coeff;
            bool compound = mag.find_first_of("+-", 1) != std::string::npos;
            if (compound) mag = "(" + mag + ")";
            if (mono.empty()) os << mag;
            else if (mag == "1") os << mono;
            else os << mag << (latex ? " " : "*") << mono;
            first = false;
        }
        return os.str();
    }

private:
    ExpRational& assign(Poly n, Poly d, const ExpRational& o) {
        if (o.basis_ != basis_ && !(o.basis_->rates == basis_->rates)) throw std::invalid_argument("ExpRational basis mismatch");
        num_ = std::move(n);
        den_ = std::move(d);
        normalize();
        return *this;
    }

    Poly poly_dx(const Poly& p) const {
        const auto& b = *basis_;
        Poly out = p.derivative(b.x_index());
        for (const auto& [m, c] : p.terms()) {
            C rate{};
            for (std::size_t j = 0; j < b.size(); ++j) rate = rate + b.rates[j] * Traits::from_long(m[j]);
            out.add_term(m, c * rate);
        }
        return out;
    }

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator in ExpRational");
        const std::size_t n = basis_->nvars();
        if (num_.is_zero()) {
            den_ = Poly::constant(n, C(1));
            return;
        }
        if constexpr (!Traits::exact) {
            num_.prune(1e-14);
            den_.prune(1e-14);
        }
        Monomial lo = num_.min_exponents(), ld = den_.min_exponents();
        Monomial shift(n);
        bool any = false;
        for (std::size_t v = 0; v < n; ++v) {
            shift[v] = -std::min(lo[v], ld[v]);
            any = any || shift[v] != 0;
        }
        if (any) {
            num_ = num_.shifted(shift);
            den_ = den_.shifted(shift);
        }
        if constexpr (Traits::exact) {
            if (!den_.is_constant()) {
                Poly g = gcd(num_, den_);
                if (!g.is_constant()) {
                    num_ = exact_divide(num_, g);
                    den_ = exact_divide(den_, g);
                }
            }
        }
        C inv = C(1) / den_.leading_coeff();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }

    double evaluate_den_only(std::complex<double> xv, std::complex<double> kv) const {
        const auto& b = *basis_;
        double shift = -std::numeric_limits<double>::infinity();
        std::vector<std::complex<double>> ph;
        for (const auto& [m, c] : den_.terms()) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t j = 0; j < b.size(); ++j) s += static_cast<double>(m[j]) * Traits::to_complex(b.rates[j]);
            ph.push_back(s * xv);
            shift = std::max(shift, ph.back().real());
        }
        std::complex<double> acc{0.0, 0.0};
        double mag = 0.0;
        std::size_t i = 0;
        for (const auto& [m, c] : den_.terms()) {
            auto t = Traits::to_complex(c) * std::exp(ph[i++] - shift) * std::pow(xv, m[b.x_index()]) *
                     std::pow(kv, m[b.k_index()]);
            acc += t;
            mag += std::abs(t);
        }
        return mag == 0.0 ? 0.0 : std::abs(acc) / mag;
    }

    std::string monomial_string(const Monomial& m, bool latex) const {
        const auto& b = *basis_;
        std::vector<std::string> parts;
        auto power = [&](const std::string& base, int e) {
            if (e == 1) return base;
            return latex ? base + "^{" + std::to_string(e) + "}" : base + "^" + std::to_string(e);
        };
        if (m[b.x_index()] > 0) parts.push_back(power("x", m[b.x_index()]));
        if (m[b.k_index()] > 0) parts.push_back(power("k", m[b.k_index()]));
        C rate{};
        bool has_exp = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (m[j] == 0) continue;
            has_exp = true;
            rate = rate + b.rates[j] * Traits::from_long(m[j]);
        }
        if (has_exp) {
            std::string r = Traits::to_string(rate);
            bool compound = r.find_first_of("+-", 1) != std::string::npos || r.find('/') != std::string::npos;
            if (latex) {
                parts.push_back("e^{" + (r == "1" ? std::string() : r == "-1" ? std::string("-") : (compound ? "(" + r + ")" : r)) + "x}");
            } else {
                parts.push_back("exp(" + (compound ? "(" + r + ")" : r) + "*x)");
            }
        }
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += latex ? " " : "*";
            out += parts[i];
        }
        return out;
    }

    std::string render(bool latex) const {
        std::string n = poly_string(num_, latex);
        if (den_.is_constant() && den_.constant_term() == C(1)) return n;
        std::string d = poly_string(den_, latex);
        if (latex) return "\\frac{" + n + "}{" + d + "}";
        return "(" + n + ")/(" + d + ")";
    }

    Basis basis_;
    Poly num_;
    Poly den_;
};

template <class C>
struct FieldTraits<ExpRational<C>> {
    static bool is_zero(const ExpRational<C>& v) { return v.is_zero(); }
    static double pivot_weight(const ExpRational<C>& v) { return v.is_zero() ? 0.0 : 1.0; }
    static ExpRational<C> zero_like(const ExpRational<C>& v) { return ExpRational<C>(v.basis()); }
    static ExpRational<C> one_like(const ExpRational<C>& v) { return ExpRational<C>::constant(v.basis(), C(1)); }
    static constexpr bool exact = true;
};

}  // namespace jostforge::exact
