#include "jostforge/exact/radical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jostforge::exact {

std::complex<double> principal_sqrt(std::complex<double> z) {
    if (z.imag() == 0.0) {
        if (z.real() >= 0.0) return {std::sqrt(z.real()), 0.0};
        return {0.0, std::sqrt(-z.real())};
    }
    return std::sqrt(z);
}

namespace {

// +1 or -1 such that sign * s * sqrt(b) equals the principal sqrt(a), given s^2 b = a.
int branch_sign(const GaussianRational& a, const GaussianRational& s, const GaussianRational& b) {
    auto ra = principal_sqrt(a.to_complex());
    auto rb = s.to_complex() * principal_sqrt(b.to_complex());
    return std::abs(ra - rb) <= std::abs(ra + rb) ? 1 : -1;
}

}  // namespace

RadicalSum::RadicalSum(GaussianRational q) {
    if (!q.is_zero()) terms_.push_back({GaussianRational(1), std::move(q)});
}

RadicalSum RadicalSum::sqrt(const GaussianRational& d) {
    RadicalSum out;
    out.add_term(d, GaussianRational(1));
    return out;
}

void RadicalSum::add_term(const GaussianRational& radicand, const GaussianRational& coeff) {
    if (radicand.is_zero() || coeff.is_zero()) return;
    GaussianRational rad = radicand;
    GaussianRational c = coeff;
    if (auto root = rad.exact_sqrt()) {
        c *= *root;
        rad = GaussianRational(1);
    } else {
        for (const auto& t : terms_) {
            if (t.radicand.is_one()) continue;
            if (auto s = (rad / t.radicand).exact_sqrt()) {
                c *= *s * GaussianRational(branch_sign(rad, *s, t.radicand));
                rad = t.radicand;
                break;
            }
        }
    }
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->radicand == rad) {
            it->coeff += c;
            if (it->coeff.is_zero()) terms_.erase(it);
            return;
        }
    }
    terms_.push_back({rad, c});
}

std::optional<GaussianRational> RadicalSum::as_rational() const {
    if (terms_.empty()) return GaussianRational(0);
    if (terms_.size() == 1 && terms_[0].radicand.is_one()) return terms_[0].coeff;
    return std::nullopt;
}

bool RadicalSum::is_nonnegative_integer() const {
    auto q = as_rational();
    return q && q->is_integer() && sgn(q->re()) >= 0;
}

std::complex<double> RadicalSum::to_complex() const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& t : terms_) acc += t.coeff.to_complex() * principal_sqrt(t.radicand.to_complex());
    return acc;
}

RadicalSum& RadicalSum::operator+=(const RadicalSum& o) {
    for (const auto& t : o.terms_) add_term(t.radicand, t.coeff);
    return *this;
}

RadicalSum& RadicalSum::operator-=(const RadicalSum& o) {
    for (const auto& t : o.terms_) add_term(t.radicand, -t.coeff);
    return *this;
}

RadicalSum& RadicalSum::operator*=(const RadicalSum& o) {
    RadicalSum out;
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            GaussianRational prod = a.radicand * b.radicand;
            // sqrt(a) sqrt(b) = sign * sqrt(ab)
            auto lhs = principal_sqrt(a.radicand.to_complex()) * principal_sqrt(b.radicand.to_complex());
            auto rhs = principal_sqrt(prod.to_complex());
            GaussianRational sign(std::abs(lhs - rhs) <= std::abs(lhs + rhs) ? 1 : -1);
            out.add_term(prod, a.coeff * b.coeff * sign);
        }
    }
    *this = std::move(out);
    return *this;
}

RadicalSum RadicalSum::operator-() const {
    RadicalSum out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

std::string RadicalSum::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        bool negative = t.coeff.is_real() && sgn(t.coeff.re()) < 0;
        GaussianRational c = negative ? -t.coeff : t.coeff;
        if (!first) os << (negative ? " - " : " + ");
        else if (negative) os << "-";
        first = false;
        if (t.radicand.is_one()) {
            os << c.to_string();
            continue;
        }
        if (!c.is_one()) os << (c.is_real() ? c.to_string() : "(" + c.to_string() + ")") << "*";
        os << "sqrt(" << t.radicand.to_string() << ")";
    }
    return os.str();
}

}  // namespace jostforge::exact
