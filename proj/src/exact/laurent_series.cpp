#include "jostforge/exact/laurent_series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace jostforge::exact {

const GaussianRational& ExpansionPoint::location() const {
    if (!point_) throw std::logic_error("the point at infinity has no finite location");
    return *point_;
}

LaurentSeries::LaurentSeries(ExpansionPoint center, int start, std::vector<GaussianRational> coeffs, int bound)
    : center_(std::move(center)), start_(start), coeffs_(std::move(coeffs)), bound_(bound) {
    if (bound_ < start_) throw std::invalid_argument("series bound precedes its start");
    coeffs_.resize(static_cast<std::size_t>(bound_ - start_));
}

GaussianRational LaurentSeries::t_coefficient(int t_order) const {
    if (t_order >= bound_) {
        throw std::out_of_range("series coefficient at t-order " + std::to_string(t_order) +
                                " is beyond the truncation (bound " + std::to_string(bound_) + ")");
    }
    if (t_order < start_) return {};
    return coeffs_[static_cast<std::size_t>(t_order - start_)];
}

GaussianRational LaurentSeries::coefficient(int order) const {
    return t_coefficient(center_.is_infinity() ? -order : order);
}

bool LaurentSeries::known_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return c.is_zero(); });
}

int LaurentSeries::t_valuation() const {
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (!coeffs_[j].is_zero()) return start_ + static_cast<int>(j);
    }
    return bound_;
}

int LaurentSeries::min_order() const {
    int v = t_valuation();
    return center_.is_infinity() ? -v : v;
}

int LaurentSeries::truncation_order() const {
    return center_.is_infinity() ? -(bound_ - 1) : bound_ - 1;
}

void LaurentSeries::check_center(const LaurentSeries& o) const {
    if (!(center_ == o.center_)) throw std::invalid_argument("series expanded at different points");
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
    check_center(o);
    int s = std::min(start_, o.start_);
    int b = std::min(bound_, o.bound_);
    std::vector<GaussianRational> c(static_cast<std::size_t>(std::max(b - s, 0)));
    for (int j = s; j < b; ++j) c[static_cast<std::size_t>(j - s)] = t_coefficient(j) + o.t_coefficient(j);
    *this = LaurentSeries(center_, std::min(s, b), std::move(c), b);
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) { return *this += o.scaled(GaussianRational(-1)); }

LaurentSeries& LaurentSeries::operator*=(const LaurentSeries& o) {
    check_center(o);
    int va = t_valuation(), vb = o.t_valuation();
    int b = std::min(va + o.bound_, vb + bound_);
    int s = va + vb;
    if (b <= s) {
        *this = LaurentSeries(center_, b, {}, b);
        return *this;
    }
    std::vector<GaussianRational> c(static_cast<std::size_t>(b - s));
    for (int i = va; i < bound_; ++i) {
        const auto& ci = t_coefficient(i);
        if (ci.is_zero()) continue;
        for (int j = vb; j < o.bound_ && i + j < b; ++j) c[static_cast<std::size_t>(i + j - s)] += ci * o.t_coefficient(j);
    }
    *this = LaurentSeries(center_, s, std::move(c), b);
    return *this;
}

LaurentSeries LaurentSeries::scaled(const GaussianRational& k) const {
    LaurentSeries out = *this;
    for (auto& c : out.coeffs_) c *= k;
    return out;
}

LaurentSeries LaurentSeries::derivative() const {
    if (!center_.is_infinity()) {
        std::vector<GaussianRational> c;
        for (int j = start_; j < bound_; ++j) c.push_back(t_coefficient(j) * GaussianRational(j));
        return {center_, start_ - 1, std::move(c), bound_ - 1};
    }
    // d/dx = -t^2 d/dt
    std::vector<GaussianRational> c;
    for (int j = start_; j < bound_; ++j) c.push_back(t_coefficient(j) * GaussianRational(-j));
    return {center_, start_ + 1, std::move(c), bound_ + 1};
}

LaurentSeries LaurentSeries::inverse() const {
    int v = t_valuation();
    if (v >= bound_) throw std::domain_error("inverse of a series with no known nonzero coefficient");
    int rel = bound_ - v;
    GaussianRational inv0 = t_coefficient(v).inverse();
    std::vector<GaussianRational> out(static_cast<std::size_t>(rel));
    out[0] = inv0;
    for (int n = 1; n < rel; ++n) {
        GaussianRational acc;
        for (int j = 1; j <= n; ++j) acc += t_coefficient(v + j) * out[static_cast<std::size_t>(n - j)];
        out[static_cast<std::size_t>(n)] = -acc * inv0;
    }
    return {center_, -v, std::move(out), -v + rel};
}

LaurentSeries LaurentSeries::truncated_through(int order) const {
    int tb = center_.is_infinity() ? -order + 1 : order + 1;
    if (tb > bound_) throw std::out_of_range("truncation beyond the guaranteed order");
    std::vector<GaussianRational> c;
    for (int j = start_; j < tb; ++j) c.push_back(t_coefficient(j));
    return {center_, std::min(start_, tb), std::move(c), tb};
}

RationalFunction LaurentSeries::resum() const {
    RationalFunction acc;
    RationalFunction base = center_.is_infinity()
                                ? RationalFunction(1) / RationalFunction::x()
                                : RationalFunction(Poly::linear_factor(center_.location()));
    for (int j = start_; j < bound_; ++j) {
        const auto& c = t_coefficient(j);
        if (c.is_zero()) continue;
        acc += RationalFunction(c) * pow(base, j);
    }
    return acc;
}

std::string LaurentSeries::to_string() const {
    std::ostringstream os;
    std::string t = center_.is_infinity() ? "(1/x)" : "(x - " + center_.location().to_string() + ")";
    bool first = true;
    for (int j = start_; j < bound_; ++j) {
        const auto& c = t_coefficient(j);
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << c.to_string() << ")";
        if (j != 0) os << "*" << t << "^" << j;
        first = false;
    }
    if (first) os << "0";
    os << " + O(" << t << "^" << bound_ << ")";
    return os.str();
}

namespace {

// Coefficients of a/b as a power series in t through t^last (b(0) != 0).
std::vector<GaussianRational> series_quotient(const Poly& a, const Poly& b, int last) {
    std::vector<GaussianRational> out(static_cast<std::size_t>(last + 1));
    GaussianRational inv0 = b.coeff(0).inverse();
    for (int n = 0; n <= last; ++n) {
        GaussianRational acc = a.coeff(n);
        for (int j = 1; j <= std::min(n, b.degree()); ++j) acc -= b.coeff(j) * out[static_cast<std::size_t>(n - j)];
        out[static_cast<std::size_t>(n)] = acc * inv0;
    }
    return out;
}

int low_valuation(const Poly& p) {
    for (int j = 0; j <= p.degree(); ++j) {
        if (!p.coeff(j).is_zero()) return j;
    }
    return 0;
}

Poly drop_low(const Poly& p, int n) {
    std::vector<GaussianRational> v(p.coeffs().begin() + n, p.coeffs().end());
    return Poly(std::move(v));
}

}  // namespace

LaurentSeries laurent_expand(const RationalFunction& f, const ExpansionPoint& at, int through_order) {
    if (f.is_zero()) {
        int tb = at.is_infinity() ? -through_order + 1 : through_order + 1;
        return {at, tb, {}, tb};
    }
    Poly n, d;
    int shift;
    if (at.is_infinity()) {
        n = f.num().reversed();
        d = f.den().reversed();
        shift = f.den().degree() - f.num().degree();
    } else {
        n = f.num().shifted(at.location());
        d = f.den().shifted(at.location());
        int m = low_valuation(d);
        d = drop_low(d, m);
        shift = -m;
    }
    int bound = at.is_infinity() ? -through_order + 1 : through_order + 1;
    if (bound <= shift) return {at, bound, {}, bound};
    auto c = series_quotient(n, d, bound - shift - 1);
    return {at, shift, std::move(c), bound};
}

std::pair<GaussianRational, LaurentSeries> factored_sqrt(const LaurentSeries& s) {
    int v = s.t_valuation();
    if (v >= s.t_bound()) throw std::domain_error("square root of a series with no known nonzero coefficient");
    if (v % 2 != 0) throw std::domain_error("odd leading order: no square root in the Laurent field");
    GaussianRational lead = s.t_coefficient(v);
    GaussianRational inv = lead.inverse();
    int rel = s.t_bound() - v;
    std::vector<GaussianRational> a(static_cast<std::size_t>(rel));
    for (int j = 0; j < rel; ++j) a[static_cast<std::size_t>(j)] = s.t_coefficient(v + j) * inv;
    std::vector<GaussianRational> g(static_cast<std::size_t>(rel));
    g[0] = GaussianRational(1);
    for (int n = 1; n < rel; ++n) {
        GaussianRational acc = a[static_cast<std::size_t>(n)];
        for (int j = 1; j < n; ++j) acc -= g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(n - j)];
        g[static_cast<std::size_t>(n)] = acc * GaussianRational(mpq_class(1, 2));
    }
    return {lead, LaurentSeries(s.center(), v / 2, std::move(g), v / 2 + rel)};
}

LaurentSeries series_sqrt(const LaurentSeries& s) {
    auto [radicand, g] = factored_sqrt(s);
    auto root = radicand.exact_sqrt();
    if (!root) throw std::domain_error("leading coefficient " + radicand.to_string() + " has no square root in Q(i)");
    return g.scaled(*root);
}

RationalFunction polar_part(const LaurentSeries& g) {
    std::vector<GaussianRational> c;
    int v = g.t_valuation();
    if (g.center().is_infinity()) {
        // x-orders 0..l  <=>  t-orders -l..0
        for (int j = std::min(v, 0); j <= 0; ++j) c.push_back(g.t_coefficient(j));
        return LaurentSeries(g.center(), std::min(v, 0), std::move(c), 1).resum();
    }
    for (int j = std::min(v, -1); j <= -2; ++j) c.push_back(g.t_coefficient(j));
    const int start = std::min(v, -1);
    const int bound = start + static_cast<int>(c.size());
    return LaurentSeries(g.center(), start, std::move(c), bound).resum();
}

}  // namespace jostforge::exact
