#include "jostforge/exact/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace jostforge::exact {

Poly::Poly(GaussianRational c) {
    if (!c.is_zero()) coeffs_.push_back(std::move(c));
}

Poly::Poly(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(const GaussianRational& c, int degree) {
    if (c.is_zero()) return {};
    std::vector<GaussianRational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return Poly(std::move(v));
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

GaussianRational Poly::coeff(int j) const {
    if (j < 0 || j >= static_cast<int>(coeffs_.size())) return {};
    return coeffs_[static_cast<std::size_t>(j)];
}

const GaussianRational& Poly::leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

Poly Poly::monic() const {
    if (is_zero()) return {};
    GaussianRational inv = leading().inverse();
    Poly out = *this;
    for (auto& c : out.coeffs_) c *= inv;
    return out;
}

Poly Poly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<GaussianRational> d(coeffs_.size() - 1);
    for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = coeffs_[j] * GaussianRational(static_cast<long>(j));
    return Poly(std::move(d));
}

GaussianRational Poly::operator()(const GaussianRational& at) const {
    GaussianRational acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
    return acc;
}

std::complex<double> Poly::eval(std::complex<double> at) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + it->to_complex();
    return acc;
}

Poly Poly::shifted(const GaussianRational& s) const {
    // Horner in the shifted variable.
    Poly acc;
    Poly lin({s, GaussianRational(1)});
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + Poly(*it);
    return acc;
}

Poly Poly::reversed() const {
    std::vector<GaussianRational> v(coeffs_.rbegin(), coeffs_.rend());
    return Poly(std::move(v));
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Poly& o) {
    if (is_zero() || o.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<GaussianRational> out(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t a = 0; a < coeffs_.size(); ++a) {
        if (coeffs_[a].is_zero()) continue;
        for (std::size_t b = 0; b < o.coeffs_.size(); ++b) out[a + b] += coeffs_[a] * o.coeffs_[b];
    }
    coeffs_ = std::move(out);
    trim();
    return *this;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int j = degree(); j >= 0; --j) {
        const auto& c = coeffs_[static_cast<std::size_t>(j)];
        if (c.is_zero()) continue;
        std::string cs = c.to_string();
        bool compound = !c.is_real() && sgn(c.re()) != 0;
        if (compound) cs = "(" + cs + ")";
        bool neg = !compound && cs[0] == '-';
        if (!first) os << (neg ? " - " : " + ");
        else if (neg) os << "-";
        if (neg) cs.erase(0, 1);
        if (j == 0) {
            os << cs;
        } else {
            if (cs != "1") os << cs << "*";
            os << var;
            if (j > 1) os << "^" << j;
        }
        first = false;
    }
    return os.str();
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<GaussianRational> rem = a.coeffs();
    int db = b.degree();
    if (a.degree() < db) return {Poly(), a};
    std::vector<GaussianRational> quo(static_cast<std::size_t>(a.degree() - db + 1));
    GaussianRational inv = b.leading().inverse();
    for (int j = a.degree(); j >= db; --j) {
        GaussianRational c = rem[static_cast<std::size_t>(j)] * inv;
        quo[static_cast<std::size_t>(j - db)] = c;
        if (c.is_zero()) continue;
        for (int t = 0; t <= db; ++t) rem[static_cast<std::size_t>(j - db + t)] -= c * b.coeffs()[static_cast<std::size_t>(t)];
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

Poly pow(const Poly& p, int exponent) {
    if (exponent < 0) throw std::domain_error("negative polynomial power");
    Poly result(1), b = p;
    while (exponent > 0) {
        if (exponent & 1) result *= b;
        b *= b;
        exponent >>= 1;
    }
    return result;
}

std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& p) {
    std::vector<std::pair<Poly, int>> out;
    if (p.degree() <= 0) return out;
    Poly f = p.monic();
    Poly fp = f.derivative();
    Poly a = gcd(f, fp);
    Poly b = divmod(f, a).first;
    Poly c = divmod(fp, a).first;
    Poly d = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        Poly g = gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g, i);
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

}  // namespace jostforge::exact
