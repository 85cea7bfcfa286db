#include "jostforge/exact/rational_function.hpp"

#include <stdexcept>

namespace jostforge::exact {

RationalFunction RationalFunction::normalize(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::invalid_argument("rational function with zero denominator");
    if (num.is_zero()) return {};
    Poly g = gcd(num, den);
    Poly n = divmod(num, g).first;
    Poly d = divmod(den, g).first;
    GaussianRational lc = d.leading().inverse();
    return {n * Poly(lc), d * Poly(lc), true};
}

int RationalFunction::order_at_infinity() const {
    if (num_.is_zero()) throw std::domain_error("order at infinity of the zero function");
    return den_.degree() - num_.degree();
}

RationalFunction RationalFunction::derivative() const {
    return normalize(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

GaussianRational RationalFunction::operator()(const GaussianRational& at) const {
    GaussianRational d = den_(at);
    if (d.is_zero()) throw std::domain_error("evaluation at a pole");
    return num_(at) / d;
}

std::complex<double> RationalFunction::eval(std::complex<double> at) const {
    return num_.eval(at) / den_.eval(at);
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    if (den_ == o.den_) return *this = normalize(num_ + o.num_, den_);
    return *this = normalize(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
    if (den_ == o.den_) return *this = normalize(num_ - o.num_, den_);
    return *this = normalize(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    return *this = normalize(num_ * o.num_, den_ * o.den_);
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
    if (o.is_zero()) throw std::domain_error("rational function division by zero");
    return *this = normalize(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::operator-() const { return {-num_, den_, true}; }

std::string RationalFunction::to_string(const std::string& var) const {
    if (den_.degree() == 0) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
}

RationalFunction pow(const RationalFunction& f, int exponent) {
    if (exponent < 0) return pow(RationalFunction(1) / f, -exponent);
    return RationalFunction::normalize(pow(f.num(), exponent), pow(f.den(), exponent));
}

}  // namespace jostforge::exact
