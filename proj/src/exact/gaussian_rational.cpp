#include "jostforge/exact/gaussian_rational.hpp"

#include <stdexcept>

namespace jostforge::exact {

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

mpq_class GaussianRational::parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.front() == '+') s.erase(s.begin());
    if (auto dot = s.find('.'); dot != std::string::npos) {
        if (s.find('/') != std::string::npos) throw std::invalid_argument("malformed rational literal: " + s);
        bool neg = !s.empty() && s.front() == '-';
        std::string digits = s.substr(neg ? 1 : 0);
        dot = digits.find('.');
        std::string whole = digits.substr(0, dot);
        std::string frac = digits.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (frac.empty() || whole.find_first_not_of("0123456789") != std::string::npos ||
            frac.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("malformed decimal literal: " + s);
        }
        mpz_class num(whole + frac, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        mpq_class q(num, den);
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    }
    auto slash = s.find('/');
    auto check_int = [&](const std::string& part) {
        std::size_t start = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (part.size() <= start || part.find_first_not_of("0123456789", start) != std::string::npos) {
            throw std::invalid_argument("malformed rational literal: " + s);
        }
    };
    if (slash == std::string::npos) {
        check_int(s);
        return mpq_class(mpz_class(s[0] == '+' ? s.substr(1) : s, 10));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    check_int(n);
    check_int(d);
    mpz_class dz(d[0] == '+' ? d.substr(1) : d, 10);
    if (dz == 0) throw std::invalid_argument("zero denominator in rational literal: " + s);
    mpq_class q(mpz_class(n[0] == '+' ? n.substr(1) : n, 10), dz);
    q.canonicalize();
    return q;
}

GaussianRational GaussianRational::from_strings(std::string_view re, std::string_view im) {
    return {parse_rational(re), parse_rational(im)};
}

bool GaussianRational::is_integer() const {
    return sgn(im_) == 0 && re_.get_den() == 1;
}

long GaussianRational::to_long() const {
    if (!is_integer() || !re_.get_num().fits_slong_p()) throw std::domain_error("not a machine integer: " + to_string());
    return re_.get_num().get_si();
}

GaussianRational GaussianRational::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in Q(i)");
    mpq_class n = norm();
    return {re_ / n, -im_ / n};
}

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (sgn(q) < 0) return std::nullopt;
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return mpq_class(rn, rd);
}

std::optional<GaussianRational> GaussianRational::exact_sqrt() const {
    if (sgn(im_) == 0) {
        if (sgn(re_) >= 0) {
            auto r = rational_sqrt(re_);
            if (!r) return std::nullopt;
            return GaussianRational(*r, 0);
        }
        auto r = rational_sqrt(mpq_class(-re_));
        if (!r) return std::nullopt;
        return GaussianRational(0, *r);
    }
    auto m = rational_sqrt(norm());
    if (!m) return std::nullopt;
    auto x = rational_sqrt(mpq_class((re_ + *m) / 2));
    if (!x || sgn(*x) == 0) return std::nullopt;
    mpq_class y = im_ / (2 * *x);
    return GaussianRational(*x, y);
}

std::string GaussianRational::to_string() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string imag;
    if (im_ == 1) imag = "i";
    else if (im_ == -1) imag = "-i";
    else imag = im_.get_str() + "*i";
    if (sgn(re_) == 0) return imag;
    std::string out = re_.get_str();
    if (imag[0] == '-') out += imag;
    else out += "+" + imag;
    return out;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    return *this *= o.inverse();
}

GaussianRational pow(const GaussianRational& base, int exponent) {
    if (exponent < 0) return pow(base.inverse(), -exponent);
    GaussianRational result(1), b = base;
    while (exponent > 0) {
        if (exponent & 1) result *= b;
        b *= b;
        exponent >>= 1;
    }
    return result;
}

}  // namespace jostforge::exact
