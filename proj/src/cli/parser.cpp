#include "jostforge/cli/parser.hpp"

#include <algorithm>
#include <cctype>

namespace jostforge::cli {

using exact::RationalFunction;

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}

bool Expr::has_exp() const {
    if (kind == Kind::exp) return true;
    return std::any_of(args.begin(), args.end(), [](const ExprPtr& a) { return a->has_exp(); });
}

bool Expr::has_k() const {
    if (kind == Kind::k) return true;
    return std::any_of(args.begin(), args.end(), [](const ExprPtr& a) { return a->has_k(); });
}

namespace {

struct Token {
    enum class Type { number, ident, op, end };
    Type type = Type::end;
    std::string text;
    int line = 1, column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= s_.size()) {
                out.push_back(t);
                return out;
            }
            char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                t.type = Token::Type::number;
                bool dot = false;
                while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
                    if (s_[pos_] == '.') {
                        if (dot) throw ParseError("malformed number", line_, col_);
                        dot = true;
                    }
                    t.text += s_[pos_];
                    advance(1);
                }
                if (t.text == ".") throw ParseError("malformed number", t.line, t.column);
            } else if (std::isalpha(static_cast<unsigned char>(c))) {
                t.type = Token::Type::ident;
                while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
                    t.text += s_[pos_];
                    advance(1);
                }
            } else if (s_.substr(pos_, 3) == "\xE2\x88\x92") {  // U+2212 minus sign
                t.type = Token::Type::op;
                t.text = "-";
                pos_ += 3;
                ++col_;
            } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
                t.type = Token::Type::op;
                t.text = std::string(1, c);
                advance(1);
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance(std::size_t n) {
        for (std::size_t j = 0; j < n; ++j) {
            if (s_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }
    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance(1);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : t_(std::move(tokens)) {}

    ExprPtr parse() {
        auto e = expr();
        if (peek().type != Token::Type::end) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return t_[i_]; }
    bool is_op(const char* op) const { return peek().type == Token::Type::op && peek().text == op; }
    [[noreturn]] void fail(const std::string& what) const {
        const auto& t = peek();
        throw ParseError(t.type == Token::Type::end ? "unexpected end of input" : what, t.line, t.column);
    }

    static ExprPtr node(Expr::Kind kind, std::vector<ExprPtr> args, const Token& at) {
        auto e = std::make_shared<Expr>();
        e->kind = kind;
        e->args = std::move(args);
        e->line = at.line;
        e->column = at.column;
        return e;
    }

    ExprPtr expr() {
        auto lhs = term();
        while (is_op("+") || is_op("-")) {
            Token op = t_[i_++];
            lhs = node(op.text == "+" ? Expr::Kind::add : Expr::Kind::sub, {lhs, term()}, op);
        }
        return lhs;
    }

    ExprPtr term() {
        auto lhs = unary();
        while (is_op("*") || is_op("/")) {
            Token op = t_[i_++];
            lhs = node(op.text == "*" ? Expr::Kind::mul : Expr::Kind::div, {lhs, unary()}, op);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (is_op("-")) {
            Token op = t_[i_++];
            return node(Expr::Kind::neg, {unary()}, op);
        }
        if (is_op("+")) {
            ++i_;
            return unary();
        }
        return power();
    }

    ExprPtr power() {
        auto base = atom();
        if (!is_op("^")) return base;
        Token op = t_[i_++];
        int sign = 1;
        if (is_op("-") || is_op("+")) sign = t_[i_++].text == "-" ? -1 : 1;
        if (peek().type != Token::Type::number || peek().text.find('.') != std::string::npos)
            fail("integer exponent expected");
        const auto& digits = peek().text;
        if (digits.size() > 6) fail("exponent too large");
        int n = std::stoi(digits);
        ++i_;
        auto e = std::make_shared<Expr>(*node(Expr::Kind::pow, {base}, op));
        e->exponent = sign * n;
        return e;
    }

    ExprPtr atom() {
        const Token& t = peek();
        if (t.type == Token::Type::number) {
            auto e = std::make_shared<Expr>(*node(Expr::Kind::number, {}, t));
            e->value = GaussianRational(GaussianRational::parse_rational(t.text));
            ++i_;
            return e;
        }
        if (t.type == Token::Type::ident) {
            Token id = t_[i_++];
            if (id.text == "x") return node(Expr::Kind::x, {}, id);
            if (id.text == "k") return node(Expr::Kind::k, {}, id);
            if (id.text == "i") {
                auto e = std::make_shared<Expr>(*node(Expr::Kind::number, {}, id));
                e->value = GaussianRational::i();
                return e;
            }
            if (id.text == "exp") {
                if (!is_op("(")) fail("'(' expected after exp");
                ++i_;
                auto arg = expr();
                if (!is_op(")")) fail("')' expected");
                ++i_;
                return node(Expr::Kind::exp, {arg}, id);
            }
            throw ParseError("unknown identifier '" + id.text + "'", id.line, id.column);
        }
        if (is_op("(")) {
            ++i_;
            auto e = expr();
            if (!is_op(")")) fail("')' expected");
            ++i_;
            return e;
        }
        fail("unexpected '" + t.text + "'");
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
};

RationalFunction rational_pow(const RationalFunction& f, int n) {
    if (n >= 0) return exact::pow(f, n);
    if (f.is_zero()) throw std::domain_error("zero raised to a negative power");
    return RationalFunction(1) / exact::pow(f, -n);
}

ExactExp exp_pow(const ExactExp& f, int n) {
    ExactExp out = ExactExp::constant(f.basis(), GaussianRational(1));
    ExactExp base = f;
    for (int m = n < 0 ? -n : n; m > 0; m >>= 1) {
        if (m & 1) out *= base;
        if (m > 1) base *= base;
    }
    return n < 0 ? ExactExp::constant(f.basis(), GaussianRational(1)) / out : out;
}

// c with arg = c*x
GaussianRational linear_rate(const Expr& arg) {
    if (arg.has_exp() || arg.has_k()) throw std::invalid_argument("exp argument must be c*x with constant c");
    auto f = to_rational(arg);
    const auto& n = f.num();
    if (!f.is_polynomial() || n.degree() > 1 || !n.coeff(0).is_zero())
        throw std::invalid_argument("exp argument must be c*x with constant c");
    return n.coeff(1) / f.den().coeff(0);
}

void collect_rates(const Expr& e, std::vector<GaussianRational>& out) {
    if (e.kind == Expr::Kind::exp) {
        out.push_back(linear_rate(*e.args[0]));
        return;
    }
    for (const auto& a : e.args) collect_rates(*a, out);
}

// r / g when it is an integer, else nullopt
std::optional<long> integer_ratio(const GaussianRational& r, const GaussianRational& g) {
    auto q = r / g;
    if (!q.is_integer()) return std::nullopt;
    return q.to_long();
}

// (n, m) with r = n g + m h over the integers, g and h independent over Q
std::optional<std::pair<long, long>> integer_pair(const GaussianRational& r, const GaussianRational& g,
                                                  const GaussianRational& h) {
    mpq_class det = g.re() * h.im() - g.im() * h.re();
    if (sgn(det) == 0) return std::nullopt;
    GaussianRational n(mpq_class((r.re() * h.im() - r.im() * h.re()) / det));
    GaussianRational m(mpq_class((g.re() * r.im() - g.im() * r.re()) / det));
    if (!n.is_integer() || !m.is_integer()) return std::nullopt;
    return std::make_pair(n.to_long(), m.to_long());
}

ExactExp build(const Expr& e, const ExactExp::Basis& b) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::number: return ExactExp::constant(b, e.value);
        case K::x: return ExactExp::x(b);
        case K::k: return ExactExp::k(b);
        case K::exp: {
            auto c = linear_rate(*e.args[0]);
            if (c.is_zero()) return ExactExp::constant(b, GaussianRational(1));
            for (std::size_t j = 0; j < b->size(); ++j) {
                if (auto n = integer_ratio(c, b->rates[j])) return ExactExp::exp_power(b, j, static_cast<int>(*n));
            }
            for (std::size_t j = 0; j < b->size(); ++j) {
                for (std::size_t l = j + 1; l < b->size(); ++l) {
                    if (auto n = integer_pair(c, b->rates[j], b->rates[l]))
                        return ExactExp::exp_power(b, j, static_cast<int>(n->first)) *
                               ExactExp::exp_power(b, l, static_cast<int>(n->second));
                }
            }
            throw std::invalid_argument("exp(" + c.to_string() + "*x) is not a power of a basis exponential");
        }
        case K::add: return build(*e.args[0], b) + build(*e.args[1], b);
        case K::sub: return build(*e.args[0], b) - build(*e.args[1], b);
        case K::mul: return build(*e.args[0], b) * build(*e.args[1], b);
        case K::div: return build(*e.args[0], b) / build(*e.args[1], b);
        case K::neg: return -build(*e.args[0], b);
        case K::pow: return exp_pow(build(*e.args[0], b), e.exponent);
    }
    throw std::logic_error("unhandled node");
}

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(Lexer(text).run()).parse(); }

RationalFunction to_rational(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::number: return RationalFunction(e.value);
        case K::x: return RationalFunction::x();
        case K::k:
            throw ExpAtomInRational("k at " + std::to_string(e.line) + ":" + std::to_string(e.column) +
                                    " is not allowed in a rational potential");
        case K::exp:
            throw ExpAtomInRational("exp atom at " + std::to_string(e.line) + ":" + std::to_string(e.column) +
                                    " is not allowed in a rational potential");
        case K::add: return to_rational(*e.args[0]) + to_rational(*e.args[1]);
        case K::sub: return to_rational(*e.args[0]) - to_rational(*e.args[1]);
        case K::mul: return to_rational(*e.args[0]) * to_rational(*e.args[1]);
        case K::div: {
            auto d = to_rational(*e.args[1]);
            if (d.is_zero()) throw std::domain_error("division by zero");
            return to_rational(*e.args[0]) / d;
        }
        case K::neg: return -to_rational(*e.args[0]);
        case K::pow: return rational_pow(to_rational(*e.args[0]), e.exponent);
    }
    throw std::logic_error("unhandled node");
}

std::vector<GaussianRational> exp_rates(const Expr& e) {
    std::vector<GaussianRational> out;
    collect_rates(e, out);
    return out;
}

ExactExp::Basis generator_basis(const std::vector<GaussianRational>& rates) {
    // Hermite normal form of the lattice the rates span in Q(i) = Q^2
    mpz_class scale = 1;
    for (const auto& r : rates) scale = lcm(scale, lcm(r.re().get_den(), r.im().get_den()));
    std::vector<std::pair<mpz_class, mpz_class>> v;
    for (const auto& r : rates) {
        mpq_class x = r.re() * scale, y = r.im() * scale;
        if (sgn(x) != 0 || sgn(y) != 0) v.emplace_back(x.get_num(), y.get_num());
    }
    std::vector<GaussianRational> gens;
    auto gen = [&](const mpz_class& x, const mpz_class& y) {
        mpq_class re(x, scale), im(y, scale);
        re.canonicalize();
        im.canonicalize();
        gens.emplace_back(re, im);
    };
    if (!v.empty()) {
        // a vector whose first coordinate is the gcd of all first coordinates
        mpz_class cx = 0, cy = 0;
        for (const auto& [x, y] : v) {
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), cx.get_mpz_t(), x.get_mpz_t());
            if (sgn(g) == 0) continue;
            mpz_class ny = s * cy + t * y;
            cx = g;
            cy = ny;
        }
        if (sgn(cx) < 0) {
            cx = -cx;
            cy = -cy;
        }
        mpz_class c = 0;
        for (const auto& [x, y] : v) {
            mpz_class rest = sgn(cx) == 0 ? y : mpz_class(y - (x / cx) * cy);
            c = gcd(c, rest);
        }
        if (sgn(cx) == 0) {
            gen(0, c);
        } else if (sgn(c) == 0) {
            gen(cx, cy);
        } else {
            mpz_class b = cy % c;
            if (sgn(b) < 0) b += c;
            gen(cx, b);
            gen(0, c);
        }
    }
    return std::make_shared<const exact::ExpBasis<GaussianRational>>(exact::ExpBasis<GaussianRational>{gens});
}

namespace {

GaussianRational monomial_rate(const exact::Monomial& m, const exact::ExpBasis<GaussianRational>& b) {
    GaussianRational r;
    for (std::size_t j = 0; j < b.size(); ++j) r += b.rates[j] * GaussianRational(m[j]);
    return r;
}

// f over the basis of the lattice spanned by rate differences of its terms,
// which depends on the function only and not on how it was written
ExactExp canonical_basis(const ExactExp& f) {
    const auto& old = *f.basis();
    std::vector<GaussianRational> rates;
    for (const auto* p : {&f.num(), &f.den()})
        for (const auto& [m, c] : p->terms()) rates.push_back(monomial_rate(m, old));
    const GaussianRational r0 = rates.front();
    for (auto& r : rates) r -= r0;
    auto basis = generator_basis(rates);
    if (basis->rates == old.rates) return f;
    const std::size_t n = basis->nvars();
    auto map = [&](const exact::MPoly<GaussianRational>& p) {
        exact::MPoly<GaussianRational> out(n);
        for (const auto& [m, c] : p.terms()) {
            GaussianRational r = monomial_rate(m, old) - r0;
            exact::Monomial mm(n, 0);
            mm[basis->x_index()] = m[old.x_index()];
            mm[basis->k_index()] = m[old.k_index()];
            if (basis->size() == 1) {
                mm[0] = static_cast<int>(integer_ratio(r, basis->rates[0]).value());
            } else if (basis->size() == 2) {
                auto nm = integer_pair(r, basis->rates[0], basis->rates[1]).value();
                mm[0] = static_cast<int>(nm.first);
                mm[1] = static_cast<int>(nm.second);
            }
            out.add_term(mm, c);
        }
        return out;
    };
    return ExactExp(basis, map(f.num()), map(f.den()));
}

}  // namespace

ExactExp to_exp_rational(const Expr& e, ExactExp::Basis basis) {
    if (basis) return build(e, basis);
    return canonical_basis(build(e, generator_basis(exp_rates(e))));
}

Complex evaluate(const Expr& e, Complex x, Complex k) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::number: return e.value.to_complex();
        case K::x: return x;
        case K::k: return k;
        case K::exp: return std::exp(evaluate(*e.args[0], x, k));
        case K::add: return evaluate(*e.args[0], x, k) + evaluate(*e.args[1], x, k);
        case K::sub: return evaluate(*e.args[0], x, k) - evaluate(*e.args[1], x, k);
        case K::mul: return evaluate(*e.args[0], x, k) * evaluate(*e.args[1], x, k);
        case K::div: return evaluate(*e.args[0], x, k) / evaluate(*e.args[1], x, k);
        case K::neg: return -evaluate(*e.args[0], x, k);
        case K::pow: return std::pow(evaluate(*e.args[0], x, k), e.exponent);
    }
    throw std::logic_error("unhandled node");
}

scattering::PotentialEval to_potential(const Expr& e) {
    if (e.has_k()) throw std::invalid_argument("a potential cannot depend on k");
    if (!e.has_exp()) return scattering::PotentialEval::from_rational(to_rational(e));
    return scattering::PotentialEval::from_exp_rational(to_exp_rational(e));
}

}  // namespace jostforge::cli
