#pragma once

#include "jostforge/exact/exp_rational.hpp"
#include "jostforge/exact/gaussian_rational.hpp"
#include "jostforge/exact/rational_function.hpp"
#include "jostforge/scattering/scattering.hpp"

#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jostforge::cli {

using exact::GaussianRational;
using Complex = std::complex<double>;
using ExactExp = exact::ExpRational<GaussianRational>;

/// Syntax error at a 1-based line and column of the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// An expression with exp atoms (or k) where a rational function of x was required.
class ExpAtomInRational : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Syntax tree of the potential grammar
///   expr  := term (('+' | '-') term)*
///   term  := unary (('*' | '/') unary)*
///   unary := ('-' | '+') unary | power
///   power := atom ('^' ['-' | '+'] integer)?
///   atom  := number | 'x' | 'k' | 'i' | 'exp' '(' expr ')' | '(' expr ')'
struct Expr {
    enum class Kind { number, x, k, exp, add, sub, mul, div, neg, pow };
    Kind kind = Kind::number;
    GaussianRational value;  // number
    int exponent = 0;        // pow
    std::vector<std::shared_ptr<const Expr>> args;
    int line = 1, column = 1;

    bool has_exp() const;
    bool has_k() const;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr parse_expression(std::string_view text);

/// Throws ExpAtomInRational on exp atoms or k, std::domain_error on division by zero.
exact::RationalFunction to_rational(const Expr& e);

/// Rates of the exp atoms, each of the form exp(c*x) with c in Q(i). Throws
/// std::invalid_argument when an exp argument is not linear in x.
std::vector<GaussianRational> exp_rates(const Expr& e);

/// Hermite-normal-form basis of the lattice the rates span in Q(i): one
/// generator (a + bi, a > 0, or ci, c > 0) or two, a + bi and ci with
/// a, c > 0 and 0 <= b < c. The same lattice always gives the same basis.
ExactExp::Basis generator_basis(const std::vector<GaussianRational>& rates);

/// Builds the expression over `basis`; every rate must be an integer
/// combination of one or two basis rates. Without a basis the result lives
/// on the lattice spanned by rate differences of its reduced terms, so equal
/// functions get equal representations whatever text they came from.
ExactExp to_exp_rational(const Expr& e, ExactExp::Basis basis = nullptr);

Complex evaluate(const Expr& e, Complex x, Complex k = {0.0, 0.0});

/// Rational input goes through from_rational, exp input through from_exp_rational.
scattering::PotentialEval to_potential(const Expr& e);

}  // namespace jostforge::cli
