#pragma once

#include "vfkit/rational.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vfkit {

class Expr;

/// Non-polynomial building blocks. Each one wraps a canonical argument.
///   Exp    e^u
///   Bump   e^{-1/u^2}, extended by 0 at u = 0
///   Bumpp  e^{-1/u^2} for u > 0, 0 for u <= 0
///   Recip  1/u, for u that is not a single monomial
enum class AtomKind : std::uint8_t { Exp, Bump, Bumpp, Recip };

struct Atom {
  AtomKind kind;
  std::shared_ptr<const Expr> arg;
};

/// An atom raised to a positive integer power inside a term.
struct Factor {
  Atom atom;
  int power = 1;
};

/// Sparse (variable index, exponent) list, sorted by variable, no zero
/// exponents. Variable indices are 1-based. Exponents may be negative
/// (Laurent monomials arise from differentiating bump atoms).
using Monomial = std::vector<std::pair<int, int>>;

struct Term {
  Rational coef;
  Monomial mono;
  std::vector<Factor> factors;
};

/// Immutable scalar expression in canonical form: a sorted sum of terms
/// coef * monomial * product(atom^power), with nonzero coefficients and
/// distinct (monomial, factors) keys. Two expressions are mathematically
/// equal under the rewrite rules iff they compare equal structurally.
class Expr {
public:
  /// The zero expression (empty sum).
  Expr() = default;

  static Expr constant(const Rational& c);
  static Expr constant(long c) { return constant(make_rational(c)); }
  static Expr variable(int index);
  static Expr exp(const Expr& u);
  static Expr bump(const Expr& u);
  static Expr bumpp(const Expr& u);

  /// Canonicalizes an arbitrary term list.
  static Expr from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> as_constant() const;

  /// No atoms and no negative exponents.
  bool is_polynomial() const;
  /// Contains a Bump or Bumpp atom anywhere.
  bool has_flat() const;
  /// Every term with a negative exponent or Recip factor also carries a flat
  /// factor, so it extends smoothly by zero. Polynomials are admissible.
  bool is_admissible() const;
  /// Total degree; only meaningful for polynomials. The zero polynomial has
  /// degree -1.
  int degree() const;
  /// Largest variable index referenced (0 for constants).
  int max_variable() const;

  Expr pow(int k) const;
  Expr scaled(const Rational& c) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr operator*(const Expr& a, const Expr& b);
  /// Exact polynomial quotient when the division is exact, otherwise a
  /// Recip factor. Throws DivisionByZero for a zero divisor.
  friend Expr operator/(const Expr& a, const Expr& b);

  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  /// Text in the input grammar; parse(str()) reproduces *this.
  std::string str() const;

private:
  std::vector<Term> terms_;
};

std::strong_ordering compare_monomials(const Monomial& a, const Monomial& b);
std::strong_ordering compare_terms_by_key(const Term& a, const Term& b);

/// Exact partial derivative with respect to variable `var` (1-based).
Expr diff(const Expr& e, int var);

/// Floating evaluation. Terms carrying exp/bump factors are evaluated in log
/// space; a bump factor whose argument is within kFlatZero of its zero makes
/// the whole term exactly 0. Throws DivisionByZero at unguarded poles.
double eval(const Expr& e, std::span<const double> x);

/// Exact evaluation. Returns nullopt when the value is not rational (a live
/// exp/bump factor). Throws DivisionByZero at unguarded poles.
std::optional<Rational> eval_exact(const Expr& e, std::span<const Rational> x);

/// |u| below this is treated as the extension point of bump(u).
inline constexpr double kFlatZero = 1e-12;

/// Parses the expression grammar over variables x1..xn.
Expr parse_expr(std::string_view text, int n);

} // namespace vfkit
