#pragma once

#include "vfkit/expr.hpp"
#include "vfkit/linalg.hpp"
#include "vfkit/point.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace vfkit {

/// Strict half-space x_var < bound or x_var > bound.
struct Inequality {
  enum class Relation { Less, Greater };
  int var = 1;
  Relation rel = Relation::Less;
  Rational bound;
};

/// Open domain given as a conjunction of strict inequalities. The empty
/// conjunction is all of R^n.
class DomainPredicate {
public:
  DomainPredicate() = default;
  explicit DomainPredicate(std::vector<Inequality> ineqs);

  const std::vector<Inequality>& inequalities() const { return ineqs_; }
  bool is_everything() const { return ineqs_.empty(); }

  bool contains(std::span<const double> x) const;
  bool contains(const Point& p) const;

  DomainPredicate intersect(const DomainPredicate& other) const;
  std::string str() const;

  friend bool operator==(const DomainPredicate&, const DomainPredicate&);

private:
  std::vector<Inequality> ineqs_;
};

/// A (possibly partially defined) vector field on R^n.
class VectorField {
public:
  VectorField() = default;
  VectorField(std::string name, std::vector<Expr> components, DomainPredicate domain = {});

  const std::string& name() const { return name_; }
  std::size_t dim() const { return components_.size(); }
  const std::vector<Expr>& components() const { return components_; }
  const Expr& operator[](std::size_t i) const { return components_[i]; }
  const DomainPredicate& domain() const { return domain_; }

  bool is_zero() const;
  bool is_polynomial() const;
  bool is_admissible() const;
  int degree() const;

  VectorField renamed(std::string name) const;
  VectorField scaled(const Rational& c) const;
  /// f * X, keeping the domain.
  VectorField times(const Expr& f) const;

  /// "(c1, c2, ...)" in the input grammar.
  std::string str() const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  /// Compares components only; domains are not part of the algebra.
  friend bool operator==(const VectorField& a, const VectorField& b) {
    return a.components_ == b.components_;
  }

private:
  std::string name_;
  std::vector<Expr> components_;
  DomainPredicate domain_;
};

/// Coordinate field d/dx_i on R^n.
VectorField coordinate_field(std::size_t n, int i, std::string name = {});

/// Value of a field at a point, exact when every component is rational there.
struct FieldValue {
  std::optional<RationalVector> exact;
  Eigen::VectorXd approx;
};

FieldValue evaluate(const VectorField& X, const Point& p);
Eigen::VectorXd evaluate_numeric(const VectorField& X, std::span<const double> x);

/// L_X f = sum_j X^j d_j f.
Expr lie_derivative(const VectorField& X, const Expr& f);

/// [X, Y]^i = sum_j (X^j d_j Y^i - Y^j d_j X^i), on the intersection of the
/// domains. Throws NonSmooth when a component carries an unguarded division.
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

/// c with a = c * b, when it exists (both nonzero).
std::optional<Rational> scalar_ratio(const VectorField& a, const VectorField& b);

} // namespace vfkit
