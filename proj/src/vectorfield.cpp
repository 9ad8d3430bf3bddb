#include "vfkit/vectorfield.hpp"

#include "vfkit/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace vfkit {

DomainPredicate::DomainPredicate(std::vector<Inequality> ineqs) : ineqs_(std::move(ineqs)) {
  for (auto& q : ineqs_) {
    if (q.var < 1) throw std::invalid_argument("domain inequality on invalid variable");
    q.bound.canonicalize();
  }
}

bool DomainPredicate::contains(std::span<const double> x) const {
  for (const auto& q : ineqs_) {
    if (static_cast<std::size_t>(q.var) > x.size()) return false;
    const double v = x[q.var - 1];
    const double b = q.bound.get_d();
    if (q.rel == Inequality::Relation::Less ? !(v < b) : !(v > b)) return false;
  }
  return true;
}

bool DomainPredicate::contains(const Point& p) const {
  if (!p.is_exact()) return contains(p.values());
  const auto& x = p.rational();
  for (const auto& q : ineqs_) {
    if (static_cast<std::size_t>(q.var) > x.size()) return false;
    const Rational& v = x[q.var - 1];
    if (q.rel == Inequality::Relation::Less ? !(v < q.bound) : !(v > q.bound)) return false;
  }
  return true;
}

DomainPredicate DomainPredicate::intersect(const DomainPredicate& other) const {
  std::vector<Inequality> all = ineqs_;
  for (const auto& q : other.ineqs_) {
    bool dup = std::any_of(all.begin(), all.end(), [&](const Inequality& r) {
      return r.var == q.var && r.rel == q.rel && r.bound == q.bound;
    });
    if (!dup) all.push_back(q);
  }
  return DomainPredicate(std::move(all));
}

std::string DomainPredicate::str() const {
  std::string s;
  for (const auto& q : ineqs_) {
    if (!s.empty()) s += " and ";
    s += "x" + std::to_string(q.var) + (q.rel == Inequality::Relation::Less ? " < " : " > ") +
         to_string(q.bound);
  }
  return s;
}

bool operator==(const DomainPredicate& a, const DomainPredicate& b) {
  if (a.ineqs_.size() != b.ineqs_.size()) return false;
  for (std::size_t i = 0; i < a.ineqs_.size(); ++i) {
    const auto& p = a.ineqs_[i];
    const auto& q = b.ineqs_[i];
    if (p.var != q.var || p.rel != q.rel || p.bound != q.bound) return false;
  }
  return true;
}

VectorField::VectorField(std::string name, std::vector<Expr> components, DomainPredicate domain)
    : name_(std::move(name)), components_(std::move(components)), domain_(std::move(domain)) {
  const int n = static_cast<int>(components_.size());
  for (const auto& c : components_)
    if (c.max_variable() > n) throw std::invalid_argument("component uses a variable beyond x" + std::to_string(n));
  for (const auto& q : domain_.inequalities())
    if (q.var > n) throw std::invalid_argument("domain uses a variable beyond x" + std::to_string(n));
}

bool VectorField::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const Expr& e) { return e.is_zero(); });
}

bool VectorField::is_polynomial() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Expr& e) { return e.is_polynomial(); });
}

bool VectorField::is_admissible() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Expr& e) { return e.is_admissible(); });
}

int VectorField::degree() const {
  int d = -1;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

VectorField VectorField::renamed(std::string name) const {
  VectorField out = *this;
  out.name_ = std::move(name);
  return out;
}

VectorField VectorField::scaled(const Rational& c) const {
  VectorField out = *this;
  for (auto& e : out.components_) e = e.scaled(c);
  return out;
}

VectorField VectorField::times(const Expr& f) const {
  VectorField out = *this;
  for (auto& e : out.components_) e = f * e;
  return out;
}

std::string VectorField::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) s += ", ";
    s += components_[i].str();
  }
  return s + ")";
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  std::vector<Expr> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return VectorField(a.name() + "+" + b.name(), std::move(c), a.domain().intersect(b.domain()));
}

VectorField operator-(const VectorField& a, const VectorField& b) { return a + b.scaled(-1); }

VectorField coordinate_field(std::size_t n, int i, std::string name) {
  std::vector<Expr> c(n);
  c[static_cast<std::size_t>(i - 1)] = Expr::constant(1);
  if (name.empty()) name = "d" + std::to_string(i);
  return VectorField(std::move(name), std::move(c));
}

FieldValue evaluate(const VectorField& X, const Point& p) {
  if (p.dim() != X.dim()) throw std::invalid_argument("point arity differs from field dimension");
  FieldValue out;
  out.approx.resize(static_cast<Eigen::Index>(X.dim()));
  RationalVector exact;
  bool all_exact = p.is_exact();
  for (std::size_t i = 0; i < X.dim(); ++i) {
    Scalar s = evaluate(X[i], p);
    out.approx(static_cast<Eigen::Index>(i)) = s.value;
    if (s.exact) exact.push_back(*s.exact);
    else all_exact = false;
  }
  if (all_exact) out.exact = std::move(exact);
  return out;
}

Eigen::VectorXd evaluate_numeric(const VectorField& X, std::span<const double> x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(X.dim()));
  for (std::size_t i = 0; i < X.dim(); ++i) v(static_cast<Eigen::Index>(i)) = eval(X[i], x);
  return v;
}

Expr lie_derivative(const VectorField& X, const Expr& f) {
  Expr out;
  for (std::size_t j = 0; j < X.dim(); ++j) {
    if (X[j].is_zero()) continue;
    out = out + X[j] * diff(f, static_cast<int>(j + 1));
  }
  return out;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  if (X.dim() != Y.dim()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  if (!X.is_admissible() || !Y.is_admissible())
    throw NonSmooth("lie_bracket: division node that does not cancel to a smooth form");
  std::vector<Expr> c(X.dim());
  for (std::size_t i = 0; i < X.dim(); ++i) c[i] = lie_derivative(X, Y[i]) - lie_derivative(Y, X[i]);
  return VectorField("[" + X.name() + "," + Y.name() + "]", std::move(c),
                     X.domain().intersect(Y.domain()));
}

std::optional<Rational> scalar_ratio(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim() || a.is_zero() || b.is_zero()) return std::nullopt;
  std::optional<Rational> ratio;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i].is_zero() != b[i].is_zero()) return std::nullopt;
    if (a[i].is_zero()) continue;
    if (a[i].terms().size() != b[i].terms().size()) return std::nullopt;
    if (!ratio) ratio = a[i].terms().front().coef / b[i].terms().front().coef;
    if (!(a[i] == b[i].scaled(*ratio))) return std::nullopt;
  }
  return ratio;
}

} // namespace vfkit
