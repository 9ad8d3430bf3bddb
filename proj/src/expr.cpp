#include "vfkit/expr.hpp"

#include "vfkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vfkit {

namespace {

int total_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      int e = a[i].second + b[j].second;
      if (e != 0) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial mono_inverse(Monomial m) {
  for (auto& [v, e] : m) e = -e;
  return m;
}

int mono_exponent(const Monomial& m, int var) {
  for (const auto& [v, e] : m)
    if (v == var) return e;
  return 0;
}

std::strong_ordering compare_atoms(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind <=> b.kind;
  return *a.arg <=> *b.arg;
}

std::strong_ordering compare_factor_lists(const std::vector<Factor>& a,
                                          const std::vector<Factor>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare_atoms(a[i].atom, b[i].atom); c != 0) return c;
    if (auto c = a[i].power <=> b[i].power; c != 0) return c;
  }
  return a.size() <=> b.size();
}

std::strong_ordering compare_rationals(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool is_flat(AtomKind k) { return k == AtomKind::Bump || k == AtomKind::Bumpp; }

// Merges duplicate atoms and folds all exp factors into one. Returns false
// when the term is identically zero (it never is here, but a merged exp of
// argument 0 simply disappears).
void normalize_factors(Term& t) {
  Expr exp_arg;
  bool has_exp = false;
  std::vector<Factor> rest;
  for (auto& f : t.factors) {
    if (f.atom.kind == AtomKind::Exp) {
      exp_arg = exp_arg + f.atom.arg->scaled(make_rational(f.power));
      has_exp = true;
    } else {
      rest.push_back(std::move(f));
    }
  }
  std::sort(rest.begin(), rest.end(), [](const Factor& a, const Factor& b) {
    return compare_atoms(a.atom, b.atom) < 0;
  });
  std::vector<Factor> merged;
  for (auto& f : rest) {
    if (!merged.empty() && compare_atoms(merged.back().atom, f.atom) == 0) {
      merged.back().power += f.power;
    } else {
      merged.push_back(std::move(f));
    }
  }
  if (has_exp && !exp_arg.is_zero()) {
    merged.push_back(
        Factor{Atom{AtomKind::Exp, std::make_shared<const Expr>(std::move(exp_arg))}, 1});
    std::sort(merged.begin(), merged.end(), [](const Factor& a, const Factor& b) {
      return compare_atoms(a.atom, b.atom) < 0;
    });
  }
  t.factors = std::move(merged);
}

Term term_mul(const Term& a, const Term& b) {
  Term t;
  t.coef = a.coef * b.coef;
  t.mono = mono_mul(a.mono, b.mono);
  t.factors = a.factors;
  t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
  return t;
}

Expr single(Term t) { return Expr::from_terms({std::move(t)}); }

Expr atom_expr(AtomKind kind, Expr arg, int power = 1) {
  Term t;
  t.coef = 1;
  t.factors.push_back(Factor{Atom{kind, std::make_shared<const Expr>(std::move(arg))}, power});
  return single(std::move(t));
}

// Leading coefficient in the canonical (ascending) order is the last term's.
const Rational& leading_coef(const Expr& e) { return e.terms().back().coef; }

// 1/t for a single term. Recip factors turn back into polynomial powers.
Expr invert_term(const Term& t) {
  if (t.coef == 0) throw DivisionByZero("division by zero");
  Term base;
  base.coef = 1 / t.coef;
  base.mono = mono_inverse(t.mono);
  Expr out = single(base);
  for (const auto& f : t.factors) {
    switch (f.atom.kind) {
    case AtomKind::Exp:
      out = out * Expr::exp(-*f.atom.arg).pow(f.power);
      break;
    case AtomKind::Recip:
      out = out * f.atom.arg->pow(f.power);
      break;
    case AtomKind::Bump:
    case AtomKind::Bumpp:
      throw std::domain_error("cannot divide by a flat function");
    }
  }
  return out;
}

// Recip atom normalized so the argument has leading coefficient 1.
Expr reciprocal_power(const Expr& u, int k) {
  Rational lc = leading_coef(u);
  Expr normalized = u.scaled(1 / lc);
  Rational scale = 1;
  for (int i = 0; i < k; ++i) scale /= lc;
  return atom_expr(AtomKind::Recip, normalized, k).scaled(scale);
}

// Exact multivariate division with a single divisor under graded-lex order.
std::optional<Expr> exact_quotient(const Expr& a, const Expr& b) {
  Expr r = a;
  std::vector<Term> q;
  const Term& lb = b.terms().back();
  while (!r.is_zero()) {
    const Term& lr = r.terms().back();
    Term t;
    t.coef = lr.coef / lb.coef;
    t.mono = mono_mul(lr.mono, mono_inverse(lb.mono));
    for (const auto& [v, e] : t.mono)
      if (e < 0) return std::nullopt;
    q.push_back(t);
    r = r - single(t) * b;
  }
  return Expr::from_terms(std::move(q));
}

std::string mono_str(const Monomial& m) {
  std::string s;
  for (const auto& [v, e] : m) {
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(v);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::string factor_str(const Factor& f) {
  std::string s;
  switch (f.atom.kind) {
  case AtomKind::Exp:
    s = "exp(" + f.atom.arg->str() + ")";
    break;
  case AtomKind::Bump:
    s = "bump(" + f.atom.arg->str() + ")";
    break;
  case AtomKind::Bumpp:
    s = "bumpp(" + f.atom.arg->str() + ")";
    break;
  case AtomKind::Recip:
    return "(" + f.atom.arg->str() + ")^-" + std::to_string(f.power);
  }
  if (f.power != 1) s += "^" + std::to_string(f.power);
  return s;
}

std::string term_str(const Term& t) {
  std::string body = mono_str(t.mono);
  for (const auto& f : t.factors) {
    if (!body.empty()) body += "*";
    body += factor_str(f);
  }
  if (body.empty()) return to_string(t.coef);
  if (t.coef == 1) return body;
  if (t.coef == -1) return "-" + body;
  return to_string(t.coef) + "*" + body;
}

} // namespace

std::strong_ordering compare_monomials(const Monomial& a, const Monomial& b) {
  if (auto c = total_degree(a) <=> total_degree(b); c != 0) return c;
  // Lex on dense exponent vectors, x1 most significant.
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int va = i < a.size() ? a[i].first : INT32_MAX;
    int vb = j < b.size() ? b[j].first : INT32_MAX;
    int v = std::min(va, vb);
    int ea = va == v ? a[i].second : 0;
    int eb = vb == v ? b[j].second : 0;
    if (ea != eb) return ea <=> eb;
    if (va == v) ++i;
    if (vb == v) ++j;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering compare_terms_by_key(const Term& a, const Term& b) {
  if (auto c = compare_monomials(a.mono, b.mono); c != 0) return c;
  return compare_factor_lists(a.factors, b.factors);
}

Expr Expr::constant(const Rational& c) {
  Term t;
  t.coef = c;
  t.coef.canonicalize();
  return single(std::move(t));
}

Expr Expr::variable(int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  Term t;
  t.coef = 1;
  t.mono = {{index, 1}};
  return single(std::move(t));
}

Expr Expr::exp(const Expr& u) {
  if (u.is_zero()) return constant(1);
  return atom_expr(AtomKind::Exp, u);
}

Expr Expr::bump(const Expr& u) {
  if (u.is_zero()) return Expr{};
  // bump is even: fix the sign of the argument.
  if (sgn(leading_coef(u)) < 0) return atom_expr(AtomKind::Bump, -u);
  return atom_expr(AtomKind::Bump, u);
}

Expr Expr::bumpp(const Expr& u) {
  if (auto c = u.as_constant(); c && sgn(*c) <= 0) return Expr{};
  return atom_expr(AtomKind::Bumpp, u);
}

Expr Expr::from_terms(std::vector<Term> terms) {
  for (auto& t : terms) {
    t.coef.canonicalize();
    if (!t.factors.empty()) normalize_factors(t);
  }
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare_terms_by_key(a, b) < 0; });
  Expr out;
  for (auto& t : terms) {
    if (t.coef == 0) continue;
    if (!out.terms_.empty() && compare_terms_by_key(out.terms_.back(), t) == 0) {
      out.terms_.back().coef += t.coef;
      if (out.terms_.back().coef == 0) out.terms_.pop_back();
    } else {
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

std::optional<Rational> Expr::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].mono.empty() && terms_[0].factors.empty())
    return terms_[0].coef;
  return std::nullopt;
}

bool Expr::is_polynomial() const {
  for (const auto& t : terms_) {
    if (!t.factors.empty()) return false;
    for (const auto& [v, e] : t.mono)
      if (e < 0) return false;
  }
  return true;
}

bool Expr::has_flat() const {
  for (const auto& t : terms_)
    for (const auto& f : t.factors)
      if (is_flat(f.atom.kind) || f.atom.arg->has_flat()) return true;
  return false;
}

bool Expr::is_admissible() const {
  for (const auto& t : terms_) {
    bool singular = false, flat = false;
    for (const auto& [v, e] : t.mono)
      if (e < 0) singular = true;
    for (const auto& f : t.factors) {
      if (f.atom.kind == AtomKind::Recip) singular = true;
      if (is_flat(f.atom.kind)) flat = true;
      if (!f.atom.arg->is_admissible()) return false;
    }
    if (singular && !flat) return false;
  }
  return true;
}

int Expr::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, total_degree(t.mono));
  return d;
}

int Expr::max_variable() const {
  int m = 0;
  for (const auto& t : terms_) {
    for (const auto& [v, e] : t.mono) m = std::max(m, v);
    for (const auto& f : t.factors) m = std::max(m, f.atom.arg->max_variable());
  }
  return m;
}

Expr Expr::scaled(const Rational& c) const {
  if (c == 0) return Expr{};
  Expr out = *this;
  for (auto& t : out.terms_) t.coef *= c;
  return out;
}

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Term> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return Expr::from_terms(std::move(terms));
}

Expr operator-(const Expr& a) { return a.scaled(-1); }

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) terms.push_back(term_mul(s, t));
  return Expr::from_terms(std::move(terms));
}

Expr Expr::pow(int k) const {
  if (k == 0) return constant(1);
  if (k < 0) {
    if (is_zero()) throw DivisionByZero("zero raised to a negative power");
    if (terms_.size() == 1) return invert_term(terms_[0]).pow(-k);
    return reciprocal_power(*this, -k);
  }
  Expr result = constant(1);
  Expr base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw DivisionByZero("division by the zero expression");
  if (b.terms_.size() == 1) return a * invert_term(b.terms_[0]);
  if (a.is_polynomial() && b.is_polynomial()) {
    if (auto q = exact_quotient(a, b)) return *q;
  }
  return a * b.pow(-1);
}

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare_terms_by_key(a.terms_[i], b.terms_[i]); c != 0) return c;
    if (auto c = compare_rationals(a.terms_[i].coef, b.terms_[i].coef); c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

std::string Expr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  // Highest-order terms first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::string t = term_str(*it);
    if (s.empty()) {
      s = t;
    } else if (t.front() == '-') {
      s += " - " + t.substr(1);
    } else {
      s += " + " + t;
    }
  }
  return s;
}

Expr diff(const Expr& e, int var) {
  Expr result;
  for (const auto& t : e.terms()) {
    int a = mono_exponent(t.mono, var);
    if (a != 0) {
      Term d = t;
      d.coef *= a;
      d.mono = mono_mul(t.mono, Monomial{{var, -1}});
      result = result + Expr::from_terms({d});
    }
    for (std::size_t j = 0; j < t.factors.size(); ++j) {
      const Factor& f = t.factors[j];
      Expr du = diff(*f.atom.arg, var);
      if (du.is_zero()) continue;
      Term rest = t;
      Expr chain;
      switch (f.atom.kind) {
      case AtomKind::Exp:
        // d e^{pu} = p u' e^{pu}; the term keeps its factor.
        chain = du.scaled(make_rational(f.power));
        break;
      case AtomKind::Bump:
      case AtomKind::Bumpp:
        // d bump(u)^p = 2 p u' u^{-3} bump(u)^p
        chain = du.scaled(make_rational(2L * f.power)) * f.atom.arg->pow(-3);
        break;
      case AtomKind::Recip:
        // d u^{-p} = -p u' u^{-p-1}
        chain = du.scaled(make_rational(-f.power));
        rest.factors[j].power += 1;
        break;
      }
      result = result + Expr::from_terms({rest}) * chain;
    }
  }
  return result;
}

namespace {

struct LogValue {
  bool zero = false;
  bool pole = false;
  int sign = 1;
  double log_abs = 0.0;
};

double eval_impl(const Expr& e, std::span<const double> x);

void accumulate_power(LogValue& lv, double u, int power) {
  if (u == 0.0) {
    if (power > 0) lv.zero = true;
    else lv.pole = true;
    return;
  }
  lv.log_abs += power * std::log(std::fabs(u));
  if (u < 0 && (power % 2 != 0)) lv.sign = -lv.sign;
}

double eval_term(const Term& t, std::span<const double> x) {
  bool needs_log = false;
  for (const auto& f : t.factors)
    if (f.atom.kind != AtomKind::Recip) needs_log = true;

  if (!needs_log) {
    double v = t.coef.get_d();
    bool pole = false;
    for (const auto& [var, e] : t.mono) {
      double xv = x[var - 1];
      if (xv == 0.0 && e < 0) pole = true;
      else v *= std::pow(xv, e);
    }
    for (const auto& f : t.factors) {
      double u = eval_impl(*f.atom.arg, x);
      if (u == 0.0) pole = true;
      else v /= std::pow(u, f.power);
    }
    if (pole) throw DivisionByZero("pole encountered during evaluation");
    return v;
  }

  LogValue lv;
  lv.sign = sgn(t.coef);
  lv.log_abs = std::log(std::fabs(t.coef.get_d()));
  for (const auto& [var, e] : t.mono) accumulate_power(lv, x[var - 1], e);
  for (const auto& f : t.factors) {
    double u = eval_impl(*f.atom.arg, x);
    switch (f.atom.kind) {
    case AtomKind::Exp:
      lv.log_abs += f.power * u;
      break;
    case AtomKind::Bump:
      if (std::fabs(u) < kFlatZero) lv.zero = true;
      else lv.log_abs -= f.power / (u * u);
      break;
    case AtomKind::Bumpp:
      if (u <= 0.0 || std::fabs(u) < kFlatZero) lv.zero = true;
      else lv.log_abs -= f.power / (u * u);
      break;
    case AtomKind::Recip:
      accumulate_power(lv, u, -f.power);
      break;
    }
  }
  if (lv.zero) return 0.0;
  if (lv.pole) throw DivisionByZero("pole encountered during evaluation");
  return lv.sign * std::exp(lv.log_abs);
}

double eval_impl(const Expr& e, std::span<const double> x) {
  double s = 0.0;
  for (const auto& t : e.terms()) s += eval_term(t, x);
  return s;
}

} // namespace

double eval(const Expr& e, std::span<const double> x) {
  if (static_cast<std::size_t>(e.max_variable()) > x.size())
    throw std::invalid_argument("point has fewer coordinates than the expression uses");
  return eval_impl(e, x);
}

std::optional<Rational> eval_exact(const Expr& e, std::span<const Rational> x) {
  if (static_cast<std::size_t>(e.max_variable()) > x.size())
    throw std::invalid_argument("point has fewer coordinates than the expression uses");
  Rational sum = 0;
  bool exact = true;
  for (const auto& t : e.terms()) {
    bool killed = false;
    bool live = false; // a factor whose value is irrational
    for (const auto& f : t.factors) {
      if (f.atom.kind == AtomKind::Recip) continue;
      auto u = eval_exact(*f.atom.arg, x);
      if (f.atom.kind == AtomKind::Bump && u && *u == 0) killed = true;
      else if (f.atom.kind == AtomKind::Bumpp && u && sgn(*u) <= 0) killed = true;
      else if (f.atom.kind == AtomKind::Exp && u && *u == 0) continue;
      else live = true;
    }
    if (killed) continue;
    Rational v = t.coef;
    bool pole = false;
    for (const auto& [var, ex] : t.mono) {
      const Rational& xv = x[var - 1];
      if (xv == 0) {
        if (ex > 0) v = 0;
        else pole = true;
        continue;
      }
      Rational p = 1;
      for (int i = 0; i < std::abs(ex); ++i) p *= xv;
      if (ex > 0) v *= p;
      else v /= p;
    }
    for (const auto& f : t.factors) {
      if (f.atom.kind != AtomKind::Recip) continue;
      auto u = eval_exact(*f.atom.arg, x);
      if (!u) {
        live = true;
        continue;
      }
      if (*u == 0) {
        pole = true;
        continue;
      }
      for (int i = 0; i < f.power; ++i) v /= *u;
    }
    if (pole) throw DivisionByZero("pole encountered during evaluation");
    if (live) {
      if (v != 0) exact = false;
      continue;
    }
    sum += v;
  }
  if (!exact) return std::nullopt;
  return sum;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& str) {
    auto b = str.find_first_not_of(" \t");
    auto e = str.find_last_not_of(" \t");
    str = b == std::string::npos ? "" : str.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty number");
  auto digits_only = [](std::string_view d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  bool neg = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  Rational q;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) throw std::invalid_argument("bad rational: " + s);
    mpz_class d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator: " + s);
    q = Rational(mpz_class(num, 10), d);
  } else {
    std::string mant = body;
    long exp10 = 0;
    if (auto epos = body.find_first_of("eE"); epos != std::string::npos) {
      mant = body.substr(0, epos);
      std::string es = body.substr(epos + 1);
      std::size_t used = 0;
      try {
        exp10 = std::stol(es, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent: " + s);
      }
      if (used != es.size()) throw std::invalid_argument("bad exponent: " + s);
    }
    std::string intpart = mant, frac;
    if (auto dot = mant.find('.'); dot != std::string::npos) {
      intpart = mant.substr(0, dot);
      frac = mant.substr(dot + 1);
    }
    if (intpart.empty() && frac.empty()) throw std::invalid_argument("bad number: " + s);
    if ((!intpart.empty() && !digits_only(intpart)) || (!frac.empty() && !digits_only(frac)))
      throw std::invalid_argument("bad number: " + s);
    mpz_class num(intpart.empty() ? std::string("0") : intpart + frac, 10);
    if (intpart.empty()) num = mpz_class(frac, 10);
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    for (long i = 0; i < std::labs(exp10); ++i) {
      if (exp10 > 0) num *= 10;
      else den *= 10;
    }
    q = Rational(num, den);
  }
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

} // namespace vfkit
