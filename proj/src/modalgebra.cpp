#include "vfkit/modalgebra.hpp"

#include "vfkit/errors.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace vfkit {

namespace {

using Exponents = std::vector<int>;

// All exponent vectors in n variables of total degree <= d.
std::vector<Exponents> monomials_up_to(int n, int d) {
  std::vector<Exponents> out;
  Exponents cur(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[static_cast<std::size_t>(var)] = e;
      self(self, var + 1, left - e);
    }
    cur[static_cast<std::size_t>(var)] = 0;
  };
  rec(rec, 0, d);
  return out;
}

Exponents dense(const Monomial& m, int n) {
  Exponents e(static_cast<std::size_t>(n), 0);
  for (const auto& [v, k] : m) e[static_cast<std::size_t>(v - 1)] = k;
  return e;
}

Expr monomial_expr(const Exponents& e) {
  Term t;
  t.coef = 1;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) t.mono.emplace_back(static_cast<int>(i + 1), e[i]);
  return Expr::from_terms({t});
}

using SparseRow = std::vector<std::pair<int, Rational>>;

struct Equation {
  SparseRow row;
  std::vector<Rational> rhs;
};

// r -= c * p, rows sorted by column.
void axpy(Equation& r, const Rational& c, const Equation& p) {
  SparseRow out;
  out.reserve(r.row.size() + p.row.size());
  std::size_t i = 0, j = 0;
  while (i < r.row.size() || j < p.row.size()) {
    if (j == p.row.size() || (i < r.row.size() && r.row[i].first < p.row[j].first)) {
      out.push_back(std::move(r.row[i++]));
    } else if (i == r.row.size() || p.row[j].first < r.row[i].first) {
      out.emplace_back(p.row[j].first, -c * p.row[j].second);
      ++j;
    } else {
      Rational v = r.row[i].second - c * p.row[j].second;
      if (v != 0) out.emplace_back(r.row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  r.row = std::move(out);
  for (std::size_t k = 0; k < r.rhs.size(); ++k)
    if (p.rhs[k] != 0) r.rhs[k] -= c * p.rhs[k];
}

// Exact sparse elimination shared by several right-hand sides. Returns one
// solution per right-hand side (free variables set to 0), or nullopt where
// the system is inconsistent.
std::vector<std::optional<std::vector<Rational>>> solve(std::vector<Equation> eqs, int unknowns,
                                                        std::size_t nrhs) {
  std::map<int, Equation> pivots;
  std::vector<bool> consistent(nrhs, true);
  for (auto& e : eqs) {
    for (;;) {
      if (e.row.empty()) {
        for (std::size_t k = 0; k < nrhs; ++k)
          if (e.rhs[k] != 0) consistent[k] = false;
        break;
      }
      const int lead = e.row.front().first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) {
        Rational inv = 1 / e.row.front().second;
        for (auto& [c, v] : e.row) v *= inv;
        for (auto& v : e.rhs) v *= inv;
        pivots.emplace(lead, std::move(e));
        break;
      }
      Rational c = e.row.front().second;
      axpy(e, c, it->second);
    }
  }
  std::vector<std::optional<std::vector<Rational>>> out(nrhs);
  for (std::size_t k = 0; k < nrhs; ++k) {
    if (!consistent[k]) continue;
    std::vector<Rational> x(static_cast<std::size_t>(unknowns));
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
      Rational v = it->second.rhs[k];
      for (std::size_t j = 1; j < it->second.row.size(); ++j)
        v -= it->second.row[j].second * x[static_cast<std::size_t>(it->second.row[j].first)];
      x[static_cast<std::size_t>(it->first)] = v;
    }
    out[k] = std::move(x);
  }
  return out;
}

using Components = std::vector<Expr>;

std::vector<MembershipCertificate> solve_membership(const std::vector<Components>& targets,
                                                    const std::vector<Components>& gens, int degree,
                                                    int n, int cap) {
  if (degree < 0) throw std::invalid_argument("multiplier degree must be nonnegative");
  if (degree > cap)
    throw std::out_of_range("multiplier degree " + std::to_string(degree) + " exceeds cap " +
                            std::to_string(cap));
  for (const auto& t : targets)
    for (const auto& e : t)
      if (!e.is_polynomial()) throw NotPolynomial("membership target is not polynomial");
  for (const auto& g : gens)
    for (const auto& e : g)
      if (!e.is_polynomial()) throw NotPolynomial("membership generator is not polynomial");

  const std::size_t ncomp = targets.empty() ? 0 : targets.front().size();
  const std::size_t nrhs = targets.size();
  const auto basis = monomials_up_to(n, degree);
  const int per_gen = static_cast<int>(basis.size());
  const int unknowns = per_gen * static_cast<int>(gens.size());

  // Row key: (component, exponent vector of the product monomial).
  using Key = std::pair<std::size_t, Exponents>;
  std::map<Key, std::map<int, Rational>> rows;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    for (std::size_t comp = 0; comp < ncomp; ++comp) {
      for (const auto& t : gens[gi][comp].terms()) {
        const Exponents ge = dense(t.mono, n);
        for (int a = 0; a < per_gen; ++a) {
          Exponents key = basis[static_cast<std::size_t>(a)];
          for (int v = 0; v < n; ++v) key[static_cast<std::size_t>(v)] += ge[static_cast<std::size_t>(v)];
          rows[{comp, key}][static_cast<int>(gi) * per_gen + a] += t.coef;
        }
      }
    }
  }
  std::map<Key, std::vector<Rational>> rhs;
  for (std::size_t k = 0; k < nrhs; ++k)
    for (std::size_t comp = 0; comp < ncomp; ++comp)
      for (const auto& t : targets[k][comp].terms()) {
        auto& slot = rhs[{comp, dense(t.mono, n)}];
        slot.resize(nrhs);
        slot[k] += t.coef;
      }

  std::vector<MembershipCertificate> certs(nrhs);
  for (auto& c : certs) c.degree = degree;
  std::vector<bool> reachable(nrhs, true);
  std::vector<Equation> eqs;
  for (auto& [key, cols] : rows) {
    Equation e;
    for (auto& [c, v] : cols)
      if (v != 0) e.row.emplace_back(c, v);
    e.rhs.resize(nrhs);
    if (auto it = rhs.find(key); it != rhs.end()) {
      e.rhs = std::move(it->second);
      rhs.erase(it);
    }
    eqs.push_back(std::move(e));
  }
  // A target monomial no product can reach makes that system inconsistent.
  for (const auto& [key, v] : rhs)
    for (std::size_t k = 0; k < nrhs; ++k)
      if (v[k] != 0) reachable[k] = false;

  // Sparse rows first keeps fill-in down.
  std::stable_sort(eqs.begin(), eqs.end(),
                   [](const Equation& a, const Equation& b) { return a.row.size() < b.row.size(); });
  auto sols = solve(std::move(eqs), unknowns, nrhs);
  for (std::size_t k = 0; k < nrhs; ++k) {
    if (!reachable[k] || !sols[k]) continue;
    auto& cert = certs[k];
    const auto& sol = *sols[k];
    cert.member = true;
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      std::vector<Term> terms;
      for (int a = 0; a < per_gen; ++a) {
        const Rational& c = sol[gi * static_cast<std::size_t>(per_gen) + static_cast<std::size_t>(a)];
        if (c == 0) continue;
        Term t = monomial_expr(basis[static_cast<std::size_t>(a)]).terms().front();
        t.coef = c;
        terms.push_back(std::move(t));
      }
      cert.multipliers.push_back(Expr::from_terms(std::move(terms)));
    }
    // Re-verify by expansion.
    for (std::size_t comp = 0; comp < ncomp; ++comp) {
      Expr sum;
      for (std::size_t gi = 0; gi < gens.size(); ++gi) sum = sum + cert.multipliers[gi] * gens[gi][comp];
      if (!(sum == targets[k][comp])) throw std::logic_error("membership certificate failed verification");
    }
  }
  return certs;
}

std::vector<Components> components_of(const std::vector<VectorField>& fields, std::size_t n) {
  std::vector<Components> out;
  for (const auto& f : fields) {
    if (f.dim() != n) throw std::invalid_argument("membership fields have different dimensions");
    out.push_back(f.components());
  }
  return out;
}

} // namespace

std::string MembershipCertificate::verdict() const {
  if (member) return "member";
  return "not-member-up-to-degree(" + std::to_string(degree) + ")";
}

MembershipCertificate member_bounded(const MembershipQuery& q, int cap) {
  const std::size_t n = q.target.dim();
  return solve_membership({q.target.components()}, components_of(q.generators, n), q.degree,
                          static_cast<int>(n), cap)
      .front();
}

std::vector<MembershipCertificate> member_bounded_all(const std::vector<VectorField>& targets,
                                                      const std::vector<VectorField>& generators,
                                                      int degree, int cap) {
  if (targets.empty()) return {};
  const std::size_t n = targets.front().dim();
  return solve_membership(components_of(targets, n), components_of(generators, n), degree,
                          static_cast<int>(n), cap);
}

MembershipCertificate ideal_member_bounded(const Expr& target, const std::vector<Expr>& generators,
                                           int degree, int n, int cap) {
  if (n == 0) {
    n = std::max(1, target.max_variable());
    for (const auto& g : generators) n = std::max(n, g.max_variable());
  }
  std::vector<Components> gens;
  for (const auto& g : generators) gens.push_back({g});
  return solve_membership({{target}}, gens, degree, n, cap).front();
}

bool module_contained_bounded(const std::vector<VectorField>& a, const std::vector<VectorField>& b,
                              int degree, int cap) {
  std::vector<VectorField> nonzero;
  for (const auto& x : a)
    if (!x.is_zero()) nonzero.push_back(x);
  for (const auto& c : member_bounded_all(nonzero, b, degree, cap))
    if (!c.member) return false;
  return true;
}

} // namespace vfkit
