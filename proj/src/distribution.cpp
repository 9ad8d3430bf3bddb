#include "vfkit/distribution.hpp"

#include "vfkit/errors.hpp"
#include "vfkit/flow.hpp"
#include "vfkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace vfkit {

Distribution::Distribution(std::vector<VectorField> generators) : generators_(std::move(generators)) {
  if (generators_.empty()) throw std::invalid_argument("distribution needs at least one generator");
  dim_ = generators_.front().dim();
  for (const auto& g : generators_)
    if (g.dim() != dim_) throw std::invalid_argument("generators have different dimensions");
}

bool Distribution::is_polynomial() const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [](const VectorField& g) { return g.is_polynomial(); });
}

std::string to_string(RankMethod m) {
  return m == RankMethod::ExactRational ? "exact-rational" : "svd-tolerance";
}

int value_rank(const std::vector<FieldValue>& values, RankMethod* method,
               std::vector<std::size_t>* witnesses) {
  const bool exact = std::all_of(values.begin(), values.end(),
                                 [](const FieldValue& v) { return v.exact.has_value(); });
  if (method) *method = exact ? RankMethod::ExactRational : RankMethod::SvdTolerance;
  if (exact) {
    std::vector<RationalVector> vs;
    for (const auto& v : values) vs.push_back(*v.exact);
    auto piv = exact_pivot_indices(vs);
    if (witnesses) *witnesses = piv;
    return static_cast<int>(piv.size());
  }
  std::vector<Eigen::VectorXd> vs;
  for (const auto& v : values) vs.push_back(v.approx);
  if (witnesses) *witnesses = numeric_pivot_indices(vs, kRankThreshold, true);
  return numeric_rank(vs, kRankThreshold, true);
}

namespace {

// Values of the generators defined at p, with their indices.
std::vector<FieldValue> fibre_values(const Distribution& d, const Point& p,
                                     std::vector<std::size_t>* defined,
                                     std::vector<std::size_t>* excluded) {
  if (p.dim() != d.dim()) throw std::invalid_argument("point arity differs from distribution dimension");
  std::vector<FieldValue> out;
  for (std::size_t i = 0; i < d.generators().size(); ++i) {
    const auto& g = d.generators()[i];
    if (!g.domain().contains(p)) {
      if (excluded) excluded->push_back(i);
      continue;
    }
    out.push_back(evaluate(g, p));
    if (defined) defined->push_back(i);
  }
  return out;
}

} // namespace

RankReport rank_at(const Distribution& d, const Point& p) {
  RankReport r;
  r.point = p;
  std::vector<std::size_t> defined;
  auto values = fibre_values(d, p, &defined, &r.excluded);
  if (values.empty()) throw std::domain_error("no generator is defined at " + p.str());
  std::vector<std::size_t> local;
  r.rank = value_rank(values, &r.method, &local);
  for (auto i : local) r.witnesses.push_back(defined[i]);
  return r;
}

std::vector<GridAxis> parse_grid(std::string_view spec, std::size_t n) {
  std::vector<GridAxis> axes;
  auto bad = [&](const std::string& why) {
    throw std::invalid_argument("grid spec '" + std::string(spec) + "': " + why);
  };
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = spec.substr(pos, end - pos);
    pos = end + 1;
    auto eq = item.find('=');
    if (eq == std::string_view::npos || item.size() < 2 || item[0] != 'x') bad("expected xI=lo:hi:step");
    GridAxis a;
    try {
      a.var = std::stoi(std::string(item.substr(1, eq - 1)));
    } catch (const std::exception&) {
      bad("bad variable name");
    }
    if (a.var < 1 || static_cast<std::size_t>(a.var) > n) bad("variable out of range");
    std::string_view range = item.substr(eq + 1);
    auto c1 = range.find(':');
    auto c2 = c1 == std::string_view::npos ? c1 : range.find(':', c1 + 1);
    if (c2 == std::string_view::npos) bad("expected lo:hi:step");
    try {
      a.lo = parse_rational(range.substr(0, c1));
      a.hi = parse_rational(range.substr(c1 + 1, c2 - c1 - 1));
      a.step = parse_rational(range.substr(c2 + 1));
    } catch (const std::invalid_argument&) {
      bad("malformed number");
    }
    if (a.step <= 0) bad("step must be positive");
    if (a.hi < a.lo) bad("empty range");
    if ((a.hi - a.lo) / a.step > 10000) bad("too many grid points");
    for (const auto& b : axes)
      if (b.var == a.var) bad("variable given twice");
    axes.push_back(a);
    if (end == spec.size()) break;
  }
  if (axes.size() != n) bad("every variable x1..x" + std::to_string(n) + " needs a range");
  std::sort(axes.begin(), axes.end(), [](const GridAxis& a, const GridAxis& b) { return a.var < b.var; });
  return axes;
}

std::vector<Point> grid_points(const std::vector<GridAxis>& axes) {
  std::vector<std::vector<Rational>> ticks;
  for (const auto& a : axes) {
    std::vector<Rational> t;
    for (Rational v = a.lo; v <= a.hi; v += a.step) t.push_back(v);
    ticks.push_back(std::move(t));
  }
  std::vector<Point> out;
  std::vector<std::size_t> idx(axes.size(), 0);
  if (axes.empty()) return out;
  for (;;) {
    std::vector<Rational> c;
    for (std::size_t i = 0; i < axes.size(); ++i) c.push_back(ticks[i][idx[i]]);
    out.push_back(Point::exact(std::move(c)));
    // Last axis varies fastest.
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < ticks[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

GridClassification classify_grid(const Distribution& d, const std::vector<GridAxis>& axes,
                                 std::uint64_t seed) {
  GridClassification out;
  out.points = grid_points(axes);
  const std::size_t n = axes.size();

  // Probe offsets: two radii (half a step and a small fraction of it) along
  // each axis in both directions, plus seeded random directions. The larger
  // radius keeps flat factors above floating underflow.
  std::vector<std::vector<Rational>> offsets;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> unit(-7, 7);
  for (const Rational& scale : {make_rational(1, 2), make_rational(1, 64)}) {
    for (std::size_t i = 0; i < n; ++i) {
      for (int sgn : {-1, 1}) {
        std::vector<Rational> o(n);
        o[i] = axes[i].step * scale * sgn;
        offsets.push_back(std::move(o));
      }
    }
    for (int k = 0; k < 4; ++k) {
      std::vector<Rational> o(n);
      for (std::size_t i = 0; i < n; ++i) o[i] = axes[i].step * scale * make_rational(unit(rng), 7);
      offsets.push_back(std::move(o));
    }
  }

  std::size_t regular = 0;
  for (const auto& p : out.points) {
    const int r = rank_at(d, p).rank;
    bool reg = true;
    for (const auto& o : offsets) {
      std::vector<Rational> q = p.rational();
      for (std::size_t i = 0; i < n; ++i) q[i] += o[i];
      Point qp = Point::exact(std::move(q));
      auto values = fibre_values(d, qp, nullptr, nullptr);
      if (values.empty()) continue;
      if (value_rank(values) != r) {
        reg = false;
        break;
      }
    }
    out.ranks.push_back(r);
    out.regular.push_back(reg);
    if (reg) ++regular;
  }
  out.regular_density =
      out.points.empty() ? 0.0 : static_cast<double>(regular) / static_cast<double>(out.points.size());
  return out;
}

Expr determinant(const std::vector<std::vector<Expr>>& m) {
  const std::size_t k = m.size();
  if (k == 0) return Expr::constant(1);
  if (k == 1) return m[0][0];
  if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr out;
  for (std::size_t j = 0; j < k; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Expr>> sub;
    for (std::size_t i = 1; i < k; ++i) {
      std::vector<Expr> row;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) row.push_back(m[i][c]);
      sub.push_back(std::move(row));
    }
    Expr t = m[0][j] * determinant(sub);
    out = (j % 2 == 0) ? out + t : out - t;
  }
  return out;
}

namespace {

void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

} // namespace

SingularLocus singular_locus_minors(const Distribution& d, std::uint64_t seed, std::size_t samples) {
  if (!d.is_polynomial()) throw NotPolynomial("singular locus needs polynomial generators");
  SingularLocus out;
  out.seed = seed;
  out.samples = samples;
  const auto points = random_rational_points(d.dim(), samples, seed);
  std::vector<int> ranks;
  for (const auto& p : points) {
    ranks.push_back(rank_at(d, p).rank);
    out.generic_rank = std::max(out.generic_rank, ranks.back());
  }
  const std::size_t m = static_cast<std::size_t>(out.generic_rank);
  if (m == 0) return out;

  std::vector<std::vector<std::size_t>> rows, cols;
  combinations(d.dim(), m, rows);
  combinations(d.generators().size(), m, cols);
  for (const auto& r : rows) {
    for (const auto& c : cols) {
      std::vector<std::vector<Expr>> sub(m, std::vector<Expr>(m));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) sub[i][j] = d.generators()[c[j]][r[i]];
      Expr det = determinant(sub);
      if (det.is_zero()) continue;
      const bool seen = std::any_of(out.minors.begin(), out.minors.end(),
                                    [&](const Expr& e) { return e == det || e == -det; });
      if (!seen) out.minors.push_back(std::move(det));
    }
  }

  for (std::size_t s = 0; s < points.size(); ++s) {
    bool all_zero = true;
    for (const auto& e : out.minors) {
      auto v = eval_exact(e, points[s].rational());
      if (v && *v != 0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero != (ranks[s] < out.generic_rank))
      throw std::logic_error("minor vanishing disagrees with rank at " + points[s].str());
  }
  return out;
}

AdaptedGenerators adapt_generators(const Distribution& d, const Point& p) {
  std::vector<std::size_t> defined;
  auto values = fibre_values(d, p, &defined, nullptr);
  if (values.size() != d.generators().size())
    throw std::domain_error("adapt_generators: some generator is undefined at " + p.str());
  AdaptedGenerators out;
  std::vector<std::size_t> piv;
  out.rank = value_rank(values, &out.method, &piv);
  const auto& gens = d.generators();
  for (auto i : piv) out.generators.push_back(gens[i]);

  std::vector<RationalVector> basis_exact;
  Eigen::MatrixXd basis_num(static_cast<Eigen::Index>(d.dim()), static_cast<Eigen::Index>(piv.size()));
  for (std::size_t j = 0; j < piv.size(); ++j) {
    if (out.method == RankMethod::ExactRational) basis_exact.push_back(*values[piv[j]].exact);
    basis_num.col(static_cast<Eigen::Index>(j)) = values[piv[j]].approx;
  }

  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (std::find(piv.begin(), piv.end(), i) != piv.end()) continue;
    std::vector<Rational> coef;
    if (out.method == RankMethod::ExactRational) {
      auto c = exact_solve_in_span(basis_exact, *values[i].exact);
      if (!c) throw std::logic_error("adapt_generators: value outside the fibre basis");
      coef = std::move(*c);
    } else if (!piv.empty()) {
      Eigen::VectorXd c = basis_num.colPivHouseholderQr().solve(values[i].approx);
      for (Eigen::Index j = 0; j < c.size(); ++j) coef.emplace_back(c(j));
    }
    VectorField g = gens[i];
    for (std::size_t j = 0; j < coef.size(); ++j)
      if (coef[j] != 0) g = g - gens[piv[j]].scaled(coef[j]);
    g = g.renamed(gens[i].name() + "'");

    auto v = evaluate(g, p);
    if (v.exact) {
      for (const auto& x : *v.exact)
        if (x != 0) throw std::logic_error("adapted generator does not vanish at " + p.str());
    } else if (v.approx.norm() > 1e-9 * std::max(1.0, values[i].approx.norm())) {
      throw std::logic_error("adapted generator does not vanish at " + p.str());
    }
    out.generators.push_back(std::move(g));
  }
  return out;
}

InvarianceReport invariance_check(const Distribution& d, const VectorField& x,
                                  const std::vector<Point>& samples,
                                  const std::vector<double>& times) {
  if (x.dim() != d.dim()) throw std::invalid_argument("field dimension differs from distribution");
  InvarianceReport out;
  const auto& gens = d.generators();
  std::vector<VectorField> brackets;
  for (const auto& g : gens) brackets.push_back(lie_bracket(x, g));

  std::vector<VectorField> family{x};
  family.insert(family.end(), gens.begin(), gens.end());
  FlowEngine engine(family);

  for (const auto& p : samples) {
    if (!x.domain().contains(p)) continue;
    auto fibre = fibre_values(d, p, nullptr, nullptr);
    if (fibre.empty()) continue;
    const int r = value_rank(fibre);

    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!brackets[i].domain().contains(p)) continue;
      auto with = fibre;
      with.push_back(evaluate(brackets[i], p));
      if (value_rank(with) != r) {
        out.bracket_invariant = false;
        out.witnesses.push_back({"bracket", i, p, std::numeric_limits<double>::quiet_NaN(), 1.0});
      }
    }

    std::vector<Eigen::VectorXd> fv;
    for (const auto& v : fibre) fv.push_back(v.approx);
    const Eigen::MatrixXd basis = numeric_span_basis(fv, kRankThreshold, true);
    for (double t : times) {
      FlowWord w{{{0, t}}};
      for (std::size_t i = 0; i < gens.size(); ++i) {
        Eigen::VectorXd v;
        try {
          v = engine.pushforward(w, gens[i], p.values());
        } catch (const DomainExit&) {
          ++out.skipped;
          continue;
        } catch (const IntegrationError&) {
          ++out.skipped;
          continue;
        }
        Eigen::VectorXd res = v;
        if (basis.cols() > 0) res -= basis * (basis.transpose() * v);
        const double rel = res.norm() / std::max(1.0, v.norm());
        if (rel > kFlowInvarianceTolerance) {
          out.flow_invariant = false;
          out.witnesses.push_back({"flow", i, p, t, rel});
        }
      }
    }
  }
  return out;
}

} // namespace vfkit
