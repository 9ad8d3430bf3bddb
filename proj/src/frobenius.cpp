#include "vfkit/frobenius.hpp"

#include "vfkit/errors.hpp"
#include "vfkit/flow.hpp"
#include "vfkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vfkit {

std::string to_string(Integrability v) {
  switch (v) {
  case Integrability::Yes: return "integrable";
  case Integrability::No: return "not integrable";
  case Integrability::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::vector<GridAxis> default_grid(std::size_t n) {
  std::vector<GridAxis> axes;
  for (std::size_t i = 0; i < n; ++i)
    axes.push_back({static_cast<int>(i + 1), make_rational(-1), make_rational(1), make_rational(1, 2)});
  return axes;
}

FrobeniusVerdict frobenius_verdict(const Distribution& d, const std::vector<GridAxis>& grid,
                                   FrobeniusOptions options) {
  FrobeniusVerdict v;
  v.module_degree = options.module_degree;
  const auto& gens = d.generators();
  const auto points = grid_points(grid);

  auto inv = involutive_pointwise(gens, points);
  v.involutive_pointwise = inv.involutive;
  if (!inv.involutive) {
    v.integrable = Integrability::No;
    v.clause = "(i) contrapositive: integrable implies involutive";
    for (const auto& w : inv.witnesses)
      v.witnesses.push_back({"bracket", *w.point, w.i, w.j, 0, 0});
    v.isolated = inv.passing;
    v.justification = "the bracket [" + gens[inv.witnesses.front().i].name() + "," +
                      gens[inv.witnesses.front().j].name() + "] leaves the fibre at " +
                      std::to_string(inv.witnesses.size()) + " sample(s)";
    if (!v.isolated.empty())
      v.justification += "; involutivity holds at " + std::to_string(v.isolated.size()) +
                         " sample(s), candidates for isolated integral manifolds";
    return v;
  }

  auto cls = classify_grid(d, grid);
  v.grid_ranks = cls.ranks;
  v.rank_constant = std::adjacent_find(cls.ranks.begin(), cls.ranks.end(), std::not_equal_to<>()) ==
                    cls.ranks.end();
  if (v.rank_constant) {
    v.integrable = Integrability::Yes;
    v.clause = "(iv) involutive with locally constant rank";
    v.justification = "involutive at every sample with sampled rank " +
                      (cls.ranks.empty() ? std::string("0") : std::to_string(cls.ranks.front()));
    return v;
  }

  if (d.is_polynomial()) {
    auto mod = involutive_module(gens, options.module_degree);
    v.involutive_module = mod.involutive;
    if (mod.involutive) {
      v.integrable = Integrability::Yes;
      v.clause = "(ii) involutive with finitely generated sections";
      v.justification = "every bracket is a polynomial combination of the generators with multipliers "
                        "of degree <= " +
                        std::to_string(options.module_degree) +
                        "; this bounded-degree certificate stands in for local finite generation";
      return v;
    }
  }

  // Orbit comparison at grid-singular points, spread evenly when there are many.
  std::vector<std::size_t> singular;
  for (std::size_t k = 0; k < cls.points.size(); ++k)
    if (!cls.regular[k]) singular.push_back(k);
  std::vector<std::size_t> probes;
  if (singular.size() <= options.max_orbit_probes) {
    probes = singular;
  } else {
    for (std::size_t k = 0; k < options.max_orbit_probes; ++k)
      probes.push_back(singular[k * singular.size() / options.max_orbit_probes]);
  }
  for (auto k : probes) {
    const Point& p = cls.points[k];
    v.probed.push_back(p);
    int dim = -1;
    try {
      dim = orbit_dimension(gens, p, options.sampler, {options.depth_cap}).dimension;
    } catch (const std::exception&) {
      continue;
    }
    if (dim > cls.ranks[k]) v.witnesses.push_back({"orbit-dimension", p, 0, 0, dim, cls.ranks[k]});
  }
  if (!v.witnesses.empty()) {
    v.integrable = Integrability::No;
    v.clause = "orbit dimension exceeds rank: no integral manifold through the witness";
    v.justification = "involutive at every sample, yet the sampled orbit through " +
                      v.witnesses.front().point.str() + " has dimension " +
                      std::to_string(v.witnesses.front().orbit_dimension) + " while the rank is " +
                      std::to_string(v.witnesses.front().rank);
    return v;
  }
  v.integrable = Integrability::Undetermined;
  v.clause = "no clause applies";
  v.justification = "involutive at every sample with non-constant rank; no module certificate and no "
                    "orbit-dimension witness at " +
                    std::to_string(probes.size()) + " singular sample(s)";
  return v;
}

bool obstructed_at(const FrobeniusVerdict& v, const Point& p) {
  return std::any_of(v.witnesses.begin(), v.witnesses.end(),
                     [&](const FrobeniusWitness& w) { return w.point == p; });
}

FlowBoxChart flow_box_chart(const Distribution& d, const Point& x, ChartOptions options) {
  FlowBoxChart c;
  c.base = x;
  auto adapted = adapt_generators(d, x);
  c.rank = adapted.rank;
  c.tangent_rank = c.rank;
  const auto m = static_cast<std::size_t>(c.rank);
  c.generators.assign(adapted.generators.begin(), adapted.generators.begin() + static_cast<std::ptrdiff_t>(m));
  if (m == 0) {
    c.parameters.push_back({});
    c.images.push_back(x);
    c.accepted = true;
    c.reason = "rank 0: the point itself is an integral manifold";
    return c;
  }

  FlowEngine engine(c.generators);
  const int k = std::max(2, options.points_per_axis);
  std::vector<std::size_t> idx(m, 0);
  for (;;) {
    std::vector<double> t(m);
    for (std::size_t j = 0; j < m; ++j)
      t[j] = -options.radius + 2.0 * options.radius * static_cast<double>(idx[j]) / (k - 1);

    std::vector<Eigen::VectorXd> tangents;
    std::vector<double> z = x.values();
    bool ok = true;
    try {
      for (std::size_t j = 0; j < m; ++j) {
        z = engine.flow(j, t[j], z);
        // d phi / d t_j: Y_j at the intermediate point, carried by the rest.
        FlowWord rest;
        for (std::size_t l = j + 1; l < m; ++l) rest.steps.push_back({l, t[l]});
        Transport tr = engine.transport(rest, z);
        tangents.push_back(tr.jacobian * evaluate_numeric(c.generators[j], z));
      }
    } catch (const DomainExit&) {
      ok = false;
    } catch (const IntegrationError&) {
      ok = false;
    }
    if (!ok) {
      ++c.skipped;
    } else {
      const std::vector<double>& image = z;
      c.parameters.push_back(t);
      c.images.push_back(Point::real(image));

      std::vector<Eigen::VectorXd> fibre;
      for (const auto& g : d.generators())
        if (g.domain().contains(image)) fibre.push_back(evaluate_numeric(g, image));
      const int fr = numeric_rank(fibre, kRankThreshold, true);
      if (fr != c.rank) ++c.rank_mismatches;
      const Eigen::MatrixXd basis = numeric_span_basis(fibre, kRankThreshold, true);
      for (const auto& v : tangents) {
        const double res = span_residual(basis, v);
        if (c.worst.empty() || res > c.residual) {
          c.residual = res;
          c.worst = t;
        }
      }
      c.tangent_rank = std::min(c.tangent_rank, numeric_rank(tangents, kRankThreshold, false));
    }

    std::size_t j = 0;
    while (j < m && ++idx[j] == static_cast<std::size_t>(k)) idx[j++] = 0;
    if (j == m) break;
  }

  if (c.images.empty()) {
    c.accepted = false;
    c.reason = "every chart sample left a domain";
  } else if (c.residual >= options.threshold) {
    c.accepted = false;
    c.reason = "chart tangent leaves the fibre (residual " + std::to_string(c.residual) + ")";
  } else if (c.rank_mismatches > 0) {
    c.accepted = false;
    c.reason = "fibre rank changes across the chart image at " + std::to_string(c.rank_mismatches) +
               " sample(s)";
  } else if (c.tangent_rank < c.rank) {
    c.accepted = false;
    c.reason = "chart is not immersive";
  } else {
    c.accepted = true;
    c.reason = "tangent to the distribution at every sample";
  }
  return c;
}

} // namespace vfkit
