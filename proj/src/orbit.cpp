#include "vfkit/orbit.hpp"

#include "vfkit/errors.hpp"
#include "vfkit/liealgebra.hpp"
#include "vfkit/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace vfkit {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform on [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_interval(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Number of singular values above tol * scale.
int rank_at_scale(const std::vector<Eigen::VectorXd>& vectors, double tol, double scale) {
  if (vectors.empty() || scale <= 0.0) return 0;
  Eigen::MatrixXd m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  if (!m.allFinite()) throw std::domain_error("non-finite pushforward");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * scale) ++r;
  return r;
}

double max_norm(const std::vector<Eigen::VectorXd>& vectors) {
  double s = 0.0;
  for (const auto& v : vectors) s = std::max(s, v.norm());
  return s;
}

struct Collected {
  std::vector<Eigen::VectorXd> vectors;
  std::size_t used = 0, skipped = 0;
};

// Pushforwards of every generator along every sampled word, at x. The empty
// word comes first.
Collected collect(const FlowEngine& engine, std::span<const double> x, const WordSampler& sampler) {
  const auto& family = engine.family();
  Collected c;
  for (const auto& g : family)
    if (g.domain().contains(x)) c.vectors.push_back(evaluate_numeric(g, x));
  for (std::size_t i = 0; i < sampler.count; ++i) {
    FlowWord w = sampler.word(i, family.size());
    std::vector<double> y;
    Transport tr;
    try {
      y = engine.apply(w.inverse(), x);
      tr = engine.transport(w, y);
    } catch (const DomainExit&) {
      ++c.skipped;
      continue;
    } catch (const IntegrationError&) {
      ++c.skipped;
      continue;
    }
    ++c.used;
    for (const auto& g : family)
      if (g.domain().contains(y)) c.vectors.push_back(tr.jacobian * evaluate_numeric(g, y));
  }
  return c;
}

} // namespace

FlowWord WordSampler::word(std::size_t index, std::size_t family_size) const {
  if (family_size == 0) throw std::invalid_argument("cannot sample words over an empty family");
  if (max_length < 1) throw std::invalid_argument("word length bound must be positive");
  std::mt19937_64 g(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(index) + 1)));
  const int lo = constraint == WordConstraint::Free ? 1 : 2;
  const int hi = std::max(max_length, lo);
  const int len = lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
  FlowWord w;
  double sum = 0.0;
  for (int k = 0; k < len; ++k) {
    FlowStep s;
    s.field = static_cast<std::size_t>(g() % family_size);
    s.time = (2.0 * unit_interval(g) - 1.0) * max_time;
    if (k == len - 1 && constraint != WordConstraint::Free)
      s.time = (constraint == WordConstraint::NetTime ? net_time : 0.0) - sum;
    sum += s.time;
    w.steps.push_back(s);
  }
  return w;
}

std::vector<FlowWord> WordSampler::words(std::size_t family_size) const {
  std::vector<FlowWord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(word(i, family_size));
  return out;
}

OrbitTangentReport orbit_dimension(const std::vector<VectorField>& family, const Point& p,
                                   const WordSampler& sampler, OrbitOptions options) {
  if (family.empty()) throw std::invalid_argument("orbit of an empty family");
  FlowEngine engine(family);
  if (p.dim() != engine.dim()) throw std::invalid_argument("point arity differs from family dimension");
  const bool defined = std::any_of(family.begin(), family.end(),
                                   [&](const VectorField& g) { return g.domain().contains(p); });
  if (!defined) throw std::domain_error("no generator is defined at " + p.str());

  OrbitTangentReport r;
  r.point = p;
  Collected c = collect(engine, p.values(), sampler);
  if (sampler.count > 0 && c.used == 0)
    throw std::runtime_error("all " + std::to_string(sampler.count) + " sampled words left the domain");
  r.vectors = std::move(c.vectors);
  r.words_used = c.used;
  r.words_skipped = c.skipped;
  r.dimension = rank_at_scale(r.vectors, kOrbitRankThreshold, max_norm(r.vectors));

  FiltrationOptions fo;
  fo.depth_cap = options.depth_cap;
  auto f = filtration(family, {p}, fo);
  r.lie_rank = f.rank(0);
  r.consistent = r.dimension >= r.lie_rank;
  r.exact = r.dimension == static_cast<int>(engine.dim()) || (f.certified && r.dimension == r.lie_rank);
  if (!r.consistent)
    r.note = "sampled dimension below the bracket rank " + std::to_string(r.lie_rank) +
             "; sample more or longer words";
  return r;
}

OrbitTangentReport fixed_time_dimension(const std::vector<VectorField>& family, const Point& p,
                                        double T, const WordSampler& sampler,
                                        const std::optional<Expr>& invariant, OrbitOptions options) {
  if (family.empty()) throw std::invalid_argument("orbit of an empty family");
  FlowEngine engine(family);
  if (p.dim() != engine.dim()) throw std::invalid_argument("point arity differs from family dimension");

  // Reach a point of the fixed-time orbit: single flows first, then sampled
  // words of net time T.
  std::optional<std::vector<double>> reached;
  for (std::size_t i = 0; i < family.size() && !reached; ++i) {
    try {
      reached = engine.flow(i, T, p.values());
    } catch (const DomainExit&) {
    } catch (const IntegrationError&) {
    }
  }
  WordSampler seeds = sampler;
  seeds.constraint = WordConstraint::NetTime;
  seeds.net_time = T;
  for (std::size_t i = 0; i < seeds.count && !reached; ++i) {
    try {
      reached = engine.apply(seeds.word(i, family.size()), p.values());
    } catch (const DomainExit&) {
    } catch (const IntegrationError&) {
    }
  }
  if (!reached) throw std::runtime_error("no word of net time T from " + p.str() + " stays in the domain");

  WordSampler zero = sampler;
  zero.constraint = WordConstraint::ZeroSum;
  Collected c = collect(engine, *reached, zero);
  if (zero.count > 0 && c.used == 0)
    throw std::runtime_error("all " + std::to_string(zero.count) + " zero-sum words left the domain");

  WordSampler free = sampler;
  free.constraint = WordConstraint::Free;
  OrbitTangentReport r = orbit_dimension(family, Point::real(*reached), free, options);
  std::vector<Eigen::VectorXd> diffs;
  for (std::size_t i = 1; i < c.vectors.size(); ++i) diffs.push_back(c.vectors[i] - c.vectors.front());
  const int fixed = rank_at_scale(diffs, kOrbitRankThreshold, max_norm(c.vectors));
  r.fixed_time_dimension = fixed;
  r.gap = r.dimension - fixed;
  r.words_used = c.used;
  r.words_skipped = c.skipped;

  FiltrationOptions fo;
  fo.depth_cap = options.depth_cap;
  r.ideal_rank = fixed_time_ideal_rank(filtration(family, {}, fo), r.point).ideal_rank;
  if (fixed < *r.ideal_rank) {
    r.consistent = false;
    r.note += (r.note.empty() ? "" : "; ") + std::string("sampled fixed-time dimension below the ideal rank");
  }

  if (invariant) {
    const double base = eval(*invariant, *reached);
    double drift = 0.0;
    for (std::size_t i = 0; i < zero.count; ++i) {
      try {
        auto z = engine.apply(zero.word(i, family.size()), *reached);
        drift = std::max(drift, std::fabs(eval(*invariant, z) - base));
      } catch (const DomainExit&) {
      } catch (const IntegrationError&) {
      }
    }
    r.invariant_drift = drift;
  }
  return r;
}

ChowVerdict chow_verdict(const std::vector<VectorField>& family, const std::vector<Point>& samples,
                         int depth_cap, const WordSampler& sampler) {
  if (family.empty()) throw std::invalid_argument("empty family");
  const int n = static_cast<int>(family.front().dim());
  FiltrationOptions fo;
  fo.depth_cap = depth_cap;
  auto f = filtration(family, samples, fo);

  ChowVerdict v;
  v.depth_cap = depth_cap;
  std::vector<std::size_t> failing;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    v.ranks.push_back(f.rank(s));
    if (f.rank(s) < n) failing.push_back(s);
  }
  if (failing.empty()) {
    v.bracket_generating = true;
    v.depth = 1;
    for (const auto& seq : f.ranks) {
      auto it = std::find(seq.begin(), seq.end(), n);
      v.depth = std::max(v.depth, static_cast<int>(it - seq.begin()) + 1);
    }
    v.verdict = "sufficient condition met: any two points joinable by flows";
    v.note = "full bracket rank by depth " + std::to_string(v.depth);
    return v;
  }

  v.verdict = "not established at depth cap " + std::to_string(depth_cap);
  bool all_full = true;
  for (auto s : failing) {
    int d = -1;
    try {
      d = orbit_dimension(family, samples[s], sampler, {depth_cap}).dimension;
    } catch (const std::exception&) {
    }
    v.orbit_dimensions.push_back(d);
    if (d != n) all_full = false;
  }
  if (all_full)
    v.note = "sampled orbit dimension " + std::to_string(n) +
             " at every sample where the bracket rank drops; the rank test is sufficient, not necessary";
  else
    v.note = "bracket rank below " + std::to_string(n) + " at " + std::to_string(failing.size()) +
             " of " + std::to_string(samples.size()) + " samples";
  return v;
}

bool LinearPair::is_canonical() const {
  return a[0][0] == 0 && a[0][1] == 1 && a[1][0] == 0 && a[1][1] == 0 && b[0] == 0 && b[1] == 1;
}

VectorField LinearPair::field(const Rational& u) const {
  std::vector<Expr> c;
  for (int i = 0; i < 2; ++i)
    c.push_back(Expr::variable(1).scaled(a[i][0]) + Expr::variable(2).scaled(a[i][1]) + Expr::constant(b[i] * u));
  return VectorField("X_u", std::move(c));
}

SteeringResult steer_linear(const LinearPair& pair, const Point& from, const Point& to, double T) {
  if (T == 0.0) throw std::invalid_argument("steering time T must be nonzero");
  if (from.dim() != 2 || to.dim() != 2) throw std::invalid_argument("steering works on the plane");
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = pair.a[i][j].get_d();
    b(i) = pair.b[i].get_d();
  }
  Eigen::Matrix2d ctrl;
  ctrl << b, a * b;
  if (std::fabs(ctrl.determinant()) < 1e-12) throw std::invalid_argument("(A, b) is not controllable");

  const auto& x = from.values();
  const auto& y = to.values();
  SteeringResult r;
  if (pair.is_canonical()) {
    r.method = "closed-form";
    r.u1 = (-3 * T * x[1] - T * y[1] - 4 * x[0] + 4 * y[0]) / (T * T);
    r.u2 = (T * x[1] + 3 * T * y[1] + 4 * x[0] - 4 * y[0]) / (T * T);
  } else {
    // x(T) = e^{AT} x0 + e^{AT/2} G u1 + G u2 with G = int_0^{T/2} e^{As} ds b.
    r.method = "general";
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m.topLeftCorner<2, 2>() = a * (T / 2);
    m.topRightCorner<2, 1>() = b * (T / 2);
    Eigen::Matrix3d e = m.exp();
    Eigen::Matrix2d half = e.topLeftCorner<2, 2>();
    Eigen::Vector2d g = e.topRightCorner<2, 1>();
    Eigen::Matrix2d sys;
    sys << half * g, g;
    if (std::fabs(sys.determinant()) < 1e-12)
      throw std::invalid_argument("two-piece steering is singular for this T");
    Eigen::Vector2d rhs = Eigen::Vector2d(y[0], y[1]) - half * half * Eigen::Vector2d(x[0], x[1]);
    Eigen::Vector2d u = sys.partialPivLu().solve(rhs);
    r.u1 = u(0);
    r.u2 = u(1);
  }

  FlowEngine engine({pair.field(Rational(r.u1)), pair.field(Rational(r.u2))});
  std::vector<double> cur = x;
  r.trajectory.push_back(Point::real(cur));
  constexpr int kPerLeg = 10;
  for (std::size_t leg = 0; leg < 2; ++leg) {
    const std::vector<double> start = cur;
    for (int k = 1; k <= kPerLeg; ++k) {
      cur = engine.flow(leg, T / 2 * k / kPerLeg, start);
      r.trajectory.push_back(Point::real(cur));
    }
  }
  r.landing_error = std::max(std::fabs(cur[0] - y[0]), std::fabs(cur[1] - y[1]));
  return r;
}

} // namespace vfkit
