#include "presets.hpp"

#include "vfkit/distribution.hpp"
#include "vfkit/flow.hpp"
#include "vfkit/frobenius.hpp"
#include "vfkit/liealgebra.hpp"
#include "vfkit/modalgebra.hpp"
#include "vfkit/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vfkit::cli {

namespace {

WordSampler sampler(const FactContext& c, double tau = 0.5, std::size_t count = 200) {
  WordSampler s;
  s.seed = c.seed;
  s.max_time = tau;
  s.count = count;
  return s;
}

std::string ints(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

FactOutcome bracket_is(const VectorField& x, const VectorField& y, std::vector<const char*> expected) {
  const VectorField b = lie_bracket(x, y);
  bool pass = b.dim() == expected.size();
  for (std::size_t i = 0; pass && i < expected.size(); ++i)
    pass = b[i] == parse_expr(expected[i], static_cast<int>(b.dim()));
  return {pass, "[" + x.name() + "," + y.name() + "] = " + b.str()};
}

FactOutcome verdict_is(const System& s, Integrability expected, FrobeniusOptions o = {}) {
  auto v = frobenius_verdict(Distribution(s.fields), default_grid(s.dim), o);
  return {v.integrable == expected, to_string(v.integrable) + " by " + v.clause};
}

Preset nine_orbits() {
  Preset p{"nine-orbits", "diagonal pair x1 d1, x2 d2: nine orbits (origin, four half-axes, four quadrants)",
           "system nine-orbits dim 2\nfield X1 = (x1, 0)\nfield X2 = (0, x2)\n",
           {}};
  p.facts.push_back({"orbit dimensions at (0,0),(1,0),(-1,0),(0,1),(0,-1),(1,1),(1,-1),(-1,1),(-1,-1) "
                     "are (0,1,1,1,1,2,2,2,2)",
                     "stated", [](const System& s, const FactContext& c) {
                       const char* pts[] = {"0,0", "1,0", "-1,0", "0,1", "0,-1", "1,1", "1,-1", "-1,1", "-1,-1"};
                       std::vector<int> dims;
                       for (const char* q : pts) dims.push_back(orbit_dimension(s.fields, parse_point(q), sampler(c)).dimension);
                       return FactOutcome{dims == std::vector<int>{0, 1, 1, 1, 1, 2, 2, 2, 2}, ints(dims)};
                     }});
  p.facts.push_back({"200 seeded words per point never change the sign pattern of the nine representatives",
                     "stated", [](const System& s, const FactContext& c) {
                       FlowEngine engine(s.fields);
                       auto words = sampler(c).words(s.fields.size());
                       std::size_t changed = 0;
                       for (int a : {-1, 0, 1})
                         for (int b : {-1, 0, 1}) {
                           const std::vector<double> x{double(a), double(b)};
                           for (const auto& w : words) {
                             auto y = engine.apply(w, x);
                             auto sg = [](double v) { return (v > 0) - (v < 0); };
                             if (sg(y[0]) != a || sg(y[1]) != b) ++changed;
                           }
                         }
                       return FactOutcome{changed == 0, std::to_string(changed) + " sign changes over " +
                                                            std::to_string(9 * words.size()) + " flows"};
                     }});
  p.facts.push_back({"the orbits are integral manifolds: the distribution is integrable", "elementary",
                     [](const System& s, const FactContext&) { return verdict_is(s, Integrability::Yes); }});
  return p;
}

Preset fixed_time() {
  Preset p{"fixed-time", "diagonal pair: fixed-time orbits on the axes and on the hyperbolas x1 x2 = c",
           "system fixed-time dim 2\nfield X1 = (x1, 0)\nfield X2 = (0, x2)\n",
           {}};
  p.facts.push_back({"the fixed-time orbit of (1,0) is a singleton: 200 zero-sum words return (1,0) within 1e-9",
                     "stated", [](const System& s, const FactContext& c) {
                       WordSampler z = sampler(c);
                       z.constraint = WordConstraint::ZeroSum;
                       FlowEngine engine(s.fields);
                       double worst = 0.0;
                       for (const auto& w : z.words(s.fields.size())) {
                         auto y = engine.apply(w, std::vector<double>{1.0, 0.0});
                         worst = std::max(worst, std::hypot(y[0] - 1.0, y[1]));
                       }
                       return FactOutcome{worst <= 1e-9, "largest displacement " + num(worst)};
                     }});
  auto at11 = [](const System& s, const FactContext& c) {
    return fixed_time_dimension(s.fields, parse_point("1,1"), 1.0, sampler(c), parse_expr("x1*x2", 2));
  };
  p.facts.push_back({"at (1,1) with T = 1 the fixed-time orbit has dimension 1", "stated",
                     [at11](const System& s, const FactContext& c) {
                       auto r = at11(s, c);
                       return FactOutcome{r.fixed_time_dimension == 1,
                                          "fixed-time dimension " + std::to_string(*r.fixed_time_dimension)};
                     }});
  p.facts.push_back({"x1 x2 changes by at most 1e-8 along 200 zero-sum words", "stated",
                     [at11](const System& s, const FactContext& c) {
                       auto r = at11(s, c);
                       return FactOutcome{r.invariant_drift && *r.invariant_drift <= 1e-8,
                                          "drift " + num(r.invariant_drift.value_or(INFINITY))};
                     }});
  p.facts.push_back({"orbit dimension minus fixed-time dimension at (1,1) is 1", "stated",
                     [at11](const System& s, const FactContext& c) {
                       auto r = at11(s, c);
                       return FactOutcome{r.gap == 1, "gap " + std::to_string(r.gap.value_or(-1))};
                     }});
  return p;
}

Preset linear_steering() {
  Preset p{"linear-steering", "double integrator x1' = x2, x2' = u with u in {-1, 0, 1}",
           "system linear-steering dim 2\nfield Xm = (x2, -1)\nfield X0 = (x2, 0)\nfield Xp = (x2, 1)\n",
           {}};
  p.facts.push_back({"steering (0,0) to (1,1) in time 1 uses u1 = 3 then u2 = -1 and lands within 1e-8",
                     "stated", [](const System&, const FactContext&) {
                       LinearPair pair;
                       pair.a = {{{0, 1}, {0, 0}}};
                       pair.b = {0, 1};
                       auto r = steer_linear(pair, parse_point("0,0"), parse_point("1,1"), 1.0);
                       const bool pass = std::fabs(r.u1 - 3.0) < 1e-9 && std::fabs(r.u2 + 1.0) < 1e-9 &&
                                         r.landing_error < 1e-8;
                       return FactOutcome{pass, "u1 = " + num(r.u1) + ", u2 = " + num(r.u2) + ", landing error " +
                                                    num(r.landing_error)};
                     }});
  p.facts.push_back({"the bracket rank test succeeds at depth 2", "stated",
                     [](const System& s, const FactContext& c) {
                       auto samples = random_rational_points(2, 8, c.seed);
                       samples.push_back(parse_point("0,0"));
                       auto v = chow_verdict(s.fields, samples, 6, sampler(c));
                       return FactOutcome{v.bracket_generating && v.depth == 2,
                                          v.verdict + " (depth " + std::to_string(v.depth) + ")"};
                     }});
  p.facts.push_back({"every fixed-time orbit with T = 1 is the plane: dimension 2 at (0,0)", "stated",
                     [](const System& s, const FactContext& c) {
                       auto r = fixed_time_dimension(s.fields, parse_point("0,0"), 1.0, sampler(c));
                       return FactOutcome{r.fixed_time_dimension == 2,
                                          "fixed-time dimension " + std::to_string(*r.fixed_time_dimension)};
                     }});
  return p;
}

FrobeniusOptions bump_options(const FactContext& c) {
  FrobeniusOptions o;
  o.depth_cap = 8;
  o.sampler = sampler(c, 1.0);
  return o;
}

Preset bump() {
  Preset p{"bump", "d1 with a flat factor: e^(-1/x1^2) d2 for x1 > 0, zero otherwise",
           "system bump dim 2\nfield X1 = (1, 0)\nfield X2 = (0, bumpp(x1))\n",
           {}};
  p.facts.push_back({"bracket rank with depth cap 8 is 1 at (-1,0) and (0,0) and 2 at (1,0)", "stated",
                     [](const System& s, const FactContext&) {
                       std::vector<int> r;
                       for (const char* q : {"-1,0", "0,0", "1,0"}) r.push_back(lie_rank_at(s.fields, parse_point(q), 8));
                       return FactOutcome{r == std::vector<int>{1, 1, 2}, ints(r)};
                     }});
  p.facts.push_back({"the sampled orbit dimension is 2 at (-1,0), (0,0) and (1,0)", "stated",
                     [](const System& s, const FactContext& c) {
                       std::vector<int> r;
                       for (const char* q : {"-1,0", "0,0", "1,0"})
                         r.push_back(orbit_dimension(s.fields, parse_point(q), sampler(c, 1.0), {8}).dimension);
                       return FactOutcome{r == std::vector<int>{2, 2, 2}, ints(r)};
                     }});
  p.facts.push_back({"pointwise involutive at every grid sample", "stated",
                     [](const System& s, const FactContext&) {
                       auto r = involutive_pointwise(s.fields, grid_points(default_grid(2)));
                       return FactOutcome{r.involutive, std::to_string(r.witnesses.size()) + " failing samples"};
                     }});
  p.facts.push_back({"not integrable, with an orbit-dimension witness at (0,0)", "stated",
                     [](const System& s, const FactContext& c) {
                       auto v = frobenius_verdict(Distribution(s.fields), default_grid(2), bump_options(c));
                       const bool w = obstructed_at(v, parse_point("0,0"));
                       return FactOutcome{v.integrable == Integrability::No && w,
                                          to_string(v.integrable) + (w ? ", witness at (0,0)" : ", no witness at (0,0)")};
                     }});
  p.facts.push_back({"the bracket rank test is not established although every orbit is open", "stated",
                     [](const System& s, const FactContext& c) {
                       auto v = chow_verdict(s.fields, {parse_point("-1,0"), parse_point("0,0"), parse_point("1,0")}, 8,
                                             sampler(c, 1.0));
                       const bool open = !v.orbit_dimensions.empty() &&
                                         std::all_of(v.orbit_dimensions.begin(), v.orbit_dimensions.end(),
                                                     [](int d) { return d == 2; });
                       return FactOutcome{!v.bracket_generating && open, v.verdict + "; orbit dimensions " + ints(v.orbit_dimensions)};
                     }});
  return p;
}

Preset full_tangent() {
  Preset p{"full-tangent", "d1 and x1 d2: the bracket fills the tangent space where x1 d2 vanishes",
           "system full-tangent dim 2\nfield X1 = (1, 0)\nfield X2 = (0, x1)\n",
           {}};
  p.facts.push_back({"[X1,X2] = d2", "stated", [](const System& s, const FactContext&) {
                       return bracket_is(s.fields[0], s.fields[1], {"0", "1"});
                     }});
  p.facts.push_back({"bracket rank at (0,0) is 2 although the fibre there has rank 1", "stated",
                     [](const System& s, const FactContext&) {
                       const int l = lie_rank_at(s.fields, parse_point("0,0"));
                       const int r = rank_at(Distribution(s.fields), parse_point("0,0")).rank;
                       return FactOutcome{l == 2 && r == 1, "bracket rank " + std::to_string(l) + ", fibre rank " + std::to_string(r)};
                     }});
  p.facts.push_back({"the bracket rank test succeeds at depth 2", "derived",
                     [](const System& s, const FactContext& c) {
                       auto samples = random_rational_points(2, 8, c.seed);
                       samples.push_back(parse_point("0,0"));
                       auto v = chow_verdict(s.fields, samples, 6, sampler(c));
                       return FactOutcome{v.bracket_generating && v.depth == 2, v.verdict};
                     }});
  return p;
}

Preset quadratic() {
  Preset p{"quadratic", "d1 and x1^2 d2: the bracket needs depth 3 at the origin",
           "system quadratic dim 2\nfield X1 = (1, 0)\nfield X2 = (0, x1^2)\n",
           {}};
  p.facts.push_back({"[X1,X2] = 2 x1 d2", "stated", [](const System& s, const FactContext&) {
                       return bracket_is(s.fields[0], s.fields[1], {"0", "2*x1"});
                     }});
  p.facts.push_back({"[X1,[X1,X2]] = 2 d2", "stated", [](const System& s, const FactContext&) {
                       return bracket_is(s.fields[0], lie_bracket(s.fields[0], s.fields[1]).renamed("[X1,X2]"),
                                         {"0", "2"});
                     }});
  p.facts.push_back({"filtration ranks at (0,0) are 1, 1, 2 by depth", "derived",
                     [](const System& s, const FactContext&) {
                       auto f = filtration(s.fields, {parse_point("0,0")});
                       std::vector<int> r(f.ranks[0].begin(), f.ranks[0].begin() + std::min<std::size_t>(3, f.ranks[0].size()));
                       return FactOutcome{r == std::vector<int>{1, 1, 2}, ints(f.ranks[0])};
                     }});
  return p;
}

Preset heisenberg() {
  Preset p{"heisenberg", "d2 and d1 + x2 d3: a rank 2 distribution on R^3 with no integral surfaces",
           "system heisenberg dim 3\nfield X1 = (0, 1, 0)\nfield X2 = (1, 0, x2)\n",
           {}};
  p.facts.push_back({"[X1,X2] = d3", "derived", [](const System& s, const FactContext&) {
                       return bracket_is(s.fields[0], s.fields[1], {"0", "0", "1"});
                     }});
  p.facts.push_back({"not integrable", "stated", [](const System& s, const FactContext&) {
                       return verdict_is(s, Integrability::No);
                     }});
  p.facts.push_back({"the flow-box chart at the origin is rejected", "derived",
                     [](const System& s, const FactContext&) {
                       auto c = flow_box_chart(Distribution(s.fields), parse_point("0,0,0"));
                       return FactOutcome{!c.accepted, c.reason};
                     }});
  return p;
}

Preset isolated_slice() {
  Preset p{"isolated-slice", "x1 x3 d1 + d2 and d3: the plane x1 = 0 is an isolated integral manifold",
           "system isolated-slice dim 3\nfield X1 = (x1*x3, 1, 0)\nfield X2 = (0, 0, 1)\n",
           {}};
  p.facts.push_back({"[X1,X2] = -x1 d1", "stated", [](const System& s, const FactContext&) {
                       return bracket_is(s.fields[0], s.fields[1], {"-x1", "0", "0"});
                     }});
  p.facts.push_back({"not integrable off x1 = 0; involutivity holds exactly on the slice x1 = 0", "stated",
                     [](const System& s, const FactContext&) {
                       auto v = frobenius_verdict(Distribution(s.fields), default_grid(3));
                       const bool slice = !v.isolated.empty() &&
                                          std::all_of(v.isolated.begin(), v.isolated.end(),
                                                      [](const Point& q) { return q.values()[0] == 0.0; });
                       const bool off = std::all_of(v.witnesses.begin(), v.witnesses.end(),
                                                    [](const FrobeniusWitness& w) { return w.point.values()[0] != 0.0; });
                       return FactOutcome{v.integrable == Integrability::No && slice && off,
                                          to_string(v.integrable) + "; " + std::to_string(v.isolated.size()) +
                                              " involutive samples, " + std::to_string(v.witnesses.size()) + " witnesses"};
                     }});
  p.facts.push_back({"the flow-box chart at the origin is accepted and stays in x1 = 0", "derived",
                     [](const System& s, const FactContext&) {
                       auto c = flow_box_chart(Distribution(s.fields), parse_point("0,0,0"));
                       const bool in = std::all_of(c.images.begin(), c.images.end(),
                                                   [](const Point& q) { return q.values()[0] == 0.0; });
                       return FactOutcome{c.accepted && in, c.reason + ", residual " + num(c.residual)};
                     }});
  return p;
}

Preset coordinate_plane() {
  Preset p{"coordinate-plane", "d1 and d2 on R^3: the foliation by planes x3 = c",
           "system coordinate-plane dim 3\nfield X1 = (1, 0, 0)\nfield X2 = (0, 1, 0)\n",
           {}};
  p.facts.push_back({"integrable with constant rank 2", "elementary", [](const System& s, const FactContext&) {
                       return verdict_is(s, Integrability::Yes);
                     }});
  p.facts.push_back({"the flow-box chart at the origin has residual below 1e-9", "elementary",
                     [](const System& s, const FactContext&) {
                       auto c = flow_box_chart(Distribution(s.fields), parse_point("0,0,0"));
                       return FactOutcome{c.accepted && c.residual < 1e-9, "residual " + num(c.residual)};
                     }});
  return p;
}

Preset involutive2() {
  Preset p{"involutive2", "(x1^2+x2^2) d1 and (x1^2+x2^2) d2: an involutive module vanishing at the origin",
           "system involutive2 dim 2\nfield X1 = (x1^2+x2^2, 0)\nfield X2 = (0, x1^2+x2^2)\n",
           {}};
  p.facts.push_back({"[X1,X2] lies in the module of X1, X2 with multipliers of degree 1", "stated",
                     [](const System& s, const FactContext&) {
                       auto c = member_bounded({lie_bracket(s.fields[0], s.fields[1]), s.fields, 1});
                       return FactOutcome{c.member, c.verdict()};
                     }});
  p.facts.push_back({"integrable", "stated", [](const System& s, const FactContext&) {
                       return verdict_is(s, Integrability::Yes);
                     }});
  return p;
}

Preset mixed_pair() {
  Preset p{"mixed-pair", "(x1^2+x2^2) d1 and (x1^4+x2^4) d2: the generated module is not involutive",
           "system mixed-pair dim 2\nfield X1 = (x1^2+x2^2, 0)\nfield X2 = (0, x1^4+x2^4)\n",
           {}};
  p.facts.push_back({"[X1,X2] is not in the module of X1, X2 up to multiplier degree 8", "stated",
                     [](const System& s, const FactContext&) {
                       auto c = member_bounded({lie_bracket(s.fields[0], s.fields[1]), s.fields, 8});
                       return FactOutcome{!c.member, c.verdict()};
                     }});
  p.facts.push_back({"the integrability verdict is not negative (orbits: the origin and its complement)", "derived",
                     [](const System& s, const FactContext&) {
                       auto v = frobenius_verdict(Distribution(s.fields), default_grid(2));
                       return FactOutcome{v.integrable != Integrability::No, to_string(v.integrable) + " by " + v.clause};
                     }});
  return p;
}

Preset umbrella() {
  Preset p{"umbrella", "the umbrella polynomial f = x3 (x1^2+x2^2) - x2^3 as an ideal generator",
           "system umbrella dim 3\nfield F = (x3*(x1^2+x2^2) - x2^3, 0, 0)\n",
           {}};
  p.facts.push_back({"f has degree 3 and 3 monomials", "stated", [](const System& s, const FactContext&) {
                       const Expr& f = s.fields[0][0];
                       return FactOutcome{f.degree() == 3 && f.terms().size() == 3,
                                          "degree " + std::to_string(f.degree()) + ", " +
                                              std::to_string(f.terms().size()) + " monomials"};
                     }});
  p.facts.push_back({"x1 is not in the ideal of f up to multiplier degree 8", "stated",
                     [](const System& s, const FactContext&) {
                       auto c = ideal_member_bounded(parse_expr("x1", 3), {s.fields[0][0]}, 8, 3);
                       return FactOutcome{!c.member, c.verdict()};
                     }});
  p.facts.push_back({"x1 f is in the ideal of f with multiplier x1", "elementary",
                     [](const System& s, const FactContext&) {
                       const Expr& f = s.fields[0][0];
                       auto c = ideal_member_bounded(parse_expr("x1", 3) * f, {f}, 1, 3);
                       const bool pass = c.member && c.multipliers.size() == 1 && c.multipliers[0] == parse_expr("x1", 3);
                       return FactOutcome{pass, c.verdict() + (c.member ? ", multiplier " + c.multipliers[0].str() : "")};
                     }});
  return p;
}

Preset bad_generator() {
  Preset p{"bad-generator", "x1 d and x1^2 d on the line: the same distribution, different modules",
           "system bad-generator dim 1\nfield G = (x1^2)\nfield X = (x1)\n",
           {}};
  p.facts.push_back({"x1 d is not in the module of x1^2 d up to multiplier degree 10", "stated",
                     [](const System& s, const FactContext&) {
                       auto c = member_bounded({s.field("X"), {s.field("G")}, 10});
                       return FactOutcome{!c.member, c.verdict()};
                     }});
  p.facts.push_back({"both generators span the same fibre at -1, 0 and 1", "elementary",
                     [](const System& s, const FactContext&) {
                       std::vector<int> g, x;
                       for (const char* q : {"-1", "0", "1"}) {
                         g.push_back(rank_at(Distribution({s.field("G")}), parse_point(q)).rank);
                         x.push_back(rank_at(Distribution({s.field("X")}), parse_point(q)).rank);
                       }
                       return FactOutcome{g == x, "ranks " + ints(g) + " and " + ints(x)};
                     }});
  return p;
}

Preset partial_orbits() {
  Preset p{"partial-orbits", "d1 on x1 < 1 and d2 on x1 > -1: orbits of partially defined fields",
           "system partial-orbits dim 2\nfield X1 = (1, 0) on x1 < 1\nfield X2 = (0, 1) on x1 > -1\n",
           {}};
  p.facts.push_back({"the orbit through (2,0) is the vertical line: dimension 1", "derived",
                     [](const System& s, const FactContext& c) {
                       auto r = orbit_dimension(s.fields, parse_point("2,0"), sampler(c));
                       return FactOutcome{r.dimension == 1, "dimension " + std::to_string(r.dimension) + ", " +
                                                                std::to_string(r.words_skipped) + " words left a domain"};
                     }});
  p.facts.push_back({"the orbit through (0,0) is open", "derived", [](const System& s, const FactContext& c) {
                       auto r = orbit_dimension(s.fields, parse_point("0,0"), sampler(c));
                       return FactOutcome{r.dimension == 2, "dimension " + std::to_string(r.dimension)};
                     }});
  p.facts.push_back({"X1 is excluded from the rank at (2,0)", "elementary",
                     [](const System& s, const FactContext&) {
                       auto r = rank_at(Distribution(s.fields), parse_point("2,0"));
                       return FactOutcome{r.excluded == std::vector<std::size_t>{0} && r.rank == 1,
                                          "rank " + std::to_string(r.rank) + ", " + std::to_string(r.excluded.size()) + " excluded"};
                     }});
  return p;
}

} // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {nine_orbits(),    fixed_time(),  linear_steering(), bump(),
                                          full_tangent(),   quadratic(),   heisenberg(),      isolated_slice(),
                                          coordinate_plane(), involutive2(), mixed_pair(),    umbrella(),
                                          bad_generator(),  partial_orbits()};
  return all;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

} // namespace vfkit::cli
