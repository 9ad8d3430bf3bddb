#include "test_support.hpp"

#include "vfkit/errors.hpp"
#include "vfkit/liealgebra.hpp"
#include "vfkit/orbit.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace vfkit;
using vfkit::testing::field;

namespace {

Point pt(long a, long b) { return Point::exact({make_rational(a), make_rational(b)}); }

std::vector<VectorField> diagonal() { return {field({"x1", "0"}, "X1"), field({"0", "x2"}, "X2")}; }

std::vector<VectorField> flat() { return {field({"1", "0"}, "X1"), field({"0", "bumpp(x1)"}, "X2")}; }

std::vector<VectorField> linear_family() {
  return {field({"x2", "-1"}, "Xm"), field({"x2", "0"}, "X0"), field({"x2", "1"}, "Xp")};
}

WordSampler sampler(std::uint64_t seed, std::size_t count = 200) {
  WordSampler s;
  s.seed = seed;
  s.count = count;
  return s;
}

int sgn(double v) { return (v > 0) - (v < 0); }

} // namespace

TEST_CASE("word sampler") {
  WordSampler s = sampler(7, 300);
  auto a = s.words(3);
  auto b = s.words(3);
  REQUIRE(a.size() == 300);
  bool long_word = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].steps.size() == b[i].steps.size());
    CHECK(a[i].steps.size() >= 1);
    CHECK(a[i].steps.size() <= 6);
    long_word = long_word || a[i].steps.size() == 6;
    for (std::size_t k = 0; k < a[i].steps.size(); ++k) {
      CHECK(a[i].steps[k].field == b[i].steps[k].field);
      CHECK(a[i].steps[k].time == b[i].steps[k].time);
      CHECK(a[i].steps[k].field < 3);
      CHECK(std::fabs(a[i].steps[k].time) <= 0.5);
    }
  }
  CHECK(long_word);
  // Word i does not depend on how many words are drawn.
  CHECK(s.word(17, 3).steps.size() == sampler(7, 20).word(17, 3).steps.size());

  s.constraint = WordConstraint::ZeroSum;
  for (const auto& w : s.words(2)) {
    CHECK(w.steps.size() >= 2);
    CHECK(w.net_time() == 0.0);
  }
  s.constraint = WordConstraint::NetTime;
  s.net_time = 1.5;
  for (const auto& w : s.words(2)) CHECK(w.net_time() == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("orbit dimension of the diagonal pair") {
  CHECK(orbit_dimension(diagonal(), pt(1, 1), sampler(1)).dimension == 2);
  auto axis = orbit_dimension(diagonal(), pt(1, 0), sampler(1));
  CHECK(axis.dimension == 1);
  CHECK(axis.exact);
  CHECK(orbit_dimension(diagonal(), pt(0, 0), sampler(1)).dimension == 0);
}

TEST_CASE("orbit of the flat family at the origin is open") {
  auto r = orbit_dimension(flat(), pt(0, 0), sampler(3));
  CHECK(r.dimension == 2);
  CHECK(r.lie_rank == 1);
  CHECK(r.consistent);
}

TEST_CASE("partially defined generators") {
  DomainPredicate left({{1, Inequality::Relation::Less, make_rational(1)}});
  DomainPredicate right({{1, Inequality::Relation::Greater, make_rational(-1)}});
  std::vector<VectorField> fam{VectorField("X1", {Expr::constant(1), Expr{}}, left),
                               VectorField("X2", {Expr{}, Expr::constant(1)}, right)};
  auto r = orbit_dimension(fam, pt(2, 0), sampler(5));
  CHECK(r.dimension == 1);
  CHECK(r.words_skipped > 0);
  CHECK(orbit_dimension(fam, pt(0, 0), sampler(5)).dimension == 2);

  std::vector<VectorField> only_left{fam[0]};
  CHECK_THROWS_AS(orbit_dimension(only_left, pt(2, 0), sampler(5)), std::domain_error);
  DomainPredicate strip({{1, Inequality::Relation::Less, make_rational(1, 1000)},
                         {1, Inequality::Relation::Greater, make_rational(-1, 1000)}});
  std::vector<VectorField> narrow{VectorField("X1", {Expr::constant(1), Expr{}}, strip)};
  WordSampler big = sampler(5, 20);
  big.max_time = 5.0;
  big.max_length = 1;
  CHECK_THROWS_AS(orbit_dimension(narrow, pt(0, 0), big), std::runtime_error);
}

TEST_CASE("fixed-time orbit of the diagonal pair at (1,1) is a hyperbola") {
  auto r = fixed_time_dimension(diagonal(), pt(1, 1), 0.0, sampler(11), parse_expr("x1*x2", 2));
  REQUIRE(r.fixed_time_dimension);
  CHECK(*r.fixed_time_dimension == 1);
  CHECK(r.dimension == 2);
  CHECK(*r.gap == 1);
  REQUIRE(r.invariant_drift);
  CHECK(*r.invariant_drift < 1e-8);
  CHECK(*r.ideal_rank == 1);
}

TEST_CASE("fixed-time orbit on the positive x1 axis is the whole half-axis") {
  // X2 vanishes on the axis, so any time spent on it is absorbed: the zero-sum
  // word (X1, t)(X2, -t) maps (a, 0) to (a e^t, 0). Independent oracle below.
  FlowEngine engine(diagonal());
  FlowWord w{{{0, 0.3}, {1, -0.3}}};
  auto end = engine.apply(w, std::vector<double>{1.0, 0.0});
  CHECK(end[0] == doctest::Approx(std::exp(0.3)));
  CHECK(end[1] == 0.0);

  for (double T : {0.0, 0.5}) {
    auto r = fixed_time_dimension(diagonal(), pt(1, 0), T, sampler(13));
    CHECK(*r.fixed_time_dimension == 1);
    CHECK(r.dimension == 1);
    CHECK(*r.gap == 0);
    CHECK(*r.ideal_rank == 1);
  }
}

TEST_CASE("fixed-time orbit of the linear control family is the plane") {
  auto r = fixed_time_dimension(linear_family(), pt(0, 0), 1.0, sampler(17));
  CHECK(*r.fixed_time_dimension == 2);
  CHECK(r.dimension == 2);
  CHECK(*r.gap == 0);
}

TEST_CASE("chow verdicts") {
  auto samples = random_rational_points(2, 6, 9);
  samples.push_back(pt(0, 0));
  auto a = chow_verdict({field({"1", "0"}), field({"0", "x1"})}, samples, 6, sampler(1));
  CHECK(a.bracket_generating);
  CHECK(a.depth == 2);
  CHECK(a.verdict.find("sufficient condition met") == 0);

  auto b = chow_verdict(diagonal(), {pt(1, 1), pt(1, 0)}, 6, sampler(1));
  CHECK_FALSE(b.bracket_generating);
  CHECK(b.verdict == "not established at depth cap 6");
  REQUIRE(b.orbit_dimensions.size() == 1);
  CHECK(b.orbit_dimensions[0] == 1);

  WordSampler wide = sampler(1);
  wide.max_time = 1.0;
  auto c = chow_verdict(flat(), {pt(-1, 0), pt(0, 0), pt(1, 0)}, 8, wide);
  CHECK_FALSE(c.bracket_generating);
  CHECK(c.verdict == "not established at depth cap 8");
  CHECK(c.orbit_dimensions == std::vector<int>{2, 2});
  CHECK(c.note.find("sufficient, not necessary") != std::string::npos);
}

TEST_CASE("steering the double integrator") {
  LinearPair canon;
  canon.a = {{{0, 1}, {0, 0}}};
  canon.b = {0, 1};
  REQUIRE(canon.is_canonical());
  auto r = steer_linear(canon, pt(0, 0), pt(1, 1), 1.0);
  CHECK(r.method == "closed-form");
  CHECK(r.u1 == doctest::Approx(3.0));
  CHECK(r.u2 == doctest::Approx(-1.0));
  CHECK(r.landing_error < 1e-8);
  CHECK(r.trajectory.size() == 21);

  auto loop = steer_linear(canon, Point::exact({make_rational(1, 2), make_rational(-2)}),
                           Point::exact({make_rational(1, 2), make_rational(-2)}), 1.0);
  CHECK((loop.u1 != 0.0 || loop.u2 != 0.0));
  CHECK(loop.landing_error < 1e-8);

  CHECK_THROWS_AS(steer_linear(canon, pt(0, 0), pt(1, 1), 0.0), std::invalid_argument);

  LinearPair other;
  other.a = {{{make_rational(-1, 2), 1}, {-1, 0}}};
  other.b = {1, 2};
  auto g = steer_linear(other, pt(1, -1), pt(-2, 3), 2.0);
  CHECK(g.method == "general");
  CHECK(g.landing_error < 1e-8);

  LinearPair stuck;
  stuck.a = {{{1, 0}, {0, 1}}};
  stuck.b = {1, 0};
  CHECK_THROWS_AS(steer_linear(stuck, pt(0, 0), pt(1, 1), 1.0), std::invalid_argument);
}

TEST_CASE("property: steering lands for random endpoints") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> c(-9, 9);
  LinearPair canon;
  canon.a = {{{0, 1}, {0, 0}}};
  canon.b = {0, 1};
  for (int k = 0; k < 20; ++k) {
    Point from = Point::exact({make_rational(c(rng), 3), make_rational(c(rng), 3)});
    Point to = Point::exact({make_rational(c(rng), 3), make_rational(c(rng), 3)});
    const double T = (k % 2 ? 1.0 : -1.0) * (0.5 + k / 10.0);
    CHECK(steer_linear(canon, from, to, T).landing_error < 1e-8);
  }
}

TEST_CASE("property: the nine orbits of the diagonal pair keep their sign pattern") {
  FlowEngine engine(diagonal());
  WordSampler s = sampler(21);
  auto words = s.words(2);
  for (int a : {-1, 0, 1})
    for (int b : {-1, 0, 1}) {
      const std::vector<double> p{0.7 * a, 1.3 * b};
      for (const auto& w : words) {
        auto q = engine.apply(w, p);
        CHECK(sgn(q[0]) == a);
        CHECK(sgn(q[1]) == b);
      }
    }
}

TEST_CASE("property: sampled dimensions bound the bracket and ideal ranks") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 20; ++k) {
    std::vector<VectorField> fam{testing::random_field(rng, 2, 1, "A"), testing::random_field(rng, 2, 1, "B")};
    auto p = random_rational_points(2, 1, 300 + static_cast<std::uint64_t>(k), 1).front();
    WordSampler s = sampler(static_cast<std::uint64_t>(k), 60);
    s.max_time = 0.2;
    auto o = orbit_dimension(fam, p, s);
    CHECK(o.dimension >= o.lie_rank);
    auto f = fixed_time_dimension(fam, p, 0.1, s);
    CHECK(*f.fixed_time_dimension >= *f.ideal_rank);
    CHECK(*f.gap >= 0);
    CHECK(*f.gap <= 1);
  }
}

TEST_CASE("property: identical seeds give identical reports") {
  auto a = orbit_dimension(flat(), pt(0, 0), sampler(5, 50));
  auto b = orbit_dimension(flat(), pt(0, 0), sampler(5, 50));
  REQUIRE(a.vectors.size() == b.vectors.size());
  for (std::size_t i = 0; i < a.vectors.size(); ++i) CHECK(a.vectors[i] == b.vectors[i]);
}
