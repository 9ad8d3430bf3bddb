#include "test_support.hpp"

#include "vfkit/frobenius.hpp"

#include <doctest.h>

#include <cmath>

using namespace vfkit;
using vfkit::testing::field;

namespace {

Point pt(std::vector<long> c) {
  std::vector<Rational> q;
  for (long v : c) q.push_back(make_rational(v));
  return Point::exact(q);
}

Distribution heisenberg() { return Distribution({field({"0", "1", "0"}, "X1"), field({"1", "0", "x2"}, "X2")}); }
Distribution plane() { return Distribution({field({"1", "0", "0"}, "X1"), field({"0", "1", "0"}, "X2")}); }
Distribution bump() { return Distribution({field({"1", "0"}, "X1"), field({"0", "bumpp(x1)"}, "X2")}); }
Distribution slice() { return Distribution({field({"x1*x3", "1", "0"}, "X1"), field({"0", "0", "1"}, "X2")}); }
Distribution pair() {
  return Distribution({field({"x1^2+x2^2", "0"}, "X1"), field({"0", "x1^2+x2^2"}, "X2")});
}
Distribution diagonal() { return Distribution({field({"x1", "0"}, "X1"), field({"0", "x2"}, "X2")}); }

FrobeniusOptions bump_options() {
  FrobeniusOptions o;
  o.depth_cap = 8;
  o.sampler.max_time = 1.0;
  return o;
}

FrobeniusVerdict verdict(const Distribution& d, FrobeniusOptions o = {}) {
  return frobenius_verdict(d, default_grid(d.dim()), o);
}

} // namespace

TEST_CASE("bracket escaping the fibre means not integrable") {
  auto v = verdict(heisenberg());
  CHECK(v.integrable == Integrability::No);
  CHECK_FALSE(v.involutive_pointwise);
  REQUIRE_FALSE(v.witnesses.empty());
  CHECK(v.witnesses.front().kind == "bracket");
  CHECK(v.isolated.empty());
  CHECK(v.clause.find("(i)") != std::string::npos);
}

TEST_CASE("constant rank involutive distribution is integrable") {
  auto v = verdict(plane());
  CHECK(v.integrable == Integrability::Yes);
  CHECK(v.rank_constant);
  CHECK(v.clause.find("(iv)") != std::string::npos);
  CHECK(v.witnesses.empty());
}

TEST_CASE("involutive but not integrable") {
  auto v = verdict(bump(), bump_options());
  CHECK(v.involutive_pointwise);
  CHECK_FALSE(v.rank_constant);
  CHECK_FALSE(v.involutive_module.has_value());
  CHECK(v.integrable == Integrability::No);
  CHECK(obstructed_at(v, pt({0, 0})));
  for (const auto& w : v.witnesses) {
    CHECK(w.kind == "orbit-dimension");
    CHECK(w.orbit_dimension == 2);
    CHECK(w.rank == 1);
  }
  // Only the x1 = 0 column is grid-singular.
  for (const auto& p : v.probed) CHECK(p.values()[0] == 0.0);
}

TEST_CASE("module involutivity certifies the vanishing pair") {
  auto v = verdict(pair());
  CHECK(v.involutive_pointwise);
  CHECK_FALSE(v.rank_constant);
  REQUIRE(v.involutive_module.has_value());
  CHECK(*v.involutive_module);
  CHECK(v.integrable == Integrability::Yes);
  CHECK(v.justification.find("stands in") != std::string::npos);
}

TEST_CASE("isolated integral manifold on the slice") {
  auto v = verdict(slice());
  CHECK(v.integrable == Integrability::No);
  REQUIRE_FALSE(v.isolated.empty());
  // Oracle: the bracket is -x1 d1, inside the fibre exactly when x1 = 0.
  for (const auto& p : v.isolated) CHECK(p.values()[0] == 0.0);
  CHECK(v.isolated.size() == 25);
  for (const auto& w : v.witnesses) CHECK(w.point.values()[0] != 0.0);
}

TEST_CASE("diagonal family is integrable with non-constant rank") {
  auto v = verdict(diagonal());
  CHECK(v.integrable == Integrability::Yes);
  CHECK_FALSE(v.rank_constant);
}

TEST_CASE("flow box charts") {
  SUBCASE("coordinate plane") {
    auto c = flow_box_chart(plane(), pt({0, 0, 0}));
    CHECK(c.accepted);
    CHECK(c.rank == 2);
    CHECK(c.residual < 1e-12);
    CHECK(c.tangent_rank == 2);
    CHECK(c.images.size() == 25);
    for (const auto& p : c.images) CHECK(p.values()[2] == 0.0);
  }
  SUBCASE("diagonal at (1,1)") {
    auto c = flow_box_chart(diagonal(), pt({1, 1}));
    CHECK(c.accepted);
    CHECK(c.residual < 1e-7);
    // Oracle: phi(t) = (e^t1, e^t2), inside the open quadrant.
    for (std::size_t k = 0; k < c.images.size(); ++k) {
      CHECK(c.images[k].values()[0] == doctest::Approx(std::exp(c.parameters[k][0])).epsilon(1e-9));
      CHECK(c.images[k].values()[1] == doctest::Approx(std::exp(c.parameters[k][1])).epsilon(1e-9));
    }
  }
  SUBCASE("heisenberg at the origin") {
    auto c = flow_box_chart(heisenberg(), pt({0, 0, 0}));
    CHECK_FALSE(c.accepted);
    CHECK(c.residual >= 1e-7);
    // Oracle: phi(t) = (t2, t1, t1 t2), so d phi/d t1 = (0, 1, t2) leaves
    // span{(0,1,0), (1,0,t1)} exactly when t2 != 0.
    REQUIRE(c.worst.size() == 2);
    CHECK(c.worst[1] != 0.0);
    for (std::size_t k = 0; k < c.images.size(); ++k) {
      const auto& t = c.parameters[k];
      CHECK(c.images[k].values()[2] == doctest::Approx(t[0] * t[1]).epsilon(1e-9));
    }
  }
  SUBCASE("rank zero point") {
    auto c = flow_box_chart(pair(), pt({0, 0}));
    CHECK(c.accepted);
    CHECK(c.rank == 0);
  }
  SUBCASE("bump chart at the singular point") {
    auto c = flow_box_chart(bump(), pt({0, 0}));
    CHECK_FALSE(c.accepted);
    CHECK(c.rank_mismatches > 0);
    CHECK(flow_box_chart(bump(), pt({-1, 0})).accepted);
  }
}

TEST_CASE("property: chart and verdict agree at base points") {
  struct Case {
    Distribution d;
    FrobeniusOptions o;
    std::vector<Point> bases;
  };
  std::vector<Case> cases = {
      {heisenberg(), {}, {pt({0, 0, 0}), pt({1, 0, -1})}},
      {plane(), {}, {pt({0, 0, 0}), pt({1, -1, 1})}},
      {bump(), bump_options(), {pt({0, 0}), pt({-1, 0}), pt({1, 0})}},
      {pair(), {}, {pt({0, 0}), pt({1, 0}), pt({1, 1})}},
      {slice(), {}, {pt({0, 0, 0}), pt({0, 1, -1}), pt({1, 0, 1}), pt({-1, 1, 1})}},
      {diagonal(), {}, {pt({1, 1}), pt({1, 0}), pt({0, 0}), pt({-1, 1})}},
  };
  for (const auto& c : cases) {
    auto v = frobenius_verdict(c.d, default_grid(c.d.dim()), c.o);
    for (const auto& b : c.bases) {
      INFO(b.str());
      CHECK(flow_box_chart(c.d, b).accepted == !obstructed_at(v, b));
    }
  }
}

TEST_CASE("property: no accepted chart near an escaping bracket") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> offset(-0.1, 0.1);
  for (const auto& d : {heisenberg(), slice()}) {
    auto v = verdict(d);
    REQUIRE(v.integrable == Integrability::No);
    for (std::size_t k = 0; k < v.witnesses.size(); k += 17) {
      const auto& w = v.witnesses[k].point.values();
      std::vector<double> q = w;
      for (auto& x : q) x += offset(rng);
      // Slice witnesses have |x1| >= 1/2, so the shifted point stays off x1 = 0.
      INFO(Point::real(q).str());
      CHECK_FALSE(flow_box_chart(d, Point::real(q)).accepted);
    }
  }
}
