#include "test_support.hpp"

#include "vfkit/distribution.hpp"
#include "vfkit/errors.hpp"
#include "vfkit/liealgebra.hpp"

#include <doctest.h>

#include <random>

using namespace vfkit;
using vfkit::testing::field;

namespace {

Point pt(long a, long b) { return Point::exact({make_rational(a), make_rational(b)}); }
Point pt(long a, long b, long c) { return Point::exact({make_rational(a), make_rational(b), make_rational(c)}); }

const std::vector<VectorField>& bump_family() {
  static const std::vector<VectorField> f{field({"1", "0"}, "X1"), field({"0", "bumpp(x1)"}, "X2")};
  return f;
}

} // namespace

TEST_CASE("filtration of the diagonal pair stabilizes at depth 1") {
  std::vector<VectorField> fam{field({"x1", "0"}, "X1"), field({"0", "x2"}, "X2")};
  auto f = filtration(fam, {pt(0, 0), pt(1, 0), pt(1, 1)});
  CHECK(f.certified);
  CHECK(f.certified_depth == 1);
  CHECK(f.entries.size() == 2);
  CHECK(f.rank(0) == 0);
  CHECK(f.rank(1) == 1);
  CHECK(f.rank(2) == 2);
}

TEST_CASE("filtration of {d1, x1 d2} is the full tangent bundle") {
  std::vector<VectorField> fam{field({"1", "0"}, "X1"), field({"0", "x1"}, "X2")};
  auto f = filtration(fam, {pt(0, 0), pt(0, 5), pt(2, -1)});
  CHECK(f.certified);
  CHECK(f.certified_depth == 2);
  REQUIRE(f.entries.size() == 3);
  CHECK(f.entries[2].field == field({"0", "1"}));
  CHECK(f.entries[2].word.str(fam) == "[X1,X2]");
  for (std::size_t s = 0; s < 3; ++s) CHECK(f.rank(s) == 2);
  CHECK(f.ranks[0] == std::vector<int>{1, 2, 2});
}

TEST_CASE("filtration of the flat family is capped and keeps rank 1 on the left") {
  FiltrationOptions o;
  o.depth_cap = 8;
  auto f = filtration(bump_family(), {pt(-1, 0), pt(0, 0), pt(1, 0)}, o);
  CHECK_FALSE(f.certified);
  CHECK(f.generated_depth == 8);
  CHECK(f.rank(0) == 1);
  CHECK(f.rank(1) == 1);
  CHECK(f.rank(2) == 2);
  CHECK(f.note.find("lower bound") != std::string::npos);
}

TEST_CASE("regression pair: same distribution off the flat set, different bracket rank at 0") {
  std::vector<VectorField> smooth{field({"1", "0"}), field({"0", "x1"})};
  CHECK(lie_rank_at(bump_family(), pt(0, 0), 8) == 1);
  CHECK(lie_rank_at(smooth, pt(0, 0), 8) == 2);
}

TEST_CASE("filtration input checks") {
  CHECK_THROWS_AS(filtration({}, {}), std::invalid_argument);
  FiltrationOptions o;
  o.depth_cap = 11;
  CHECK_THROWS_AS(filtration(bump_family(), {}, o), std::invalid_argument);
}

TEST_CASE("heisenberg family") {
  std::vector<VectorField> fam{field({"0", "1", "0"}, "X1"), field({"1", "0", "x2"}, "X2")};
  auto f = filtration(fam, {pt(0, 0, 0), pt(1, 2, 3)});
  CHECK(f.certified);
  CHECK(f.rank(0) == 3);
  CHECK(f.rank(1) == 3);
  auto d = derived_algebra(fam);
  REQUIRE(d.size() == 1);
  CHECK(d[0] == field({"0", "0", "1"}));
}

TEST_CASE("derived_algebra") {
  CHECK(derived_algebra({field({"x1", "0"}), field({"0", "x2"})}).empty());
  auto d = derived_algebra({field({"1", "0"}), field({"0", "x1"})});
  REQUIRE(d.size() == 1);
  CHECK(d[0] == field({"0", "1"}));
}

TEST_CASE("involutivity") {
  auto samples = random_rational_points(3, 10, 3);
  auto h = involutive_pointwise({field({"0", "1", "0"}), field({"1", "0", "x2"})}, samples);
  CHECK_FALSE(h.involutive);
  CHECK(h.witnesses.size() == samples.size());
  CHECK(h.passing.empty());

  std::vector<VectorField> pair{field({"x1^2+x2^2", "0"}), field({"0", "x1^2+x2^2"})};
  auto m = involutive_module(pair, 1);
  CHECK(m.involutive);
  CHECK(m.mode == "module");

  std::vector<VectorField> mixed{field({"x1^2+x2^2", "0"}), field({"0", "x1^4+x2^4"})};
  auto mm = involutive_module(mixed, 8);
  CHECK_FALSE(mm.involutive);
  REQUIRE(mm.witnesses.size() == 1);
  CHECK(mm.witnesses[0].i == 0);
  CHECK(mm.witnesses[0].j == 1);

  std::vector<Point> line;
  for (long a : {-2, -1, 0, 1, 2})
    for (long b : {-1, 0, 1}) line.push_back(pt(a, b));
  line.push_back(Point::exact({make_rational(1, 5), make_rational(0)}));
  CHECK(involutive_pointwise(bump_family(), line).involutive);

  // Passes only on the slice x1 = 0.
  std::vector<VectorField> slice{field({"x1*x3", "1", "0"}), field({"0", "0", "1"})};
  auto s = involutive_pointwise(slice, {pt(0, 1, 2), pt(1, 1, 2), pt(-1, 0, 1), pt(0, -3, 5)});
  CHECK_FALSE(s.involutive);
  REQUIRE(s.passing.size() == 2);
  CHECK(s.passing[0].rational()[0] == 0);
  CHECK(s.passing[1].rational()[0] == 0);
}

TEST_CASE("fixed_time_ideal_rank") {
  auto a = fixed_time_ideal_rank({field({"x1", "0"}), field({"0", "x2"})}, pt(1, 1));
  CHECK(a.ideal_rank == 1);
  CHECK(a.lie_rank == 2);
  CHECK(a.codim == 1);

  auto b = fixed_time_ideal_rank({field({"1", "0"}), field({"0", "x1"})}, pt(0, 0));
  CHECK(b.ideal_rank == 2);
  CHECK(b.codim == 0);

  auto c = fixed_time_ideal_rank({field({"1", "0"})}, pt(3, 4));
  CHECK(c.ideal_rank == 0);
  CHECK(c.lie_rank == 1);
  CHECK(c.codim == 1);
}

TEST_CASE("property: ranks nondecreasing, robust to multiples and rescaling, codim in {0,1}") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> scale(1, 5);
  for (int k = 0; k < 20; ++k) {
    std::vector<VectorField> fam{testing::random_field(rng, 3, 1, "A"), testing::random_field(rng, 3, 1, "B")};
    auto samples = random_rational_points(3, 6, 100 + static_cast<std::uint64_t>(k));
    FiltrationOptions o;
    o.depth_cap = 4;
    auto f = filtration(fam, samples, o);
    for (const auto& seq : f.ranks)
      for (std::size_t d = 1; d < seq.size(); ++d) CHECK(seq[d - 1] <= seq[d]);

    auto aug = fam;
    aug.push_back(fam[0].times(testing::random_polynomial(rng, 3, 1)).renamed("C"));
    o.depth_cap = 5;
    auto g = filtration(aug, samples, o);

    auto resc = fam;
    resc.push_back(fam[1].scaled(make_rational(scale(rng), 3)).renamed("D"));
    resc.push_back(fam[0]);
    o.depth_cap = 4;
    auto h = filtration(resc, samples, o);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      CHECK(g.rank(s) == f.rank(s));
      CHECK(h.rank(s) == f.rank(s));
      auto r = fixed_time_ideal_rank(f, samples[s]);
      CHECK(r.codim >= 0);
      CHECK(r.codim <= 1);
    }
  }
}
