#include "vfkit/errors.hpp"
#include "vfkit/system.hpp"

#include <doctest.h>

using namespace vfkit;

namespace {

ParseError parse_failure(std::string_view text) {
  try {
    parse_system(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("", 0, 0);
}

} // namespace

TEST_CASE("system files") {
  auto s = parse_system("# comment\n"
                        "system half-planes dim 2\n"
                        "\n"
                        "field X1 = (1, 0) on x1 < 1\n"
                        "field X2 = (0, x1*(x2-1)) on x1 > -1/2 and x2<3\r\n");
  CHECK(s.name == "half-planes");
  CHECK(s.dim == 2);
  REQUIRE(s.fields.size() == 2);
  CHECK(s.field("X1").domain().contains(std::vector<double>{0.0, 0.0}));
  CHECK_FALSE(s.field("X1").domain().contains(std::vector<double>{1.0, 0.0}));
  CHECK_FALSE(s.field("X2").domain().contains(std::vector<double>{-0.5, 0.0}));
  CHECK_FALSE(s.field("X2").domain().contains(std::vector<double>{0.0, 3.0}));
  CHECK(s.field("X2")[1] == parse_expr("x1*x2 - x1", 2));

  auto again = parse_system(s.str());
  CHECK(again.str() == s.str());
  REQUIRE(again.fields.size() == 2);
  CHECK(again.fields[1] == s.fields[1]);
  CHECK(again.fields[1].domain() == s.fields[1].domain());

  auto sel = s.select("X2, X1");
  CHECK(sel[0].name() == "X2");
  CHECK(s.select("").size() == 2);
  CHECK_THROWS_AS(s.select("X1,Y"), std::out_of_range);
}

TEST_CASE("system file errors carry line and column") {
  auto e = parse_failure("system s dim 2\nfield X = (x1, x2 +* 1)\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 20);

  e = parse_failure("system s dim 2\nfield X = (x1)\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 11);

  e = parse_failure("system s dim 2\nfield X = (x1, x2) on x3 < 1\n");
  CHECK(e.column() == 23);

  e = parse_failure("system s dim 2\nfield X = (x1, x2) on x1 = 1\n");
  CHECK(e.column() == 26);

  e = parse_failure("system s dim 2\nfield X = (x1, x2)\nfield X = (0, 0)\n");
  CHECK(e.line() == 3);
  CHECK(e.column() == 7);

  e = parse_failure("\n\nsystm s dim 2\n");
  CHECK(e.line() == 3);
  CHECK(e.column() == 1);

  CHECK_THROWS_AS(parse_system("system s dim 0\n"), ParseError);
  CHECK_THROWS_AS(parse_system("system s dim 2\n"), ParseError);
  CHECK_THROWS_AS(parse_system(""), ParseError);
  CHECK_THROWS_AS(parse_system("system s dim 2\nfield X = (x1, x2\n"), ParseError);
  CHECK_THROWS_AS(load_system("/nonexistent/file.vf"), std::runtime_error);
}
