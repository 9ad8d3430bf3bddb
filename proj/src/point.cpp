#include "vfkit/point.hpp"

#include "vfkit/errors.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace vfkit {

Point Point::exact(std::vector<Rational> coords) {
  Point p;
  p.values_.reserve(coords.size());
  for (auto& c : coords) {
    c.canonicalize();
    p.values_.push_back(c.get_d());
  }
  p.exact_ = std::move(coords);
  return p;
}

Point Point::real(std::vector<double> coords) {
  Point p;
  p.values_ = std::move(coords);
  return p;
}

const std::vector<Rational>& Point::rational() const {
  if (!exact_) throw std::logic_error("point has floating coordinates");
  return *exact_;
}

std::string Point::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) os << ", ";
    if (exact_) os << to_string((*exact_)[i]);
    else os << values_[i];
  }
  os << ")";
  return os.str();
}

bool operator==(const Point& a, const Point& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
  return a.values() == b.values();
}

Point parse_point(std::string_view text) {
  std::vector<Rational> coords;
  std::string s(text);
  if (s.find_first_not_of(" \t") == std::string::npos)
    throw std::invalid_argument("empty point");
  std::size_t start = 0;
  for (;;) {
    auto comma = s.find(',', start);
    try {
      coords.push_back(parse_rational(s.substr(start, comma - start)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("bad coordinate: ") + e.what(), 1, static_cast<int>(start) + 1);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Point::exact(std::move(coords));
}

Scalar evaluate(const Expr& e, const Point& p) {
  Scalar s;
  if (p.is_exact()) {
    s.exact = eval_exact(e, p.rational());
    if (s.exact) {
      s.value = s.exact->get_d();
      return s;
    }
  }
  s.value = eval(e, p.values());
  return s;
}

std::vector<Point> random_rational_points(std::size_t n, std::size_t count, std::uint64_t seed,
                                          int radius) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> den(1, 7);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Rational> c;
    for (std::size_t i = 0; i < n; ++i) {
      const int q = den(rng);
      std::uniform_int_distribution<int> num(-radius * q, radius * q);
      c.push_back(make_rational(num(rng), q));
    }
    out.push_back(Point::exact(std::move(c)));
  }
  return out;
}

} // namespace vfkit
