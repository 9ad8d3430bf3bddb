#pragma once

#include "vfkit/expr.hpp"
#include "vfkit/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vfkit {

/// A point of R^n, either exact (rational coordinates) or floating.
class Point {
public:
  Point() = default;

  static Point exact(std::vector<Rational> coords);
  static Point real(std::vector<double> coords);

  bool is_exact() const { return exact_.has_value(); }
  std::size_t dim() const { return values_.size(); }

  /// Rational coordinates. Throws std::logic_error for floating points.
  const std::vector<Rational>& rational() const;
  /// Floating coordinates; available for both kinds.
  const std::vector<double>& values() const { return values_; }

  std::string str() const;

  friend bool operator==(const Point& a, const Point& b);

private:
  std::optional<std::vector<Rational>> exact_;
  std::vector<double> values_;
};

/// Parses "1,-1/2,0.25". Numbers become exact rationals. Throws ParseError
/// for a malformed coordinate and std::invalid_argument for empty text.
Point parse_point(std::string_view text);

/// Value of a scalar expression at a point: exact when possible.
struct Scalar {
  std::optional<Rational> exact;
  double value = 0.0;
};

Scalar evaluate(const Expr& e, const Point& p);

/// Seeded exact sample points with coordinates k/q, q in 1..7 and
/// |k/q| <= radius. Deterministic for a given seed.
std::vector<Point> random_rational_points(std::size_t n, std::size_t count, std::uint64_t seed,
                                          int radius = 2);

} // namespace vfkit
