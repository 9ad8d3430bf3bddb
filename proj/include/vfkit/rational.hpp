#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace vfkit {

/// Exact rational scalar. mpq_class keeps numerator/denominator reduced with a
/// positive denominator after canonicalize(), which every helper here enforces.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q);

/// Parses "3", "-3/4" or a finite decimal such as "0.25" / "-1e-3" exactly.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }

} // namespace vfkit
