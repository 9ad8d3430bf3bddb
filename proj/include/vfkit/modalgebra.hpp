#pragma once

#include "vfkit/expr.hpp"
#include "vfkit/vectorfield.hpp"

#include <string>
#include <vector>

namespace vfkit {

/// Is `target` in the module generated by `generators` over polynomial
/// multipliers of total degree <= degree?
struct MembershipQuery {
  VectorField target;
  std::vector<VectorField> generators;
  int degree = 0;
};

/// Either a verified expression target = sum multipliers[i] * generators[i],
/// or a refutation that holds only up to the searched degree.
struct MembershipCertificate {
  bool member = false;
  std::vector<Expr> multipliers;
  int degree = 0;

  std::string verdict() const;
};

inline constexpr int kDefaultDegreeCap = 12;

/// Solves the linear system for the unknown multiplier coefficients exactly
/// over the rationals. A negative answer is a semi-decision: it does not rule
/// out membership with multipliers of higher degree.
/// Throws NotPolynomial for non-polynomial input and std::out_of_range when
/// degree exceeds cap.
MembershipCertificate member_bounded(const MembershipQuery& q, int cap = kDefaultDegreeCap);

/// member_bounded for several targets sharing one elimination.
std::vector<MembershipCertificate> member_bounded_all(const std::vector<VectorField>& targets,
                                                      const std::vector<VectorField>& generators,
                                                      int degree, int cap = kDefaultDegreeCap);

/// Scalar (ideal) specialization over variables x1..xn, n inferred from the
/// expressions when 0.
MembershipCertificate ideal_member_bounded(const Expr& target, const std::vector<Expr>& generators,
                                           int degree, int n = 0, int cap = kDefaultDegreeCap);

/// True iff every field of `a` is a bounded-degree member of the module of `b`.
bool module_contained_bounded(const std::vector<VectorField>& a, const std::vector<VectorField>& b,
                              int degree, int cap = kDefaultDegreeCap);

} // namespace vfkit
