#pragma once

#include "vfkit/flow.hpp"
#include "vfkit/point.hpp"
#include "vfkit/vectorfield.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vfkit {

enum class WordConstraint { Free, ZeroSum, NetTime };

/// Seeded random flow words. Word i depends only on (seed, i), so any subset
/// of indices can be produced in any order with identical results.
struct WordSampler {
  std::uint64_t seed = 1;
  int max_length = 6;
  double max_time = 0.5;
  std::size_t count = 200;
  WordConstraint constraint = WordConstraint::Free;
  /// Target net time for WordConstraint::NetTime.
  double net_time = 0.0;

  /// Lengths are uniform on {1..L} ({2..L} for constrained words), letters
  /// uniform, times uniform on [-tau, tau]; a constrained word's last time is
  /// the net time minus the sum of the others.
  FlowWord word(std::size_t index, std::size_t family_size) const;
  std::vector<FlowWord> words(std::size_t family_size) const;
};

/// Relative singular value cutoff for ranks of pushed-forward vectors.
inline constexpr double kOrbitRankThreshold = 1e-7;

struct OrbitTangentReport {
  /// Point whose orbit is probed (for fixed-time reports, the reached point).
  Point point;
  std::vector<Eigen::VectorXd> vectors;
  /// Sampled orbit dimension, a lower bound of the true one.
  int dimension = 0;
  /// True when the bound is known to be attained: it equals the ambient
  /// dimension or a certified bracket rank.
  bool exact = false;
  std::size_t words_used = 0;
  std::size_t words_skipped = 0;
  /// Bracket rank at the point, for the cross-check dimension >= lie_rank.
  int lie_rank = 0;
  bool consistent = true;

  // Fixed-time reports only.
  std::optional<int> fixed_time_dimension;
  std::optional<int> ideal_rank;
  std::optional<int> gap;
  std::optional<double> invariant_drift;
  std::string note;
};

struct OrbitOptions {
  int depth_cap = 6;
};

/// Rank of the pushforwards (Phi_w)_* X(p) over sampled words and all
/// generators, including the empty word. Words that leave a domain are
/// skipped and counted; throws std::runtime_error when every word fails.
OrbitTangentReport orbit_dimension(const std::vector<VectorField>& family, const Point& p,
                                   const WordSampler& sampler, OrbitOptions options = {});

/// Reaches x from p by a word of net time T, then ranks the differences of
/// the pushforwards at x over zero-sum words (the linear part of their affine
/// hull). With `invariant` set, reports the largest change of that function
/// along the sampled zero-sum words from x.
OrbitTangentReport fixed_time_dimension(const std::vector<VectorField>& family, const Point& p,
                                        double T, const WordSampler& sampler,
                                        const std::optional<Expr>& invariant = std::nullopt,
                                        OrbitOptions options = {});

struct ChowVerdict {
  bool bracket_generating = false;
  /// Smallest depth at which every sample reached full rank (when generating).
  int depth = 0;
  int depth_cap = 0;
  std::vector<int> ranks;
  std::string verdict;
  std::string note;
  /// Sampled orbit dimensions at the samples where the test failed.
  std::vector<int> orbit_dimensions;
};

/// Positive only when the bracket rank is full at every sample. Otherwise the
/// result is "not established"; non-controllability is never claimed.
ChowVerdict chow_verdict(const std::vector<VectorField>& family, const std::vector<Point>& samples,
                         int depth_cap, const WordSampler& sampler);

/// x' = A x + b u on the plane.
struct LinearPair {
  std::array<std::array<Rational, 2>, 2> a;
  std::array<Rational, 2> b;

  bool is_canonical() const;
  VectorField field(const Rational& u) const;
};

struct SteeringResult {
  double u1 = 0.0, u2 = 0.0;
  std::vector<Point> trajectory;
  double landing_error = 0.0;
  std::string method; // "closed-form" or "general"
};

/// Two constant controls u1 then u2, each held for T/2, steering `from` to
/// `to`. Throws std::invalid_argument for T = 0 or an uncontrollable pair.
SteeringResult steer_linear(const LinearPair& pair, const Point& from, const Point& to, double T);

} // namespace vfkit
