#pragma once

#include "vfkit/point.hpp"
#include "vfkit/vectorfield.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace vfkit {

/// Pointwise span of a finite generator family.
class Distribution {
public:
  /// Throws std::invalid_argument for an empty list or mixed dimensions.
  explicit Distribution(std::vector<VectorField> generators);

  const std::vector<VectorField>& generators() const { return generators_; }
  std::size_t dim() const { return dim_; }
  bool is_polynomial() const;

private:
  std::vector<VectorField> generators_;
  std::size_t dim_ = 0;
};

/// Relative singular value cutoff for floating ranks.
inline constexpr double kRankThreshold = 1e-9;

enum class RankMethod { ExactRational, SvdTolerance };
std::string to_string(RankMethod m);

struct RankReport {
  Point point;
  int rank = 0;
  RankMethod method = RankMethod::ExactRational;
  /// Generators whose values form a basis of the fibre.
  std::vector<std::size_t> witnesses;
  /// Generators whose domain does not contain the point.
  std::vector<std::size_t> excluded;
};

/// Rank of a list of field values: exact if all are exact, else SVD on
/// column-normalized values so that flat but nonzero values still count.
int value_rank(const std::vector<FieldValue>& values, RankMethod* method = nullptr,
               std::vector<std::size_t>* witnesses = nullptr);

/// Throws std::domain_error when no generator is defined at p.
RankReport rank_at(const Distribution& d, const Point& p);

struct GridAxis {
  int var = 1;
  Rational lo, hi, step;
};

/// Parses "x1=-1:1:0.25,x2=-1:1:0.25"; every variable must appear once.
std::vector<GridAxis> parse_grid(std::string_view spec, std::size_t n);
std::vector<Point> grid_points(const std::vector<GridAxis>& axes);

struct GridClassification {
  std::vector<Point> points;
  std::vector<int> ranks;
  /// Sampled-regular: the rank is locally constant at the probe radius.
  std::vector<bool> regular;
  double regular_density = 0.0;
};

/// A point is sampled-regular when probes at offsets step/2 and step/64
/// (along each axis in both directions and in a few seeded random
/// directions) have its rank.
GridClassification classify_grid(const Distribution& d, const std::vector<GridAxis>& axes,
                                 std::uint64_t seed = 0x5eed);

struct SingularLocus {
  int generic_rank = 0;
  /// All nonzero m x m minors of the n x k component matrix.
  std::vector<Expr> minors;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Generic rank from exact rank at seeded rational samples, then the minors.
/// Verifies on the samples that rank < m iff all minors vanish.
/// Throws NotPolynomial for non-polynomial generators.
SingularLocus singular_locus_minors(const Distribution& d, std::uint64_t seed = 0x5eed,
                                    std::size_t samples = 200);

/// Minor polynomial of rows/cols (0-based) of a square selection by cofactor expansion.
Expr determinant(const std::vector<std::vector<Expr>>& m);

struct AdaptedGenerators {
  std::vector<VectorField> generators;
  /// The first `rank` generators are a basis of the fibre; the rest vanish at the point.
  int rank = 0;
  RankMethod method = RankMethod::ExactRational;
};

/// Reorders and recombines the generators: a basis of the fibre first, then
/// every other generator minus its expansion in that basis.
AdaptedGenerators adapt_generators(const Distribution& d, const Point& p);

struct InvarianceWitness {
  std::string kind; // "bracket" or "flow"
  std::size_t generator = 0;
  Point point;
  double time = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;
};

struct InvarianceReport {
  bool bracket_invariant = true;
  bool flow_invariant = true;
  std::vector<InvarianceWitness> witnesses;
  /// Flow probes abandoned because the trajectory left a domain.
  std::size_t skipped = 0;
};

inline constexpr double kFlowInvarianceTolerance = 1e-7;

/// Bracket test: [X, g](p) lies in the fibre at p. Flow test: the pushforward
/// of g by the flow of X for time t lies in the fibre at p, up to
/// kFlowInvarianceTolerance relative to max(1, |value|).
InvarianceReport invariance_check(const Distribution& d, const VectorField& x,
                                  const std::vector<Point>& samples,
                                  const std::vector<double>& times);

} // namespace vfkit
