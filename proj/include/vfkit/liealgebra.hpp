#pragma once

#include "vfkit/point.hpp"
#include "vfkit/vectorfield.hpp"

#include <string>
#include <vector>

namespace vfkit {

/// Left-nested bracket [X_{i_k}, [..., [X_{i_2}, X_{i_1}]...]], stored as
/// i_1, ..., i_k. A word of length one is a bare generator.
struct BracketWord {
  std::vector<std::size_t> letters;

  int depth() const { return static_cast<int>(letters.size()); }
  std::string str(const std::vector<VectorField>& family) const;
};

struct FiltrationEntry {
  BracketWord word;
  VectorField field;
};

struct FiltrationOptions {
  int depth_cap = 6;
  /// Multiplier degree for the stabilization certificate.
  int module_degree = 4;
  /// Generation stops (and is reported as capped) beyond this many words.
  std::size_t max_words = 2000;
};

inline constexpr int kMaxDepthCap = 10;

struct LieFiltration {
  std::vector<VectorField> family;
  /// Surviving words ordered by depth. A word that is a rational linear
  /// combination of earlier words (in particular zero or a multiple of one) is
  /// dropped.
  std::vector<FiltrationEntry> entries;
  /// Deepest depth for which words were generated.
  int generated_depth = 0;
  int depth_cap = 0;

  std::vector<Point> samples;
  /// ranks[s][k-1] is the rank of the depth <= k words at samples[s].
  std::vector<std::vector<int>> ranks;

  /// Certified: the depth <= certified_depth words generate every deeper word
  /// as a polynomial module (checked at module_degree). Otherwise the ranks
  /// are lower bounds at the cap.
  bool certified = false;
  int certified_depth = 0;
  int module_degree = 0;
  std::string note;

  std::vector<VectorField> fields_up_to(int depth) const;
  std::vector<VectorField> fields() const { return fields_up_to(generated_depth); }
  /// Final rank at samples[s].
  int rank(std::size_t s) const { return ranks.at(s).empty() ? 0 : ranks[s].back(); }
};

/// Throws std::invalid_argument when the depth cap exceeds kMaxDepthCap or
/// the family is empty.
LieFiltration filtration(const std::vector<VectorField>& family, const std::vector<Point>& samples,
                         FiltrationOptions options = {});

/// Rank of the full filtration at one point.
int lie_rank_at(const std::vector<VectorField>& family, const Point& p, int depth_cap = 6);

/// Surviving bracket words of depth >= 2 up to the cap.
std::vector<VectorField> derived_algebra(const std::vector<VectorField>& family, int depth_cap = 6);

struct InvolutivityWitness {
  std::size_t i = 0, j = 0;
  /// Failing sample (pointwise mode only).
  std::optional<Point> point;
};

struct InvolutivityReport {
  bool involutive = true;
  std::string mode; // "pointwise" or "module"
  int degree = 0;   // module mode
  std::vector<InvolutivityWitness> witnesses;
  /// Samples at which every bracket lies in the fibre (pointwise mode).
  std::vector<Point> passing;
};

/// Every pairwise bracket value lies in the span of the generator values.
InvolutivityReport involutive_pointwise(const std::vector<VectorField>& family,
                                        const std::vector<Point>& samples);

/// Every pairwise bracket is a bounded-degree member of the generator module.
InvolutivityReport involutive_module(const std::vector<VectorField>& family, int degree);

struct FixedTimeRank {
  int ideal_rank = 0;
  int lie_rank = 0;
  int codim = 0;
};

/// Rank at p of span{X_i(p) - X_1(p)} together with the derived algebra,
/// against the rank of the whole filtration. Throws std::logic_error if the
/// codimension is not 0 or 1.
FixedTimeRank fixed_time_ideal_rank(const std::vector<VectorField>& family, const Point& p,
                                    int depth_cap = 6);
/// Same, reusing a computed filtration of the family.
FixedTimeRank fixed_time_ideal_rank(const LieFiltration& f, const Point& p);

} // namespace vfkit
