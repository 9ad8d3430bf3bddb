#pragma once

#include "vfkit/distribution.hpp"
#include "vfkit/liealgebra.hpp"
#include "vfkit/orbit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vfkit {

enum class Integrability { Yes, No, Undetermined };
std::string to_string(Integrability v);

struct FrobeniusWitness {
  std::string kind; // "bracket" or "orbit-dimension"
  Point point;
  /// Generator pair whose bracket leaves the fibre (bracket witnesses).
  std::size_t i = 0, j = 0;
  /// Orbit-dimension witnesses: sampled orbit dimension against the rank.
  int orbit_dimension = 0;
  int rank = 0;
};

struct FrobeniusVerdict {
  bool involutive_pointwise = true;
  /// Set only for polynomial families.
  std::optional<bool> involutive_module;
  int module_degree = 0;
  bool rank_constant = true;
  std::vector<int> grid_ranks;

  Integrability integrable = Integrability::Undetermined;
  /// Which part of the theorem decided, in words.
  std::string clause;
  std::string justification;
  std::vector<FrobeniusWitness> witnesses;
  /// Samples where every bracket stays in the fibre although involutivity
  /// fails elsewhere: candidate isolated integral manifolds.
  std::vector<Point> isolated;
  /// Singular samples whose orbit dimension was compared with the rank.
  std::vector<Point> probed;
};

struct FrobeniusOptions {
  int depth_cap = 6;
  int module_degree = 4;
  WordSampler sampler;
  std::size_t max_orbit_probes = 12;
};

/// Default sample grid: [-1, 1]^n with step 1/2.
std::vector<GridAxis> default_grid(std::size_t n);

/// Decision tree:
///  (a) a bracket leaves the fibre at a sample: not integrable;
///  (b) involutive at every sample with constant sampled rank: integrable;
///  (c) involutive and, for a polynomial family, every bracket is a
///      bounded-degree member of the generator module: integrable;
///  (d) otherwise the sampled orbit dimension is compared with the rank at
///      grid-singular points: larger somewhere means not integrable, else
///      undetermined.
FrobeniusVerdict frobenius_verdict(const Distribution& d, const std::vector<GridAxis>& grid,
                                   FrobeniusOptions options = {});

/// True if the verdict names this point as an obstruction.
bool obstructed_at(const FrobeniusVerdict& v, const Point& p);

struct FlowBoxChart {
  Point base;
  /// The first `rank` adapted generators, flowed in order.
  std::vector<VectorField> generators;
  int rank = 0;
  std::vector<std::vector<double>> parameters;
  std::vector<Point> images;
  /// Largest sine of the angle between a chart tangent and the fibre.
  double residual = 0.0;
  /// Parameter where the residual is attained.
  std::vector<double> worst;
  /// Smallest rank of the chart tangents over the samples.
  int tangent_rank = 0;
  /// Samples whose image has a fibre of rank other than `rank`.
  std::size_t rank_mismatches = 0;
  std::size_t skipped = 0;
  bool accepted = false;
  std::string reason;
};

struct ChartOptions {
  double radius = 0.2;
  int points_per_axis = 5;
  double threshold = 1e-7;
};

/// phi(t) = Phi^{Y_m}_{t_m} o ... o Phi^{Y_1}_{t_1}(x) with Y the adapted
/// generators at x. Tangents come from variational transport. The chart is
/// accepted when every tangent lies in the fibre (residual below threshold),
/// the tangents have rank m, and the fibre keeps rank m across the image.
FlowBoxChart flow_box_chart(const Distribution& d, const Point& x, ChartOptions options = {});

} // namespace vfkit
