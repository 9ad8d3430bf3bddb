#pragma once

#include "vfkit/rational.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace vfkit {

using RationalVector = std::vector<Rational>;

/// Rank of a list of rational vectors by exact elimination.
int exact_rank(const std::vector<RationalVector>& vectors);

/// Row-echelon basis of the span (pivot rows), exact.
std::vector<RationalVector> exact_basis(const std::vector<RationalVector>& vectors);

/// Coefficients c with sum c_i * basis[i] = v, or nullopt if v is not in the span.
/// `basis` must be linearly independent.
std::optional<std::vector<Rational>> exact_solve_in_span(const std::vector<RationalVector>& basis,
                                                         const RationalVector& v);

/// Indices of a maximal independent subset, chosen greedily in order.
std::vector<std::size_t> exact_pivot_indices(const std::vector<RationalVector>& vectors);

/// Numeric rank of the matrix whose columns are `vectors`, counting singular
/// values above rel_threshold * sigma_max. With normalize_columns every nonzero
/// column is scaled to unit length first (rank is invariant under that).
int numeric_rank(const std::vector<Eigen::VectorXd>& vectors, double rel_threshold,
                 bool normalize_columns = false);

/// Orthonormal basis of the numeric span (same thresholding as numeric_rank).
Eigen::MatrixXd numeric_span_basis(const std::vector<Eigen::VectorXd>& vectors,
                                   double rel_threshold, bool normalize_columns = false);

/// Distance from v to the column span of an orthonormal basis, divided by |v|
/// (sine of the angle). Returns 0 for v = 0.
double span_residual(const Eigen::MatrixXd& orthonormal_basis, const Eigen::VectorXd& v);

/// Greedy numeric pivot selection: indices whose addition increases the rank.
std::vector<std::size_t> numeric_pivot_indices(const std::vector<Eigen::VectorXd>& vectors,
                                               double rel_threshold, bool normalize_columns);

Eigen::VectorXd to_eigen(const RationalVector& v);

} // namespace vfkit
