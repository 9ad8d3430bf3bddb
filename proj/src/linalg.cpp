#include "vfkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vfkit {

namespace {

// Reduces v against an echelon list (each row has a leading entry 1 at
// pivot_cols[i]). Returns the multipliers used.
std::vector<Rational> reduce(const std::vector<RationalVector>& rows,
                             const std::vector<std::size_t>& pivot_cols, RationalVector& v) {
  std::vector<Rational> used(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational c = v[pivot_cols[i]];
    if (c == 0) continue;
    used[i] = c;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (rows[i][j] != 0) v[j] -= c * rows[i][j];
  }
  return used;
}

std::optional<std::size_t> leading(const RationalVector& v) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) return j;
  return std::nullopt;
}

struct Echelon {
  std::vector<RationalVector> rows;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> source; // index of the input vector that created each row

  bool insert(RationalVector v, std::size_t src) {
    reduce(rows, pivots, v);
    auto lead = leading(v);
    if (!lead) return false;
    Rational inv = 1 / v[*lead];
    for (auto& x : v) x *= inv;
    // Keep rows fully reduced so later reductions stay one-pass.
    for (auto& r : rows) {
      Rational c = r[*lead];
      if (c == 0) continue;
      for (std::size_t j = 0; j < r.size(); ++j)
        if (v[j] != 0) r[j] -= c * v[j];
    }
    rows.push_back(std::move(v));
    pivots.push_back(*lead);
    source.push_back(src);
    return true;
  }
};

Eigen::MatrixXd as_matrix(const std::vector<Eigen::VectorXd>& vectors, bool normalize) {
  if (vectors.empty()) return {};
  Eigen::MatrixXd m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Eigen::VectorXd c = vectors[i];
    if (normalize) {
      double nrm = c.norm();
      if (nrm > 0.0 && std::isfinite(nrm)) c /= nrm;
    }
    m.col(static_cast<Eigen::Index>(i)) = c;
  }
  return m;
}

} // namespace

int exact_rank(const std::vector<RationalVector>& vectors) {
  return static_cast<int>(exact_basis(vectors).size());
}

std::vector<RationalVector> exact_basis(const std::vector<RationalVector>& vectors) {
  Echelon e;
  for (std::size_t i = 0; i < vectors.size(); ++i) e.insert(vectors[i], i);
  return e.rows;
}

std::vector<std::size_t> exact_pivot_indices(const std::vector<RationalVector>& vectors) {
  Echelon e;
  for (std::size_t i = 0; i < vectors.size(); ++i) e.insert(vectors[i], i);
  return e.source;
}

std::optional<std::vector<Rational>> exact_solve_in_span(const std::vector<RationalVector>& basis,
                                                         const RationalVector& v) {
  if (basis.empty()) {
    for (const auto& x : v)
      if (x != 0) return std::nullopt;
    return std::vector<Rational>{};
  }
  // Solve B c = v with B having the basis vectors as columns via augmented elimination.
  const std::size_t n = v.size(), k = basis.size();
  std::vector<RationalVector> m(n, RationalVector(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = basis[j][i];
    m[i][k] = v[i];
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivot_col_of_row;
  for (std::size_t col = 0; col < k && row < n; ++col) {
    std::size_t p = row;
    while (p < n && m[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational c = m[i][col];
      for (std::size_t j = col; j <= k; ++j) m[i][j] -= c * m[row][j];
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < n; ++i)
    if (m[i][k] != 0) return std::nullopt;
  if (row < k) throw std::invalid_argument("exact_solve_in_span: basis is dependent");
  std::vector<Rational> c(k);
  for (std::size_t i = 0; i < row; ++i) c[pivot_col_of_row[i]] = m[i][k];
  return c;
}

int numeric_rank(const std::vector<Eigen::VectorXd>& vectors, double rel_threshold,
                 bool normalize_columns) {
  if (vectors.empty()) return 0;
  Eigen::MatrixXd m = as_matrix(vectors, normalize_columns);
  if (!m.allFinite()) throw std::domain_error("non-finite vector in rank computation");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_threshold * s(0)) ++r;
  return r;
}

Eigen::MatrixXd numeric_span_basis(const std::vector<Eigen::VectorXd>& vectors,
                                   double rel_threshold, bool normalize_columns) {
  if (vectors.empty()) return {};
  Eigen::MatrixXd m = as_matrix(vectors, normalize_columns);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_threshold * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

double span_residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& v) {
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  Eigen::VectorXd r = v;
  if (basis.cols() > 0) r -= basis * (basis.transpose() * v);
  return r.norm() / nv;
}

std::vector<std::size_t> numeric_pivot_indices(const std::vector<Eigen::VectorXd>& vectors,
                                               double rel_threshold, bool normalize_columns) {
  std::vector<std::size_t> out;
  std::vector<Eigen::VectorXd> chosen;
  int rank = 0;
  const int full = numeric_rank(vectors, rel_threshold, normalize_columns);
  for (std::size_t i = 0; i < vectors.size() && rank < full; ++i) {
    chosen.push_back(vectors[i]);
    int r = numeric_rank(chosen, rel_threshold, normalize_columns);
    if (r > rank) {
      rank = r;
      out.push_back(i);
    } else {
      chosen.pop_back();
    }
  }
  return out;
}

Eigen::VectorXd to_eigen(const RationalVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].get_d();
  return out;
}

} // namespace vfkit
