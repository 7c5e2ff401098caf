#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beanlab/bean/correlation.hpp"
#include "beanlab/linalg/matrix.hpp"

namespace beanlab::analysis {

struct PcaResult {
  Matrix projection;               ///< n x 2
  Matrix components;               ///< 2 x d, unit rows
  double eigenvalues[2] = {0, 0};  ///< covariance eigenvalues of the two components
  double total_variance = 0.0;     ///< trace of the covariance
};

/// Centers the columns, finds the two leading covariance eigenvectors by power
/// iteration with deflation (tolerance 1e-9, at most 1000 iterations) and
/// projects onto them. Each component is signed so its largest-magnitude
/// loading is positive. Covariance uses the n - 1 denominator. Throws
/// InputError for fewer than two rows or zero variance.
PcaResult pca_2d(const Matrix& x);

struct Reordered {
  Matrix matrix;
  std::vector<std::size_t> permutation;  ///< new position -> original index
};

/// Symmetric permutation grouping equal labels together (stable by label, then index).
Reordered reorder_by_cluster(const Matrix& a, std::span<const std::size_t> labels);
Reordered reorder_by_cluster(const bean::CorrelationMatrix& a, std::span<const std::size_t> labels);

}  // namespace beanlab::analysis
