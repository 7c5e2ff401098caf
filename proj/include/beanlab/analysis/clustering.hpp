#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::analysis {

struct ClusterAssignment {
  std::vector<std::size_t> labels;    ///< one per row, each < k
  Matrix centroids;                   ///< k x features
  double inertia = 0.0;               ///< sum of squared distances to assigned centroids
  std::vector<double> inertia_trace;  ///< after every assignment step of the winning restart
};

struct KMeansOptions {
  std::size_t restarts = 20;
  std::size_t max_iterations = 300;
};

/// k-means++ seeding and Lloyd iterations to an assignment fixpoint, best of
/// `restarts` seeded runs by inertia. An emptied cluster is re-seeded at the
/// point farthest from its centroid. Throws InputError when rows < k or k = 0.
ClusterAssignment kmeans(const Matrix& x, std::size_t k, std::uint64_t seed,
                         const KMeansOptions& opts = {});

/// Mean silhouette with Euclidean distances; singleton clusters contribute 0.
/// Throws InputError for fewer than two clusters or an empty cluster id.
double silhouette_score(const Matrix& x, std::span<const std::size_t> labels);

struct SilhouetteSweepEntry {
  std::size_t k = 0;
  double silhouette = 0.0;
  double inertia = 0.0;
};

/// kmeans + silhouette for every k in [k_min, k_max] (k <= rows - 1).
std::vector<SilhouetteSweepEntry> silhouette_sweep(const Matrix& x, std::size_t k_min,
                                                   std::size_t k_max, std::uint64_t seed,
                                                   const KMeansOptions& opts = {});

}  // namespace beanlab::analysis
