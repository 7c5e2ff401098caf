#include "beanlab/analysis/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab::analysis {
namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Matrix seed_plus_plus(const Matrix& x, std::size_t k, SeededRng& rng) {
  const std::size_t n = x.rows();
  Matrix centroids(k, x.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::size_t pick = rng.uniform_index(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(c).begin());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(x.row(i), centroids.row(c)));
      total += d2[i];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      pick = rng.uniform_index(n);
      continue;
    }
    double target = rng.uniform() * total;
    pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centroids;
}

/// Assign every point to its nearest centroid (lowest index on ties); returns inertia.
double assign(const Matrix& x, const Matrix& centroids, std::vector<std::size_t>& labels,
              std::vector<double>& dist) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      const double d = sq_dist(x.row(i), centroids.row(c));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

ClusterAssignment lloyd(const Matrix& x, std::size_t k, SeededRng& rng, std::size_t max_iterations) {
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  ClusterAssignment out;
  out.centroids = seed_plus_plus(x, k, rng);
  out.labels.assign(n, k);
  std::vector<std::size_t> labels(n, 0);
  std::vector<double> dist(n, 0.0);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const double inertia = assign(x, out.centroids, labels, dist);
    out.inertia_trace.push_back(inertia);
    out.inertia = inertia;
    const bool fixpoint = labels == out.labels;
    out.labels = labels;
    if (fixpoint) break;

    Matrix sums(k, f);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = sums.row(labels[i]);
      auto src = x.row(i);
      for (std::size_t j = 0; j < f; ++j) dst[j] += src[j];
      ++counts[labels[i]];
    }
    std::vector<std::uint8_t> taken(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
      auto dst = out.centroids.row(c);
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < f; ++j) dst[j] = sums(c, j) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: move it onto the worst-served point not yet used for re-seeding.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i] && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      taken[far] = 1;
      dist[far] = 0.0;
      std::copy(x.row(far).begin(), x.row(far).end(), dst.begin());
    }
  }
  return out;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts) {
  if (k == 0) throw InputError("kmeans: k must be positive");
  if (x.rows() < k) {
    throw InputError("kmeans: " + std::to_string(x.rows()) + " points cannot form " +
                     std::to_string(k) + " clusters");
  }
  ClusterAssignment best;
  bool have_best = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(opts.restarts, 1); ++r) {
    SeededRng rng(derive_seed(seed, {r}));
    ClusterAssignment run = lloyd(x, k, rng, std::max<std::size_t>(opts.max_iterations, 1));
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

double silhouette_score(const Matrix& x, std::span<const std::size_t> labels) {
  if (labels.size() != x.rows()) throw ShapeError("silhouette: label count does not match rows");
  if (labels.empty()) throw InputError("silhouette: no points");
  const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] == 0) throw InputError("silhouette: cluster " + std::to_string(c) + " is empty");
  }
  if (k < 2) throw InputError("silhouette: needs at least two clusters");

  const std::size_t n = x.rows();
  std::vector<double> sums(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[labels[i]] == 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sums[labels[j]] += std::sqrt(sq_dist(x.row(i), x.row(j)));
    }
    const double a = sums[labels[i]] / static_cast<double>(sizes[labels[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != labels[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::vector<SilhouetteSweepEntry> silhouette_sweep(const Matrix& x, std::size_t k_min,
                                                   std::size_t k_max, std::uint64_t seed,
                                                   const KMeansOptions& opts) {
  std::vector<SilhouetteSweepEntry> out;
  for (std::size_t k = std::max<std::size_t>(k_min, 2); k <= k_max && k < x.rows(); ++k) {
    const ClusterAssignment a = kmeans(x, k, seed, opts);
    double s = 0.0;
    // Degenerate data can leave a cluster id unused; report 0 rather than fail the sweep.
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : a.labels) ++sizes[l];
    if (std::all_of(sizes.begin(), sizes.end(), [](std::size_t c) { return c > 0; })) {
      s = silhouette_score(x, a.labels);
    }
    out.push_back({k, s, a.inertia});
  }
  return out;
}

}  // namespace beanlab::analysis
