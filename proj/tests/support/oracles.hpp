#pragma once

// Literal, loop-for-loop evaluations of the definitions, written independently
// of the library's matrix formulations.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::oracle {

inline double strength(double w, double gamma) { return std::fabs(std::tanh(gamma * w)); }

inline Matrix first_order(const Matrix& w, double gamma) {
  const std::size_t n = w.rows(), m = w.cols();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += strength(w(i, k), gamma) * strength(w(j, k), gamma);
      a(i, j) = m ? s / static_cast<double>(m) : 0.0;
    }
  return a;
}

inline Matrix second_order(const Matrix& w, double gamma) {
  const std::size_t n = w.rows(), m = w.cols();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t q = 0; q < m; ++q)
          s += strength(w(i, k), gamma) * strength(w(j, k), gamma) * strength(w(i, q), gamma) *
               strength(w(j, q), gamma);
      a(i, j) = m ? s / static_cast<double>(m * m) : 0.0;
    }
  return a;
}

/// 1/(S N^2) sum_s sum_i sum_j A_ij d(h_si, h_sj).
inline double bean_loss(const Matrix& a, const Matrix& h, bool square) {
  const std::size_t s_count = h.rows(), n = h.cols();
  double total = 0.0;
  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double diff = h(s, i) - h(s, j);
        total += a(i, j) * (square ? diff * diff : std::fabs(diff));
      }
  return total / (static_cast<double>(s_count) * static_cast<double>(n * n));
}

/// Closed 3-paths over all 3-paths, enumerating node sequences a-b-c-d with
/// alternating modes; each undirected path is seen twice (once per direction).
inline double c4(const std::vector<std::vector<bool>>& adj) {
  const std::size_t ns = adj.size(), nt = ns ? adj[0].size() : 0;
  double paths = 0.0, closed = 0.0;
  // Paths starting at a source: s0 - t0 - s1 - t1.
  for (std::size_t s0 = 0; s0 < ns; ++s0)
    for (std::size_t t0 = 0; t0 < nt; ++t0) {
      if (!adj[s0][t0]) continue;
      for (std::size_t s1 = 0; s1 < ns; ++s1) {
        if (s1 == s0 || !adj[s1][t0]) continue;
        for (std::size_t t1 = 0; t1 < nt; ++t1) {
          if (t1 == t0 || !adj[s1][t1]) continue;
          paths += 1.0;
          if (adj[s0][t1]) closed += 1.0;
        }
      }
    }
  // Paths starting at a target: t0 - s0 - t1 - s1.
  for (std::size_t t0 = 0; t0 < nt; ++t0)
    for (std::size_t s0 = 0; s0 < ns; ++s0) {
      if (!adj[s0][t0]) continue;
      for (std::size_t t1 = 0; t1 < nt; ++t1) {
        if (t1 == t0 || !adj[s0][t1]) continue;
        for (std::size_t s1 = 0; s1 < ns; ++s1) {
          if (s1 == s0 || !adj[s1][t1]) continue;
          paths += 1.0;
          if (adj[s1][t0]) closed += 1.0;
        }
      }
    }
  return paths > 0.0 ? closed / paths : 0.0;
}

/// pi(j, m) = sum_i sum_k W_jk W_ik W_im.
inline double big_ado(const Matrix& w, std::size_t j, std::size_t m) {
  double total = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t k = 0; k < w.cols(); ++k) total += w(j, k) * w(i, k) * w(i, m);
  return total;
}

/// Direct definition: a = mean distance to the rest of the own cluster,
/// b = smallest mean distance to another cluster, singletons score 0.
inline double silhouette(const Matrix& x, std::span<const std::size_t> labels) {
  const std::size_t n = x.rows();
  std::size_t k = 0;
  for (auto l : labels) k = std::max(k, l + 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> dist_sum(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (std::size_t f = 0; f < x.cols(); ++f) d2 += (x(i, f) - x(j, f)) * (x(i, f) - x(j, f));
      dist_sum[labels[j]] += std::sqrt(d2);
      ++count[labels[j]];
    }
    if (count[labels[i]] == 0) continue;
    const double a = dist_sum[labels[i]] / static_cast<double>(count[labels[i]]);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != labels[i] && count[c] > 0) b = std::min(b, dist_sum[c] / static_cast<double>(count[c]));
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

/// (mu_max - mu_rest) / (mu_max + mu_rest) for one neuron's class means.
inline double selectivity(const std::vector<double>& means) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < means.size(); ++c)
    if (means[c] > means[best]) best = c;
  double rest = 0.0;
  for (std::size_t c = 0; c < means.size(); ++c)
    if (c != best) rest += means[c];
  rest /= static_cast<double>(means.size() - 1);
  const double denom = means[best] + rest;
  return denom > 0.0 ? (means[best] - rest) / denom : 0.0;
}

}  // namespace beanlab::oracle
