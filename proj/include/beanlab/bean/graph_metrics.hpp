#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::bean {

/// Bipartite graph between the N_l source neurons (rows) and the N_{l+1}
/// target neurons (columns) of a weight matrix.
struct BipartiteGraph {
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::vector<std::uint8_t> adjacency;  ///< sources x targets, row-major

  bool edge(std::size_t i, std::size_t k) const { return adjacency[i * targets + k] != 0; }
};

/// Edge (i, k) present iff |tanh(gamma w_ik)| >= tau.
BipartiteGraph threshold_graph(const Matrix& w_next, double tau, double gamma = 1.0);

struct FourCycleCounts {
  std::uint64_t three_paths = 0;    ///< undirected simple paths with three edges
  std::uint64_t four_cycles = 0;
  std::uint64_t closed_paths = 0;   ///< 4 per four-cycle
  double coefficient = 0.0;         ///< closed_paths / three_paths, 0 when there are none
};

FourCycleCounts count_four_cycles(const BipartiteGraph& g);

/// Two-mode clustering coefficient of the thresholded connectivity graph.
/// Throws ConfigError unless tau is in (0, 1).
double c4_coefficient(const Matrix& w_next, double tau = 0.1, double gamma = 1.0);

/// Potential-synapse proximity pi(j, m) = sum_{i,k} W_jk W_ik W_im on raw weights.
/// j indexes a row and m a column of w.
double big_ado_proximity(const Matrix& w, std::size_t j, std::size_t m);

/// All proximities at once: W Wᵀ W.
Matrix big_ado_matrix(const Matrix& w);

}  // namespace beanlab::bean
