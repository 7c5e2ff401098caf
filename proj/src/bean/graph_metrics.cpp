#include "beanlab/bean/graph_metrics.hpp"

#include <cmath>
#include <string>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::bean {

BipartiteGraph threshold_graph(const Matrix& w_next, double tau, double gamma) {
  BipartiteGraph g{w_next.rows(), w_next.cols(), std::vector<std::uint8_t>(w_next.size(), 0)};
  auto w = w_next.values();
  for (std::size_t i = 0; i < w.size(); ++i) {
    g.adjacency[i] = std::fabs(std::tanh(gamma * w[i])) >= tau ? 1 : 0;
  }
  return g;
}

FourCycleCounts count_four_cycles(const BipartiteGraph& g) {
  std::vector<std::uint64_t> deg_src(g.sources, 0);
  std::vector<std::uint64_t> deg_tgt(g.targets, 0);
  for (std::size_t i = 0; i < g.sources; ++i) {
    for (std::size_t k = 0; k < g.targets; ++k) {
      if (g.edge(i, k)) {
        ++deg_src[i];
        ++deg_tgt[k];
      }
    }
  }
  FourCycleCounts out;
  // Every 3-path has a unique middle edge (j, k): i - k - j - m.
  for (std::size_t j = 0; j < g.sources; ++j) {
    for (std::size_t k = 0; k < g.targets; ++k) {
      if (g.edge(j, k)) out.three_paths += (deg_src[j] - 1) * (deg_tgt[k] - 1);
    }
  }
  for (std::size_t i = 0; i < g.sources; ++i) {
    for (std::size_t j = i + 1; j < g.sources; ++j) {
      std::uint64_t common = 0;
      for (std::size_t k = 0; k < g.targets; ++k) common += (g.edge(i, k) && g.edge(j, k)) ? 1 : 0;
      if (common > 1) out.four_cycles += common * (common - 1) / 2;
    }
  }
  out.closed_paths = 4 * out.four_cycles;
  if (out.three_paths > 0) {
    out.coefficient = static_cast<double>(out.closed_paths) / static_cast<double>(out.three_paths);
  }
  return out;
}

double c4_coefficient(const Matrix& w_next, double tau, double gamma) {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("c4 threshold tau must lie in (0, 1)");
  return count_four_cycles(threshold_graph(w_next, tau, gamma)).coefficient;
}

double big_ado_proximity(const Matrix& w, std::size_t j, std::size_t m) {
  if (j >= w.rows() || m >= w.cols()) {
    throw InputError("big_ado_proximity: index (" + std::to_string(j) + ", " + std::to_string(m) +
                     ") out of range for " + w.shape_string());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double shared = 0.0;
    for (std::size_t k = 0; k < w.cols(); ++k) shared += w(j, k) * w(i, k);
    total += shared * w(i, m);
  }
  return total;
}

Matrix big_ado_matrix(const Matrix& w) { return matmul(outer_gram(w), w); }

}  // namespace beanlab::bean
