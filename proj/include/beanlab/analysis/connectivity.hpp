#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "beanlab/linalg/matrix.hpp"
#include "beanlab/network/mlp.hpp"

namespace beanlab::analysis {

enum class FeatureSpace { RawWeights, Strength };

/// Row i = outgoing weights of neuron i of hidden layer `layer` (row i of the
/// next layer's weight matrix), or their connectivity strength |tanh(gamma w)|.
/// Throws ConfigError for the output layer.
Matrix outgoing_weight_features(const net::Mlp& model, std::size_t layer,
                                FeatureSpace space = FeatureSpace::RawWeights, double gamma = 1.0);

struct Edge {
  std::size_t src = 0;       ///< neuron of the hidden layer
  std::size_t dst = 0;       ///< neuron of the next layer
  double weight = 0.0;
  double strength = 0.0;
  long cluster = -1;         ///< assembly label of src, -1 when unknown
  long preferred_class = -1; ///< selectivity label of src, -1 when unknown
};

/// Edges whose connectivity strength is at least tau. Label spans may be empty.
/// Throws ConfigError unless tau is in (0, 1).
std::vector<Edge> connectivity_export(const net::Mlp& model, std::size_t layer, double tau,
                                      std::span<const std::size_t> clusters = {},
                                      std::span<const std::size_t> preferred = {}, double gamma = 1.0);

/// One JSON object per line: {"src","dst","w","cluster","class"}.
std::string edges_to_jsonl(const std::vector<Edge>& edges);
/// "src dst weight" per line.
std::string edges_to_text(const std::vector<Edge>& edges);

}  // namespace beanlab::analysis
