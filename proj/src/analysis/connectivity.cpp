#include "beanlab/analysis/connectivity.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "beanlab/bean/correlation.hpp"
#include "beanlab/errors.hpp"

namespace beanlab::analysis {

Matrix outgoing_weight_features(const net::Mlp& model, std::size_t layer, FeatureSpace space,
                                double gamma) {
  if (layer + 1 >= model.layers.size()) {
    throw ConfigError("layer " + std::to_string(layer) + " has no outgoing dense layer");
  }
  const Matrix& w = model.layers[layer + 1].weights;
  return space == FeatureSpace::RawWeights ? w : bean::connectivity_strength(w, gamma);
}

std::vector<Edge> connectivity_export(const net::Mlp& model, std::size_t layer, double tau,
                                      std::span<const std::size_t> clusters,
                                      std::span<const std::size_t> preferred, double gamma) {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("edge threshold tau must lie in (0, 1)");
  const Matrix w = outgoing_weight_features(model, layer);
  if ((!clusters.empty() && clusters.size() != w.rows()) ||
      (!preferred.empty() && preferred.size() != w.rows())) {
    throw ShapeError("connectivity export: label count does not match layer width");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t k = 0; k < w.cols(); ++k) {
      const double f = std::fabs(std::tanh(gamma * w(i, k)));
      if (f < tau) continue;
      edges.push_back({i, k, w(i, k), f, clusters.empty() ? -1L : static_cast<long>(clusters[i]),
                       preferred.empty() ? -1L : static_cast<long>(preferred[i])});
    }
  }
  return edges;
}

std::string edges_to_jsonl(const std::vector<Edge>& edges) {
  std::string out;
  for (const auto& e : edges) {
    nlohmann::json j{{"src", e.src}, {"dst", e.dst}, {"w", e.weight}, {"cluster", e.cluster},
                     {"class", e.preferred_class}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string edges_to_text(const std::vector<Edge>& edges) {
  std::string out;
  char buf[96];
  for (const auto& e : edges) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", e.src, e.dst, e.weight);
    out += buf;
  }
  return out;
}

}  // namespace beanlab::analysis
