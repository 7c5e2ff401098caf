#include "beanlab/analysis/selectivity.hpp"

#include <string>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::analysis {
namespace {

void require_hidden(const net::Mlp& model, std::size_t layer) {
  if (layer + 1 >= model.layers.size()) {
    throw ConfigError("layer " + std::to_string(layer) + " is not a hidden layer of this model");
  }
}

}  // namespace

Matrix class_mean_activations(const net::Mlp& model, const data::LabeledDataset& dataset,
                              std::size_t layer) {
  require_hidden(model, layer);
  const std::size_t classes = model.output_dim();
  const std::size_t width = model.layers[layer].fan_out();
  Matrix sums(classes, width);
  std::vector<std::size_t> counts(classes, 0);
  constexpr std::size_t kChunk = 1000;
  for (std::size_t start = 0; start < dataset.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, dataset.size() - start);
    Matrix x(n, dataset.samples.cols());
    for (std::size_t r = 0; r < n; ++r) {
      std::copy(dataset.samples.row(start + r).begin(), dataset.samples.row(start + r).end(),
                x.row(r).begin());
    }
    const net::ForwardTrace t = net::forward(model, x);
    const Matrix& act = t.activations[layer];
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = dataset.labels[start + r];
      if (c >= classes) throw InputError("label " + std::to_string(c) + " exceeds model classes");
      auto dst = sums.row(c);
      auto src = act.row(r);
      for (std::size_t j = 0; j < width; ++j) dst[j] += src[j];
      ++counts[c];
    }
  }
  for (std::size_t c = 0; c < classes; ++c) {
    if (counts[c] == 0) throw InputError("class " + std::to_string(c) + " has no samples");
    for (double& v : sums.row(c)) v /= static_cast<double>(counts[c]);
  }
  return sums;
}

SelectivityReport selectivity(const Matrix& class_means) {
  const std::size_t classes = class_means.rows();
  if (classes < 2) throw InputError("selectivity needs at least two classes");
  SelectivityReport out{std::vector<double>(class_means.cols(), 0.0),
                        std::vector<std::size_t>(class_means.cols(), 0), class_means};
  for (std::size_t i = 0; i < class_means.cols(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < classes; ++c) {
      if (class_means(c, i) > class_means(best, i)) best = c;
    }
    double rest = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      if (c != best) rest += class_means(c, i);
    }
    rest /= static_cast<double>(classes - 1);
    const double top = class_means(best, i);
    const double denom = top + rest;
    out.preferred[i] = best;
    out.selectivity[i] = denom > 0.0 ? (top - rest) / denom : 0.0;
  }
  return out;
}

net::ActivationMask ablate_group(const net::Mlp& model, std::size_t layer,
                                 std::span<const std::size_t> neurons) {
  require_hidden(model, layer);
  const std::size_t width = model.layers[layer].fan_out();
  net::ActivationMask mask{layer, std::vector<std::uint8_t>(width, 1)};
  for (std::size_t n : neurons) {
    if (n >= width) {
      throw InputError("neuron " + std::to_string(n) + " out of range for layer " +
                       std::to_string(layer) + " with " + std::to_string(width) + " neurons");
    }
    mask.keep[n] = 0;
  }
  return mask;
}

std::vector<double> per_class_accuracy(const net::Mlp& model, const data::LabeledDataset& dataset,
                                       std::span<const net::ActivationMask> masks) {
  const Matrix logits = net::predict_logits(model, dataset.samples, masks);
  const std::size_t classes = model.output_dim();
  std::vector<double> hits(classes, 0.0);
  std::vector<double> counts(classes, 0.0);
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const std::size_t c = dataset.labels[s];
    counts.at(c) += 1.0;
    hits[c] += argmax_row(logits, s) == c ? 1.0 : 0.0;
  }
  for (std::size_t c = 0; c < classes; ++c) hits[c] = counts[c] > 0.0 ? hits[c] / counts[c] : 0.0;
  return hits;
}

AblationReport ablation_matrix(const net::Mlp& model, const data::LabeledDataset& dataset,
                               std::size_t layer, std::span<const std::size_t> grouping) {
  require_hidden(model, layer);
  const std::size_t width = model.layers[layer].fan_out();
  if (grouping.size() != width) {
    throw ShapeError("ablation grouping has " + std::to_string(grouping.size()) +
                     " labels for a layer of " + std::to_string(width) + " neurons");
  }
  const std::size_t classes = model.output_dim();
  AblationReport out{per_class_accuracy(model, dataset), Matrix(classes, classes),
                     std::vector<std::size_t>(classes, 0)};
  for (std::size_t g = 0; g < classes; ++g) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < width; ++i) {
      if (grouping[i] == g) members.push_back(i);
    }
    out.group_sizes[g] = members.size();
    if (members.empty()) continue;
    const net::ActivationMask mask = ablate_group(model, layer, members);
    const auto ablated = per_class_accuracy(model, dataset, std::span(&mask, 1));
    for (std::size_t c = 0; c < classes; ++c) out.deltas(g, c) = ablated[c] - out.baseline[c];
  }
  return out;
}

DiagonalDominance diagonal_dominance(const AblationReport& report) {
  const std::size_t classes = report.deltas.rows();
  DiagonalDominance out;
  for (std::size_t g = 0; g < classes; ++g) {
    const double own = -report.deltas(g, g);
    double other = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      if (c != g) other += -report.deltas(g, c);
    }
    other /= static_cast<double>(classes - 1);
    const bool dom = own > other;
    out.own_drop.push_back(own);
    out.mean_other_drop.push_back(other);
    out.dominant.push_back(dom);
    out.dominant_groups += dom ? 1 : 0;
  }
  return out;
}

}  // namespace beanlab::analysis
