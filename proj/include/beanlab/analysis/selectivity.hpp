#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beanlab/data/dataset.hpp"
#include "beanlab/linalg/matrix.hpp"
#include "beanlab/network/mlp.hpp"

namespace beanlab::analysis {

/// C x N_l matrix: mean post-rectifier activation of each neuron of hidden layer
/// `layer` over the samples of each class (C = model output width). Throws
/// InputError naming a class without samples.
Matrix class_mean_activations(const net::Mlp& model, const data::LabeledDataset& dataset,
                              std::size_t layer);

struct SelectivityReport {
  std::vector<double> selectivity;        ///< per neuron, in [0, 1] for nonnegative means
  std::vector<std::size_t> preferred;     ///< class of highest mean activity (lowest on ties)
  Matrix class_means;                     ///< C x N_l input
};

/// (mu_max - mu_rest) / (mu_max + mu_rest), where mu_rest averages every class
/// but the preferred one; 0 when the denominator is not positive.
SelectivityReport selectivity(const Matrix& class_means);

/// Evaluation-time mask zeroing the listed neurons of a hidden layer.
net::ActivationMask ablate_group(const net::Mlp& model, std::size_t layer,
                                 std::span<const std::size_t> neurons);

/// Accuracy per class (C = model output width), optionally with masks applied.
std::vector<double> per_class_accuracy(const net::Mlp& model, const data::LabeledDataset& dataset,
                                       std::span<const net::ActivationMask> masks = {});

struct AblationReport {
  std::vector<double> baseline;          ///< per-class accuracy without ablation
  Matrix deltas;                         ///< C x C: row = ablated group, column = affected class
  std::vector<std::size_t> group_sizes;  ///< neurons per group
};

/// Ablates, one at a time, the group of neurons whose `grouping` label is g and
/// records ablated minus baseline accuracy per class. Empty groups give a zero row.
AblationReport ablation_matrix(const net::Mlp& model, const data::LabeledDataset& dataset,
                               std::size_t layer, std::span<const std::size_t> grouping);

struct DiagonalDominance {
  std::size_t dominant_groups = 0;
  std::vector<bool> dominant;            ///< per group
  std::vector<double> own_drop;          ///< -delta[g][g]
  std::vector<double> mean_other_drop;   ///< mean of -delta[g][c] over c != g
};

/// A group is dominant when ablating it lowers its own class's accuracy by more
/// than the average drop over the other classes.
DiagonalDominance diagonal_dominance(const AblationReport& report);

}  // namespace beanlab::analysis
