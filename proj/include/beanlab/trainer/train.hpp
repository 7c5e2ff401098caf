#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "beanlab/bean/regularizer.hpp"
#include "beanlab/data/dataset.hpp"
#include "beanlab/network/baseline.hpp"
#include "beanlab/network/mlp.hpp"
#include "beanlab/network/objective.hpp"

namespace beanlab::train {

struct TrainConfig {
  double learning_rate = 0.0005;
  std::size_t batch_size = 100;
  std::size_t epochs = 100;  ///< hard cap
  double alpha = 0.0;        ///< BEAN strength on every hidden layer; 0 disables
  double gamma = 1.0;
  bean::CorrelationOrder bean_order = bean::CorrelationOrder::First;
  bean::Divergence divergence = bean::Divergence::Square;
  net::BaselineReg baseline;
  std::uint64_t seed = 0;
  /// Stop once the epoch loss improved by less than plateau_tolerance
  /// (relative) over the last plateau_window epochs.
  std::size_t plateau_window = 5;
  double plateau_tolerance = 1e-4;

  void validate() const;
  bean::BeanConfig bean() const { return {alpha, gamma, bean_order, divergence}; }
  net::BeanPlan bean_plan(const net::Mlp& model) const;
};

struct RunRecord {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
  std::optional<double> test_accuracy;
  nlohmann::json config;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  bool stopped_early = false;
};

/// Seeded stream for model initialization, distinct from the training stream.
std::uint64_t init_seed(std::uint64_t seed);

/// Fresh model of the given layer sizes initialized from init_seed(seed).
net::Mlp make_model(std::span<const std::size_t> dims, std::uint64_t seed);

/// Minibatch Adam on total_loss with a seeded shuffle every epoch. Throws
/// NumericalError naming epoch and batch on a non-finite loss.
RunRecord train(net::Mlp& model, const data::LabeledDataset& dataset, const TrainConfig& cfg,
                const data::LabeledDataset* test = nullptr);

double evaluate(const net::Mlp& model, const data::LabeledDataset& dataset);

/// n samples drawn uniformly without replacement, kept in their original order.
data::LabeledDataset random_subset(const data::LabeledDataset& dataset, std::size_t n, std::uint64_t seed);

struct AlphaSearch {
  double alpha = 0.0;
  std::vector<double> grid;
  std::vector<double> validation_accuracy;  ///< per grid entry
  net::Mlp model;                           ///< trained with the chosen alpha
  RunRecord record;
};

/// Splits `dataset` per class into (1 - validation_fraction) training and
/// validation parts, trains one model per grid alpha from the same
/// initialization, and keeps the best by validation accuracy (earliest on ties).
AlphaSearch train_with_alpha_search(std::span<const std::size_t> dims, const data::LabeledDataset& dataset,
                                    const TrainConfig& cfg, std::span<const double> grid,
                                    double validation_fraction,
                                    const data::LabeledDataset* test = nullptr);

/// The split used by train_with_alpha_search.
std::pair<data::LabeledDataset, data::LabeledDataset> alpha_search_split(
    const data::LabeledDataset& dataset, double validation_fraction, std::uint64_t seed);

}  // namespace beanlab::train
