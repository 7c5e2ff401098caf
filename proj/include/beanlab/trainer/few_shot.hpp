#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "beanlab/data/dataset.hpp"
#include "beanlab/trainer/train.hpp"

namespace beanlab::train {

/// Exactly k examples of every class 0..max_label, drawn without replacement by
/// a seeded uniform sample, returned in shuffled order. Throws InputError when a
/// class has fewer than k examples.
data::LabeledDataset few_shot_sample(const data::LabeledDataset& pool, std::size_t k,
                                     std::uint64_t seed);

enum class Variant { Vanilla, Dropout, WeightDecay, L1, Bean1, Bean2 };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

/// The variant's regularizer at strength `value` applied on top of `base`.
TrainConfig configure_variant(const TrainConfig& base, Variant v, double value);

struct SuiteConfig {
  TrainConfig base;
  std::vector<std::size_t> dims{784, 500, 10};
  std::vector<std::size_t> ks{1, 5, 10, 20};
  std::size_t reps = 20;
  std::vector<Variant> variants{Variant::Vanilla, Variant::Dropout, Variant::WeightDecay,
                                Variant::L1,      Variant::Bean1,   Variant::Bean2};
  /// Candidate strengths searched on a validation split before the repetitions.
  std::vector<double> alpha_grid{0.01, 0.1, 1.0, 10.0};
  std::vector<double> dropout_grid{0.1, 0.3, 0.5};
  std::vector<double> weight_decay_grid{1e-4, 1e-3, 1e-2};
  std::vector<double> l1_grid{1e-5, 1e-4, 1e-3};
  /// Share of the sampled subset kept for training during selection (k >= 2).
  double selection_train_fraction = 0.5;
  /// Validation examples per class drawn from the remaining pool when k = 1.
  std::size_t auxiliary_validation_per_class = 10;
  std::size_t threads = 1;

  void validate() const;
  const std::vector<double>& grid_for(Variant v) const;
};

struct CellResult {
  Variant variant = Variant::Vanilla;
  std::size_t k = 0;
  std::size_t rep = 0;
  double strength = 0.0;
  double test_accuracy = 0.0;
};

struct SelectionResult {
  Variant variant = Variant::Vanilla;
  std::size_t k = 0;
  double chosen = 0.0;
  std::vector<double> candidates;
  std::vector<double> validation_accuracy;
};

struct SummaryRow {
  Variant variant = Variant::Vanilla;
  std::size_t k = 0;
  std::size_t reps = 0;
  double strength = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation (n - 1), 0 for a single rep
};

struct SuiteResults {
  std::vector<SelectionResult> selections;
  std::vector<CellResult> cells;
  std::vector<SummaryRow> summary;
};

/// Seed of the few-shot subset for (k, rep); shared by every variant so the
/// repetitions are paired.
std::uint64_t subset_seed(std::uint64_t base, std::size_t k, std::size_t rep);
/// Training stream of one cell.
std::uint64_t cell_seed(std::uint64_t base, Variant v, std::size_t k, std::size_t rep);

/// Pick the variant's strength for k-shot training by validation accuracy.
/// Ties keep the earliest grid entry.
SelectionResult select_strength(const SuiteConfig& cfg, Variant v, std::size_t k,
                                const data::LabeledDataset& pool);

/// For every variant and k: select the strength once, then train `reps`
/// independently sampled k-shot subsets from scratch and evaluate each on the
/// full test set. Completed cells are reported through `on_cell` as they finish
/// (in cell order when threads == 1). A training abort is rethrown as
/// NumericalError naming the (variant, k, rep) cell.
SuiteResults run_few_shot_suite(const SuiteConfig& cfg, const data::LabeledDataset& pool,
                                const data::LabeledDataset& test,
                                const std::function<void(const CellResult&)>& on_cell = {});

/// Mean and sample standard deviation per (variant, k), in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<CellResult>& cells);

std::string cells_to_csv(const std::vector<CellResult>& cells);
nlohmann::json suite_to_json(const SuiteResults& results);

}  // namespace beanlab::train
