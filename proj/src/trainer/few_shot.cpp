#include "beanlab/trainer/few_shot.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab::train {

data::LabeledDataset few_shot_sample(const data::LabeledDataset& pool, std::size_t k,
                                     std::uint64_t seed) {
  if (k == 0) throw InputError("few-shot sample needs k >= 1");
  if (pool.size() == 0) throw InputError("few-shot sample from an empty pool");
  auto by_class = data::indices_by_class(pool);
  const std::size_t classes = *std::max_element(pool.labels.begin(), pool.labels.end()) + 1u;
  SeededRng rng(seed);
  std::vector<std::size_t> picked;
  for (std::size_t c = 0; c < classes; ++c) {
    auto& idx = by_class[c];
    if (idx.size() < k) {
      throw InputError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                       " examples, fewer than k = " + std::to_string(k));
    }
    // Partial Fisher-Yates: the first k slots become a uniform sample without replacement.
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + rng.uniform_index(idx.size() - i)]);
      picked.push_back(idx[i]);
    }
  }
  rng.shuffle(std::span<std::size_t>(picked));
  return data::subset(pool, picked, pool.name + "/" + std::to_string(k) + "-shot");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Vanilla: return "vanilla";
    case Variant::Dropout: return "dropout";
    case Variant::WeightDecay: return "weight-decay";
    case Variant::L1: return "l1";
    case Variant::Bean1: return "bean-1";
    case Variant::Bean2: return "bean-2";
  }
  return "unknown";
}

Variant parse_variant(const std::string& s) {
  for (Variant v : {Variant::Vanilla, Variant::Dropout, Variant::WeightDecay, Variant::L1,
                    Variant::Bean1, Variant::Bean2}) {
    if (s == variant_name(v)) return v;
  }
  if (s == "bean1") return Variant::Bean1;
  if (s == "bean2") return Variant::Bean2;
  if (s == "l2" || s == "weight_decay") return Variant::WeightDecay;
  throw ConfigError("unknown variant '" + s + "'");
}

TrainConfig configure_variant(const TrainConfig& base, Variant v, double value) {
  TrainConfig cfg = base;
  cfg.alpha = 0.0;
  cfg.baseline = {};
  switch (v) {
    case Variant::Vanilla: break;
    case Variant::Dropout: cfg.baseline.dropout = value; break;
    case Variant::WeightDecay: cfg.baseline.l2 = value; break;
    case Variant::L1: cfg.baseline.l1 = value; break;
    case Variant::Bean1:
      cfg.alpha = value;
      cfg.bean_order = bean::CorrelationOrder::First;
      break;
    case Variant::Bean2:
      cfg.alpha = value;
      cfg.bean_order = bean::CorrelationOrder::Second;
      break;
  }
  return cfg;
}

void SuiteConfig::validate() const {
  base.validate();
  if (reps < 1) throw ConfigError("few-shot suite needs reps >= 1");
  if (ks.empty() || variants.empty()) throw ConfigError("few-shot suite needs at least one k and one variant");
  if (dims.size() < 2) throw ConfigError("few-shot suite needs layer sizes");
  for (std::size_t k : ks) {
    if (k == 0) throw ConfigError("shot counts must be positive");
  }
  for (Variant v : variants) {
    if (v != Variant::Vanilla && grid_for(v).empty()) {
      throw ConfigError("empty hyperparameter grid for " + variant_name(v));
    }
  }
  if (!(selection_train_fraction > 0.0 && selection_train_fraction < 1.0)) {
    throw ConfigError("selection train fraction must lie in (0, 1)");
  }
}

const std::vector<double>& SuiteConfig::grid_for(Variant v) const {
  static const std::vector<double> kNone{0.0};
  switch (v) {
    case Variant::Vanilla: return kNone;
    case Variant::Dropout: return dropout_grid;
    case Variant::WeightDecay: return weight_decay_grid;
    case Variant::L1: return l1_grid;
    case Variant::Bean1:
    case Variant::Bean2: return alpha_grid;
  }
  return kNone;
}

std::uint64_t subset_seed(std::uint64_t base, std::size_t k, std::size_t rep) {
  return derive_seed(base, {0x5b5e7, k, rep});
}

std::uint64_t cell_seed(std::uint64_t base, Variant v, std::size_t k, std::size_t rep) {
  return derive_seed(base, {static_cast<std::uint64_t>(v), k, rep});
}

namespace {

/// Train-part / validation-part pair used for strength selection.
std::pair<data::LabeledDataset, data::LabeledDataset> selection_split(const SuiteConfig& cfg,
                                                                      std::size_t k,
                                                                      const data::LabeledDataset& pool) {
  const std::uint64_t seed = derive_seed(cfg.base.seed, {0x5e1ec7, k});
  if (k >= 2) {
    const auto sample = few_shot_sample(pool, k, seed);
    return data::stratified_split(sample, cfg.selection_train_fraction, derive_seed(seed, {1}));
  }
  // One example per class cannot be split: validate on a disjoint auxiliary draw.
  const auto sample = few_shot_sample(pool, k + cfg.auxiliary_validation_per_class, seed);
  std::vector<std::size_t> first;
  std::vector<std::size_t> rest;
  std::vector<std::size_t> seen(data::kNumClasses, 0);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    (seen[sample.labels[i]]++ < k ? first : rest).push_back(i);
  }
  return {data::subset(sample, first, "selection-train"), data::subset(sample, rest, "selection-val")};
}

}  // namespace

SelectionResult select_strength(const SuiteConfig& cfg, Variant v, std::size_t k,
                                const data::LabeledDataset& pool) {
  SelectionResult out{v, k, 0.0, cfg.grid_for(v), {}};
  if (v == Variant::Vanilla) return out;
  const auto [train_part, val_part] = selection_split(cfg, k, pool);
  double best = -1.0;
  for (double value : out.candidates) {
    TrainConfig tc = configure_variant(cfg.base, v, value);
    tc.seed = derive_seed(cfg.base.seed, {0x5e1ec7, k, static_cast<std::uint64_t>(v)});
    net::Mlp model = make_model(cfg.dims, tc.seed);
    train(model, train_part, tc);
    const double acc = evaluate(model, val_part);
    out.validation_accuracy.push_back(acc);
    if (acc > best) {
      best = acc;
      out.chosen = value;
    }
  }
  return out;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SuiteResults run_few_shot_suite(const SuiteConfig& cfg, const data::LabeledDataset& pool,
                                const data::LabeledDataset& test,
                                const std::function<void(const CellResult&)>& on_cell) {
  cfg.validate();
  SuiteResults results;

  struct Key {
    Variant v;
    std::size_t k;
  };
  std::vector<Key> keys;
  for (Variant v : cfg.variants) {
    for (std::size_t k : cfg.ks) keys.push_back({v, k});
  }
  results.selections.resize(keys.size());
  parallel_for(keys.size(), cfg.threads, [&](std::size_t i) {
    results.selections[i] = select_strength(cfg, keys[i].v, keys[i].k, pool);
  });

  std::vector<CellResult> cells;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      cells.push_back({keys[i].v, keys[i].k, rep, results.selections[i].chosen, 0.0});
    }
  }
  std::mutex report_mutex;
  parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    CellResult& cell = cells[i];
    try {
      TrainConfig tc = configure_variant(cfg.base, cell.variant, cell.strength);
      tc.seed = cell_seed(cfg.base.seed, cell.variant, cell.k, cell.rep);
      const auto subset = few_shot_sample(pool, cell.k, subset_seed(cfg.base.seed, cell.k, cell.rep));
      net::Mlp model = make_model(cfg.dims, subset_seed(cfg.base.seed, cell.k, cell.rep));
      train(model, subset, tc);
      cell.test_accuracy = evaluate(model, test);
    } catch (const NumericalError& e) {
      throw NumericalError("few-shot cell (variant " + variant_name(cell.variant) + ", k " +
                           std::to_string(cell.k) + ", rep " + std::to_string(cell.rep) +
                           ") aborted: " + e.what());
    }
    if (on_cell) {
      std::lock_guard lock(report_mutex);
      on_cell(cell);
    }
  });
  results.cells = std::move(cells);
  results.summary = summarize(results.cells);
  return results;
}

std::vector<SummaryRow> summarize(const std::vector<CellResult>& cells) {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> values;
  for (const auto& c : cells) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const SummaryRow& r) { return r.variant == c.variant && r.k == c.k; });
    if (it == rows.end()) {
      rows.push_back({c.variant, c.k, 0, c.strength, 0.0, 0.0});
      values.emplace_back();
      it = rows.end() - 1;
    }
    values[static_cast<std::size_t>(it - rows.begin())].push_back(c.test_accuracy);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& v = values[i];
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    rows[i].reps = v.size();
    rows[i].mean = mean;
    rows[i].stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  }
  return rows;
}

std::string cells_to_csv(const std::vector<CellResult>& cells) {
  std::string out = "variant,k,rep,test_accuracy\n";
  char buf[64];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%.17g", c.test_accuracy);
    out += variant_name(c.variant) + "," + std::to_string(c.k) + "," + std::to_string(c.rep) + "," +
           buf + "\n";
  }
  return out;
}

nlohmann::json suite_to_json(const SuiteResults& results) {
  using nlohmann::json;
  json j;
  j["summary"] = json::array();
  for (const auto& r : results.summary) {
    j["summary"].push_back({{"variant", variant_name(r.variant)},
                            {"k", r.k},
                            {"reps", r.reps},
                            {"strength", r.strength},
                            {"mean", r.mean},
                            {"std", r.stddev}});
  }
  j["selection"] = json::array();
  for (const auto& s : results.selections) {
    j["selection"].push_back({{"variant", variant_name(s.variant)},
                              {"k", s.k},
                              {"chosen", s.chosen},
                              {"candidates", s.candidates},
                              {"validation_accuracy", s.validation_accuracy}});
  }
  return j;
}

}  // namespace beanlab::train
