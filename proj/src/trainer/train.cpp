#include "beanlab/trainer/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/rng.hpp"
#include "beanlab/network/loss.hpp"
#include "beanlab/trainer/adam.hpp"
#include "beanlab/trainer/records.hpp"

namespace beanlab::train {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (plateau_window < 1) throw ConfigError("plateau window must be at least 1");
  bean().validate();
  baseline.validate();
}

net::BeanPlan TrainConfig::bean_plan(const net::Mlp& model) const {
  if (alpha == 0.0) return {};
  return net::bean_on_all_hidden(model, bean());
}

std::uint64_t init_seed(std::uint64_t seed) { return derive_seed(seed, {0x1417}); }

net::Mlp make_model(std::span<const std::size_t> dims, std::uint64_t seed) {
  SeededRng rng(init_seed(seed));
  return net::Mlp::create(dims, rng);
}

RunRecord train(net::Mlp& model, const data::LabeledDataset& dataset, const TrainConfig& cfg,
                const data::LabeledDataset* test) {
  cfg.validate();
  model.validate();
  if (dataset.size() == 0) throw InputError("cannot train on an empty dataset");
  const auto start = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.config = to_json(cfg);
  rec.seed = cfg.seed;

  SeededRng rng(derive_seed(cfg.seed, {0x7a11}));
  AdamState adam = AdamState::for_model(model);
  const net::BeanPlan plan = cfg.bean_plan(model);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t width = dataset.samples.cols();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size, ++batch_index) {
      const std::size_t n = std::min(cfg.batch_size, order.size() - begin);
      Matrix x(n, width);
      std::vector<std::uint8_t> y(n);
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t src = order[begin + r];
        std::copy(dataset.samples.row(src).begin(), dataset.samples.row(src).end(), x.row(r).begin());
        y[r] = dataset.labels[src];
      }
      const net::Objective obj = net::total_loss(model, x, y, plan, cfg.baseline, &rng);
      if (!std::isfinite(obj.total)) {
        throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(batch_index) + " (cross entropy " +
                             std::to_string(obj.cross_entropy) + ", bean " +
                             std::to_string(obj.bean) + ")");
      }
      loss_sum += obj.total * static_cast<double>(n);
      correct += obj.correct;
      adam_step(model, obj.grads, adam, cfg.learning_rate);
    }
    rec.epoch_loss.push_back(loss_sum / static_cast<double>(order.size()));
    rec.epoch_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(order.size()));

    const std::size_t e = rec.epoch_loss.size() - 1;
    if (e >= cfg.plateau_window) {
      const double before = rec.epoch_loss[e - cfg.plateau_window];
      const double now = rec.epoch_loss[e];
      if ((before - now) / std::fabs(before) < cfg.plateau_tolerance) {
        rec.stopped_early = e + 1 < cfg.epochs;
        break;
      }
    }
  }
  if (test != nullptr) rec.test_accuracy = evaluate(model, *test);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

double evaluate(const net::Mlp& model, const data::LabeledDataset& dataset) {
  return net::accuracy(net::predict_logits(model, dataset.samples), dataset.labels);
}

data::LabeledDataset random_subset(const data::LabeledDataset& dataset, std::size_t n, std::uint64_t seed) {
  if (n > dataset.size()) {
    throw InputError("subset of " + std::to_string(n) + " requested from " + std::to_string(dataset.size()) +
                     " samples");
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  order.resize(n);
  std::sort(order.begin(), order.end());
  return data::subset(dataset, order, dataset.name + "-subset");
}

std::pair<data::LabeledDataset, data::LabeledDataset> alpha_search_split(
    const data::LabeledDataset& dataset, double validation_fraction, std::uint64_t seed) {
  return data::stratified_split(dataset, 1.0 - validation_fraction, derive_seed(seed, {0x5e1}));
}

AlphaSearch train_with_alpha_search(std::span<const std::size_t> dims, const data::LabeledDataset& dataset,
                                    const TrainConfig& cfg, std::span<const double> grid,
                                    double validation_fraction, const data::LabeledDataset* test) {
  if (grid.empty()) throw ConfigError("alpha grid is empty");
  const auto [fit, validation] = alpha_search_split(dataset, validation_fraction, cfg.seed);
  AlphaSearch out;
  out.grid.assign(grid.begin(), grid.end());
  double best = -1.0;
  for (double alpha : grid) {
    TrainConfig c = cfg;
    c.alpha = alpha;
    net::Mlp model = make_model(dims, cfg.seed);
    RunRecord rec = train(model, fit, c, test);
    const double acc = evaluate(model, validation);
    out.validation_accuracy.push_back(acc);
    if (acc > best) {
      best = acc;
      out.alpha = alpha;
      out.model = std::move(model);
      out.record = std::move(rec);
    }
  }
  return out;
}

}  // namespace beanlab::train
