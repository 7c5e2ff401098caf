#include "beanlab/trainer/records.hpp"

#include "beanlab/errors.hpp"

namespace beanlab::train {

using nlohmann::json;

bean::CorrelationOrder parse_order(const std::string& s) {
  if (s == "1" || s == "first") return bean::CorrelationOrder::First;
  if (s == "2" || s == "second") return bean::CorrelationOrder::Second;
  throw ConfigError("bean order must be 1 or 2, got '" + s + "'");
}

bean::Divergence parse_divergence(const std::string& s) {
  if (s == "square") return bean::Divergence::Square;
  if (s == "abs" || s == "absolute") return bean::Divergence::Absolute;
  throw ConfigError("divergence must be 'square' or 'abs', got '" + s + "'");
}

json to_json(const TrainConfig& cfg) {
  return {
      {"lr", cfg.learning_rate},
      {"batch-size", cfg.batch_size},
      {"epochs", cfg.epochs},
      {"alpha", cfg.alpha},
      {"gamma", cfg.gamma},
      {"bean-order", static_cast<int>(cfg.bean_order)},
      {"divergence", bean::divergence_name(cfg.divergence)},
      {"weight-decay", cfg.baseline.l2},
      {"l1", cfg.baseline.l1},
      {"dropout", cfg.baseline.dropout},
      {"seed", cfg.seed},
      {"plateau-window", cfg.plateau_window},
      {"plateau-tol", cfg.plateau_tolerance},
  };
}

void apply_json(TrainConfig& cfg, const json& j) {
  try {
    if (j.contains("lr")) cfg.learning_rate = j.at("lr").get<double>();
    if (j.contains("batch-size")) cfg.batch_size = j.at("batch-size").get<std::size_t>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<std::size_t>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("bean-order")) {
      const auto& v = j.at("bean-order");
      cfg.bean_order = parse_order(v.is_string() ? v.get<std::string>() : std::to_string(v.get<int>()));
    }
    if (j.contains("divergence")) cfg.divergence = parse_divergence(j.at("divergence").get<std::string>());
    if (j.contains("weight-decay")) cfg.baseline.l2 = j.at("weight-decay").get<double>();
    if (j.contains("l1")) cfg.baseline.l1 = j.at("l1").get<double>();
    if (j.contains("dropout")) cfg.baseline.dropout = j.at("dropout").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("plateau-window")) cfg.plateau_window = j.at("plateau-window").get<std::size_t>();
    if (j.contains("plateau-tol")) cfg.plateau_tolerance = j.at("plateau-tol").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad training configuration: ") + e.what());
  }
}

json to_json(const RunRecord& rec) {
  json j;
  j["epoch_loss"] = rec.epoch_loss;
  j["epoch_accuracy"] = rec.epoch_accuracy;
  j["test_accuracy"] = rec.test_accuracy ? json(*rec.test_accuracy) : json(nullptr);
  j["config"] = rec.config;
  j["wall_seconds"] = rec.wall_seconds;
  j["seed"] = rec.seed;
  j["stopped_early"] = rec.stopped_early;
  return j;
}

}  // namespace beanlab::train
