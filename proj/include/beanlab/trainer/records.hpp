#pragma once

#include <string>

#include <json.hpp>

#include "beanlab/bean/regularizer.hpp"
#include "beanlab/trainer/train.hpp"

namespace beanlab::train {

nlohmann::json to_json(const TrainConfig& cfg);
/// Keys mirror the CLI flag names without dashes ("lr", "batch-size", ...).
/// Missing keys keep the value already in `cfg`. Throws ConfigError on bad values.
void apply_json(TrainConfig& cfg, const nlohmann::json& j);

nlohmann::json to_json(const RunRecord& rec);

bean::CorrelationOrder parse_order(const std::string& s);
bean::Divergence parse_divergence(const std::string& s);

}  // namespace beanlab::train
