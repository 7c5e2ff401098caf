#pragma once

#include <filesystem>

#include <json.hpp>

#include "beanlab/network/mlp.hpp"

namespace beanlab::data {

inline constexpr int kCheckpointVersion = 1;

/// Writes manifest.json plus layer<l>_weights.bin / layer<l>_biases.bin (matrix
/// binary format) into dir. The manifest is written last. Throws ConfigError
/// for a model without layers.
void save_checkpoint(const net::Mlp& model, const std::filesystem::path& dir,
                     const nlohmann::json& config_echo = nlohmann::json::object());

/// Throws FormatError (unreadable manifest), VersionError, IoError (missing
/// file) or ShapeError (files disagree with the manifest); never returns a
/// partially loaded model.
net::Mlp load_checkpoint(const std::filesystem::path& dir);

}  // namespace beanlab::data
