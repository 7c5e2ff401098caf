#include "beanlab/data/checkpoint.hpp"

#include <string>

#include "beanlab/data/files.hpp"
#include "beanlab/errors.hpp"
#include "beanlab/linalg/matrix_io.hpp"

namespace beanlab::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string weights_file(std::size_t l) { return "layer" + std::to_string(l) + "_weights.bin"; }
std::string biases_file(std::size_t l) { return "layer" + std::to_string(l) + "_biases.bin"; }

Matrix load_part(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("checkpoint file missing: " + path.string());
  return load_matrix_binary(path);
}

}  // namespace

void save_checkpoint(const net::Mlp& model, const fs::path& dir, const json& config_echo) {
  if (model.layers.empty()) throw ConfigError("refusing to save a model without layers");
  model.validate();
  files::ensure_directory(dir);
  json manifest;
  manifest["format"] = "beanlab-checkpoint";
  manifest["version"] = kCheckpointVersion;
  manifest["dims"] = model.dims();
  json activations = json::array();
  json layer_files = json::array();
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    activations.push_back(l + 1 < model.layers.size() ? "relu" : "linear");
    save_matrix_binary(layer.weights, dir / weights_file(l));
    save_matrix_binary(Matrix(1, layer.biases.size(), layer.biases), dir / biases_file(l));
    layer_files.push_back({{"weights", weights_file(l)}, {"biases", biases_file(l)}});
  }
  manifest["activations"] = activations;
  manifest["layers"] = layer_files;
  manifest["config"] = config_echo;
  files::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

net::Mlp load_checkpoint(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw IoError("checkpoint manifest missing: " + manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(files::read_text(manifest_path));
  } catch (const json::exception& e) {
    throw FormatError("checkpoint manifest is not valid JSON: " + std::string(e.what()));
  }
  std::vector<std::size_t> dims;
  std::vector<std::pair<std::string, std::string>> names;
  try {
    if (manifest.at("format").get<std::string>() != "beanlab-checkpoint") {
      throw FormatError("not a beanlab checkpoint: " + manifest_path.string());
    }
    const int version = manifest.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw VersionError("checkpoint format version " + std::to_string(version) +
                         " is not supported (expected " + std::to_string(kCheckpointVersion) + ")");
    }
    dims = manifest.at("dims").get<std::vector<std::size_t>>();
    for (const auto& entry : manifest.at("layers")) {
      names.emplace_back(entry.at("weights").get<std::string>(), entry.at("biases").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw FormatError("checkpoint manifest is malformed: " + std::string(e.what()));
  }
  if (dims.size() < 2 || names.size() + 1 != dims.size()) {
    throw ShapeError("checkpoint manifest lists " + std::to_string(names.size()) + " layers for " +
                     std::to_string(dims.size()) + " sizes");
  }
  net::Mlp model;
  for (std::size_t l = 0; l < names.size(); ++l) {
    Matrix w = load_part(dir / names[l].first);
    Matrix b = load_part(dir / names[l].second);
    if (w.rows() != dims[l] || w.cols() != dims[l + 1] || b.rows() != 1 || b.cols() != dims[l + 1]) {
      throw ShapeError("checkpoint layer " + std::to_string(l) + " has weights " + w.shape_string() +
                       " and biases " + b.shape_string() + ", manifest expects " +
                       std::to_string(dims[l]) + "x" + std::to_string(dims[l + 1]));
    }
    model.layers.push_back({std::move(w), b.storage()});
  }
  model.validate();
  return model;
}

}  // namespace beanlab::data
