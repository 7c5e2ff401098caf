#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "beanlab/analysis/connectivity.hpp"
#include "beanlab/cli/gradcheck.hpp"
#include "beanlab/trainer/few_shot.hpp"
#include "beanlab/trainer/train.hpp"
#include <json.hpp>

namespace beanlab::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  ///< gradcheck mismatch
inline constexpr int kExitConfig = 2;       ///< bad flags or configuration
inline constexpr int kExitData = 3;         ///< missing/corrupt dataset or checkpoint
inline constexpr int kExitNumerical = 4;    ///< non-finite loss during training

inline constexpr const char* kToolVersion = "0.1.0";

/// Written next to every command's outputs. `config` holds the effective
/// options under their flag names, so `--config run_manifest.json` replays the run.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;  ///< relative to the output directory
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;
  double wall_seconds = 0.0;
  std::string simd_backend;

  nlohmann::json to_json() const;
};

struct TrainCommand {
  std::string dataset_dir;
  std::filesystem::path out_dir = "beanlab-train";
  train::TrainConfig config;
  std::vector<std::size_t> hidden{500};
  std::size_t train_size = 0;            ///< 0 = full training split, else a seeded stratified subset
  std::vector<double> alpha_grid;        ///< non-empty: pick alpha on a validation split first
  double validation_fraction = 0.1;
  bool evaluate_test = true;

  nlohmann::json to_json() const;
  static TrainCommand from_json(const nlohmann::json& j);
};

struct AnalyzeCommand {
  std::string dataset_dir;
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir = "beanlab-analysis";
  std::size_t layer = 0;
  std::size_t k_clusters = 10;
  std::size_t k_min = 2;
  std::size_t k_max = 15;
  double tau = 0.1;
  double gamma = 1.0;
  analysis::FeatureSpace features = analysis::FeatureSpace::RawWeights;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static AnalyzeCommand from_json(const nlohmann::json& j);
};

struct AblateCommand {
  std::string dataset_dir;
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir = "beanlab-ablation";
  std::vector<std::size_t> layers{0};  ///< exactly one hidden layer

  nlohmann::json to_json() const;
  static AblateCommand from_json(const nlohmann::json& j);
};

struct FewshotCommand {
  std::string dataset_dir;
  std::filesystem::path out_dir = "beanlab-fewshot";
  train::SuiteConfig suite;

  nlohmann::json to_json() const;
  static FewshotCommand from_json(const nlohmann::json& j);
};

struct GradcheckCommand {
  GradcheckOptions options;

  nlohmann::json to_json() const;
  static GradcheckCommand from_json(const nlohmann::json& j);
};

int cmd_train(const TrainCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_gradcheck(const GradcheckCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_ablate(const AblateCommand& cmd, std::ostream& out, std::ostream& err);
int cmd_fewshot(const FewshotCommand& cmd, std::ostream& out, std::ostream& err);

/// Mean paired difference with a two-sided Student-t confidence interval.
struct PairedDifference {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t positive = 0;  ///< pairs with a strictly positive difference
};
PairedDifference paired_difference(const std::vector<double>& a, const std::vector<double>& b,
                                   double confidence = 0.95);

/// Parse argv (subcommand first) and run it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beanlab::cli
