#include <charconv>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "beanlab/cli/commands.hpp"
#include "beanlab/data/files.hpp"
#include "beanlab/errors.hpp"

namespace beanlab::cli {

using nlohmann::json;

namespace {

enum class Kind { Real, Count, Text, RealList, CountList, TextList };

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

json parse_scalar(Kind kind, const std::string& name, const std::string& text) {
  if (kind == Kind::Text || kind == Kind::TextList) return text;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (kind == Kind::Real || kind == Kind::RealList) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && p == last) return v;
  } else {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && p == last) return v;
  }
  throw ConfigError("--" + name + ": cannot parse '" + text + "'");
}

/// Flags are collected as text and folded into a JSON object keyed by flag
/// name, which is then layered over the config file.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file supplying any option (or a run_manifest.json)");
  }

  FlagSet& add(const std::string& name, Kind kind, const std::string& help) {
    auto value = std::make_shared<std::string>();
    CLI::Option* opt = app_->add_option("--" + name, *value, help);
    entries_.push_back({name, kind, value, opt, {}});
    return *this;
  }

  FlagSet& toggle(const std::string& flag, const std::string& key, json value, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + flag, help);
    entries_.push_back({key, Kind::Text, nullptr, opt, std::move(value)});
    return *this;
  }

  json resolve() const {
    json merged = json::object();
    if (!config_path_.empty()) {
      try {
        merged = json::parse(files::read_text(config_path_));
      } catch (const json::exception& e) {
        throw ConfigError("config file " + config_path_ + ": " + e.what());
      }
      if (merged.contains("command") && merged.contains("config")) merged = merged.at("config");
      if (!merged.is_object()) throw ConfigError("config file " + config_path_ + " is not a JSON object");
    }
    for (const auto& e : entries_) {
      if (e.option->count() == 0) continue;
      if (!e.value) {
        merged[e.name] = e.fixed;
        continue;
      }
      if (e.kind == Kind::Real || e.kind == Kind::Count || e.kind == Kind::Text) {
        merged[e.name] = parse_scalar(e.kind, e.name, *e.value);
      } else {
        json arr = json::array();
        for (const auto& part : split_list(*e.value)) arr.push_back(parse_scalar(e.kind, e.name, part));
        merged[e.name] = arr;
      }
    }
    return merged;
  }

 private:
  struct Entry {
    std::string name;
    Kind kind;
    std::shared_ptr<std::string> value;
    CLI::Option* option;
    json fixed;
  };
  CLI::App* app_;
  std::string config_path_;
  std::vector<Entry> entries_;
};

void add_training_flags(FlagSet& f) {
  f.add("dataset-dir", Kind::Text, "MNIST IDX directory (default: $BEANLAB_DATA_DIR)")
      .add("out-dir", Kind::Text, "output directory")
      .add("seed", Kind::Count, "base seed")
      .add("alpha", Kind::Real, "BEAN strength on every hidden layer (0 disables)")
      .add("gamma", Kind::Real, "connectivity scale in |tanh(gamma w)|")
      .add("bean-order", Kind::Text, "1 or 2")
      .add("divergence", Kind::Text, "square or abs")
      .add("lr", Kind::Real, "Adam learning rate")
      .add("batch-size", Kind::Count, "minibatch size")
      .add("epochs", Kind::Count, "epoch cap")
      .add("hidden", Kind::CountList, "hidden layer sizes, comma separated")
      .add("weight-decay", Kind::Real, "L2 penalty coefficient")
      .add("l1", Kind::Real, "L1 penalty coefficient")
      .add("dropout", Kind::Real, "dropout probability on hidden activations")
      .add("plateau-window", Kind::Count, "early-stop window in epochs")
      .add("plateau-tol", Kind::Real, "early-stop relative improvement threshold");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"beanlab: BEAN-regularized MLP training and assembly analysis"};
  app.require_subcommand(1);

  auto* train_cmd = app.add_subcommand("train", "train an MLP and write a checkpoint");
  FlagSet train_flags(train_cmd);
  add_training_flags(train_flags);
  train_flags.add("train-size", Kind::Count, "random training subset size (0 = all)")
      .add("alpha-grid", Kind::RealList, "select alpha on a validation split from these values")
      .add("val-fraction", Kind::Real, "validation share for alpha selection")
      .toggle("no-eval-test", "eval-test", false, "skip test-set evaluation");

  auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference gradient suite");
  FlagSet grad_flags(grad_cmd);
  grad_flags.add("step", Kind::Real, "central-difference step")
      .add("tol", Kind::Real, "maximum relative error")
      .add("seed", Kind::Count, "fixture seed")
      .add("alpha", Kind::Real, "BEAN strength in the BEAN cases")
      .toggle("inject-sign-flip", "inject-sign-flip", true, "test hook: negate the BEAN gradient path");

  auto* analyze_cmd = app.add_subcommand("analyze", "correlation, clustering, selectivity and PCA data");
  FlagSet analyze_flags(analyze_cmd);
  analyze_flags.add("dataset-dir", Kind::Text, "MNIST IDX directory")
      .add("checkpoint", Kind::Text, "checkpoint directory")
      .add("out-dir", Kind::Text, "output directory")
      .add("layer", Kind::Count, "hidden layer index")
      .add("k-clusters", Kind::Count, "clusters for the headline assignment")
      .add("k-min", Kind::Count, "silhouette sweep start")
      .add("k-max", Kind::Count, "silhouette sweep end")
      .add("tau", Kind::Real, "edge threshold on connectivity strength")
      .add("gamma", Kind::Real, "connectivity scale")
      .add("features", Kind::Text, "weights or strength")
      .add("seed", Kind::Count, "k-means seed");

  auto* ablate_cmd = app.add_subcommand("ablate", "population ablation by selectivity group");
  FlagSet ablate_flags(ablate_cmd);
  ablate_flags.add("dataset-dir", Kind::Text, "MNIST IDX directory")
      .add("checkpoint", Kind::Text, "checkpoint directory")
      .add("out-dir", Kind::Text, "output directory")
      .add("layer", Kind::CountList, "hidden layer index (comma separated for several)");

  auto* fewshot_cmd = app.add_subcommand("fewshot", "few-shot learning from scratch suite");
  FlagSet fewshot_flags(fewshot_cmd);
  add_training_flags(fewshot_flags);
  fewshot_flags.add("ks", Kind::CountList, "examples per class, comma separated")
      .add("reps", Kind::Count, "repetitions per (variant, k)")
      .add("variants", Kind::TextList, "vanilla,dropout,weight-decay,l1,bean1,bean2")
      .add("alpha-grid", Kind::RealList, "BEAN strengths searched")
      .add("dropout-grid", Kind::RealList, "dropout rates searched")
      .add("weight-decay-grid", Kind::RealList, "L2 coefficients searched")
      .add("l1-grid", Kind::RealList, "L1 coefficients searched")
      .add("selection-fraction", Kind::Real, "training share of the subset during selection")
      .add("aux-validation", Kind::Count, "validation examples per class for 1-shot selection")
      .add("threads", Kind::Count, "concurrent cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train_cmd) return cmd_train(TrainCommand::from_json(train_flags.resolve()), out, err);
    if (*grad_cmd) return cmd_gradcheck(GradcheckCommand::from_json(grad_flags.resolve()), out, err);
    if (*analyze_cmd) return cmd_analyze(AnalyzeCommand::from_json(analyze_flags.resolve()), out, err);
    if (*ablate_cmd) return cmd_ablate(AblateCommand::from_json(ablate_flags.resolve()), out, err);
    if (*fewshot_cmd) return cmd_fewshot(FewshotCommand::from_json(fewshot_flags.resolve()), out, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace beanlab::cli
