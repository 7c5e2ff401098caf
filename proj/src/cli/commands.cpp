#include "beanlab/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "beanlab/analysis/clustering.hpp"
#include "beanlab/analysis/embedding.hpp"
#include "beanlab/analysis/selectivity.hpp"
#include "beanlab/bean/correlation.hpp"
#include "beanlab/bean/graph_metrics.hpp"
#include "beanlab/data/checkpoint.hpp"
#include "beanlab/data/dataset.hpp"
#include "beanlab/data/files.hpp"
#include "beanlab/errors.hpp"
#include "beanlab/linalg/kernels.hpp"
#include "beanlab/linalg/matrix_io.hpp"
#include "beanlab/trainer/records.hpp"

namespace beanlab::cli {

using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

/// Wraps option decoding so malformed values surface as configuration errors.
template <class Fn>
auto decode(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad ") + what + " configuration: " + e.what());
  }
}

analysis::FeatureSpace parse_features(const std::string& s) {
  if (s == "weights" || s == "raw") return analysis::FeatureSpace::RawWeights;
  if (s == "strength") return analysis::FeatureSpace::Strength;
  throw ConfigError("features must be 'weights' or 'strength', got '" + s + "'");
}

const char* features_name(analysis::FeatureSpace f) {
  return f == analysis::FeatureSpace::RawWeights ? "weights" : "strength";
}

data::LabeledDataset load_split(const std::string& flag, data::MnistSplit split) {
  const auto dir = data::resolve_data_dir(flag);
  if (dir.empty()) throw InputError("no dataset directory: pass --dataset-dir or set BEANLAB_DATA_DIR");
  return data::load_mnist(dir, split);
}

/// Tracks artifacts and writes the manifest last.
class Outputs {
 public:
  Outputs(std::filesystem::path dir, std::string command, json config, std::uint64_t seed)
      : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.config = std::move(config);
    manifest_.seed = seed;
    manifest_.started_at = utc_now();
    manifest_.simd_backend = std::string(kernels::backend_name(kernels::active_backend()));
    files::ensure_directory(dir_);
  }

  std::filesystem::path path(const std::string& name) { return dir_ / name; }

  void text(const std::string& name, std::string_view content) {
    files::write_text(dir_ / name, content);
    record(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  void matrix(const std::string& name, const Matrix& m) { text(name, matrix_to_csv(m)); }
  void record(const std::string& name) { manifest_.artifacts.push_back(name); }

  void finish() {
    manifest_.finished_at = utc_now();
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    files::write_text(dir_ / "run_manifest.json", manifest_.to_json().dump(2) + "\n");
  }

 private:
  std::filesystem::path dir_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

/// Maps the error hierarchy onto exit codes.
template <class Fn>
int guarded(const char* command, std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << command << ": configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << command << ": numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    // Input, format, length, range, I/O, version and shape problems all come from the data.
    err << command << ": data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << command << ": data error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

json RunManifest::to_json() const {
  return {{"command", command},       {"config", config},
          {"seed", seed},             {"artifacts", artifacts},
          {"tool_version", tool_version}, {"started_at", started_at},
          {"finished_at", finished_at},   {"wall_seconds", wall_seconds},
          {"simd_backend", simd_backend}};
}

// ---- option (de)serialization -------------------------------------------

json TrainCommand::to_json() const {
  json j = train::to_json(config);
  j["dataset-dir"] = dataset_dir;
  j["out-dir"] = out_dir.string();
  j["hidden"] = hidden;
  j["train-size"] = train_size;
  j["alpha-grid"] = alpha_grid;
  j["val-fraction"] = validation_fraction;
  j["eval-test"] = evaluate_test;
  return j;
}

TrainCommand TrainCommand::from_json(const json& j) {
  TrainCommand c;
  train::apply_json(c.config, j);
  decode("train", [&] {
    c.dataset_dir = get_or<std::string>(j, "dataset-dir", c.dataset_dir);
    c.out_dir = get_or<std::string>(j, "out-dir", c.out_dir.string());
    c.hidden = get_or(j, "hidden", c.hidden);
    c.train_size = get_or(j, "train-size", c.train_size);
    c.alpha_grid = get_or(j, "alpha-grid", c.alpha_grid);
    c.validation_fraction = get_or(j, "val-fraction", c.validation_fraction);
    c.evaluate_test = get_or(j, "eval-test", c.evaluate_test);
    return 0;
  });
  return c;
}

json AnalyzeCommand::to_json() const {
  return {{"dataset-dir", dataset_dir},
          {"checkpoint", checkpoint.string()},
          {"out-dir", out_dir.string()},
          {"layer", layer},
          {"k-clusters", k_clusters},
          {"k-min", k_min},
          {"k-max", k_max},
          {"tau", tau},
          {"gamma", gamma},
          {"features", features_name(features)},
          {"seed", seed}};
}

AnalyzeCommand AnalyzeCommand::from_json(const json& j) {
  AnalyzeCommand c;
  decode("analyze", [&] {
    c.dataset_dir = get_or<std::string>(j, "dataset-dir", c.dataset_dir);
    c.checkpoint = get_or<std::string>(j, "checkpoint", c.checkpoint.string());
    c.out_dir = get_or<std::string>(j, "out-dir", c.out_dir.string());
    c.layer = get_or(j, "layer", c.layer);
    c.k_clusters = get_or(j, "k-clusters", c.k_clusters);
    c.k_min = get_or(j, "k-min", c.k_min);
    c.k_max = get_or(j, "k-max", c.k_max);
    c.tau = get_or(j, "tau", c.tau);
    c.gamma = get_or(j, "gamma", c.gamma);
    c.features = parse_features(get_or<std::string>(j, "features", features_name(c.features)));
    c.seed = get_or(j, "seed", c.seed);
    return 0;
  });
  return c;
}

json AblateCommand::to_json() const {
  return {{"dataset-dir", dataset_dir},
          {"checkpoint", checkpoint.string()},
          {"out-dir", out_dir.string()},
          {"layer", layers}};
}

AblateCommand AblateCommand::from_json(const json& j) {
  AblateCommand c;
  decode("ablate", [&] {
    c.dataset_dir = get_or<std::string>(j, "dataset-dir", c.dataset_dir);
    c.checkpoint = get_or<std::string>(j, "checkpoint", c.checkpoint.string());
    c.out_dir = get_or<std::string>(j, "out-dir", c.out_dir.string());
    if (j.contains("layer")) {
      const auto& v = j.at("layer");
      c.layers = v.is_array() ? v.get<std::vector<std::size_t>>()
                              : std::vector<std::size_t>{v.get<std::size_t>()};
    }
    return 0;
  });
  return c;
}

json FewshotCommand::to_json() const {
  const auto& s = suite;
  json variants = json::array();
  for (auto v : s.variants) variants.push_back(train::variant_name(v));
  json j = train::to_json(s.base);
  j["dataset-dir"] = dataset_dir;
  j["out-dir"] = out_dir.string();
  j["hidden"] = std::vector<std::size_t>(s.dims.begin() + 1, s.dims.end() - 1);
  j["ks"] = s.ks;
  j["reps"] = s.reps;
  j["variants"] = variants;
  j["alpha-grid"] = s.alpha_grid;
  j["dropout-grid"] = s.dropout_grid;
  j["weight-decay-grid"] = s.weight_decay_grid;
  j["l1-grid"] = s.l1_grid;
  j["selection-fraction"] = s.selection_train_fraction;
  j["aux-validation"] = s.auxiliary_validation_per_class;
  j["threads"] = s.threads;
  return j;
}

FewshotCommand FewshotCommand::from_json(const json& j) {
  FewshotCommand c;
  auto& s = c.suite;
  train::apply_json(s.base, j);
  decode("fewshot", [&] {
    c.dataset_dir = get_or<std::string>(j, "dataset-dir", c.dataset_dir);
    c.out_dir = get_or<std::string>(j, "out-dir", c.out_dir.string());
    if (j.contains("hidden")) {
      const auto hidden = j.at("hidden").get<std::vector<std::size_t>>();
      s.dims = {784};
      s.dims.insert(s.dims.end(), hidden.begin(), hidden.end());
      s.dims.push_back(data::kNumClasses);
    }
    s.ks = get_or(j, "ks", s.ks);
    s.reps = get_or(j, "reps", s.reps);
    if (j.contains("variants")) {
      s.variants.clear();
      for (const auto& v : j.at("variants")) s.variants.push_back(train::parse_variant(v.get<std::string>()));
    }
    s.alpha_grid = get_or(j, "alpha-grid", s.alpha_grid);
    s.dropout_grid = get_or(j, "dropout-grid", s.dropout_grid);
    s.weight_decay_grid = get_or(j, "weight-decay-grid", s.weight_decay_grid);
    s.l1_grid = get_or(j, "l1-grid", s.l1_grid);
    s.selection_train_fraction = get_or(j, "selection-fraction", s.selection_train_fraction);
    s.auxiliary_validation_per_class = get_or(j, "aux-validation", s.auxiliary_validation_per_class);
    s.threads = get_or(j, "threads", s.threads);
    return 0;
  });
  return c;
}

json GradcheckCommand::to_json() const {
  return {{"step", options.step},
          {"tol", options.tolerance},
          {"skip-below", options.skip_below},
          {"seed", options.seed},
          {"alpha", options.alpha},
          {"inject-sign-flip", options.inject_sign_flip}};
}

GradcheckCommand GradcheckCommand::from_json(const json& j) {
  GradcheckCommand c;
  auto& o = c.options;
  decode("gradcheck", [&] {
    o.step = get_or(j, "step", o.step);
    o.tolerance = get_or(j, "tol", o.tolerance);
    o.skip_below = get_or(j, "skip-below", o.skip_below);
    o.seed = get_or(j, "seed", o.seed);
    o.alpha = get_or(j, "alpha", o.alpha);
    o.inject_sign_flip = get_or(j, "inject-sign-flip", o.inject_sign_flip);
    return 0;
  });
  if (!(o.step > 0.0)) throw ConfigError("step must be positive");
  if (!(o.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  return c;
}

// ---- commands ----------------------------------------------------------

int cmd_train(const TrainCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded("train", err, [&] {
    cmd.config.validate();
    if (cmd.hidden.empty() || std::count(cmd.hidden.begin(), cmd.hidden.end(), 0u) > 0) {
      throw ConfigError("hidden layer sizes must be positive");
    }
    if (!cmd.alpha_grid.empty() && !(cmd.validation_fraction > 0.0 && cmd.validation_fraction < 1.0)) {
      throw ConfigError("val-fraction must be in (0, 1)");
    }
    data::LabeledDataset train_set = load_split(cmd.dataset_dir, data::MnistSplit::Train);
    std::optional<data::LabeledDataset> test_set;
    if (cmd.evaluate_test) test_set = load_split(cmd.dataset_dir, data::MnistSplit::Test);
    if (cmd.train_size > 0 && cmd.train_size < train_set.size()) {
      train_set = train::random_subset(train_set, cmd.train_size, derive_seed(cmd.config.seed, {0x5b5e7}));
    }

    std::vector<std::size_t> dims{train_set.samples.cols()};
    dims.insert(dims.end(), cmd.hidden.begin(), cmd.hidden.end());
    dims.push_back(data::kNumClasses);

    Outputs o(cmd.out_dir, "train", cmd.to_json(), cmd.config.seed);
    const data::LabeledDataset* test = test_set ? &*test_set : nullptr;
    net::Mlp model;
    train::RunRecord rec;
    train::TrainConfig effective = cmd.config;
    if (cmd.alpha_grid.empty()) {
      model = train::make_model(dims, cmd.config.seed);
      rec = train::train(model, train_set, cmd.config, test);
    } else {
      auto search = train::train_with_alpha_search(dims, train_set, cmd.config, cmd.alpha_grid,
                                                   cmd.validation_fraction, test);
      effective.alpha = search.alpha;
      model = std::move(search.model);
      rec = std::move(search.record);
      o.json_file("alpha_selection.json", {{"grid", search.grid},
                                           {"validation_accuracy", search.validation_accuracy},
                                           {"chosen", search.alpha}});
    }

    json record = train::to_json(rec);
    record.erase("wall_seconds");  // timing lives in the manifest so reruns stay byte-identical
    record["train_samples"] = train_set.size();
    data::save_checkpoint(model, o.path("checkpoint"), train::to_json(effective));
    o.record("checkpoint");
    o.json_file("run_record.json", record);
    o.finish();

    out << "trained " << rec.epoch_loss.size() << " epoch(s) on " << train_set.size() << " samples";
    if (!rec.epoch_loss.empty()) out << ", final loss " << rec.epoch_loss.back();
    if (rec.test_accuracy) out << ", test accuracy " << *rec.test_accuracy;
    out << "\n";
    return kExitOk;
  });
}

int cmd_gradcheck(const GradcheckCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded("gradcheck", err, [&] {
    const auto results = run_gradcheck(cmd.options);
    bool ok = true;
    for (const auto& r : results) {
      char line[160];
      std::snprintf(line, sizeof line, "%-24s max rel error %.3e over %zu entries  %s", r.name.c_str(),
                    r.max_relative_error, r.checked, r.pass ? "ok" : "FAIL");
      out << line << "\n";
      if (!r.pass) {
        ok = false;
        err << "gradcheck: " << r.name << " exceeds " << cmd.options.tolerance
            << " at parameter index " << r.worst_index << "\n";
      }
    }
    return ok ? kExitOk : kExitCheckFailed;
  });
}

int cmd_analyze(const AnalyzeCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded("analyze", err, [&] {
    if (cmd.k_clusters < 2) throw ConfigError("k-clusters must be at least 2");
    if (!(cmd.tau > 0.0 && cmd.tau < 1.0)) throw ConfigError("tau must be in (0, 1)");
    if (!(cmd.gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (cmd.checkpoint.empty()) throw ConfigError("--checkpoint is required");
    const net::Mlp model = data::load_checkpoint(cmd.checkpoint);
    if (cmd.layer + 1 >= model.layers.size()) {
      throw ConfigError("layer " + std::to_string(cmd.layer) + " is not a hidden layer");
    }
    const data::LabeledDataset test = load_split(cmd.dataset_dir, data::MnistSplit::Test);
    if (test.samples.cols() != model.input_dim()) {
      throw ShapeError("dataset width " + std::to_string(test.samples.cols()) +
                       " does not match model input " + std::to_string(model.input_dim()));
    }

    Outputs o(cmd.out_dir, "analyze", cmd.to_json(), cmd.seed);
    const Matrix& w_next = model.layers[cmd.layer + 1].weights;
    const std::size_t n = w_next.rows();
    const auto a1 = bean::first_order_correlation(w_next, cmd.gamma);
    const auto a2 = bean::second_order_correlation(w_next, cmd.gamma);
    o.matrix("correlation_first.csv", a1.inner);
    o.matrix("correlation_second.csv", a2.inner);

    const Matrix features = analysis::outgoing_weight_features(model, cmd.layer, cmd.features, cmd.gamma);
    const std::uint64_t kseed = derive_seed(cmd.seed, {0xc1u});
    std::string sweep_csv = "k,silhouette,inertia\n";
    for (const auto& e : analysis::silhouette_sweep(features, cmd.k_min, cmd.k_max, kseed)) {
      sweep_csv += std::to_string(e.k) + "," + fmt(e.silhouette) + "," + fmt(e.inertia) + "\n";
    }
    o.text("silhouette_sweep.csv", sweep_csv);

    if (n < cmd.k_clusters) {
      throw ConfigError("layer has " + std::to_string(n) + " neurons, fewer than k-clusters");
    }
    const auto clusters = analysis::kmeans(features, cmd.k_clusters, kseed);
    std::vector<std::size_t> sizes(cmd.k_clusters, 0);
    for (auto l : clusters.labels) ++sizes[l];
    json silhouette = nullptr;
    if (std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; })) {
      silhouette = analysis::silhouette_score(features, clusters.labels);
    }
    const auto reordered = analysis::reorder_by_cluster(a2, clusters.labels);
    o.matrix("correlation_second_reordered.csv", reordered.matrix);
    o.json_file("clusters.json", {{"k", cmd.k_clusters},
                                  {"features", features_name(cmd.features)},
                                  {"silhouette", silhouette},
                                  {"inertia", clusters.inertia},
                                  {"sizes", sizes},
                                  {"labels", clusters.labels},
                                  {"permutation", reordered.permutation}});

    const Matrix means = analysis::class_mean_activations(model, test, cmd.layer);
    const auto sel = analysis::selectivity(means);
    o.matrix("class_means.csv", means);
    Matrix means_sorted(means.rows(), n);
    for (std::size_t c = 0; c < means.rows(); ++c) {
      for (std::size_t i = 0; i < n; ++i) means_sorted(c, i) = means(c, reordered.permutation[i]);
    }
    o.matrix("class_means_reordered.csv", means_sorted);
    std::string sel_csv = "neuron,selectivity,preferred_class,cluster\n";
    for (std::size_t i = 0; i < n; ++i) {
      sel_csv += std::to_string(i) + "," + fmt(sel.selectivity[i]) + "," + std::to_string(sel.preferred[i]) +
                 "," + std::to_string(clusters.labels[i]) + "\n";
    }
    o.text("selectivity.csv", sel_csv);

    json pca_info;
    std::string pca_csv = "neuron,pc1,pc2,cluster,preferred_class\n";
    try {
      const auto pca = analysis::pca_2d(features);
      for (std::size_t i = 0; i < n; ++i) {
        pca_csv += std::to_string(i) + "," + fmt(pca.projection(i, 0)) + "," + fmt(pca.projection(i, 1)) +
                   "," + std::to_string(clusters.labels[i]) + "," + std::to_string(sel.preferred[i]) + "\n";
      }
      pca_info = {{"eigenvalues", {pca.eigenvalues[0], pca.eigenvalues[1]}},
                  {"total_variance", pca.total_variance}};
    } catch (const InputError& e) {
      // Constant features (e.g. an all-zero layer) have no principal directions.
      pca_info = {{"eigenvalues", nullptr}, {"total_variance", 0.0}, {"note", e.what()}};
    }
    o.text("pca.csv", pca_csv);

    const auto edges = analysis::connectivity_export(model, cmd.layer, cmd.tau, clusters.labels,
                                                     sel.preferred, cmd.gamma);
    o.text("edges.jsonl", analysis::edges_to_jsonl(edges));
    o.text("edges.txt", analysis::edges_to_text(edges));

    const double c4 = bean::c4_coefficient(w_next, cmd.tau, cmd.gamma);
    double mean_sel = 0.0;
    for (double s : sel.selectivity) mean_sel += s;
    mean_sel /= static_cast<double>(n);
    o.json_file("summary.json", {{"layer", cmd.layer},
                                 {"neurons", n},
                                 {"silhouette_k", silhouette},
                                 {"c4_coefficient", c4},
                                 {"edges", edges.size()},
                                 {"mean_selectivity", mean_sel},
                                 {"pca", pca_info}});
    o.finish();

    out << "layer " << cmd.layer << ": silhouette(k=" << cmd.k_clusters << ") = "
        << (silhouette.is_null() ? std::string("n/a") : fmt(silhouette.get<double>()))
        << ", C4 = " << c4 << ", " << edges.size() << " edges above tau\n";
    return kExitOk;
  });
}

int cmd_ablate(const AblateCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded("ablate", err, [&] {
    if (cmd.layers.empty()) throw ConfigError("no layer selected for ablation");
    if (cmd.checkpoint.empty()) throw ConfigError("--checkpoint is required");
    const net::Mlp model = data::load_checkpoint(cmd.checkpoint);
    for (auto l : cmd.layers) {
      if (l + 1 >= model.layers.size()) throw ConfigError("layer " + std::to_string(l) + " is not a hidden layer");
    }
    const data::LabeledDataset test = load_split(cmd.dataset_dir, data::MnistSplit::Test);

    Outputs o(cmd.out_dir, "ablate", cmd.to_json(), 0);
    json summary = json::array();
    for (auto l : cmd.layers) {
      const auto sel = analysis::selectivity(analysis::class_mean_activations(model, test, l));
      const auto report = analysis::ablation_matrix(model, test, l, sel.preferred);
      const auto dom = analysis::diagonal_dominance(report);
      const std::string suffix = cmd.layers.size() == 1 ? "" : "_layer" + std::to_string(l);
      o.matrix("ablation_deltas" + suffix + ".csv", report.deltas);
      summary.push_back({{"layer", l},
                         {"baseline_accuracy", report.baseline},
                         {"group_sizes", report.group_sizes},
                         {"dominant_groups", dom.dominant_groups},
                         {"groups", report.group_sizes.size()},
                         {"dominant", dom.dominant},
                         {"own_drop", dom.own_drop},
                         {"mean_other_drop", dom.mean_other_drop}});
      out << "layer " << l << ": " << dom.dominant_groups << " of " << report.group_sizes.size()
          << " selectivity groups are diagonally dominant\n";
    }
    o.json_file("ablation_summary.json", {{"layers", summary}});
    o.finish();
    return kExitOk;
  });
}

PairedDifference paired_difference(const std::vector<double>& a, const std::vector<double>& b,
                                   double confidence) {
  if (a.size() != b.size()) throw InputError("paired difference needs equally many values");
  PairedDifference r;
  r.n = a.size();
  if (r.n == 0) return r;
  std::vector<double> d(r.n);
  for (std::size_t i = 0; i < r.n; ++i) {
    d[i] = a[i] - b[i];
    r.mean += d[i];
    if (d[i] > 0.0) ++r.positive;
  }
  r.mean /= static_cast<double>(r.n);
  r.lower = r.upper = r.mean;
  if (r.n < 2) return r;
  double ss = 0.0;
  for (double x : d) ss += (x - r.mean) * (x - r.mean);
  r.stddev = std::sqrt(ss / static_cast<double>(r.n - 1));
  const boost::math::students_t dist(static_cast<double>(r.n - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  const double half = t * r.stddev / std::sqrt(static_cast<double>(r.n));
  r.lower = r.mean - half;
  r.upper = r.mean + half;
  return r;
}

int cmd_fewshot(const FewshotCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded("fewshot", err, [&] {
    cmd.suite.validate();
    const data::LabeledDataset pool = load_split(cmd.dataset_dir, data::MnistSplit::Train);
    const data::LabeledDataset test = load_split(cmd.dataset_dir, data::MnistSplit::Test);
    Outputs o(cmd.out_dir, "fewshot", cmd.to_json(), cmd.suite.base.seed);

    // Completed cells are appended here as they finish so an abort leaves them behind.
    const auto progress_path = o.path("fewshot_cells.csv.partial");
    std::ofstream progress(progress_path, std::ios::binary | std::ios::trunc);
    if (!progress) throw IoError("cannot write " + progress_path.string());
    progress << "variant,k,rep,test_accuracy\n" << std::flush;
    std::mutex mu;
    const auto on_cell = [&](const train::CellResult& c) {
      std::lock_guard lock(mu);
      progress << train::variant_name(c.variant) << "," << c.k << "," << c.rep << "," << fmt(c.test_accuracy)
               << "\n"
               << std::flush;
    };
    const train::SuiteResults results = train::run_few_shot_suite(cmd.suite, pool, test, on_cell);
    progress.close();

    json summary = train::suite_to_json(results);
    json comparisons = json::array();
    for (std::size_t k : cmd.suite.ks) {
      std::vector<double> vanilla, bean1;
      for (const auto& c : results.cells) {
        if (c.k != k) continue;
        if (c.variant == train::Variant::Vanilla) vanilla.push_back(c.test_accuracy);
        if (c.variant == train::Variant::Bean1) bean1.push_back(c.test_accuracy);
      }
      if (vanilla.empty() || bean1.size() != vanilla.size()) continue;
      const auto d = paired_difference(bean1, vanilla);
      comparisons.push_back({{"k", k},
                             {"a", "bean1"},
                             {"b", "vanilla"},
                             {"n", d.n},
                             {"mean_difference", d.mean},
                             {"std", d.stddev},
                             {"ci95", {d.lower, d.upper}},
                             {"positive_pairs", d.positive}});
      out << "k=" << k << ": bean1 - vanilla = " << d.mean << " (95% CI " << d.lower << " .. " << d.upper
          << "), positive in " << d.positive << "/" << d.n << "\n";
    }
    summary["paired_differences"] = comparisons;

    o.text("fewshot_cells.csv", train::cells_to_csv(results.cells));
    std::filesystem::remove(progress_path);
    o.json_file("fewshot_summary.json", summary);
    o.finish();
    for (const auto& r : results.summary) {
      out << train::variant_name(r.variant) << " k=" << r.k << ": " << r.mean << " +- " << r.stddev << " ("
          << r.reps << " reps, strength " << r.strength << ")\n";
    }
    return kExitOk;
  });
}

}  // namespace beanlab::cli
