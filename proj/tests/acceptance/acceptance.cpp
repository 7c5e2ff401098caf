// Acceptance checks: one PASS/FAIL line per criterion. Criteria 5-7 need the
// real MNIST files (--mnist-dir or $BEANLAB_DATA_DIR).

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "beanlab/analysis/clustering.hpp"
#include "beanlab/analysis/connectivity.hpp"
#include "beanlab/analysis/embedding.hpp"
#include "beanlab/analysis/selectivity.hpp"
#include "beanlab/bean/correlation.hpp"
#include "beanlab/bean/graph_metrics.hpp"
#include "beanlab/bean/regularizer.hpp"
#include "beanlab/cli/commands.hpp"
#include "beanlab/cli/gradcheck.hpp"
#include "beanlab/data/checkpoint.hpp"
#include "beanlab/data/dataset.hpp"
#include "beanlab/data/files.hpp"
#include "beanlab/data/idx.hpp"
#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"
#include "beanlab/trainer/few_shot.hpp"
#include "beanlab/trainer/train.hpp"
#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using namespace beanlab;
using testing::random_matrix;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1 -------------------------------------------------------------------
Outcome gradient_fidelity() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = cli::run_gradcheck({});
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  std::string worst_name;
  std::size_t bean_cases = 0;
  bool ok = true;
  for (const auto& r : results) {
    if (r.name.rfind("bean-", 0) == 0 && r.name.find("alpha=0") == std::string::npos) ++bean_cases;
    ok = ok && r.pass;
    if (r.max_relative_error >= worst) {
      worst = r.max_relative_error;
      worst_name = r.name;
    }
  }
  return {ok && bean_cases == 4 && elapsed < 5.0,
          std::to_string(results.size()) + " configurations, worst " + worst_name + " rel err " + num(worst) +
              ", " + num(elapsed, 3) + " s"};
}

// ---- 2 -------------------------------------------------------------------
Outcome order_identity() {
  SeededRng rng(derive_seed(2, {}));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Matrix w = random_matrix(rng, 1 + rng.uniform_index(50), 1 + rng.uniform_index(30), -3.0, 3.0);
    const double gamma = 0.1 + 3.0 * rng.uniform();
    const Matrix first = bean::first_order_correlation(w, gamma).inner;
    worst = std::max(worst, max_abs_diff(bean::second_order_correlation(w, gamma).inner, hadamard(first, first)));
  }
  return {worst <= 1e-12, "100 matrices, max |A2 - A1^2| = " + num(worst)};
}

// ---- 3 -------------------------------------------------------------------
Outcome loss_oracle() {
  SeededRng rng(derive_seed(3, {}));
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.uniform_index(50), s = 1 + rng.uniform_index(20), m = 1 + rng.uniform_index(20);
    const Matrix w = random_matrix(rng, n, m, -2.0, 2.0);
    const Matrix h = random_matrix(rng, s, n, 0.0, 3.0);
    for (auto order : {bean::CorrelationOrder::First, bean::CorrelationOrder::Second}) {
      for (auto div : {bean::Divergence::Square, bean::Divergence::Absolute}) {
        const bean::BeanConfig cfg{1.0, 1.0, order, div};
        const Matrix a = order == bean::CorrelationOrder::First ? oracle::first_order(w, 1.0) : oracle::second_order(w, 1.0);
        worst = std::max(worst, std::fabs(bean::bean_loss(w, h, cfg) - oracle::bean_loss(a, h, div == bean::Divergence::Square)));
      }
    }
  }
  return {worst <= 1e-10, "50 instances x 4 configurations, max |diff| = " + num(worst)};
}

// ---- 4 -------------------------------------------------------------------
Outcome correlation_invariants() {
  SeededRng rng(derive_seed(4, {}));
  std::size_t violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.uniform_index(20), m = 1 + rng.uniform_index(20);
    const double scale = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
    const Matrix w = random_matrix(rng, n, m, -scale, scale);
    const double gamma = 0.05 + 5.0 * rng.uniform();
    for (auto order : {bean::CorrelationOrder::First, bean::CorrelationOrder::Second}) {
      const Matrix a = bean::layer_correlation(w, gamma, order).inner;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (a(i, j) != a(j, i)) ++violations;
          if (!(a(i, j) >= 0.0 && a(i, j) < 1.0)) ++violations;
        }
      if (!(bean::layer_correlation(Matrix(n, m), gamma, order).inner == Matrix(n, n))) ++violations;
    }
  }
  return {violations == 0, "1000 inputs x 2 orders, " + std::to_string(violations) + " violations"};
}

// ---- 5 and 7 -------------------------------------------------------------
struct AssemblyRun {
  bool have = false;
  std::string error;
  net::Mlp bean2;
  data::LabeledDataset test;
};

AssemblyRun& assembly_run(const std::string& mnist_dir, Outcome* c5) {
  static AssemblyRun run;
  static bool done = false;
  if (done) return run;
  done = true;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto full = data::load_mnist(mnist_dir, data::MnistSplit::Train);
    run.test = data::load_mnist(mnist_dir, data::MnistSplit::Test);
    const auto subset = train::random_subset(full, 5000, 5000);
    train::TrainConfig cfg;
    cfg.epochs = 30;
    cfg.seed = 2024;
    cfg.bean_order = bean::CorrelationOrder::Second;
    const std::vector<std::size_t> dims{784, 500, 10};
    const std::vector<double> grid = train::SuiteConfig{}.alpha_grid;
    auto bean = train::train_with_alpha_search(dims, subset, cfg, grid, 0.1);
    const std::vector<double> zero{0.0};
    auto vanilla = train::train_with_alpha_search(dims, subset, cfg, zero, 0.1);

    const auto silhouette_of = [](const net::Mlp& m) {
      const Matrix f = analysis::outgoing_weight_features(m, 0);
      const auto a = analysis::kmeans(f, 10, 10);
      return analysis::silhouette_score(f, a.labels);
    };
    const double s_bean = silhouette_of(bean.model);
    const double s_vanilla = silhouette_of(vanilla.model);
    std::string accs;
    for (std::size_t i = 0; i < grid.size(); ++i) accs += (i ? "/" : "") + num(bean.validation_accuracy[i], 4);
    const double elapsed = seconds_since(t0);
    *c5 = {s_bean - s_vanilla >= 0.2 && elapsed < 900.0,
           "alpha=" + num(bean.alpha) + " (val acc " + accs + "), silhouette BEAN-2 " + num(s_bean) + " vs vanilla " +
               num(s_vanilla) + " (diff " + num(s_bean - s_vanilla) + ", need >= 0.2), " + num(elapsed, 3) + " s"};
    run.bean2 = std::move(bean.model);
    run.have = true;
  } catch (const std::exception& e) {
    run.error = e.what();
    *c5 = {false, std::string("could not run: ") + e.what()};
  }
  return run;
}

Outcome ablation_association(const std::string& mnist_dir) {
  Outcome unused;
  AssemblyRun& run = assembly_run(mnist_dir, &unused);
  if (!run.have) return {false, "criterion 5 model unavailable: " + run.error};
  const auto sel = analysis::selectivity(analysis::class_mean_activations(run.bean2, run.test, 0));
  const auto report = analysis::ablation_matrix(run.bean2, run.test, 0, sel.preferred);
  const auto dom = analysis::diagonal_dominance(report);
  std::size_t empty = 0;
  for (auto g : report.group_sizes) empty += g == 0;
  return {dom.dominant_groups >= 7, std::to_string(dom.dominant_groups) + " of 10 groups diagonally dominant (" +
                                        std::to_string(empty) + " empty groups)"};
}

// ---- 6 -------------------------------------------------------------------
Outcome few_shot_trend(const std::string& mnist_dir) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pool = data::load_mnist(mnist_dir, data::MnistSplit::Train);
    const auto test = data::load_mnist(mnist_dir, data::MnistSplit::Test);
    train::SuiteConfig cfg;
    cfg.ks = {10};
    cfg.reps = 10;
    cfg.variants = {train::Variant::Vanilla, train::Variant::Bean1};
    cfg.base.seed = 6;
    const auto res = train::run_few_shot_suite(cfg, pool, test);
    std::vector<double> v, b;
    for (const auto& c : res.cells) (c.variant == train::Variant::Vanilla ? v : b).push_back(c.test_accuracy);
    const auto d = cli::paired_difference(b, v);
    double chosen = 0.0;
    for (const auto& s : res.selections)
      if (s.variant == train::Variant::Bean1) chosen = s.chosen;
    const double elapsed = seconds_since(t0);
    return {d.mean >= 0.02 && d.positive >= 8 && elapsed < 1800.0,
            "alpha=" + num(chosen) + ", mean BEAN-1 - vanilla = " + num(100.0 * d.mean, 3) + " pp (95% CI " +
                num(100.0 * d.lower, 3) + " .. " + num(100.0 * d.upper, 3) + "), positive in " +
                std::to_string(d.positive) + "/10 (need >= 2 pp and >= 8), " + num(elapsed, 3) + " s"};
  } catch (const std::exception& e) {
    return {false, std::string("could not run: ") + e.what()};
  }
}

// ---- 8 -------------------------------------------------------------------
Outcome selectivity_formula() {
  SeededRng rng(derive_seed(8, {}));
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t classes = 2 + rng.uniform_index(9), neurons = 1 + rng.uniform_index(8);
    Matrix means = random_matrix(rng, classes, neurons, 0.0, 5.0);
    if (t % 5 == 0) means(rng.uniform_index(classes), 0) = means(0, 0);  // ties
    const auto r = analysis::selectivity(means);
    for (std::size_t i = 0; i < neurons; ++i) {
      std::vector<double> col(classes);
      for (std::size_t c = 0; c < classes; ++c) col[c] = means(c, i);
      if (r.selectivity[i] != oracle::selectivity(col)) ++mismatches;
    }
  }
  const auto equal = analysis::selectivity(Matrix(10, 1, 0.0));
  Matrix lone(10, 1, 0.0);
  lone(4, 0) = 2.5;
  const auto only = analysis::selectivity(lone);
  const bool bounds = equal.selectivity[0] == 0.0 && only.selectivity[0] == 1.0;
  return {mismatches == 0 && bounds, "1000 fixtures, " + std::to_string(mismatches) + " mismatches; 0/0 -> " +
                                         num(equal.selectivity[0]) + ", rest=0 -> " + num(only.selectivity[0])};
}

// ---- 9 -------------------------------------------------------------------
Outcome graph_metrics() {
  SeededRng rng(derive_seed(9, {}));
  double c4_err = 0.0;
  std::size_t pi_mismatch = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t ns = 1 + rng.uniform_index(6), nt = 1 + rng.uniform_index(6);
    const double density = 0.2 + 0.7 * rng.uniform();
    Matrix w(ns, nt);
    std::vector<std::vector<bool>> adj(ns, std::vector<bool>(nt));
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t k = 0; k < nt; ++k) {
        // Integer weights: 0 is below tau, anything else is an edge.
        adj[i][k] = rng.bernoulli(density);
        w(i, k) = adj[i][k] ? static_cast<double>(1 + rng.uniform_index(3)) * (rng.bernoulli(0.5) ? 1.0 : -1.0) : 0.0;
      }
    c4_err = std::max(c4_err, std::fabs(bean::c4_coefficient(w, 0.1) - oracle::c4(adj)));
    for (std::size_t j = 0; j < ns; ++j)
      for (std::size_t m = 0; m < nt; ++m)
        if (bean::big_ado_proximity(w, j, m) != oracle::big_ado(w, j, m)) ++pi_mismatch;
  }
  return {c4_err <= 1e-12 && pi_mismatch == 0,
          "100 graphs, max C4 error " + num(c4_err) + ", " + std::to_string(pi_mismatch) + " pi mismatches"};
}

// ---- 10 ------------------------------------------------------------------
Outcome silhouette_and_pca() {
  SeededRng rng(derive_seed(10, {}));
  std::size_t sil_mismatch = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 4 + rng.uniform_index(60), k = 2 + rng.uniform_index(5);
    const Matrix x = random_matrix(rng, n, 1 + rng.uniform_index(6));
    const auto a = analysis::kmeans(x, std::min(k, n), rng.next_u64());
    std::vector<std::size_t> sizes(std::min(k, n), 0);
    for (auto l : a.labels) ++sizes[l];
    if (std::count(sizes.begin(), sizes.end(), 0u) > 0) continue;
    if (analysis::silhouette_score(x, a.labels) != oracle::silhouette(x, a.labels)) ++sil_mismatch;
  }
  double pca_err = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 10 + rng.uniform_index(50), d = 2 + rng.uniform_index(9);
    const Matrix x = random_matrix(rng, n, d);
    const auto p = analysis::pca_2d(x);
    Eigen::MatrixXd m(n, d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = x(i, j);
    const Eigen::MatrixXd c = m.rowwise() - m.colwise().mean();
    const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(n - 1);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues();
    const double top2 = ev(d - 1) + ev(d - 2);
    double projected = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      projected += p.projection(i, 0) * p.projection(i, 0) + p.projection(i, 1) * p.projection(i, 1);
    pca_err = std::max(pca_err, std::fabs(projected / static_cast<double>(n - 1) - top2));
  }
  return {sil_mismatch == 0 && pca_err <= 1e-6, std::to_string(sil_mismatch) +
                                                    " silhouette mismatches, max PCA top-2 variance error " + num(pca_err)};
}

// ---- 11 ------------------------------------------------------------------
Outcome persistence_and_parsing() {
  const std::vector<std::uint8_t> golden{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 128, 1, 7, 0, 0, 200};
  const std::vector<std::uint8_t> golden_labels{0, 0, 8, 1, 0, 0, 0, 3, 5, 0, 4};
  bool ok = data::encode_idx_images(data::parse_idx_images(golden)) == golden &&
            data::parse_idx_labels(golden_labels) == std::vector<std::uint8_t>{5, 0, 4};

  testing::TempDir dir("accept11");
  SeededRng rng(derive_seed(11, {}));
  std::size_t roundtrip_fail = 0;
  for (int t = 0; t < 20; ++t) {
    const net::Mlp model = net::Mlp::create({1 + rng.uniform_index(30), 1 + rng.uniform_index(20), 10}, rng);
    const auto path = dir.path() / std::to_string(t);
    data::save_checkpoint(model, path);
    if (!(data::load_checkpoint(path) == model)) ++roundtrip_fail;
  }

  std::size_t crashes = 0, classified = 0;
  for (int t = 0; t < 10000; ++t) {
    std::vector<std::uint8_t> bytes = t % 2 ? golden : golden_labels;
    for (int e = 0, edits = 1 + static_cast<int>(rng.uniform_index(6)); e < edits; ++e) {
      const auto op = rng.uniform_index(3);
      if (op == 0 && !bytes.empty()) bytes[rng.uniform_index(bytes.size())] = static_cast<std::uint8_t>(rng.next_u64());
      if (op == 1) bytes.resize(rng.uniform_index(bytes.size() + 1));
      if (op == 2) bytes.push_back(static_cast<std::uint8_t>(rng.next_u64()));
    }
    try {
      if (t % 2) {
        (void)data::parse_idx_images(bytes);
      } else {
        (void)data::parse_idx_labels(bytes);
      }
    } catch (const Error&) {
      ++classified;
    } catch (...) {
      ++crashes;
    }
  }
  ok = ok && roundtrip_fail == 0 && crashes == 0;
  return {ok, "golden files exact, " + std::to_string(roundtrip_fail) + " checkpoint round-trip failures, 10000 fuzzed inputs: " +
                  std::to_string(classified) + " classified errors, " + std::to_string(crashes) + " unclassified"};
}

// ---- 12 ------------------------------------------------------------------
Outcome determinism() {
  testing::TempDir dir("accept12");
  std::filesystem::create_directories(dir.path() / "data");
  testing::write_synthetic_mnist(dir.path() / "data", 30, 5);
  std::ostringstream sink;
  const auto run = [&](const std::string& out) {
    const std::vector<std::string> args{"beanlab", "train", "--dataset-dir", (dir.path() / "data").string(),
                                        "--out-dir", (dir.path() / out).string(), "--hidden", "32", "--epochs", "3",
                                        "--alpha", "1", "--bean-order", "2", "--dropout", "0.2", "--seed", "12"};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), sink, sink);
  };
  if (run("a") != 0 || run("b") != 0) return {false, "train command failed: " + sink.str()};
  std::size_t files = 0, differ = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path() / "a" / "checkpoint")) {
    ++files;
    const auto other = dir.path() / "b" / "checkpoint" / e.path().filename();
    if (files::read_bytes(e.path()) != files::read_bytes(other)) ++differ;
  }
  return {files > 0 && differ == 0, std::to_string(files) + " checkpoint files compared, " + std::to_string(differ) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  std::string mnist_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) only.insert(std::stoi(item));
    } else if (a == "--mnist-dir" && i + 1 < argc) {
      mnist_dir = argv[++i];
    } else {
      std::cerr << "usage: beanlab_acceptance [--only 1,2,...] [--mnist-dir DIR]\n";
      return 2;
    }
  }
  if (mnist_dir.empty()) mnist_dir = data::resolve_data_dir("").string();

  Outcome c5{false, "not run"};
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient fidelity", gradient_fidelity},
      {"order identity", order_identity},
      {"loss oracle", loss_oracle},
      {"correlation invariants", correlation_invariants},
      {"assembly formation trend", [&] {
         assembly_run(mnist_dir, &c5);
         return c5;
       }},
      {"few-shot trend", [&] { return few_shot_trend(mnist_dir); }},
      {"ablation association", [&] { return ablation_association(mnist_dir); }},
      {"selectivity formula", selectivity_formula},
      {"graph metrics", graph_metrics},
      {"silhouette and PCA oracles", silhouette_and_pca},
      {"persistence and parsing", persistence_and_parsing},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << criteria[i].first << "): " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
