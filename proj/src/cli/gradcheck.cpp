#include "beanlab/cli/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/rng.hpp"

namespace beanlab::cli {

std::size_t parameter_count(const net::Mlp& model) {
  std::size_t n = 0;
  for (const auto& layer : model.layers) n += layer.weights.size() + layer.biases.size();
  return n;
}

double& parameter_at(net::Mlp& model, std::size_t flat) {
  for (auto& layer : model.layers) {
    if (flat < layer.weights.size()) return layer.weights.values()[flat];
    flat -= layer.weights.size();
    if (flat < layer.biases.size()) return layer.biases[flat];
    flat -= layer.biases.size();
  }
  throw InputError("parameter index out of range");
}

double gradient_at(const net::Gradients& g, std::size_t flat) {
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    if (flat < g.weights[l].size()) return g.weights[l].values()[flat];
    flat -= g.weights[l].size();
    if (flat < g.biases[l].size()) return g.biases[l][flat];
    flat -= g.biases[l].size();
  }
  throw InputError("gradient index out of range");
}

namespace {

double evaluate(const net::Mlp& model, const Matrix& x, std::span<const std::uint8_t> labels,
                const GradcheckCase& c, std::uint64_t dropout_seed, net::Gradients* grads) {
  SeededRng rng(dropout_seed);
  net::Objective obj = net::total_loss(model, x, labels, c.plan, c.baseline, &rng);
  if (grads) *grads = std::move(obj.grads);
  return obj.total;
}

}  // namespace

GradcheckResult check_case(const net::Mlp& model, const Matrix& x, std::span<const std::uint8_t> labels,
                           const GradcheckCase& c, const GradcheckOptions& opts) {
  const std::uint64_t dropout_seed = derive_seed(opts.seed, {0xd0});
  net::Gradients analytic;
  evaluate(model, x, labels, c, dropout_seed, &analytic);
  if (opts.inject_sign_flip) {
    // analytic' = g(0) - (g(alpha) - g(0)): the BEAN path enters with the wrong sign.
    GradcheckCase plain = c;
    plain.plan.clear();
    net::Gradients base;
    evaluate(model, x, labels, plain, dropout_seed, &base);
    net::Gradients flipped = base;
    flipped.add(base, 1.0);
    flipped.add(analytic, -1.0);
    analytic = std::move(flipped);
  }

  GradcheckResult res{c.name, 0.0, 0, 0, true};
  net::Mlp probe = model;
  const std::size_t n = parameter_count(model);
  for (std::size_t p = 0; p < n; ++p) {
    double& slot = parameter_at(probe, p);
    const double saved = slot;
    slot = saved + opts.step;
    const double up = evaluate(probe, x, labels, c, dropout_seed, nullptr);
    slot = saved - opts.step;
    const double down = evaluate(probe, x, labels, c, dropout_seed, nullptr);
    slot = saved;
    const double numeric = (up - down) / (2.0 * opts.step);
    const double a = gradient_at(analytic, p);
    if (std::fabs(a) + std::fabs(numeric) < opts.skip_below) continue;
    ++res.checked;
    const double rel = std::fabs(a - numeric) / std::max(std::fabs(a), std::fabs(numeric));
    if (rel > res.max_relative_error) {
      res.max_relative_error = rel;
      res.worst_index = p;
    }
  }
  res.pass = res.max_relative_error < opts.tolerance;
  return res;
}

static std::vector<std::uint8_t> random_labels(SeededRng& rng, std::size_t n, std::size_t classes) {
  std::vector<std::uint8_t> y(n);
  for (auto& v : y) v = static_cast<std::uint8_t>(rng.uniform_index(classes));
  return y;
}

std::vector<GradcheckResult> run_gradcheck(const GradcheckOptions& opts) {
  SeededRng rng(opts.seed);
  net::Mlp model = net::Mlp::create({6, 8, 5, 4}, rng);
  for (auto& layer : model.layers) {
    for (double& w : layer.weights.values()) {
      if (std::fabs(w) < 1e-3) w = w < 0.0 ? -1e-3 - std::fabs(w) : 1e-3 + w;
    }
    for (double& b : layer.biases) b = 0.1 * rng.normal();
  }
  Matrix x(3, 6);
  for (double& v : x.values()) v = rng.uniform();
  const auto labels = random_labels(rng, 3, 4);

  std::vector<GradcheckCase> cases;
  cases.push_back({"cross-entropy", {}, {}});
  for (auto order : {bean::CorrelationOrder::First, bean::CorrelationOrder::Second}) {
    for (auto div : {bean::Divergence::Square, bean::Divergence::Absolute}) {
      bean::BeanConfig cfg{opts.alpha, 1.0, order, div};
      std::string name = std::string("bean-") + (order == bean::CorrelationOrder::First ? "1" : "2") +
                         "/" + bean::divergence_name(div);
      cases.push_back({name, net::bean_on_all_hidden(model, cfg), {}});
    }
  }
  cases.push_back({"bean-1/square alpha=0", net::bean_on_all_hidden(model, {0.0, 1.0}), {}});
  cases.push_back({"l1", {}, {0.0, 0.01, 0.0}});
  cases.push_back({"weight-decay", {}, {0.01, 0.0, 0.0}});
  cases.push_back({"dropout", {}, {0.0, 0.0, 0.3}});

  std::vector<GradcheckResult> out;
  for (const auto& c : cases) out.push_back(check_case(model, x, labels, c, opts));
  return out;
}

}  // namespace beanlab::cli
