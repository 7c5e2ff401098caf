#include "beanlab/network/objective.hpp"

#include <string>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"
#include "beanlab/network/loss.hpp"

namespace beanlab::net {

BeanPlan bean_on_all_hidden(const Mlp& model, const bean::BeanConfig& cfg) {
  BeanPlan plan(model.layers.size());
  for (std::size_t l = 0; l + 1 < model.layers.size(); ++l) plan[l] = cfg;
  return plan;
}

void validate_plan(const Mlp& model, const BeanPlan& plan) {
  if (plan.size() > model.layers.size()) {
    throw ConfigError("BEAN plan names " + std::to_string(plan.size()) + " layers, model has " +
                      std::to_string(model.layers.size()));
  }
  for (std::size_t l = 0; l < plan.size(); ++l) {
    if (!plan[l]) continue;
    if (l + 1 >= model.layers.size()) {
      throw ConfigError("BEAN cannot attach to layer " + std::to_string(l) +
                        ": it has no successor dense layer");
    }
    plan[l]->validate();
  }
}

Objective total_loss(const Mlp& model, const Matrix& x, std::span<const std::uint8_t> labels,
                     const BeanPlan& plan, const BaselineReg& baseline, SeededRng* dropout_rng) {
  validate_plan(model, plan);
  baseline.validate();
  ForwardOptions opts;
  opts.dropout = baseline.dropout;
  opts.rng = dropout_rng;
  const ForwardTrace trace = forward(model, x, opts);
  const CrossEntropy ce = softmax_cross_entropy(trace.logits(), labels);

  Objective out;
  out.cross_entropy = ce.loss;
  out.bean_terms.assign(model.layers.size(), 0.0);
  for (std::size_t s = 0; s < labels.size(); ++s) {
    out.correct += argmax_row(trace.logits(), s) == labels[s] ? 1 : 0;
  }

  std::vector<ActivationInjection> injections;
  std::vector<std::pair<std::size_t, Matrix>> weight_terms;
  for (std::size_t l = 0; l < plan.size(); ++l) {
    if (!plan[l] || plan[l]->alpha == 0.0) continue;
    const auto& cfg = *plan[l];
    bean::BeanGradients bg = bean::bean_gradients(model.layers[l + 1].weights, trace.activations[l], cfg);
    out.bean_terms[l] = bg.loss;
    out.bean += cfg.alpha * bg.loss;
    scale_inplace(bg.grad_h, cfg.alpha);
    scale_inplace(bg.grad_w_next, cfg.alpha);
    injections.push_back({l, std::move(bg.grad_h)});
    weight_terms.emplace_back(l + 1, std::move(bg.grad_w_next));
  }

  out.grads = backward(model, trace, ce.dlogits, injections);
  for (auto& [layer, g] : weight_terms) add_inplace(out.grads.weights[layer], g);

  if (baseline.l1 > 0.0 || baseline.l2 > 0.0) {
    const PenaltyResult pen = baseline_penalties(model, baseline);
    out.baseline = pen.value;
    for (std::size_t l = 0; l < pen.grad_weights.size(); ++l) {
      add_inplace(out.grads.weights[l], pen.grad_weights[l]);
    }
  }
  out.total = out.cross_entropy + out.bean + out.baseline;
  return out;
}

}  // namespace beanlab::net
