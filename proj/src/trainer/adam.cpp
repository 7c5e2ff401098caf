#include "beanlab/trainer/adam.hpp"

#include <cmath>

#include "beanlab/errors.hpp"

namespace beanlab::train {

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, std::uint64_t t, double lr, const AdamHyper& hyper) {
  if (grads.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
    throw ShapeError("adam: parameter, gradient and moment sizes differ");
  }
  const double td = static_cast<double>(t);
  const double correction1 = 1.0 - std::pow(hyper.beta1, td);
  const double correction2 = 1.0 - std::pow(hyper.beta2, td);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g;
    v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g * g;
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.epsilon);
  }
}

AdamState AdamState::for_model(const net::Mlp& model) {
  AdamState s;
  for (const auto& layer : model.layers) {
    s.m_weights.emplace_back(layer.fan_in(), layer.fan_out());
    s.v_weights.emplace_back(layer.fan_in(), layer.fan_out());
    s.m_biases.emplace_back(layer.fan_out(), 0.0);
    s.v_biases.emplace_back(layer.fan_out(), 0.0);
  }
  return s;
}

void adam_step(net::Mlp& model, const net::Gradients& grads, AdamState& state, double lr,
               const AdamHyper& hyper) {
  if (state.m_weights.size() != model.layers.size() || grads.weights.size() != model.layers.size()) {
    throw ShapeError("adam: state or gradients do not match the model depth");
  }
  ++state.step;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    auto& layer = model.layers[l];
    adam_update(layer.weights.values(), grads.weights[l].values(), state.m_weights[l].values(),
                state.v_weights[l].values(), state.step, lr, hyper);
    adam_update(layer.biases, grads.biases[l], state.m_biases[l], state.v_biases[l], state.step, lr,
                hyper);
  }
}

}  // namespace beanlab::train
