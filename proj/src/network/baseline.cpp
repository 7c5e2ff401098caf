#include "beanlab/network/baseline.hpp"

#include <cmath>

#include "beanlab/errors.hpp"

namespace beanlab::net {

void BaselineReg::validate() const {
  if (!(l2 >= 0.0) || !(l1 >= 0.0)) throw ConfigError("penalty coefficients must be nonnegative");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout probability must lie in [0, 1)");
}

PenaltyResult baseline_penalties(const Mlp& model, const BaselineReg& cfg) {
  cfg.validate();
  PenaltyResult out;
  for (const auto& layer : model.layers) {
    Matrix g(layer.fan_in(), layer.fan_out());
    auto w = layer.weights.values();
    auto gv = g.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      out.value += cfg.l2 * w[i] * w[i] + cfg.l1 * std::fabs(w[i]);
      const double sign = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
      gv[i] = 2.0 * cfg.l2 * w[i] + cfg.l1 * sign;
    }
    out.grad_weights.push_back(std::move(g));
  }
  return out;
}

}  // namespace beanlab::net
