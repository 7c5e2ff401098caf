#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beanlab/network/mlp.hpp"

namespace beanlab::train {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update of a flat parameter block at step t (1-based).
void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, std::uint64_t t, double lr, const AdamHyper& hyper = {});

/// Moment accumulators mirroring every weight and bias of a model.
struct AdamState {
  std::vector<Matrix> m_weights, v_weights;
  std::vector<std::vector<double>> m_biases, v_biases;
  std::uint64_t step = 0;

  static AdamState for_model(const net::Mlp& model);
};

void adam_step(net::Mlp& model, const net::Gradients& grads, AdamState& state, double lr,
               const AdamHyper& hyper = {});

}  // namespace beanlab::train
