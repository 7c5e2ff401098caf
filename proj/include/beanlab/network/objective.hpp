#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "beanlab/bean/regularizer.hpp"
#include "beanlab/network/baseline.hpp"
#include "beanlab/network/mlp.hpp"

namespace beanlab::net {

/// Entry l attaches BEAN to the hidden activations produced by dense layer l,
/// with the correlation taken over the outgoing weights of layer l+1.
using BeanPlan = std::vector<std::optional<bean::BeanConfig>>;

/// The same configuration on every layer that has a successor.
BeanPlan bean_on_all_hidden(const Mlp& model, const bean::BeanConfig& cfg);

/// Throws ConfigError if the plan attaches BEAN to the output layer.
void validate_plan(const Mlp& model, const BeanPlan& plan);

struct Objective {
  double total = 0.0;
  double cross_entropy = 0.0;
  double bean = 0.0;                ///< sum over layers of alpha * L_c
  double baseline = 0.0;
  std::vector<double> bean_terms;   ///< unscaled L_c per layer
  std::size_t correct = 0;          ///< batch samples classified correctly
  Gradients grads;
};

/// L = cross entropy + sum_l alpha_l L_c^(l) + baseline penalties, with
/// gradients for every weight and bias. `dropout_rng` is required when the
/// baseline enables dropout.
Objective total_loss(const Mlp& model, const Matrix& x, std::span<const std::uint8_t> labels,
                     const BeanPlan& plan, const BaselineReg& baseline,
                     SeededRng* dropout_rng = nullptr);

}  // namespace beanlab::net
