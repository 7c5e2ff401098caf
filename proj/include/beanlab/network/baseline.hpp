#pragma once

#include <vector>

#include "beanlab/linalg/matrix.hpp"
#include "beanlab/network/mlp.hpp"

namespace beanlab::net {

/// Conventional regularizers applied to every dense layer.
struct BaselineReg {
  double l2 = 0.0;       ///< weight decay: l2 * sum w²
  double l1 = 0.0;       ///< l1 * sum |w|
  double dropout = 0.0;  ///< drop probability on hidden activations, in [0, 1)

  void validate() const;
  bool any() const { return l2 > 0.0 || l1 > 0.0 || dropout > 0.0; }
};

struct PenaltyResult {
  double value = 0.0;
  std::vector<Matrix> grad_weights;  ///< one per layer; biases are not penalized
};

/// Weight penalties (dropout acts in the forward pass instead). The L1
/// subgradient at 0 is 0.
PenaltyResult baseline_penalties(const Mlp& model, const BaselineReg& cfg);

}  // namespace beanlab::net
