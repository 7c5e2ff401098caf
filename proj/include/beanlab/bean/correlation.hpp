#pragma once

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::bean {

enum class CorrelationOrder { First = 1, Second = 2 };

/// Layer-wise neuron correlation of the N_l neurons feeding a dense layer.
/// Symmetric, entries in [0, 1).
struct CorrelationMatrix {
  Matrix inner;
  CorrelationOrder order = CorrelationOrder::First;
};

/// |tanh(gamma * w)| elementwise: the weight mapped to a synapse strength in [0, 1).
Matrix connectivity_strength(const Matrix& w_next, double gamma);

/// A = f(W) f(W)ᵀ / N_{l+1}, where W is N_l x N_{l+1}.
CorrelationMatrix first_order_correlation(const Matrix& w_next, double gamma);

/// A = (f(W) f(W)ᵀ ⊙ f(W) f(W)ᵀ) / N_{l+1}².
CorrelationMatrix second_order_correlation(const Matrix& w_next, double gamma);

CorrelationMatrix layer_correlation(const Matrix& w_next, double gamma, CorrelationOrder order);

const char* order_name(CorrelationOrder order) noexcept;

}  // namespace beanlab::bean
