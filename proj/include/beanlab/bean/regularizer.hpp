#pragma once

#include "beanlab/bean/correlation.hpp"
#include "beanlab/linalg/matrix.hpp"

namespace beanlab::bean {

enum class Divergence { Square, Absolute };

struct BeanConfig {
  double alpha = 0.0;  ///< regularization strength
  double gamma = 1.0;  ///< tanh curvature in the connectivity strength
  CorrelationOrder order = CorrelationOrder::First;
  Divergence divergence = Divergence::Square;

  /// Throws ConfigError unless alpha >= 0 and gamma > 0.
  void validate() const;
};

/// N x N matrix of sum_s d(h[s][i], h[s][j]) for an S x N activation matrix.
/// Square divergence goes through the Gram identity n_i + n_j - 2 G_ij, so the
/// S x N x N divergence tensor is never built. Symmetric with a zero diagonal.
Matrix pairwise_divergence_sum(const Matrix& h, Divergence divergence);

/// Co-activation divergence loss
///   L_c = 1/(S N²) sum_s sum_i sum_j A_ij d(h_si, h_sj)
/// for activations h (S x N) of the neurons whose outgoing weights are w_next (N x M).
/// Not scaled by alpha.
double bean_loss(const Matrix& w_next, const Matrix& h, const BeanConfig& cfg);

struct BeanGradients {
  double loss = 0.0;
  Matrix grad_w_next;  ///< dL_c/dW through the correlation A only
  Matrix grad_h;       ///< dL_c/dH through the divergence only
};

/// Analytic gradients of bean_loss. The subgradient of |tanh(gamma w)| at w = 0
/// is 0, and so is the subgradient of |x - y| at x = y.
BeanGradients bean_gradients(const Matrix& w_next, const Matrix& h, const BeanConfig& cfg);

const char* divergence_name(Divergence d) noexcept;

}  // namespace beanlab::bean
