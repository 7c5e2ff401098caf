#include "beanlab/bean/regularizer.hpp"

#include <algorithm>
#include <cmath>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/kernels.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::bean {
namespace {

void require_shapes(const Matrix& w_next, const Matrix& h) {
  if (h.cols() != w_next.rows()) {
    throw ShapeError("bean: activations " + h.shape_string() + " do not match outgoing weights " +
                     w_next.shape_string());
  }
}

double weighted_total(const Matrix& a, const Matrix& d) {
  return kernels::active().dot(a.values().data(), d.values().data(), a.size());
}

}  // namespace

void BeanConfig::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("bean alpha must be nonnegative");
  if (!(gamma > 0.0)) throw ConfigError("bean gamma must be positive");
}

Matrix pairwise_divergence_sum(const Matrix& h, Divergence divergence) {
  const std::size_t n = h.cols();
  // Columns of h become contiguous rows.
  const Matrix cols = transpose(h);
  if (divergence == Divergence::Square) {
    Matrix out = outer_gram(cols);
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = out(i, i);
    for (std::size_t i = 0; i < n; ++i) {
      out(i, i) = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = std::max(0.0, norms[i] + norms[j] - 2.0 * out(i, j));
        out(i, j) = v;
        out(j, i) = v;
      }
    }
    return out;
  }
  const auto& k = kernels::active();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = k.l1_dist(cols.row(i).data(), cols.row(j).data(), cols.cols());
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

double bean_loss(const Matrix& w_next, const Matrix& h, const BeanConfig& cfg) {
  cfg.validate();
  require_shapes(w_next, h);
  if (h.rows() == 0 || h.cols() == 0) return 0.0;
  const Matrix a = layer_correlation(w_next, cfg.gamma, cfg.order).inner;
  const Matrix d = pairwise_divergence_sum(h, cfg.divergence);
  const double n = static_cast<double>(h.cols());
  return weighted_total(a, d) / (static_cast<double>(h.rows()) * n * n);
}

BeanGradients bean_gradients(const Matrix& w_next, const Matrix& h, const BeanConfig& cfg) {
  cfg.validate();
  require_shapes(w_next, h);
  BeanGradients out{0.0, Matrix(w_next.rows(), w_next.cols()), Matrix(h.rows(), h.cols())};
  const std::size_t s_count = h.rows();
  const std::size_t n = h.cols();
  const std::size_t m = w_next.cols();
  if (s_count == 0 || n == 0 || m == 0) return out;

  const Matrix strength = connectivity_strength(w_next, cfg.gamma);
  const Matrix p = outer_gram(strength);
  const double md = static_cast<double>(m);
  Matrix a = cfg.order == CorrelationOrder::First ? p : hadamard(p, p);
  scale_inplace(a, cfg.order == CorrelationOrder::First ? 1.0 / md : 1.0 / (md * md));

  const Matrix d = pairwise_divergence_sum(h, cfg.divergence);
  const double c = 1.0 / (static_cast<double>(s_count) * static_cast<double>(n) * static_cast<double>(n));
  out.loss = c * weighted_total(a, d);

  // Path through A: dL/dP is symmetric, so dL/dF = 2 (dL/dP) F.
  Matrix grad_p = d;
  if (cfg.order == CorrelationOrder::First) {
    scale_inplace(grad_p, c / md);
  } else {
    grad_p = hadamard(grad_p, p);
    scale_inplace(grad_p, 2.0 * c / (md * md));
  }
  Matrix grad_f = matmul(grad_p, strength);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const double w = w_next(i, k);
      if (w == 0.0) continue;  // subgradient 0 at the kink
      const double f = strength(i, k);
      const double dfdw = cfg.gamma * (1.0 - f * f) * (w > 0.0 ? 1.0 : -1.0);
      out.grad_w_next(i, k) = 2.0 * grad_f(i, k) * dfdw;
    }
  }

  // Path through D.
  if (cfg.divergence == Divergence::Square) {
    // dL/dh_sa = 4c (h_sa r_a - (H A)_sa), r_a = sum_j A_aj.
    std::vector<double> row_sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (double v : a.row(i)) row_sums[i] += v;
    }
    const Matrix ha = matmul(h, a);
    for (std::size_t s = 0; s < s_count; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        out.grad_h(s, i) = 4.0 * c * (h(s, i) * row_sums[i] - ha(s, i));
      }
    }
  } else {
    // dL/dh_sa = 2c sum_j A_aj sign(h_sa - h_sj).
    const auto& k = kernels::active();
    for (std::size_t s = 0; s < s_count; ++s) {
      const double* hrow = h.row(s).data();
      for (std::size_t i = 0; i < n; ++i) {
        out.grad_h(s, i) = 2.0 * c * k.signed_weight_sum(hrow[i], hrow, a.row(i).data(), n);
      }
    }
  }
  return out;
}

const char* divergence_name(Divergence d) noexcept {
  return d == Divergence::Square ? "square" : "abs";
}

}  // namespace beanlab::bean
