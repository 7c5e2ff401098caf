#include "beanlab/bean/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::bean {
namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
}

// tanh rounds to exactly 1 for |x| above about 19, which would put saturated
// entries at 1.0. The exact value is always below 1, so clamp to the nearest double under it.
void clamp_below_one(Matrix& a) {
  const double top = std::nextafter(1.0, 0.0);
  for (double& v : a.values()) v = std::min(v, top);
}

}  // namespace

Matrix connectivity_strength(const Matrix& w_next, double gamma) {
  require_gamma(gamma);
  Matrix out(w_next.rows(), w_next.cols());
  auto o = out.values();
  auto w = w_next.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::fabs(std::tanh(gamma * w[i]));
  return out;
}

CorrelationMatrix first_order_correlation(const Matrix& w_next, double gamma) {
  Matrix strength = connectivity_strength(w_next, gamma);
  Matrix a = outer_gram(strength);
  if (w_next.cols() > 0) scale_inplace(a, 1.0 / static_cast<double>(w_next.cols()));
  clamp_below_one(a);
  return {std::move(a), CorrelationOrder::First};
}

CorrelationMatrix second_order_correlation(const Matrix& w_next, double gamma) {
  Matrix strength = connectivity_strength(w_next, gamma);
  const Matrix p = outer_gram(strength);
  Matrix a = hadamard(p, p);
  if (w_next.cols() > 0) {
    const double m = static_cast<double>(w_next.cols());
    scale_inplace(a, 1.0 / (m * m));
  }
  clamp_below_one(a);
  return {std::move(a), CorrelationOrder::Second};
}

CorrelationMatrix layer_correlation(const Matrix& w_next, double gamma, CorrelationOrder order) {
  return order == CorrelationOrder::First ? first_order_correlation(w_next, gamma)
                                          : second_order_correlation(w_next, gamma);
}

const char* order_name(CorrelationOrder order) noexcept {
  return order == CorrelationOrder::First ? "first" : "second";
}

}  // namespace beanlab::bean
