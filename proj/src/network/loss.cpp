#include "beanlab/network/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beanlab/errors.hpp"
#include "beanlab/linalg/ops.hpp"

namespace beanlab::net {

CrossEntropy softmax_cross_entropy(const Matrix& logits, std::span<const std::uint8_t> labels) {
  if (labels.size() != logits.rows()) {
    throw ShapeError("cross entropy: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(logits.rows()) + " rows");
  }
  const std::size_t classes = logits.cols();
  CrossEntropy out{0.0, Matrix(logits.rows(), classes)};
  if (logits.rows() == 0) return out;
  const double inv_s = 1.0 / static_cast<double>(logits.rows());
  for (std::size_t s = 0; s < logits.rows(); ++s) {
    if (labels[s] >= classes) {
      throw InputError("label " + std::to_string(labels[s]) + " at sample " + std::to_string(s) +
                       " is outside [0, " + std::to_string(classes) + ")");
    }
    auto z = logits.row(s);
    const double zmax = *std::max_element(z.begin(), z.end());
    double denom = 0.0;
    for (double v : z) denom += std::exp(v - zmax);
    const double log_denom = std::log(denom);
    out.loss += log_denom - (z[labels[s]] - zmax);
    auto d = out.dlogits.row(s);
    for (std::size_t c = 0; c < classes; ++c) {
      const double p = std::exp(z[c] - zmax - log_denom);
      d[c] = (p - (c == labels[s] ? 1.0 : 0.0)) * inv_s;
    }
  }
  out.loss *= inv_s;
  return out;
}

double accuracy(const Matrix& logits, std::span<const std::uint8_t> labels) {
  if (labels.size() != logits.rows()) throw ShapeError("accuracy: label count does not match rows");
  if (labels.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < logits.rows(); ++s) hits += argmax_row(logits, s) == labels[s] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

}  // namespace beanlab::net
