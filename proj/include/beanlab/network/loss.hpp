#pragma once

#include <cstdint>
#include <span>

#include "beanlab/linalg/matrix.hpp"

namespace beanlab::net {

struct CrossEntropy {
  double loss = 0.0;  ///< mean over samples of -log softmax(logits)[label]
  Matrix dlogits;     ///< (softmax - onehot) / S
};

/// Throws InputError for a label outside [0, classes).
CrossEntropy softmax_cross_entropy(const Matrix& logits, std::span<const std::uint8_t> labels);

/// Fraction of rows whose argmax equals the label.
double accuracy(const Matrix& logits, std::span<const std::uint8_t> labels);

}  // namespace beanlab::net
