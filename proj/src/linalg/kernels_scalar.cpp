#include <cmath>

#include "beanlab/linalg/kernels.hpp"

namespace beanlab::kernels {
namespace {

double dot_ref(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_ref(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double l1_dist_ref(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double signed_weight_sum_ref(double pivot, const double* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (pivot > x[j]) {
      s += w[j];
    } else if (pivot < x[j]) {
      s -= w[j];
    }
  }
  return s;
}

constexpr KernelTable kScalar{"scalar", dot_ref, axpy_ref, l1_dist_ref, signed_weight_sum_ref};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace beanlab::kernels
