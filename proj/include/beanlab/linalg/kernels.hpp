#pragma once

#include <cstddef>
#include <string_view>

namespace beanlab::kernels {

// Inner-loop primitives. Every backend implements the same contract; the
// scalar versions are the reference and the vector versions are tested for
// equivalence against them (agreement to rounding, not bitwise: reductions
// are reassociated across lanes).

using DotFn = double (*)(const double* a, const double* b, std::size_t n);
/// y += alpha * x
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
/// sum |a_i - b_i|
using L1DistFn = double (*)(const double* a, const double* b, std::size_t n);
/// sum w_j * sign(pivot - x_j), with sign(0) = 0
using SignedWeightSumFn = double (*)(double pivot, const double* x, const double* w, std::size_t n);

struct KernelTable {
  std::string_view name;
  DotFn dot;
  AxpyFn axpy;
  L1DistFn l1_dist;
  SignedWeightSumFn signed_weight_sum;
};

enum class Backend { Scalar, Avx2 };

const KernelTable& scalar_table() noexcept;
/// Null when the AVX2 kernels were not compiled in.
const KernelTable* avx2_table() noexcept;

/// True when the backend is compiled in and the running CPU supports it.
bool available(Backend b) noexcept;

/// Active table. Chosen on first use: BEANLAB_SIMD=scalar|avx2 if set and
/// available, otherwise the widest available backend.
const KernelTable& active() noexcept;
Backend active_backend() noexcept;

/// Switch backends. Throws ConfigError if the backend is unavailable.
void set_backend(Backend b);

std::string_view backend_name(Backend b) noexcept;

}  // namespace beanlab::kernels
