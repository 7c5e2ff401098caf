#include "beanlab/linalg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "beanlab/errors.hpp"

namespace beanlab::kernels {

#ifndef BEANLAB_HAVE_AVX2
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(BEANLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return &scalar_table();
    case Backend::Avx2:
      return available(Backend::Avx2) ? avx2_table() : nullptr;
  }
  return nullptr;
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("BEANLAB_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Backend::Scalar;
    if (want == "avx2" && available(Backend::Avx2)) return Backend::Avx2;
  }
  return available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<int>& backend_slot() noexcept {
  static std::atomic<int> slot{static_cast<int>(initial_backend())};
  return slot;
}

}  // namespace

bool available(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return avx2_table() != nullptr && cpu_has_avx2();
  }
  return false;
}

Backend active_backend() noexcept {
  return static_cast<Backend>(backend_slot().load(std::memory_order_relaxed));
}

const KernelTable& active() noexcept { return *table_for(active_backend()); }

void set_backend(Backend b) {
  if (!available(b)) {
    throw ConfigError("SIMD backend '" + std::string(backend_name(b)) + "' is not available");
  }
  backend_slot().store(static_cast<int>(b), std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace beanlab::kernels
