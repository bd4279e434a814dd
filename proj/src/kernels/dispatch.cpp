// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "nonphys/kernels.hpp"

namespace nonphys::kernels {
namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::axpy, &scalar::gemm};
#if defined(NONPHYS_WITH_AVX2)
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::axpy, &avx2::gemm};
#endif

bool cpu_has_avx2() {
#if defined(NONPHYS_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  const char* env = std::getenv("NONPHYS_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Backend::kScalar;
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

bool backend_supported(Backend backend) {
  if (backend == Backend::kScalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

const KernelTable& table(Backend backend) {
#if defined(NONPHYS_WITH_AVX2)
  if (backend == Backend::kAvx2) return kAvx2Table;
#else
  (void)backend;
#endif
  return kScalarTable;
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::kAvx2 ? "avx2" : "scalar";
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_supported(backend))
    throw std::invalid_argument("kernel backend not supported on this host");
  current().store(backend, std::memory_order_relaxed);
}

}  // namespace nonphys::kernels
