// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense double-precision kernels used in the solver's inner loops.  Each
// kernel has a portable scalar reference and, on x86-64 builds, an AVX2+FMA
// variant.  The variant is picked once at startup from CPUID; setting
// NONPHYS_KERNELS=scalar in the environment forces the reference path.

#pragma once

#include <cstddef>
#include <string_view>

namespace nonphys::kernels {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // C (m x n) = A (m x k) * B (k x n), all column-major and contiguous.
  void (*gemm)(std::size_t m, std::size_t k, std::size_t n, const double* a,
               const double* b, double* c);
};

const KernelTable& table(Backend backend);
bool backend_supported(Backend backend);
std::string_view backend_name(Backend backend);

Backend active_backend();
// Throws std::invalid_argument if the backend is not supported on this host.
void set_backend(Backend backend);

inline double dot(const double* a, const double* b, std::size_t n) {
  return table(active_backend()).dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  table(active_backend()).axpy(alpha, x, y, n);
}
inline void gemm(std::size_t m, std::size_t k, std::size_t n, const double* a,
                 const double* b, double* c) {
  table(active_backend()).gemm(m, k, n, a, b, c);
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemm(std::size_t m, std::size_t k, std::size_t n, const double* a,
          const double* b, double* c);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemm(std::size_t m, std::size_t k, std::size_t n, const double* a,
          const double* b, double* c);
}  // namespace avx2

}  // namespace nonphys::kernels
