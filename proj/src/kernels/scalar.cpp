// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include "nonphys/kernels.hpp"

namespace nonphys::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemm(std::size_t m, std::size_t k, std::size_t n, const double* a,
          const double* b, double* c) {
  for (std::size_t j = 0; j < n; ++j) {
    double* cj = c + j * m;
    for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double bpj = b[j * k + p];
      if (bpj == 0.0) continue;
      axpy(bpj, a + p * m, cj, m);
    }
  }
}

}  // namespace nonphys::kernels::scalar
