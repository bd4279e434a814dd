// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"

namespace nonphys::measures {

double spa(const LinearMap& m) {
  return m.d_out() * std::max(0.0, -linalg::lambda_min(m.choi()));
}

double spa_prime(const LinearMap& m) {
  const auto spec = linalg::eigenvalues(m.choi());
  const double lmin = spec.minCoeff();
  const double lmax = spec.maxCoeff();
  const double scale = std::max(1.0, std::abs(lmax));
  if (lmax - lmin <= 1e-12 * scale)
    throw DomainError("spa_prime: Choi operator has a single eigenvalue");
  if (std::abs(m.d_out() * lmax - 1.0) <= 1e-12)
    throw DomainError("spa_prime: largest Choi eigenvalue equals 1/d_B");
  return -lmin * (m.d_out() * lmax - 1.0) / (lmax - lmin);
}

bool spa_ordering_holds(double r, double spa_prime_value, double spa_value, double tol) {
  return r <= spa_prime_value + tol && spa_prime_value <= spa_value + tol;
}

}  // namespace nonphys::measures
