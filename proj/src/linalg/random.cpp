// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include "nonphys/linalg.hpp"

namespace nonphys::linalg {

ComplexMatrix random_ginibre(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

HermitianOperator random_hermitian(Rng& rng, int d) {
  const ComplexMatrix g = random_ginibre(rng, d, d);
  return HermitianOperator::symmetrized(g);
}

HermitianOperator random_density(Rng& rng, int d) {
  const ComplexMatrix g = random_ginibre(rng, d, d);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return HermitianOperator::symmetrized(rho);
}

ComplexVector random_pure_state(Rng& rng, int d) {
  ComplexVector v = random_ginibre(rng, d, 1);
  return v / v.norm();
}

}  // namespace nonphys::linalg
