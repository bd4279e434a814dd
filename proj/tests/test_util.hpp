// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include "nonphys/linalg.hpp"

namespace nonphys::testing {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::HermitianOperator;

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline HermitianOperator diag(std::initializer_list<double> v) {
  linalg::RealVector d(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return HermitianOperator(d.cast<cplx>().asDiagonal().toDenseMatrix());
}

inline HermitianOperator basis_projector(int d, int k) {
  linalg::ComplexVector v = linalg::ComplexVector::Zero(d);
  v(k) = 1.0;
  return HermitianOperator::projector(v);
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nonphys::testing
