// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <sstream>

#include "nonphys/linalg.hpp"

namespace nonphys::linalg {

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol)
    : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    std::ostringstream os;
    os << "operator must be square, got " << m_.rows() << "x" << m_.cols();
    throw DimensionError(os.str());
  }
  if (m_.size() == 0) return;
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol * scale) {
    std::ostringstream os;
    os << "operator is not Hermitian (max |M - M^dagger| = " << dev << ")";
    throw NotHermitianError(os.str());
  }
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("operator must be square");
  HermitianOperator h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianOperator HermitianOperator::zero(int d) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Zero(d, d);
  return h;
}

HermitianOperator HermitianOperator::identity(int d) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Identity(d, d);
  return h;
}

HermitianOperator HermitianOperator::from_real(const RealMatrix& m) {
  return HermitianOperator(m.cast<cplx>());
}

HermitianOperator HermitianOperator::projector(const ComplexVector& v) {
  return symmetrized(v * v.adjoint());
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("dimension mismatch in +");
  HermitianOperator h;
  h.m_ = m_ + o.m_;
  return h;
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw DimensionError("dimension mismatch in -");
  HermitianOperator h;
  h.m_ = m_ - o.m_;
  return h;
}

HermitianOperator HermitianOperator::operator-() const {
  HermitianOperator h;
  h.m_ = -m_;
  return h;
}

HermitianOperator HermitianOperator::operator*(double s) const {
  HermitianOperator h;
  h.m_ = m_ * s;
  return h;
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (dim() != o.dim()) throw DimensionError("dimension mismatch in +=");
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (dim() != o.dim()) throw DimensionError("dimension mismatch in -=");
  m_ -= o.m_;
  return *this;
}

}  // namespace nonphys::linalg
