// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include "nonphys/linalg.hpp"

namespace nonphys::linalg {
namespace {

void check_bipartite(const ComplexMatrix& m, int dA, int dB) {
  if (dA <= 0 || dB <= 0 || m.rows() != m.cols() || m.rows() != dA * dB) {
    std::ostringstream os;
    os << "expected a " << dA * dB << "x" << dA * dB << " operator for dims ("
       << dA << "," << dB << "), got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(kron(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int dA, int dB,
                            Subsystem traced) {
  check_bipartite(m, dA, dB);
  if (traced == Subsystem::kB) {
    ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        out(i, j) = m.block(i * dB, j * dB, dB, dB).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
  for (int a = 0; a < dA; ++a) out += m.block(a * dB, a * dB, dB, dB);
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& h, int dA, int dB,
                                Subsystem traced) {
  return HermitianOperator::symmetrized(partial_trace(h.matrix(), dA, dB, traced));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB,
                                Subsystem which) {
  check_bipartite(m, dA, dB);
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j) {
      auto blk = m.block(i * dB, j * dB, dB, dB);
      if (which == Subsystem::kA)
        out.block(j * dB, i * dB, dB, dB) = blk;
      else
        out.block(i * dB, j * dB, dB, dB) = blk.transpose();
    }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& h, int dA, int dB,
                                    Subsystem which) {
  return HermitianOperator::symmetrized(
      partial_transpose(h.matrix(), dA, dB, which));
}

HermitianOperator transpose(const HermitianOperator& h) {
  return HermitianOperator::symmetrized(h.matrix().transpose());
}

Spectrum eigh(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigendecomposition did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RealVector eigenvalues(const HermitianOperator& h) {
  if (h.dim() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix(),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double lambda_min(const HermitianOperator& h) { return eigenvalues(h).minCoeff(); }
double lambda_max(const HermitianOperator& h) { return eigenvalues(h).maxCoeff(); }

double trace_norm(const HermitianOperator& h) {
  return eigenvalues(h).cwiseAbs().sum();
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double operator_norm(const HermitianOperator& h) {
  return eigenvalues(h).cwiseAbs().maxCoeff();
}

PosNegParts positive_negative_parts(const HermitianOperator& h) {
  const Spectrum s = eigh(h);
  const RealVector pos = s.values.cwiseMax(0.0);
  const RealVector neg = (-s.values).cwiseMax(0.0);
  const ComplexMatrix& v = s.vectors;
  return {HermitianOperator::symmetrized(v * pos.cast<cplx>().asDiagonal() *
                                         v.adjoint()),
          HermitianOperator::symmetrized(v * neg.cast<cplx>().asDiagonal() *
                                         v.adjoint())};
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("dimension mismatch in hs_inner");
  // Tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij)
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

bool is_psd(const HermitianOperator& h, double tol) {
  if (h.dim() == 0) return true;
  return lambda_min(h) >= -tol;
}

HermitianOperator sqrt_psd(const HermitianOperator& h) {
  const Spectrum s = eigh(h);
  const RealVector r = s.values.cwiseMax(0.0).cwiseSqrt();
  return HermitianOperator::symmetrized(
      s.vectors * r.cast<cplx>().asDiagonal() * s.vectors.adjoint());
}

HermitianOperator project_psd(const HermitianOperator& h) {
  return positive_negative_parts(h).positive;
}

RealMatrix realify(const ComplexMatrix& h) {
  const Eigen::Index d = h.rows();
  RealMatrix out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  out.bottomRightCorner(d, d) = h.real();
  return out;
}

ComplexMatrix derealify(const RealMatrix& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0)
    throw DimensionError("derealify expects an even square matrix");
  const Eigen::Index d = x.rows() / 2;
  const RealMatrix re = 0.5 * (x.topLeftCorner(d, d) + x.bottomRightCorner(d, d));
  const RealMatrix im = 0.5 * (x.bottomLeftCorner(d, d) - x.topRightCorner(d, d));
  ComplexMatrix out(d, d);
  out.real() = re;
  out.imag() = im;
  return out;
}

std::vector<HermitianOperator> hermitian_basis(int d) {
  std::vector<HermitianOperator> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(k, k) = 1.0;
    basis.push_back(HermitianOperator::symmetrized(e));
  }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(k, l) = 1.0;
      s(l, k) = 1.0;
      basis.push_back(HermitianOperator::symmetrized(s));
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      a(k, l) = cplx(0.0, 1.0);
      a(l, k) = cplx(0.0, -1.0);
      basis.push_back(HermitianOperator::symmetrized(a));
    }
  return basis;
}

std::vector<HermitianOperator> tomographic_states(int d) {
  std::vector<HermitianOperator> states;
  states.reserve(static_cast<std::size_t>(d) * d);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k) {
    ComplexVector v = ComplexVector::Zero(d);
    v(k) = 1.0;
    states.push_back(HermitianOperator::projector(v));
  }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      ComplexVector v = ComplexVector::Zero(d);
      v(k) = r;
      v(l) = r;
      states.push_back(HermitianOperator::projector(v));
      v(l) = cplx(0.0, r);
      states.push_back(HermitianOperator::projector(v));
    }
  return states;
}

RealVector hermitian_coordinates(const HermitianOperator& h) {
  const int d = h.dim();
  RealVector c(d * d);
  int idx = 0;
  for (int k = 0; k < d; ++k) c(idx++) = h(k, k).real();
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      c(idx++) = h(k, l).real();
      c(idx++) = h(k, l).imag();
    }
  return c;
}

HermitianOperator from_hermitian_coordinates(const RealVector& c, int d) {
  if (c.size() != static_cast<Eigen::Index>(d) * d)
    throw DimensionError("coordinate vector has wrong length");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  int idx = 0;
  for (int k = 0; k < d; ++k) m(k, k) = c(idx++);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      const cplx v(c(idx), c(idx + 1));
      idx += 2;
      m(k, l) = v;
      m(l, k) = std::conj(v);
    }
  return HermitianOperator::symmetrized(m);
}

}  // namespace nonphys::linalg
