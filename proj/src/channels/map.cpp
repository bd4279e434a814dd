// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>

#include "nonphys/channels.hpp"

namespace nonphys::channels {

using linalg::cplx;
using linalg::Subsystem;

LinearMap::LinearMap(int d_in, int d_out, HermitianOperator choi)
    : d_in_(d_in), d_out_(d_out), choi_(std::move(choi)) {
  if (d_in <= 0 || d_out <= 0 || choi_.dim() != d_in * d_out) {
    std::ostringstream os;
    os << "Choi matrix of size " << choi_.dim() << " does not match d_in=" << d_in
       << ", d_out=" << d_out;
    throw DimensionError(os.str());
  }
}

LinearMap LinearMap::operator+(const LinearMap& o) const {
  if (d_in_ != o.d_in_ || d_out_ != o.d_out_) throw DimensionError("map dimension mismatch");
  return LinearMap(d_in_, d_out_, choi_ + o.choi_);
}

LinearMap LinearMap::operator-(const LinearMap& o) const {
  if (d_in_ != o.d_in_ || d_out_ != o.d_out_) throw DimensionError("map dimension mismatch");
  return LinearMap(d_in_, d_out_, choi_ - o.choi_);
}

LinearMap LinearMap::operator*(double s) const {
  return LinearMap(d_in_, d_out_, choi_ * s);
}

LinearMap from_kraus(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw DimensionError("empty Kraus list");
  const int d_out = static_cast<int>(kraus[0].rows());
  const int d_in = static_cast<int>(kraus[0].cols());
  ComplexMatrix j = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
  for (const ComplexMatrix& k : kraus) {
    if (k.rows() != d_out || k.cols() != d_in)
      throw DimensionError("Kraus operators have inconsistent shapes");
    // v = sum_i |i> (x) K|i>
    linalg::ComplexVector v(d_in * d_out);
    for (int i = 0; i < d_in; ++i) v.segment(i * d_out, d_out) = k.col(i);
    j += v * v.adjoint();
  }
  return LinearMap(d_in, d_out, HermitianOperator::symmetrized(j));
}

ComplexMatrix transfer_matrix(const LinearMap& m) {
  const int a = m.d_in();
  const int b = m.d_out();
  const ComplexMatrix& j = m.choi().matrix();
  ComplexMatrix t(b * b, a * a);
  for (int i = 0; i < a; ++i)
    for (int jj = 0; jj < a; ++jj)
      for (int k = 0; k < b; ++k)
        for (int l = 0; l < b; ++l) t(k * b + l, i * a + jj) = j(i * b + k, jj * b + l);
  return t;
}

LinearMap from_transfer(const ComplexMatrix& t, int d_in, int d_out) {
  if (t.rows() != d_out * d_out || t.cols() != d_in * d_in)
    throw DimensionError("transfer matrix has wrong shape");
  ComplexMatrix j(d_in * d_out, d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int jj = 0; jj < d_in; ++jj)
      for (int k = 0; k < d_out; ++k)
        for (int l = 0; l < d_out; ++l)
          j(i * d_out + k, jj * d_out + l) = t(k * d_out + l, i * d_in + jj);
  HermitianOperator(j, 1e-8);  // validates
  return LinearMap(d_in, d_out, HermitianOperator::symmetrized(j));
}

ComplexMatrix apply(const LinearMap& m, const ComplexMatrix& x) {
  const int a = m.d_in();
  const int b = m.d_out();
  if (x.rows() != a || x.cols() != a) throw DimensionError("input has wrong dimension");
  const ComplexMatrix& j = m.choi().matrix();
  // Phi(X)_kl = sum_ij X_ij J[(i,k),(j,l)]
  ComplexMatrix out = ComplexMatrix::Zero(b, b);
  for (int i = 0; i < a; ++i)
    for (int jj = 0; jj < a; ++jj) {
      const cplx xij = x(i, jj);
      if (xij == cplx(0.0)) continue;
      out += xij * j.block(i * b, jj * b, b, b);
    }
  return out;
}

HermitianOperator apply(const LinearMap& m, const HermitianOperator& x) {
  return HermitianOperator::symmetrized(apply(m, x.matrix()));
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  if (inner.d_out() != outer.d_in()) throw DimensionError("cannot compose: dimension mismatch");
  const ComplexMatrix t = transfer_matrix(outer) * transfer_matrix(inner);
  return from_transfer(t, inner.d_in(), outer.d_out());
}

double transfer_condition_number(const LinearMap& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(transfer_matrix(m));
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

LinearMap inverse(const LinearMap& m, double cond_limit) {
  if (m.d_in() != m.d_out()) throw DimensionError("only maps with d_in == d_out can be inverted");
  const ComplexMatrix t = transfer_matrix(m);
  Eigen::JacobiSVD<ComplexMatrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || s(0) / smin > cond_limit) {
    std::ostringstream os;
    os << "map is not invertible (transfer condition number "
       << (smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity())
       << " exceeds " << cond_limit << ")";
    throw SingularMapError(os.str());
  }
  const ComplexMatrix tinv =
      svd.matrixV() * s.cwiseInverse().cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
  return from_transfer(tinv, m.d_in(), m.d_in());
}

LinearMap tensor(const LinearMap& a, const LinearMap& b) {
  const int a1 = a.d_in(), b1 = a.d_out(), a2 = b.d_in(), b2 = b.d_out();
  const int din = a1 * a2, dout = b1 * b2;
  const ComplexMatrix& ja = a.choi().matrix();
  const ComplexMatrix& jb = b.choi().matrix();
  ComplexMatrix j(din * dout, din * dout);
  auto idx = [&](int x1, int x2, int y1, int y2) {
    return (x1 * a2 + x2) * dout + y1 * b2 + y2;
  };
  for (int x1 = 0; x1 < a1; ++x1)
    for (int y1 = 0; y1 < b1; ++y1)
      for (int x1p = 0; x1p < a1; ++x1p)
        for (int y1p = 0; y1p < b1; ++y1p) {
          const cplx va = ja(x1 * b1 + y1, x1p * b1 + y1p);
          for (int x2 = 0; x2 < a2; ++x2)
            for (int y2 = 0; y2 < b2; ++y2)
              for (int x2p = 0; x2p < a2; ++x2p)
                for (int y2p = 0; y2p < b2; ++y2p)
                  j(idx(x1, x2, y1, y2), idx(x1p, x2p, y1p, y2p)) =
                      va * jb(x2 * b2 + y2, x2p * b2 + y2p);
        }
  return LinearMap(din, dout, HermitianOperator::symmetrized(j));
}

HermitianOperator choi_marginal(const LinearMap& m) {
  return linalg::partial_trace(m.choi(), m.d_in(), m.d_out(), Subsystem::kB);
}

Classification classify(const LinearMap& m, double tol) {
  Classification c;
  const ComplexMatrix& j = m.choi().matrix();
  c.hermiticity_preserving = (j - j.adjoint()).cwiseAbs().maxCoeff() <= tol;
  c.lambda_min_choi = linalg::lambda_min(m.choi());
  c.completely_positive = c.lambda_min_choi >= -tol;
  const HermitianOperator marg = choi_marginal(m);
  const HermitianOperator one = HermitianOperator::identity(m.d_in());
  c.trace_preserving = linalg::operator_norm(marg - one) <= tol;
  c.trace_non_increasing = linalg::lambda_min(one - marg) >= -tol;
  const double t = marg.trace() / m.d_in();
  c.proportional_tp = linalg::operator_norm(marg - one * t) <= tol;
  c.tp_factor = c.proportional_tp ? t : 0.0;
  return c;
}

}  // namespace nonphys::channels
