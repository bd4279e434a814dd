// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonphys/sdp.hpp"

namespace nonphys::sdp {
namespace {

double min_cone_eig(const ConeProgram& p, const RealVector& v) {
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(p.blocks().size()); ++k) {
    const Block& bl = p.blocks()[k];
    if (bl.kind == BlockKind::kPsd) {
      RealMatrix m = p.block_matrix(v, k);
      m = 0.5 * (m + m.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues().minCoeff());
    } else if (bl.kind == BlockKind::kNonneg) {
      lo = std::min(lo, v.segment(p.offset(k), bl.size).minCoeff());
    }
  }
  return lo;
}

}  // namespace

CertificateReport verify_certificate(const ConeProgram& program,
                                     const Solution& sol, double tol) {
  CertificateReport r;
  if (sol.x.size() != program.num_vars() || sol.s.size() != program.num_vars() ||
      sol.y.size() != program.num_constraints()) {
    r.message = "solution vectors do not match the program";
    return r;
  }
  const RealVector rp = program.b() - program.apply_A(sol.x);
  r.primal_residual = rp.norm() / (1.0 + program.b().norm());
  // Free blocks have a zero dual slack by definition.
  RealVector s = sol.s;
  for (int k = 0; k < static_cast<int>(program.blocks().size()); ++k)
    if (program.blocks()[k].kind == BlockKind::kFree)
      s.segment(program.offset(k), program.blocks()[k].size).setZero();
  const RealVector rd = program.c() - program.apply_At(sol.y) - s;
  r.dual_residual = rd.norm() / (1.0 + program.c().norm());
  const double pobj = program.c().dot(sol.x);
  const double dobj = program.b().dot(sol.y);
  r.relative_gap = std::abs(pobj - dobj) / std::max(1.0, std::abs(pobj));
  r.min_primal_eig = min_cone_eig(program, sol.x);
  r.min_dual_eig = min_cone_eig(program, s);

  std::ostringstream os;
  if (r.primal_residual > tol) os << "primal residual " << r.primal_residual << "; ";
  if (r.dual_residual > tol) os << "dual residual " << r.dual_residual << "; ";
  if (r.relative_gap > tol) os << "gap " << r.relative_gap << "; ";
  if (r.min_primal_eig < -tol) os << "x outside cone " << r.min_primal_eig << "; ";
  if (r.min_dual_eig < -tol) os << "s outside cone " << r.min_dual_eig << "; ";
  r.message = os.str();
  r.ok = r.message.empty();
  if (r.ok) r.message = "ok";
  return r;
}

}  // namespace nonphys::sdp
