// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>

#include "nonphys/sdp.hpp"

namespace nonphys::sdp {
namespace {

// Maps each variable to a column of the compressed coefficient space where
// symmetric PSD entries (p,q) and (q,p) share one column.
std::vector<int> compressed_columns(const ConeProgram& p, int* ncols) {
  std::vector<int> col(p.num_vars(), -1);
  int next = 0;
  for (int k = 0; k < static_cast<int>(p.blocks().size()); ++k) {
    const Block& bl = p.blocks()[k];
    const int off = p.offset(k);
    if (bl.kind == BlockKind::kPsd) {
      for (int j = 0; j < bl.size; ++j)
        for (int i = 0; i <= j; ++i) {
          col[off + j * bl.size + i] = next;
          col[off + i * bl.size + j] = next;
          ++next;
        }
    } else {
      for (int i = 0; i < bl.size; ++i) col[off + i] = next++;
    }
  }
  *ncols = next;
  return col;
}

}  // namespace

PresolveResult presolve(const ConeProgram& program, double tol) {
  const int m = program.num_constraints();
  int ncols = 0;
  const std::vector<int> col = compressed_columns(program, &ncols);

  // Rows of A become columns of At so that column pivoting ranks the rows.
  RealMatrix At = RealMatrix::Zero(ncols + 1, m);
  for (int i = 0; i < m; ++i)
    for (const auto& [k, v] : program.rows()[i].entries) At(col[k], i) += v;

  PresolveResult out;
  if (m == 0) {
    out.program = program;
    return out;
  }

  Eigen::ColPivHouseholderQR<RealMatrix> qr(At.topRows(ncols));
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());
  if (rank == m) {
    out.program = program;
    out.kept_rows.resize(m);
    for (int i = 0; i < m; ++i) out.kept_rows[i] = i;
    return out;
  }

  std::vector<int> kept;
  for (int i = 0; i < rank; ++i) kept.push_back(qr.colsPermutation().indices()(i));
  std::sort(kept.begin(), kept.end());

  // Consistency: appending b as an extra coordinate must not raise the rank.
  const double bscale = std::max(1.0, program.b().cwiseAbs().maxCoeff());
  const double ascale = std::max(1.0, At.cwiseAbs().maxCoeff());
  At.row(ncols) = program.b().transpose() * (ascale / bscale);
  Eigen::ColPivHouseholderQR<RealMatrix> qr_aug(At);
  qr_aug.setThreshold(1e3 * tol);
  out.inconsistent = qr_aug.rank() > rank;

  ConeProgram reduced;
  for (const Block& bl : program.blocks()) reduced.add_block(bl.kind, bl.size);
  for (int k = 0; k < program.num_vars(); ++k)
    if (program.c()(k) != 0.0) reduced.add_objective(k, program.c()(k));
  reduced.add_objective_constant(program.objective_constant());
  for (int i : kept) {
    const int r = reduced.add_row(program.b()(i));
    for (const auto& [k, v] : program.rows()[i].entries) reduced.add_coefficient(r, k, v);
  }
  out.program = std::move(reduced);
  out.kept_rows = std::move(kept);
  return out;
}

}  // namespace nonphys::sdp
