// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include "nonphys/sdp.hpp"

namespace nonphys::sdp {

using linalg::HermitianOperator;
using linalg::Subsystem;

HermitianProgram::Var HermitianProgram::add_psd(int dim) {
  return {program_.add_block(BlockKind::kPsd, 2 * dim), dim};
}

HermitianProgram::Scalar HermitianProgram::add_nonneg() {
  return {program_.add_block(BlockKind::kNonneg, 1)};
}

void HermitianProgram::add_objective(Var v, const HermitianOperator& h) {
  if (h.dim() != v.dim) throw DimensionError("objective weight has wrong dimension");
  program_.add_objective_matrix(v.block, 0.5 * linalg::realify(h.matrix()));
}

void HermitianProgram::add_objective(Scalar s, double c) {
  program_.add_objective(program_.vec_index(s.block, 0), c);
}

void HermitianProgram::add_objective_constant(double c) {
  program_.add_objective_constant(c);
}

void HermitianProgram::add_var_coefficient(int row, const Term& t,
                                           const HermitianOperator& e) {
  // Tr(E L(V)) = Tr(L^dagger(E) V)
  HermitianOperator adj;
  switch (t.map) {
    case Map::kIdentity:
      adj = e;
      break;
    case Map::kTraceB:
      adj = linalg::kron(e, HermitianOperator::identity(t.dB));
      break;
    case Map::kKronIdentityB:
      adj = linalg::partial_trace(e, t.dA, t.dB, Subsystem::kB);
      break;
  }
  if (adj.dim() != t.var.dim) throw DimensionError("term dimension mismatch");
  program_.add_row_matrix(row, t.var.block,
                          (0.5 * t.coeff) * linalg::realify(adj.matrix()));
}

void HermitianProgram::add_equality(const std::vector<Term>& terms,
                                    const std::vector<ScalarTerm>& scalars,
                                    const HermitianOperator& rhs) {
  for (const HermitianOperator& e : linalg::hermitian_basis(rhs.dim())) {
    const int row = program_.add_row(linalg::hs_inner(e, rhs));
    for (const Term& t : terms) add_var_coefficient(row, t, e);
    const double tr = e.trace();
    if (tr != 0.0)
      for (const ScalarTerm& s : scalars)
        program_.add_coefficient(row, program_.vec_index(s.s.block, 0), s.coeff * tr);
  }
}

void HermitianProgram::add_scalar_equality(const std::vector<TraceTerm>& terms,
                                           const std::vector<ScalarTerm>& scalars,
                                           double rhs) {
  const int row = program_.add_row(rhs);
  for (const TraceTerm& t : terms) {
    if (t.weight.dim() != t.var.dim) throw DimensionError("trace weight mismatch");
    program_.add_row_matrix(row, t.var.block, 0.5 * linalg::realify(t.weight.matrix()));
  }
  for (const ScalarTerm& s : scalars)
    program_.add_coefficient(row, program_.vec_index(s.s.block, 0), s.coeff);
}

HermitianOperator HermitianProgram::value(const RealVector& x, Var v) const {
  return HermitianOperator::symmetrized(
      linalg::derealify(program_.block_matrix(x, v.block)));
}

double HermitianProgram::value(const RealVector& x, Scalar s) const {
  return x(program_.vec_index(s.block, 0));
}

}  // namespace nonphys::sdp
