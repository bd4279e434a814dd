// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <sstream>

#include "nonphys/sdp.hpp"

namespace nonphys::sdp {

int ConeProgram::add_block(BlockKind kind, int size) {
  if (size <= 0) throw DimensionError("cone block size must be positive");
  blocks_.push_back({kind, size});
  offsets_.push_back(num_vars_);
  num_vars_ += blocks_.back().length();
  c_.conservativeResize(num_vars_);
  c_.tail(blocks_.back().length()).setZero();
  return static_cast<int>(blocks_.size()) - 1;
}

int ConeProgram::psd_index(int block, int i, int j) const {
  const Block& bl = blocks_.at(block);
  if (bl.kind != BlockKind::kPsd || i < 0 || j < 0 || i >= bl.size ||
      j >= bl.size)
    throw DimensionError("bad PSD block index");
  return offsets_[block] + j * bl.size + i;
}

int ConeProgram::vec_index(int block, int k) const {
  const Block& bl = blocks_.at(block);
  if (bl.kind == BlockKind::kPsd || k < 0 || k >= bl.size)
    throw DimensionError("bad vector block index");
  return offsets_[block] + k;
}

void ConeProgram::add_objective(int var, double v) {
  if (var < 0 || var >= num_vars_) throw DimensionError("bad variable index");
  c_(var) += v;
}

void ConeProgram::add_objective_matrix(int block, const RealMatrix& s) {
  const Block& bl = blocks_.at(block);
  if (bl.kind != BlockKind::kPsd || s.rows() != bl.size || s.cols() != bl.size)
    throw DimensionError("objective matrix does not match block");
  for (int j = 0; j < bl.size; ++j)
    for (int i = 0; i < bl.size; ++i) c_(offsets_[block] + j * bl.size + i) += s(i, j);
}

int ConeProgram::add_row(double rhs) {
  rows_.emplace_back();
  b_.conservativeResize(static_cast<Eigen::Index>(rows_.size()));
  b_(b_.size() - 1) = rhs;
  return static_cast<int>(rows_.size()) - 1;
}

void ConeProgram::add_coefficient(int row, int var, double v) {
  if (var < 0 || var >= num_vars_) throw DimensionError("bad variable index");
  if (v != 0.0) rows_.at(row).entries.emplace_back(var, v);
}

void ConeProgram::add_row_matrix(int row, int block, const RealMatrix& s) {
  const Block& bl = blocks_.at(block);
  if (bl.kind != BlockKind::kPsd || s.rows() != bl.size || s.cols() != bl.size)
    throw DimensionError("row matrix does not match block");
  auto& entries = rows_.at(row).entries;
  for (int j = 0; j < bl.size; ++j)
    for (int i = 0; i < bl.size; ++i)
      if (s(i, j) != 0.0) entries.emplace_back(offsets_[block] + j * bl.size + i, s(i, j));
}

void ConeProgram::canonicalize() {
  for (auto& row : rows_) {
    auto& e = row.entries;
    std::sort(e.begin(), e.end());
    std::vector<std::pair<int, double>> merged;
    for (const auto& [k, v] : e) {
      if (!merged.empty() && merged.back().first == k)
        merged.back().second += v;
      else
        merged.emplace_back(k, v);
    }
    std::erase_if(merged, [](const auto& p) { return p.second == 0.0; });
    e = std::move(merged);
  }
}

void ConeProgram::negate_objective() {
  c_ = -c_;
  objective_constant_ = -objective_constant_;
}

RealVector ConeProgram::apply_A(const RealVector& x) const {
  RealVector out = RealVector::Zero(num_constraints());
  for (int i = 0; i < num_constraints(); ++i) {
    double s = 0.0;
    for (const auto& [k, v] : rows_[i].entries) s += v * x(k);
    out(i) = s;
  }
  return out;
}

RealVector ConeProgram::apply_At(const RealVector& y) const {
  RealVector out = RealVector::Zero(num_vars_);
  for (int i = 0; i < num_constraints(); ++i)
    for (const auto& [k, v] : rows_[i].entries) out(k) += v * y(i);
  return out;
}

RealMatrix ConeProgram::block_matrix(const RealVector& v, int block) const {
  const Block& bl = blocks_.at(block);
  if (bl.kind != BlockKind::kPsd) throw DimensionError("not a PSD block");
  return Eigen::Map<const RealMatrix>(v.data() + offsets_[block], bl.size, bl.size);
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kPrimalInfeasible: return "primal_infeasible";
    case Status::kDualInfeasible: return "dual_infeasible";
    case Status::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

}  // namespace nonphys::sdp
