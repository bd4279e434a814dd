// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nonphys/measures.hpp"

namespace nonphys::measures::detail {

struct Compiled {
  std::string name;
  sdp::HermitianProgram hp;
  std::vector<std::pair<std::string, sdp::HermitianProgram::Var>> vars;
  std::vector<std::pair<std::string, sdp::HermitianProgram::Scalar>> scalars;
  bool maximize = false;  // objective was negated; value = -min
};

Compiled compile_primal(Measure which, const LinearMap& m);
Compiled compile_dual(Measure which, const LinearMap& m);

struct Solved {
  double value = 0.0;
  sdp::Solution solution;
  WitnessSet witness;
};

Solved solve_compiled(const Compiled& c, const MeasureOptions& opt);

// Largest amount by which `h` fails to be PSD (0 if PSD).
double psd_violation(const HermitianOperator& h);

}  // namespace nonphys::measures::detail
