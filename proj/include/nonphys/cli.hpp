// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver.  Every command prints one JSON document carrying
// "schema": 1; floating-point values are rounded to 12 significant digits
// and object keys are sorted, so identical inputs give identical bytes.

#pragma once

#include <ostream>

namespace nonphys::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kSolverFailure = 3,
};

// Runs `nonphys <command> [options]`.  JSON goes to `out` unless --out is
// given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Rounds to 12 significant digits.
double round12(double v);

}  // namespace nonphys::cli
