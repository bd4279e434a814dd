// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "nonphys/cli.hpp"

int main(int argc, char** argv) { return nonphys::cli::run(argc, argv, std::cout, std::cerr); }
