// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// "name?k=v&k=v" parameter strings shared by builtin channels and families.
// Values are decimal numbers; vectors are comma separated.  Every key must be
// consumed before finish(), so misspelled parameters are errors.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nonphys {

class MiniSpec {
 public:
  MiniSpec(std::string name, std::map<std::string, std::string> params)
      : name_(std::move(name)), p_(std::move(params)) {}

  const std::string& name() const { return name_; }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  int integer(const std::string& key, std::optional<int> fallback = std::nullopt);
  std::vector<double> vector(const std::string& key);
  // ParseError naming the first unconsumed key.
  void finish() const;

 private:
  double to_double(const std::string& key, const std::string& s) const;

  std::string name_;
  std::map<std::string, std::string> p_;
  std::set<std::string> used_;
};

MiniSpec parse_mini_spec(const std::string& spec);

}  // namespace nonphys
