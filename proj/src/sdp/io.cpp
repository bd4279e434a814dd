// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <json.hpp>

#include "nonphys/sdp.hpp"

namespace nonphys::sdp {
namespace {

const char* kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::kPsd: return "psd";
    case BlockKind::kNonneg: return "nonneg";
    case BlockKind::kFree: return "free";
  }
  return "?";
}

BlockKind kind_from_name(const std::string& s) {
  if (s == "psd") return BlockKind::kPsd;
  if (s == "nonneg") return BlockKind::kNonneg;
  if (s == "free") return BlockKind::kFree;
  throw ParseError("unknown block kind '" + s + "'");
}

}  // namespace

std::string to_json(const ConeProgram& program) {
  using nlohmann::json;
  json j;
  j["blocks"] = json::array();
  for (const Block& b : program.blocks())
    j["blocks"].push_back(json::array({kind_name(b.kind), b.size}));
  j["c"] = std::vector<double>(program.c().data(), program.c().data() + program.c().size());
  json a = json::array();
  for (const SparseRow& row : program.rows()) {
    std::vector<double> dense(program.num_vars(), 0.0);
    for (const auto& [k, v] : row.entries) dense[k] += v;
    a.push_back(dense);
  }
  j["A"] = a;
  j["b"] = std::vector<double>(program.b().data(), program.b().data() + program.b().size());
  j["objective_constant"] = program.objective_constant();
  return j.dump();
}

ConeProgram program_from_json(const std::string& text) {
  using nlohmann::json;
  ConeProgram p;
  try {
    const json j = json::parse(text);
    for (const auto& b : j.at("blocks"))
      p.add_block(kind_from_name(b.at(0).get<std::string>()), b.at(1).get<int>());
    const auto c = j.at("c").get<std::vector<double>>();
    if (static_cast<int>(c.size()) != p.num_vars()) throw ParseError("c has wrong length");
    for (int k = 0; k < p.num_vars(); ++k)
      if (c[k] != 0.0) p.add_objective(k, c[k]);
    const auto b = j.at("b").get<std::vector<double>>();
    const auto& a = j.at("A");
    if (a.size() != b.size()) throw ParseError("A and b disagree in row count");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const int r = p.add_row(b[i]);
      const auto row = a[i].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != p.num_vars()) throw ParseError("row has wrong length");
      for (int k = 0; k < p.num_vars(); ++k) p.add_coefficient(r, k, row[k]);
    }
    if (j.contains("objective_constant"))
      p.add_objective_constant(j["objective_constant"].get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed program JSON: ") + e.what());
  }
  return p;
}

}  // namespace nonphys::sdp
