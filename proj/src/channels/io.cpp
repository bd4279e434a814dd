// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nonphys/channels.hpp"
#include "nonphys/mini_spec.hpp"

namespace nonphys::channels {

using linalg::cplx;
using nlohmann::json;

namespace {

ComplexMatrix parse_matrix(const json& rows, int nrows, int ncols, const std::string& what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != nrows)
    throw ParseError(what + ": expected " + std::to_string(nrows) + " rows");
  ComplexMatrix m(nrows, ncols);
  for (int i = 0; i < nrows; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != ncols)
      throw ParseError(what + ": row " + std::to_string(i) + " must have " +
                       std::to_string(ncols) + " entries");
    for (int j = 0; j < ncols; ++j) {
      const json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError(what + ": entries must be [re, im] number pairs");
      m(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

using Factory = std::function<LinearMap(MiniSpec&)>;

const std::map<std::string, Factory>& factories() {
  static const std::map<std::string, Factory> f = {
      {"identity", [](MiniSpec& r) { return identity(r.integer("d", 2)); }},
      {"completely_depolarizing",
       [](MiniSpec& r) { return completely_depolarizing(r.integer("d", 2)); }},
      {"depolarizing",
       [](MiniSpec& r) { return depolarizing(r.number("p"), r.integer("d", 2)); }},
      {"depolarizing_inverse",
       [](MiniSpec& r) { return depolarizing_inverse(r.number("p"), r.integer("d", 2)); }},
      {"dephasing", [](MiniSpec& r) { return dephasing(r.number("p")); }},
      {"dephasing_inverse", [](MiniSpec& r) { return dephasing_inverse(r.number("p")); }},
      {"dephasing_general", [](MiniSpec& r) { return dephasing_general(r.vector("p")); }},
      {"dephasing_general_inverse",
       [](MiniSpec& r) { return dephasing_general_inverse(r.vector("p")); }},
      {"amplitude_damping",
       [](MiniSpec& r) { return amplitude_damping(r.number("gamma")); }},
      {"amplitude_damping_inverse",
       [](MiniSpec& r) { return amplitude_damping_inverse(r.number("gamma")); }},
      {"leakage", [](MiniSpec& r) { return leakage(r.number("p")); }},
      {"leakage_inverse", [](MiniSpec& r) { return leakage_inverse(r.number("p")); }},
      {"transpose_map", [](MiniSpec& r) { return transpose_map(r.integer("d", 2)); }},
      {"transpose", [](MiniSpec& r) { return transpose_map(r.integer("d", 2)); }},
      {"choi_map", [](MiniSpec& r) { return choi_map(r.integer("normalized", 0) != 0); }},
      {"extreme_disparity", [](MiniSpec&) { return extreme_disparity(); }},
      {"random_tp_map",
       [](MiniSpec& r) { return random_tp_map(r.integer("seed", 0), r.integer("d", 2)); }},
      {"random_channel",
       [](MiniSpec& r) { return random_channel(r.integer("seed", 0), r.integer("d", 2)); }},
      {"random_cp_map",
       [](MiniSpec& r) { return random_cp_map(r.integer("seed", 0), r.integer("d", 2)); }},
      {"random_hermitian_map",
       [](MiniSpec& r) {
         return random_hermitian_map(r.integer("seed", 0), r.integer("d", 2));
       }},
  };
  return f;
}

}  // namespace

LinearMap channel_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("channel JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("channel JSON must be an object");
  for (const char* key : {"d_in", "d_out"})
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<int>() <= 0)
      throw ParseError(std::string("channel JSON: '") + key + "' must be a positive integer");
  const int d_in = j["d_in"].get<int>();
  const int d_out = j["d_out"].get<int>();
  const bool has_kraus = j.contains("kraus");
  const bool has_choi = j.contains("choi");
  if (has_kraus == has_choi)
    throw ParseError("channel JSON must contain exactly one of 'kraus' or 'choi'");
  if (has_choi) {
    const ComplexMatrix m = parse_matrix(j["choi"], d_in * d_out, d_in * d_out, "choi");
    return LinearMap(d_in, d_out, HermitianOperator(m));
  }
  const json& ks = j["kraus"];
  if (!ks.is_array() || ks.empty()) throw ParseError("'kraus' must be a non-empty array");
  std::vector<ComplexMatrix> kraus;
  for (const json& k : ks) kraus.push_back(parse_matrix(k, d_out, d_in, "kraus"));
  return from_kraus(kraus);
}

std::string channel_to_json(const LinearMap& m) {
  json j;
  j["d_in"] = m.d_in();
  j["d_out"] = m.d_out();
  j["choi"] = matrix_to_json(m.choi().matrix());
  return j.dump();
}

LinearMap builtin_from_spec(const std::string& spec) {
  MiniSpec reader = parse_mini_spec(spec);
  const std::string name = reader.name();
  const auto it = factories().find(name);
  if (it == factories().end()) {
    std::string known;
    for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
    throw ParseError("unknown builtin channel '" + name + "' (known: " + known + ")");
  }
  LinearMap m = it->second(reader);
  reader.finish();
  return m;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : factories()) names.push_back(k);
  return names;
}

LinearMap load_channel(const std::string& source) {
  static const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin_from_spec(source.substr(prefix.size()));
  std::ifstream in(source);
  if (!in) throw ParseError("cannot open channel file '" + source + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return channel_from_json(ss.str());
}

}  // namespace nonphys::channels
