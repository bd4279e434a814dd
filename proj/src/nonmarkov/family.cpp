// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <sstream>

#include "nonphys/errors.hpp"
#include "nonphys/mini_spec.hpp"
#include "nonphys/nonmarkov.hpp"

namespace nonphys::nonmarkov {

LinearMap ChannelFamily::at(double t) const {
  if (!(t >= 0.0 && t <= t_max)) {
    std::ostringstream msg;
    msg << name << ": t = " << t << " outside [0, " << t_max << "]";
    throw DomainError(msg.str());
  }
  return evaluator(t);
}

LinearMap propagator(const ChannelFamily& f, double s, double t) {
  if (s > t) throw DomainError("propagator: requires s <= t");
  return channels::compose(f.at(t), channels::inverse(f.at(s), f.cond_limit));
}

ChannelFamily depolarizing_semigroup(double gamma, int d, double t_max) {
  if (!(gamma >= 0.0)) throw DomainError("depolarizing_semigroup: gamma must be >= 0");
  if (d < 2) throw DomainError("depolarizing_semigroup: d must be >= 2");
  ChannelFamily f;
  f.name = "depolarizing_semigroup";
  f.dim = d;
  f.t_max = t_max;
  f.evaluator = [gamma, d](double t) { return channels::depolarizing(1.0 - std::exp(-gamma * t), d); };
  return f;
}

double oscillatory_q(double big_gamma, double omega, double t) {
  return std::exp(-big_gamma * t) * std::cos(omega * t);
}

ChannelFamily oscillatory_dephasing(double big_gamma, double omega, double q_floor,
                                    double t_max) {
  if (!(big_gamma >= 0.0)) throw DomainError("oscillatory_dephasing: gamma must be >= 0");
  if (!(q_floor > 0.0 && q_floor < 1.0))
    throw DomainError("oscillatory_dephasing: q_floor must lie in (0, 1)");
  ChannelFamily f;
  f.name = "oscillatory_dephasing";
  f.dim = 2;
  f.t_max = t_max;
  f.evaluator = [big_gamma, omega, q_floor](double t) {
    const double q = oscillatory_q(big_gamma, omega, t);
    if (std::abs(q) <= q_floor) {
      std::ostringstream msg;
      msg << "oscillatory_dephasing: |q(t)| = " << std::abs(q) << " at t = " << t
          << " is at or below the q_floor guard " << q_floor;
      throw DomainError(msg.str());
    }
    return channels::dephasing(0.5 * (1.0 - q));
  };
  return f;
}

namespace {

using Builder = ChannelFamily (*)(MiniSpec&);

const std::map<std::string, Builder>& builders() {
  static const std::map<std::string, Builder> b = {
      {"depolarizing_semigroup",
       [](MiniSpec& r) {
         return depolarizing_semigroup(r.number("gamma", 1.0), r.integer("d", 2),
                                       r.number("t_max", 10.0));
       }},
      {"oscillatory_dephasing",
       [](MiniSpec& r) {
         return oscillatory_dephasing(r.number("gamma", 0.2), r.number("omega", 2.0),
                                      r.number("q_floor", 0.05), r.number("t_max", 2.0));
       }},
  };
  return b;
}

}  // namespace

ChannelFamily family_from_spec(const std::string& spec) {
  MiniSpec reader = parse_mini_spec(spec);
  const auto it = builders().find(reader.name());
  if (it == builders().end()) throw ParseError("unknown channel family '" + reader.name() + "'");
  ChannelFamily f = it->second(reader);
  reader.finish();
  return f;
}

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builders()) out.push_back(k);
  return out;
}

}  // namespace nonphys::nonmarkov
