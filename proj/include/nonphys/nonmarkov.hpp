// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Non-Markovianity of time-parameterized channel families, measured by the
// growth rate of propagator diamond norms.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nonphys/channels.hpp"
#include "nonphys/measures.hpp"

namespace nonphys::nonmarkov {

using channels::LinearMap;

struct ChannelFamily {
  std::string name;
  int dim = 2;
  double t_max = 0.0;
  double cond_limit = 1e8;  // transfer-matrix condition guard for inverses
  std::function<LinearMap(double)> evaluator;

  // Lambda_{t,0}; DomainError outside [0, t_max].
  LinearMap at(double t) const;
};

// Xi_{t,s} = Lambda_{t,0} o Lambda_{s,0}^{-1}.  SingularMapError when
// Lambda_{s,0} fails the condition guard.
LinearMap propagator(const ChannelFamily& f, double s, double t);

// Solver settings used for propagator norms unless overridden: tighter than
// the measure defaults because finite differences divide the error by eps.
measures::MeasureOptions default_measure_options();

// (||Xi_{t+eps,t}||_dia - 1) / eps, with the norm clipped below at 1.
double g_dia(const ChannelFamily& f, double t, double eps,
             const measures::MeasureOptions& opt = default_measure_options());
// Linear extrapolation 2 g(eps/2) - g(eps) of the one-sided difference,
// clipped at 0.
double g_dia_extrapolated(const ChannelFamily& f, double t, double eps,
                          const measures::MeasureOptions& opt = default_measure_options());

struct DivisibilityOptions {
  double t_start = 0.0;
  double t_end = 0.0;  // 0 selects the family's t_max
  int steps = 100;     // grid intervals
  double eps = 1e-4;
  bool extrapolate = false;
  int sup_points = 11;  // coarse subgrid for the propagator-norm supremum
  int jobs = 1;
  measures::MeasureOptions measure = default_measure_options();
};

struct DivisibilityReport {
  std::string family;
  std::vector<double> times;
  std::vector<double> g;
  double integral = 0.0;          // trapezoid of g over the grid
  std::vector<bool> cp_interval;  // Xi_{t_{i+1}, t_i} is CP (tol 1e-8)
  bool cp_divisible = true;
  double sup_norm = 1.0;  // max ||Xi_{t,s}|| over subgrid pairs s <= t
  double sup_s = 0.0;
  double sup_t = 0.0;
  double eps = 0.0;
  bool extrapolated = false;
};

DivisibilityReport i_dia(const ChannelFamily& f, const DivisibilityOptions& opt);

// p(t) = 1 - exp(-gamma t) depolarizing on dimension d.
ChannelFamily depolarizing_semigroup(double gamma, int d = 2, double t_max = 10.0);

// Qubit dephasing with Schur multiplier q(t) = exp(-Gamma t) cos(omega t),
// p(t) = (1 - q(t)) / 2.  Times with |q(t)| <= q_floor are rejected.
ChannelFamily oscillatory_dephasing(double big_gamma, double omega, double q_floor = 0.05,
                                    double t_max = 2.0);
double oscillatory_q(double big_gamma, double omega, double t);

// "name?k=v&k=v" with names depolarizing_semigroup (gamma, d, t_max) and
// oscillatory_dephasing (gamma, omega, q_floor, t_max).
ChannelFamily family_from_spec(const std::string& spec);
std::vector<std::string> family_names();

}  // namespace nonphys::nonmarkov
