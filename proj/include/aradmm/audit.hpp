#pragma once

#include <vector>

#include "aradmm/types.hpp"

namespace aradmm {

struct Trace;

/// Realized (tau_k, gamma_k) of a run, one entry per iteration.
struct ParamSequence {
  std::vector<double> taus;
  std::vector<double> gammas;

  static ParamSequence from_trace(const Trace& trace);
};

/// gamma/(2-gamma) * max(tau_k^2/tau_prev^2, 1) - 1.
double eta_sq(double gamma_k, double tau_k, double tau_prev);
/// gamma/(2-gamma) * max(tau_prev^2/tau_k^2, 1) - 1.
double theta_sq(double gamma_k, double tau_k, double tau_prev);

struct AuditReport {
  double sum_eta_sq = 0.0;
  double sum_theta_sq = 0.0;
  double tail_eta_sq = 0.0;    // over the last half of the run
  double tail_theta_sq = 0.0;
  double tau_min = 0.0;
  double tau_max = 0.0;
  bool gammas_in_range = true;
  bool satisfies_A1 = false;  // bounded-adaptivity condition on eta
  bool satisfies_A2 = false;  // bounded-adaptivity condition on theta
};

/// Finite-run diagnostic: a partial sum counts as bounded when it is finite
/// and the last half of the run contributes at most 10% of it. This is a
/// heuristic, not a proof of summability.
AuditReport audit(const ParamSequence& seq, double tau_floor = 1e-12);

}  // namespace aradmm
