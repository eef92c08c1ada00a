#include "aradmm/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aradmm/trace.hpp"

namespace aradmm {

ParamSequence ParamSequence::from_trace(const Trace& trace) {
  ParamSequence seq;
  seq.taus.reserve(trace.rows.size());
  seq.gammas.reserve(trace.rows.size());
  for (const TraceRow& row : trace.rows) {
    seq.taus.push_back(row.tau);
    seq.gammas.push_back(row.gamma);
  }
  return seq;
}

namespace {

double bounded_adaptivity_term(double gamma_k, double ratio_sq) {
  if (!(gamma_k >= 1.0 && gamma_k < 2.0)) {
    throw GammaOutOfRange("gamma = " + std::to_string(gamma_k));
  }
  const double value = gamma_k / (2.0 - gamma_k) * std::max(ratio_sq, 1.0) - 1.0;
  return std::max(value, -1e-15);
}

void require_positive(double tau_k, double tau_prev) {
  if (!(tau_k > 0.0 && tau_prev > 0.0)) {
    throw InvalidArgument("penalties must be positive");
  }
}

}  // namespace

double eta_sq(double gamma_k, double tau_k, double tau_prev) {
  require_positive(tau_k, tau_prev);
  const double ratio = tau_k / tau_prev;
  return bounded_adaptivity_term(gamma_k, ratio * ratio);
}

double theta_sq(double gamma_k, double tau_k, double tau_prev) {
  require_positive(tau_k, tau_prev);
  const double ratio = tau_prev / tau_k;
  return bounded_adaptivity_term(gamma_k, ratio * ratio);
}

AuditReport audit(const ParamSequence& seq, double tau_floor) {
  require_same_size(static_cast<Index>(seq.taus.size()),
                    static_cast<Index>(seq.gammas.size()),
                    "parameter sequence");
  AuditReport rep;
  const std::size_t n = seq.taus.size();
  if (n == 0) {
    rep.satisfies_A1 = rep.satisfies_A2 = true;
    return rep;
  }

  rep.tau_min = *std::min_element(seq.taus.begin(), seq.taus.end());
  rep.tau_max = *std::max_element(seq.taus.begin(), seq.taus.end());
  for (double g : seq.gammas) {
    if (!(g >= 1.0 && g < 2.0)) rep.gammas_in_range = false;
  }
  const bool taus_ok = rep.tau_min > 0.0 && std::isfinite(rep.tau_max);
  if (!rep.gammas_in_range || !taus_ok) return rep;

  const std::size_t tail_start = std::max<std::size_t>(1, n / 2);
  for (std::size_t i = 1; i < n; ++i) {
    const double e = eta_sq(seq.gammas[i], seq.taus[i], seq.taus[i - 1]);
    const double t = theta_sq(seq.gammas[i], seq.taus[i], seq.taus[i - 1]);
    rep.sum_eta_sq += e;
    rep.sum_theta_sq += t;
    if (i >= tail_start) {
      rep.tail_eta_sq += e;
      rep.tail_theta_sq += t;
    }
  }

  auto bounded = [](double total, double tail) {
    return std::isfinite(total) && tail <= 0.1 * total;
  };
  // 1/tau_k^2 bounded for A1 (tau away from zero), tau_k^2 bounded for A2.
  rep.satisfies_A1 =
      bounded(rep.sum_eta_sq, rep.tail_eta_sq) && rep.tau_min >= tau_floor;
  rep.satisfies_A2 = bounded(rep.sum_theta_sq, rep.tail_theta_sq);
  return rep;
}

}  // namespace aradmm
