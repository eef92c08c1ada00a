#include <cmath>
#include <random>

#include "aradmm/audit.hpp"
#include "aradmm/trace.hpp"
#include "doctest.h"

using namespace aradmm;
using doctest::Approx;

TEST_CASE("eta and theta terms") {
  CHECK(eta_sq(1.0, 2.0, 2.0) == Approx(0.0));
  CHECK(theta_sq(1.0, 2.0, 2.0) == Approx(0.0));
  CHECK(eta_sq(1.0, 2.0, 1.0) == Approx(3.0));
  CHECK(theta_sq(1.0, 2.0, 1.0) == Approx(0.0));
  CHECK(theta_sq(1.0, 1.0, 2.0) == Approx(3.0));
  CHECK(eta_sq(1.5, 1.0, 1.0) == Approx(2.0));
  CHECK(eta_sq(1.5, 2.0, 1.0) == Approx(11.0));
  CHECK_THROWS_AS(eta_sq(2.0, 1.0, 1.0), GammaOutOfRange);
  CHECK_THROWS_AS(eta_sq(0.9, 1.0, 1.0), GammaOutOfRange);
  CHECK_THROWS_AS(eta_sq(1.0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("constant vanilla sequence is bounded") {
  ParamSequence seq;
  seq.taus.assign(500, 0.3);
  seq.gammas.assign(500, 1.0);
  const AuditReport rep = audit(seq);
  CHECK(rep.sum_eta_sq == Approx(0.0));
  CHECK(rep.sum_theta_sq == Approx(0.0));
  CHECK(rep.satisfies_A1);
  CHECK(rep.satisfies_A2);
  CHECK(rep.tau_min == 0.3);
  CHECK(rep.tau_max == 0.3);
}

TEST_CASE("constant relaxation never becomes bounded") {
  ParamSequence seq;
  seq.taus.assign(1000, 1.0);
  seq.gammas.assign(1000, 1.5);
  const AuditReport rep = audit(seq);
  CHECK(rep.sum_eta_sq == Approx(2.0 * 999));
  CHECK_FALSE(rep.satisfies_A1);
  CHECK_FALSE(rep.satisfies_A2);
}

TEST_CASE("a sequence with growth capped at 1 + C/k^2 sums to the closed form") {
  // With tau_k = (1 + C/k^2) tau_{k-1} and gamma = 1, eta_k^2 is
  // (1 + C/k^2)^2 - 1 = 2C/k^2 + C^2/k^4.
  const double C = 0.5;
  const std::size_t n = 4000;
  ParamSequence seq;
  double tau = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) tau *= 1.0 + C / static_cast<double>((k - 1) * (k - 1));
    seq.taus.push_back(tau);
    seq.gammas.push_back(1.0);
  }
  double expect = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double k = static_cast<double>(i);
    expect += 2.0 * C / (k * k) + C * C / (k * k * k * k);
  }
  const AuditReport rep = audit(seq);
  CHECK(rep.sum_eta_sq == Approx(expect).epsilon(1e-10));
  CHECK(rep.sum_theta_sq == Approx(0.0));
  CHECK(rep.tail_eta_sq <= 0.1 * rep.sum_eta_sq);
  CHECK(rep.satisfies_A1);
  CHECK(rep.satisfies_A2);
}

TEST_CASE("oscillating penalties violate the tail heuristic") {
  ParamSequence seq;
  for (int k = 0; k < 400; ++k) {
    seq.taus.push_back(k % 2 ? 2.0 : 1.0);
    seq.gammas.push_back(1.0);
  }
  const AuditReport rep = audit(seq);
  CHECK(rep.sum_eta_sq == Approx(3.0 * 200));
  CHECK(rep.sum_theta_sq == Approx(3.0 * 199));
  CHECK_FALSE(rep.satisfies_A1);
  CHECK_FALSE(rep.satisfies_A2);
}

TEST_CASE("penalties below the floor fail A1") {
  ParamSequence seq;
  seq.taus = {1e-13, 1e-13, 1e-13};
  seq.gammas = {1.0, 1.0, 1.0};
  CHECK_FALSE(audit(seq).satisfies_A1);
  CHECK(audit(seq, 1e-14).satisfies_A1);
}

TEST_CASE("out-of-range gamma is reported") {
  ParamSequence seq;
  seq.taus = {1.0, 1.0};
  seq.gammas = {1.0, 2.0};
  const AuditReport rep = audit(seq);
  CHECK_FALSE(rep.gammas_in_range);
  CHECK_FALSE(rep.satisfies_A1);
  CHECK_FALSE(rep.satisfies_A2);
}

TEST_CASE("audit edge cases") {
  CHECK(audit(ParamSequence{}).satisfies_A1);
  ParamSequence bad;
  bad.taus = {1.0};
  CHECK_THROWS_AS(audit(bad), DimensionMismatch);

  Trace t;
  for (Index k = 1; k <= 3; ++k) {
    TraceRow r;
    r.k = k;
    r.tau = static_cast<double>(k);
    r.gamma = 1.25;
    t.rows.push_back(r);
  }
  const ParamSequence seq = ParamSequence::from_trace(t);
  CHECK(seq.taus == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(seq.gammas == std::vector<double>{1.25, 1.25, 1.25});
}
