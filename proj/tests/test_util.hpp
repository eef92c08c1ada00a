#pragma once

#include <random>

#include "aradmm/adaptivity.hpp"
#include "aradmm/problem.hpp"
#include "aradmm/solver.hpp"

namespace aradmm::testing {

// Spec with identity-like operators and oracles that must not be called.
inline ProblemSpec bare_spec(LinearOperator A, LinearOperator B, Vector b) {
  ProblemSpec prob;
  prob.name = "bare";
  prob.n = A.cols();
  prob.m = B.cols();
  prob.p = A.rows();
  prob.A = std::move(A);
  prob.B = std::move(B);
  prob.b = std::move(b);
  prob.u_oracle = [](const Vector&, const Vector&, double) -> Vector {
    throw InvalidArgument("u oracle not expected");
  };
  prob.v_oracle = [](const Vector&, const Vector&, double) -> Vector {
    throw InvalidArgument("v oracle not expected");
  };
  prob.objective = [](const Vector&, const Vector&) { return 0.0; };
  return prob;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline Vector normal_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> dist;
  Vector x(n);
  for (auto& e : x) e = dist(rng);
  return x;
}

inline PolicyConfig policy(PolicyKind kind) {
  PolicyConfig cfg;
  cfg.kind = kind;
  return cfg;
}

}  // namespace aradmm::testing
