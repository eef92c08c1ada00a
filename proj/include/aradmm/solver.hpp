#pragma once

#include <optional>
#include <string>

#include "aradmm/problem.hpp"
#include "aradmm/trace.hpp"

namespace aradmm {

struct PolicyConfig;

/// Iterates remembered at the last adaptation step (iteration k0).
struct Anchor {
  Index k = 0;
  Vector u;
  Vector v;
  Vector lambda;
  Vector lambda_hat;
  double tau = 0.0;
};

struct SolverState {
  Vector u;
  Vector v;
  Vector lambda;
  Vector lambda_hat;
  Vector v_prev;
  double tau = 0.1;
  double gamma = 1.0;
  Index k = 0;
  std::optional<Anchor> anchor;

  /// State at k = 0. u starts at zero, lambda_hat at lambda0 and v_prev at
  /// v0, so the first dual residual measures v_1 - v_0.
  static SolverState initial(const ProblemSpec& prob, const Vector& v0,
                             const Vector& lambda0, double tau0,
                             double gamma0);

  Anchor snapshot() const;
};

struct Residuals {
  Vector r;  // b - Au - Bv
  Vector d;  // tau A^T B (v - v_prev)
  double r_norm = 0.0;
  double d_norm = 0.0;
  double r_rel = 0.0;
  double d_rel = 0.0;
};

/// gamma * Au + (1 - gamma) * (b - Bv).
Vector relaxation_step(const Vector& Au, const Vector& Bv, const Vector& b,
                       double gamma);

/// lambda_k + tau_k (b - A u_next - B v_k).
Vector hat_dual(const SolverState& state, const ProblemSpec& prob,
                const Vector& u_next);

/// One relaxed ADMM step. tau and gamma are left for the policy to change.
/// Throws OracleFailure or NonFiniteIterate tagged with the iteration index.
SolverState iterate(const SolverState& state, const ProblemSpec& prob);

Residuals compute_residuals(const SolverState& state, const ProblemSpec& prob);

/// Relative stopping test, inclusive on both sides.
bool converged(const Residuals& res, double tol);

/// <B(v_next - v), lambda_next - lambda> plus the allowance it is compared
/// against; the pair satisfies the monotonicity bound when value >= -slack.
struct MonotonicityCheck {
  double value = 0.0;
  double slack = 0.0;
  bool holds() const { return value >= -slack; }
};
MonotonicityCheck monotonicity_check(const SolverState& before,
                                     const SolverState& after,
                                     const ProblemSpec& prob);

struct SolveResult {
  SolverState state;
  Trace trace;
  SolveStatus status = SolveStatus::MaxIter;
  std::string failure;
  // Monotonicity pairs checked (k >= 1) and how many fell below the slack.
  Index monotonicity_checked = 0;
  Index monotonicity_violations = 0;
};

/// Runs the adaptive relaxed ADMM loop until the stopping test holds or
/// maxiter iterations have been taken. Iterate failures end the run with
/// status Failed and the partial trace.
SolveResult solve(const ProblemSpec& prob, const PolicyConfig& policy,
                  const Vector& v0, const Vector& lambda0, double tol,
                  Index maxiter);

}  // namespace aradmm
