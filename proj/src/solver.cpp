#include "aradmm/solver.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>

#include "aradmm/adaptivity.hpp"

namespace aradmm {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::MaxIter:
      return "MaxIter";
    case SolveStatus::Failed:
      return "Failed";
  }
  return "Unknown";
}

SolveStatus parse_status(const std::string& text) {
  if (text == "Converged") return SolveStatus::Converged;
  if (text == "MaxIter") return SolveStatus::MaxIter;
  if (text == "Failed") return SolveStatus::Failed;
  throw InvalidArgument("unknown status '" + text + "'");
}

SolverState SolverState::initial(const ProblemSpec& prob, const Vector& v0,
                                 const Vector& lambda0, double tau0,
                                 double gamma0) {
  require_same_size(v0.size(), prob.m, "v0");
  require_same_size(lambda0.size(), prob.p, "lambda0");
  if (!(tau0 > 0.0)) throw InvalidArgument("tau0 must be positive");
  if (!(gamma0 >= 1.0 && gamma0 < 2.0)) {
    throw InvalidArgument("gamma0 must lie in [1, 2)");
  }
  SolverState s;
  s.u = Vector::Zero(prob.n);
  s.v = v0;
  s.v_prev = v0;
  s.lambda = lambda0;
  s.lambda_hat = lambda0;
  s.tau = tau0;
  s.gamma = gamma0;
  s.k = 0;
  return s;
}

Anchor SolverState::snapshot() const {
  return Anchor{k, u, v, lambda, lambda_hat, tau};
}

Vector relaxation_step(const Vector& Au, const Vector& Bv, const Vector& b,
                       double gamma) {
  require_same_size(Au.size(), b.size(), "Au vs b");
  require_same_size(Bv.size(), b.size(), "Bv vs b");
  return gamma * Au + (1.0 - gamma) * (b - Bv);
}

Vector hat_dual(const SolverState& state, const ProblemSpec& prob,
                const Vector& u_next) {
  require_same_size(u_next.size(), prob.n, "u_next");
  return state.lambda +
         state.tau * (prob.b - prob.A.apply(u_next) - prob.B.apply(state.v));
}

namespace {

void require_finite(const Vector& x, const char* name, Index k) {
  if (!x.allFinite()) {
    throw NonFiniteIterate(std::string(name) + " at iteration " +
                           std::to_string(k));
  }
}

double relative(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

SolverState iterate(const SolverState& state, const ProblemSpec& prob) {
  const Index k_next = state.k + 1;
  SolverState next = state;
  const Vector Bv = prob.B.apply(state.v);
  try {
    next.u = prob.u_oracle(state.v, state.lambda, state.tau);
  } catch (const Error& e) {
    throw OracleFailure("u-update at iteration " + std::to_string(k_next) +
                        ": " + e.what());
  }
  require_same_size(next.u.size(), prob.n, "u oracle output");
  require_finite(next.u, "u", k_next);

  const Vector Au = prob.A.apply(next.u);
  next.lambda_hat = state.lambda + state.tau * (prob.b - Au - Bv);
  const Vector relaxed = relaxation_step(Au, Bv, prob.b, state.gamma);

  try {
    next.v = prob.v_oracle(relaxed, state.lambda, state.tau);
  } catch (const Error& e) {
    throw OracleFailure("v-update at iteration " + std::to_string(k_next) +
                        ": " + e.what());
  }
  require_same_size(next.v.size(), prob.m, "v oracle output");
  require_finite(next.v, "v", k_next);

  next.lambda =
      state.lambda + state.tau * (prob.b - relaxed - prob.B.apply(next.v));
  require_finite(next.lambda, "lambda", k_next);
  next.v_prev = state.v;
  next.k = k_next;
  return next;
}

Residuals compute_residuals(const SolverState& state, const ProblemSpec& prob) {
  Residuals res;
  const Vector Au = prob.A.apply(state.u);
  const Vector Bv = prob.B.apply(state.v);
  res.r = prob.b - Au - Bv;
  res.d = state.tau * prob.A.adjoint(prob.B.apply(state.v - state.v_prev));
  res.r_norm = res.r.norm();
  res.d_norm = res.d.norm();
  const double r_den =
      std::max({Au.norm(), Bv.norm(), prob.b.norm()});
  const double d_den = prob.A.adjoint(state.lambda).norm();
  res.r_rel = relative(res.r_norm, r_den);
  res.d_rel = relative(res.d_norm, d_den);
  return res;
}

bool converged(const Residuals& res, double tol) {
  return res.r_rel <= tol && res.d_rel <= tol;
}

MonotonicityCheck monotonicity_check(const SolverState& before,
                                     const SolverState& after,
                                     const ProblemSpec& prob) {
  const Vector b_dv = prob.B.apply(after.v - before.v);
  const Vector dl = after.lambda - before.lambda;
  MonotonicityCheck c;
  c.value = b_dv.dot(dl);
  c.slack = 1e-10 * (b_dv.norm() * dl.norm() + 1.0);
  return c;
}

SolveResult solve(const ProblemSpec& prob, const PolicyConfig& policy,
                  const Vector& v0, const Vector& lambda0, double tol,
                  Index maxiter) {
  if (maxiter < 1) throw InvalidArgument("maxiter must be at least 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  policy.validate();

  const auto start = std::chrono::steady_clock::now();
  const Parameters init = initial_parameters(policy);

  SolveResult out;
  out.trace.meta.problem = prob.name;
  out.trace.meta.policy = to_string(policy.kind);
  out.trace.meta.tol = tol;
  out.trace.rows.reserve(static_cast<std::size_t>(std::min<Index>(maxiter, 10000)));

  SolverState state =
      SolverState::initial(prob, v0, lambda0, init.tau, init.gamma);
  out.status = SolveStatus::MaxIter;

  while (state.k < maxiter) {
    SolverState next;
    try {
      next = iterate(state, prob);
    } catch (const Error& e) {
      out.status = SolveStatus::Failed;
      out.failure = e.what();
      break;
    }

    // The first pair starts from an arbitrary (v0, lambda0) that need not
    // satisfy the v-optimality condition, so checks begin at k = 1.
    if (state.k >= 1) {
      const MonotonicityCheck check = monotonicity_check(state, next, prob);
      ++out.monotonicity_checked;
      if (!check.holds()) ++out.monotonicity_violations;
      assert(check.holds());
    }
    state = std::move(next);

    const Residuals res = compute_residuals(state, prob);
    TraceRow row;
    row.k = state.k;
    row.tau = state.tau;
    row.gamma = state.gamma;
    row.r_norm = res.r_norm;
    row.d_norm = res.d_norm;
    row.r_rel = res.r_rel;
    row.d_rel = res.d_rel;
    row.objective = prob.objective(state.u, state.v);
    out.trace.rows.push_back(row);

    if (converged(res, tol)) {
      out.status = SolveStatus::Converged;
      break;
    }

    const PolicyDecision decision = policy_step(policy, state, prob, res);
    if (decision.reset_anchor) state.anchor = state.snapshot();
    state.tau = decision.next.tau;
    state.gamma = decision.next.gamma;
    assert(state.tau > 0.0 && state.gamma >= 1.0 && state.gamma < 2.0);
  }

  out.state = std::move(state);
  out.trace.meta.status = out.status;
  out.trace.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

}  // namespace aradmm
