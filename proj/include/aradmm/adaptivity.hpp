#pragma once

#include <optional>
#include <string>

#include "aradmm/solver.hpp"

namespace aradmm {

enum class PolicyKind { Vanilla, FixedRelaxed, ResidualBalance, AADMM, ARADMM };

const char* to_string(PolicyKind kind);
/// Accepts the names produced by to_string, case-insensitively.
PolicyKind parse_policy(const std::string& name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::ARADMM;
  double tau0 = 0.1;
  double gamma0 = 1.0;
  double eps_cor = 0.2;
  int T_f = 2;
  double C_cg = 1e10;
  Index freeze_after = 1000;
  double rb_mu = 10.0;
  double rb_factor = 2.0;
  double gamma_cap = 1.999;
  double tau_floor = 1e-12;

  /// Throws InvalidArgument when the bounds are inconsistent.
  void validate() const;
};

/// (tau, gamma) used on the first iteration.
struct Parameters {
  double tau = 0.0;
  double gamma = 1.0;
};
Parameters initial_parameters(const PolicyConfig& cfg);

struct SpectralScalar {
  double sd = 0.0;
  double mg = 0.0;
  double hybrid = 0.0;
};

/// Steepest-descent, minimum-gradient and hybrid spectral stepsizes from a
/// pair of differences. Throws InvalidCurvature when the pair is degenerate
/// (tiny vectors or nonpositive inner product).
SpectralScalar spectral_scalar(const Vector& delta_grad,
                               const Vector& delta_dual);

/// Cosine of the angle between x and y; 0 when either is numerically zero.
double correlation(const Vector& x, const Vector& y);

struct CurvatureEstimate {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double alpha_cor = 0.0;
  double beta_cor = 0.0;
  bool valid_alpha = false;
  bool valid_beta = false;
};

/// Curvatures of the two dual terms fitted between the anchor and the
/// current iterate.
CurvatureEstimate estimate_curvature(const SolverState& state,
                                     const Anchor& anchor,
                                     const ProblemSpec& prob, double eps_cor);

/// tau = sqrt(ah * bh), gamma = 1 + 2 sqrt(ah * bh) / (ah + bh).
Parameters optimal_pair(double alpha_hat, double beta_hat);

Parameters safeguarded_update(const CurvatureEstimate& est, double tau_k,
                              const PolicyConfig& cfg);

/// Caps growth at (1 + C/k^2); keeps gamma >= 1.
Parameters apply_guard(double tau_prop, double gamma_prop, double tau_k,
                       Index k, double C_cg);

double residual_balance_update(const Residuals& res, double tau_k, double mu,
                               double factor);

struct PolicyDecision {
  Parameters next;
  bool reset_anchor = false;
  std::optional<CurvatureEstimate> estimate;
};

/// True on the iterations where an adaptive policy refreshes its estimate.
bool is_adaptation_iteration(Index k, int T_f);

/// Parameters for iteration k + 1 given the state just produced at k.
PolicyDecision policy_step(const PolicyConfig& cfg, const SolverState& state,
                           const ProblemSpec& prob, const Residuals& res);

}  // namespace aradmm
