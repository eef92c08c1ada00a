#include "aradmm/adaptivity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace aradmm {

namespace {

constexpr double kDegenerateRel = 1e-14;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

bool negligible(double norm, double scale) {
  return norm == 0.0 || norm < kDegenerateRel * scale;
}

}  // namespace

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Vanilla:
      return "vanilla";
    case PolicyKind::FixedRelaxed:
      return "relaxed";
    case PolicyKind::ResidualBalance:
      return "rb";
    case PolicyKind::AADMM:
      return "aadmm";
    case PolicyKind::ARADMM:
      return "aradmm";
  }
  return "unknown";
}

PolicyKind parse_policy(const std::string& name) {
  const std::string n = lower(name);
  if (n == "vanilla") return PolicyKind::Vanilla;
  if (n == "relaxed" || n == "fixedrelaxed") return PolicyKind::FixedRelaxed;
  if (n == "rb" || n == "residualbalance") return PolicyKind::ResidualBalance;
  if (n == "aadmm") return PolicyKind::AADMM;
  if (n == "aradmm") return PolicyKind::ARADMM;
  throw InvalidArgument("unknown policy '" + name + "'");
}

void PolicyConfig::validate() const {
  if (!(tau0 >= tau_floor && tau_floor > 0.0)) {
    throw InvalidArgument("need tau0 >= tau_floor > 0");
  }
  if (!(gamma0 >= 1.0 && gamma0 <= gamma_cap && gamma_cap < 2.0)) {
    throw InvalidArgument("need 1 <= gamma0 <= gamma_cap < 2");
  }
  if (!(eps_cor >= 0.0 && eps_cor <= 1.0)) {
    throw InvalidArgument("eps_cor must lie in [0, 1]");
  }
  if (T_f < 1) throw InvalidArgument("T_f must be positive");
  if (!(C_cg >= 0.0)) throw InvalidArgument("C_cg must be nonnegative");
  if (!(rb_mu >= 1.0 && rb_factor >= 1.0)) {
    throw InvalidArgument("residual balancing needs mu >= 1, factor >= 1");
  }
}

Parameters initial_parameters(const PolicyConfig& cfg) {
  switch (cfg.kind) {
    case PolicyKind::FixedRelaxed:
      return {cfg.tau0, std::min(1.5, cfg.gamma_cap)};
    case PolicyKind::ARADMM:
      return {cfg.tau0, cfg.gamma0};
    default:
      return {cfg.tau0, 1.0};
  }
}

SpectralScalar spectral_scalar(const Vector& delta_grad,
                               const Vector& delta_dual) {
  require_same_size(delta_grad.size(), delta_dual.size(), "spectral pair");
  const double gg = delta_grad.squaredNorm();
  const double ll = delta_dual.squaredNorm();
  const double gl = delta_grad.dot(delta_dual);
  const double scale = std::max(std::sqrt(gg), std::sqrt(ll));
  if (negligible(std::sqrt(gg), scale) || negligible(std::sqrt(ll), scale)) {
    throw InvalidCurvature("difference vector is numerically zero");
  }
  if (!(gl > 0.0)) {
    throw InvalidCurvature("nonpositive curvature pair");
  }
  SpectralScalar s;
  s.sd = ll / gl;
  s.mg = gl / gg;
  s.hybrid = (2.0 * s.mg > s.sd) ? s.mg : s.sd - 0.5 * s.mg;
  return s;
}

double correlation(const Vector& x, const Vector& y) {
  require_same_size(x.size(), y.size(), "correlation pair");
  const double nx = x.norm();
  const double ny = y.norm();
  const double scale = std::max(nx, ny);
  if (negligible(nx, scale) || negligible(ny, scale)) return 0.0;
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

namespace {

struct SideEstimate {
  double hat = 0.0;
  double cor = 0.0;
  bool valid = false;
};

// delta_grad is the change of a dual subgradient, delta_dual the change of
// the dual point; iterate_scale guards against differences at round-off.
SideEstimate estimate_side(const Vector& delta_grad, const Vector& delta_dual,
                           double iterate_scale, double eps_cor) {
  SideEstimate e;
  const double scale =
      std::max({iterate_scale, delta_grad.norm(), delta_dual.norm()});
  if (negligible(delta_grad.norm(), scale) ||
      negligible(delta_dual.norm(), scale)) {
    return e;
  }
  e.cor = correlation(delta_grad, delta_dual);
  try {
    e.hat = spectral_scalar(delta_grad, delta_dual).hybrid;
  } catch (const InvalidCurvature&) {
    return e;
  }
  e.valid = e.cor > eps_cor && std::isfinite(e.hat) && e.hat > 0.0;
  return e;
}

}  // namespace

CurvatureEstimate estimate_curvature(const SolverState& state,
                                     const Anchor& anchor,
                                     const ProblemSpec& prob, double eps_cor) {
  const Vector Au = prob.A.apply(state.u);
  const Vector Au0 = prob.A.apply(anchor.u);
  const Vector Bv = prob.B.apply(state.v);
  const Vector Bv0 = prob.B.apply(anchor.v);

  const double alpha_scale = std::max({Au.norm(), Au0.norm(),
                                       state.lambda_hat.norm(),
                                       anchor.lambda_hat.norm()});
  const double beta_scale = std::max(
      {Bv.norm(), Bv0.norm(), state.lambda.norm(), anchor.lambda.norm()});

  const SideEstimate a = estimate_side(
      Au - Au0, state.lambda_hat - anchor.lambda_hat, alpha_scale, eps_cor);
  const SideEstimate b = estimate_side(Bv - Bv0, state.lambda - anchor.lambda,
                                       beta_scale, eps_cor);
  CurvatureEstimate est;
  est.alpha_hat = a.hat;
  est.alpha_cor = a.cor;
  est.valid_alpha = a.valid;
  est.beta_hat = b.hat;
  est.beta_cor = b.cor;
  est.valid_beta = b.valid;
  return est;
}

Parameters optimal_pair(double alpha_hat, double beta_hat) {
  if (!(alpha_hat > 0.0 && beta_hat > 0.0) || !std::isfinite(alpha_hat) ||
      !std::isfinite(beta_hat)) {
    throw InvalidCurvature("curvatures must be positive and finite");
  }
  const double root = std::sqrt(alpha_hat * beta_hat);
  return {root, 1.0 + 2.0 * root / (alpha_hat + beta_hat)};
}

Parameters safeguarded_update(const CurvatureEstimate& est, double tau_k,
                              const PolicyConfig& cfg) {
  Parameters p;
  if (est.valid_alpha && est.valid_beta) {
    p = optimal_pair(est.alpha_hat, est.beta_hat);
  } else if (est.valid_alpha) {
    p = {est.alpha_hat, 1.9};
  } else if (est.valid_beta) {
    p = {est.beta_hat, 1.1};
  } else {
    p = {tau_k, 1.5};
  }
  p.gamma = std::min(p.gamma, cfg.gamma_cap);
  p.tau = std::max(p.tau, cfg.tau_floor);
  return p;
}

Parameters apply_guard(double tau_prop, double gamma_prop, double tau_k,
                       Index k, double C_cg) {
  if (k < 1) throw InvalidArgument("guard needs k >= 1");
  const double kk = static_cast<double>(k);
  const double cap = 1.0 + C_cg / (kk * kk);
  return {std::min(tau_prop, cap * tau_k),
          std::max(1.0, std::min(gamma_prop, cap))};
}

double residual_balance_update(const Residuals& res, double tau_k, double mu,
                               double factor) {
  if (res.r_norm > mu * res.d_norm) return tau_k * factor;
  if (res.d_norm > mu * res.r_norm) return tau_k / factor;
  return tau_k;
}

bool is_adaptation_iteration(Index k, int T_f) {
  // T_f = 1 adapts on every iteration.
  return k % T_f == 1 % T_f;
}

PolicyDecision policy_step(const PolicyConfig& cfg, const SolverState& state,
                           const ProblemSpec& prob, const Residuals& res) {
  PolicyDecision d;
  d.next = {state.tau, state.gamma};
  const Index k = state.k;

  switch (cfg.kind) {
    case PolicyKind::Vanilla:
    case PolicyKind::FixedRelaxed:
      d.next = initial_parameters(cfg);
      return d;

    case PolicyKind::ResidualBalance:
      d.next.gamma = 1.0;
      if (k <= cfg.freeze_after) {
        d.next.tau = std::max(
            cfg.tau_floor,
            residual_balance_update(res, state.tau, cfg.rb_mu, cfg.rb_factor));
      }
      return d;

    case PolicyKind::AADMM:
    case PolicyKind::ARADMM: {
      const bool aadmm = cfg.kind == PolicyKind::AADMM;
      if (aadmm) d.next.gamma = 1.0;
      if (!is_adaptation_iteration(k, cfg.T_f)) return d;
      if (aadmm && k > cfg.freeze_after) return d;
      d.reset_anchor = true;
      if (!state.anchor) return d;

      const CurvatureEstimate est =
          estimate_curvature(state, *state.anchor, prob, cfg.eps_cor);
      d.estimate = est;
      const Parameters prop = safeguarded_update(est, state.tau, cfg);
      if (aadmm) {
        d.next.tau = prop.tau;
      } else {
        d.next = apply_guard(prop.tau, prop.gamma, state.tau, k, cfg.C_cg);
        d.next.gamma = std::min(d.next.gamma, cfg.gamma_cap);
        d.next.tau = std::max(d.next.tau, cfg.tau_floor);
      }
      return d;
    }
  }
  return d;
}

}  // namespace aradmm
