#pragma once

#include <functional>
#include <optional>
#include <string>

#include "aradmm/linear_operator.hpp"

namespace aradmm {

/// Minimizer of h(u) + tau/2 |b - Au - Bv + lambda/tau|^2 over u.
using UOracle =
    std::function<Vector(const Vector& v, const Vector& lambda, double tau)>;
/// Minimizer of g(v) + tau/2 |b - relaxed - Bv + lambda/tau|^2 over v.
using VOracle = std::function<Vector(const Vector& relaxed,
                                     const Vector& lambda, double tau)>;
/// h(u) + g(v); may return +inf outside the domain.
using Objective = std::function<double(const Vector& u, const Vector& v)>;

/// min h(u) + g(v) subject to Au + Bv = b, described through its two
/// subproblem minimizers.
struct ProblemSpec {
  std::string name;
  Index n = 0;  // dim u
  Index m = 0;  // dim v
  Index p = 0;  // dim b
  LinearOperator A;
  LinearOperator B;
  Vector b;
  UOracle u_oracle;
  VOracle v_oracle;
  Objective objective;
  // Problem-specific initial penalty (used when the caller does not pin one).
  std::optional<double> suggested_tau0;

  /// Checks dimensions and adjoint consistency; throws DimensionMismatch.
  void validate() const;
};

}  // namespace aradmm
