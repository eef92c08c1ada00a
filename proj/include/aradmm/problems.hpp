#pragma once

#include <vector>

#include "aradmm/problem.hpp"

namespace aradmm {

/// min 1/2 |Du - c|^2 + rho1 |v|_1 + rho2/2 |v|^2, u - v = 0.
ProblemSpec build_elastic_net(const Matrix& D, const Vector& c, double rho1,
                              double rho2);

/// min 1/2 |DX - C|_F^2 + rho1 |Y|_* + rho2/2 |Y|_F^2, X - Y = 0. X and Y
/// are flattened column-major (cols(D) x cols(C)).
ProblemSpec build_lrls(const Matrix& D, const Matrix& C, double rho1,
                       double rho2);

/// min 1/2 x^T Q x + q^T x subject to Dx <= c, via slack s >= 0 with
/// Dx + s = c. Suggests tau0 = sqrt(eig_max(Q) * eig_min(Q)).
ProblemSpec build_qp(const Matrix& Q, const Vector& q, const Matrix& D,
                     const Vector& c);

/// min 1/2 z^T Q z - e^T z subject to labels^T z = 0, 0 <= z <= C.
ProblemSpec build_dual_svm(const Matrix& Q, const Vector& labels, double C);

struct LogisticBlock {
  Matrix D;
  Vector labels;
};

/// sum_i logistic loss of block i at x_i + rho |z|_1, x_i - z = 0. u stacks
/// x_1..x_N, v is z.
ProblemSpec build_consensus_logistic(const std::vector<LogisticBlock>& blocks,
                                     double rho);

/// min 1/2 |x|^2 + C sum max(1 - c_j y_j, 0), Dx - y = 0.
ProblemSpec build_unwrapped_svm(const Matrix& D, const Vector& labels,
                                double C);

/// min 1/2 |x - image|^2 + rho |y|_1, grad x - y = 0.
ProblemSpec build_tvid(const Matrix& image, double rho);

/// min |Z|_* + rho |E|_1, Z + E = C.
ProblemSpec build_rpca(const Matrix& C, double rho);

/// 1-D h = a/2 u^2, g = c/2 v^2, u - v = 0.
ProblemSpec build_scalar_quadratic(double a, double c);

/// Reshape a flattened column-major variable back to rows x cols.
Matrix unflatten(const Vector& x, Index rows, Index cols);

}  // namespace aradmm
