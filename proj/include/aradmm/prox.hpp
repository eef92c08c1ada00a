#pragma once

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include <memory>

#include "aradmm/linear_operator.hpp"

namespace aradmm {

/// sign(x) * max(|x| - kappa, 0), elementwise.
Vector soft_threshold(const Vector& x, double kappa);

/// Singular-value soft threshold (prox of kappa * nuclear norm).
Matrix svt(const Matrix& M, double kappa);
/// Prox of kappa1 |.|_* + kappa2/2 |.|_F^2.
Matrix scaled_svt(const Matrix& M, double kappa1, double kappa2);
/// Sum of singular values.
double nuclear_norm(const Matrix& M);

Vector project_box(const Vector& x, double lo, double hi);

/// Euclidean projection onto {z : c^T z = 0, lo <= z <= hi}.
Vector project_box_hyperplane(const Vector& x, double lo, double hi,
                              const Vector& c);

/// argmin_y C * sum max(1 - c_j y_j, 0) + tau/2 |y - w|^2.
Vector hinge_prox(const Vector& w, const Vector& labels, double C, double tau);

/// Factorizations of Q + tau * G for a fixed pair (Q, G), reused while tau
/// is unchanged. Dense pairs use LLT; sparse pairs use a simplicial LDLT with
/// the symbolic analysis done once. Not safe for concurrent use.
class FactorCache {
 public:
  FactorCache(Matrix Q, Matrix G);
  FactorCache(SparseMatrix Q, SparseMatrix G);
  ~FactorCache();
  FactorCache(const FactorCache&) = delete;
  FactorCache& operator=(const FactorCache&) = delete;

  Index dim() const;
  /// Solves (Q + tau G) x = rhs. Throws SingularSystem.
  Vector solve(double tau, const Vector& rhs);
  /// Column-wise solve for matrix right-hand sides.
  Matrix solve(double tau, const Matrix& rhs);

  std::size_t factorizations() const { return factorizations_; }
  std::size_t reuses() const { return reuses_; }

 private:
  void refactor(double tau);

  struct Dense;
  struct Sparse;
  std::unique_ptr<Dense> dense_;
  std::unique_ptr<Sparse> sparse_;
  double tau_ = -1.0;
  bool factored_ = false;
  std::size_t factorizations_ = 0;
  std::size_t reuses_ = 0;
};

/// Solves (Q + tau N^T N) x = rhs without caching. Throws SingularSystem.
Vector quad_solve(const Matrix& Q, double tau, const LinearOperator& N,
                  const Vector& rhs);
/// Same system through a cache built for (Q, N^T N).
Vector quad_solve(FactorCache& cache, double tau, const Vector& rhs);

struct LogisticOptions {
  double tol = 1e-10;  // on |grad| / (1 + |anchor|)
  int max_iter = 100;
};

/// argmin_x sum_j log(1 + exp(-c_j D_j x)) + tau/2 |x - anchor|^2 by damped
/// Newton from w0. Throws InnerNonConvergence.
Vector logistic_newton(const Matrix& D, const Vector& labels, const Vector& w0,
                       double tau, const Vector& anchor,
                       const LogisticOptions& opts = {});

/// Forward differences with replicate boundary for a height x width image
/// stored column-major; output is [horizontal; vertical], size 2*w*h.
SparseMatrix grad_operator(Index width, Index height);

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};
/// Extreme eigenvalues of a symmetric positive definite matrix by power and
/// inverse power iteration. Throws NonPsdQ when Q is not positive definite.
EigenRange extreme_eigenvalues(const Matrix& Q, double rel_tol = 1e-6);

}  // namespace aradmm
