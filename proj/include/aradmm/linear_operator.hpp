#pragma once

#include <memory>
#include <variant>

#include "aradmm/types.hpp"

namespace aradmm {

/// A linear map R^cols -> R^rows with its adjoint. Backed by a scaled
/// identity, a dense matrix or a sparse matrix; copies share the storage.
class LinearOperator {
 public:
  LinearOperator() : LinearOperator(identity(0)) {}

  static LinearOperator identity(Index n, double scale = 1.0);
  static LinearOperator dense(Matrix m);
  static LinearOperator sparse(SparseMatrix m);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Vector apply(const Vector& x) const;
  Vector adjoint(const Vector& y) const;

  /// Gram matrix A^T A as a sparse matrix (exact for every backing).
  SparseMatrix gram_sparse() const;
  /// Gram matrix A^T A as a dense matrix.
  Matrix gram_dense() const;

  bool is_scaled_identity() const {
    return std::holds_alternative<ScaledIdentity>(rep_);
  }

 private:
  struct ScaledIdentity {
    double scale;
  };
  using Rep = std::variant<ScaledIdentity, std::shared_ptr<const Matrix>,
                           std::shared_ptr<const SparseMatrix>>;

  LinearOperator(Index rows, Index cols, Rep rep)
      : rows_(rows), cols_(cols), rep_(std::move(rep)) {}

  Index rows_;
  Index cols_;
  Rep rep_;
};

/// Relative adjoint mismatch |<Ax,y> - <x,A^T y>| / (|Ax||y| + |x||A^T y|)
/// maximized over `probes` seeded random pairs.
double adjoint_mismatch(const LinearOperator& op, int probes, unsigned seed);

}  // namespace aradmm
