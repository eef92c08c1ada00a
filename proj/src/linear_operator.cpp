#include "aradmm/linear_operator.hpp"

#include <cmath>
#include <random>

namespace aradmm {

LinearOperator LinearOperator::identity(Index n, double scale) {
  return LinearOperator(n, n, ScaledIdentity{scale});
}

LinearOperator LinearOperator::dense(Matrix m) {
  const Index r = m.rows();
  const Index c = m.cols();
  return LinearOperator(r, c, std::make_shared<const Matrix>(std::move(m)));
}

LinearOperator LinearOperator::sparse(SparseMatrix m) {
  m.makeCompressed();
  const Index r = m.rows();
  const Index c = m.cols();
  return LinearOperator(r, c,
                        std::make_shared<const SparseMatrix>(std::move(m)));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Vector LinearOperator::apply(const Vector& x) const {
  require_same_size(x.size(), cols_, "operator input");
  return std::visit(
      overloaded{
          [&](const ScaledIdentity& id) -> Vector { return id.scale * x; },
          [&](const std::shared_ptr<const Matrix>& m) -> Vector {
            return (*m) * x;
          },
          [&](const std::shared_ptr<const SparseMatrix>& m) -> Vector {
            return (*m) * x;
          }},
      rep_);
}

Vector LinearOperator::adjoint(const Vector& y) const {
  require_same_size(y.size(), rows_, "adjoint input");
  return std::visit(
      overloaded{
          [&](const ScaledIdentity& id) -> Vector { return id.scale * y; },
          [&](const std::shared_ptr<const Matrix>& m) -> Vector {
            return m->transpose() * y;
          },
          [&](const std::shared_ptr<const SparseMatrix>& m) -> Vector {
            return m->transpose() * y;
          }},
      rep_);
}

SparseMatrix LinearOperator::gram_sparse() const {
  return std::visit(
      overloaded{
          [&](const ScaledIdentity& id) -> SparseMatrix {
            SparseMatrix g(cols_, cols_);
            g.setIdentity();
            return g * (id.scale * id.scale);
          },
          [&](const std::shared_ptr<const Matrix>& m) -> SparseMatrix {
            return Matrix(m->transpose() * (*m)).sparseView();
          },
          [&](const std::shared_ptr<const SparseMatrix>& m) -> SparseMatrix {
            return SparseMatrix(m->transpose() * (*m));
          }},
      rep_);
}

Matrix LinearOperator::gram_dense() const {
  return std::visit(
      overloaded{
          [&](const ScaledIdentity& id) -> Matrix {
            return Matrix::Identity(cols_, cols_) * (id.scale * id.scale);
          },
          [&](const std::shared_ptr<const Matrix>& m) -> Matrix {
            return m->transpose() * (*m);
          },
          [&](const std::shared_ptr<const SparseMatrix>& m) -> Matrix {
            return Matrix(SparseMatrix(m->transpose() * (*m)));
          }},
      rep_);
}

double adjoint_mismatch(const LinearOperator& op, int probes, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    Vector x(op.cols());
    Vector y(op.rows());
    for (auto& e : x) e = normal(rng);
    for (auto& e : y) e = normal(rng);
    const Vector ax = op.apply(x);
    const Vector aty = op.adjoint(y);
    const double lhs = ax.dot(y);
    const double rhs = x.dot(aty);
    const double scale = ax.norm() * y.norm() + x.norm() * aty.norm();
    if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace aradmm
