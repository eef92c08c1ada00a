#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <random>

#include "aradmm/linear_operator.hpp"
#include "aradmm/prox.hpp"
#include "doctest.h"
#include "oracles/reference.hpp"

using namespace aradmm;
using doctest::Approx;

namespace {

Matrix orthonormal(Index r, Index c, std::mt19937_64& rng) {
  const Matrix M = oracle::random_matrix(r, c, rng);
  Eigen::HouseholderQR<Matrix> qr(M);
  return qr.householderQ() * Matrix::Identity(r, c);
}

}  // namespace

TEST_CASE("soft_threshold") {
  Vector x(4);
  x << 3.0, -0.5, 1.0, -2.0;
  Vector expect(4);
  expect << 2.0, 0.0, 0.0, -1.0;
  CHECK((soft_threshold(x, 1.0) - expect).norm() == 0.0);

  std::mt19937_64 rng(1);
  const Vector y = 2.0 * oracle::random_vector(50, rng);
  const Vector z = soft_threshold(y, 0.7);
  for (Index i = 0; i < y.size(); ++i) {
    CHECK(z[i] == Approx(oracle::soft_scalar(y[i], 0.7)).epsilon(1e-7));
  }
}

TEST_CASE("svt against a known singular decomposition") {
  std::mt19937_64 rng(2);
  const Matrix U = orthonormal(8, 5, rng);
  const Matrix V = orthonormal(6, 5, rng);
  Vector s(5);
  s << 5.0, 3.0, 1.5, 0.8, 0.1;
  const Matrix M = U * s.asDiagonal() * V.transpose();

  const Vector shr = (s.array() - 1.0).max(0.0).matrix();
  const Matrix expect = U * shr.asDiagonal() * V.transpose();
  CHECK((svt(M, 1.0) - expect).norm() <= 1e-12 * M.norm());

  const Vector sc = shr / 1.5;
  const Matrix expect2 = U * sc.asDiagonal() * V.transpose();
  CHECK((scaled_svt(M, 1.0, 0.5) - expect2).norm() <= 1e-12 * M.norm());

  CHECK(nuclear_norm(M) == Approx(s.sum()).epsilon(1e-12));
  CHECK(svt(M, 10.0).norm() == 0.0);
}

TEST_CASE("project_box") {
  Vector x(3);
  x << -2.0, 0.5, 3.0;
  Vector e(3);
  e << 0.0, 0.5, 1.0;
  CHECK(project_box(x, 0.0, 1.0) == e);
  CHECK_THROWS_AS(project_box(x, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("project_box_hyperplane against the dual scan") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin;
  for (int t = 0; t < 30; ++t) {
    const Index n = 12;
    const Vector x = 2.0 * oracle::random_vector(n, rng);
    Vector c(n);
    for (Index i = 0; i < n; ++i) c[i] = coin(rng) ? 1.0 : -1.0;
    c[0] = 1.0;
    c[1] = -1.0;
    const Vector z = project_box_hyperplane(x, 0.0, 1.0, c);
    const Vector ref = oracle::project_box_hyperplane(x, 0.0, 1.0, c);
    CHECK(std::abs(c.dot(z)) <= 1e-10);
    CHECK(z.minCoeff() >= 0.0);
    CHECK(z.maxCoeff() <= 1.0);
    CHECK((z - ref).norm() <= 1e-6);
  }
}

TEST_CASE("project_box_hyperplane infeasible set") {
  Vector x = Vector::Zero(3);
  Vector c = Vector::Ones(3);
  CHECK_THROWS_AS(project_box_hyperplane(x, 1.0, 2.0, c), InfeasibleSet);
  CHECK_THROWS_AS(project_box_hyperplane(x, 0.0, 1.0, Vector::Ones(2)),
                  DimensionMismatch);
}

TEST_CASE("hinge_prox against scalar minimization") {
  std::mt19937_64 rng(4);
  const Vector w = 2.0 * oracle::random_vector(40, rng);
  Vector labels(40);
  for (Index j = 0; j < 40; ++j) labels[j] = j % 2 ? 1.0 : -1.0;
  for (double tau : {0.3, 1.0, 5.0}) {
    const Vector y = hinge_prox(w, labels, 1.0, tau);
    for (Index j = 0; j < w.size(); ++j) {
      CHECK(y[j] == Approx(oracle::hinge_scalar(w[j], labels[j], 1.0, tau))
                        .epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(hinge_prox(w, labels, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("logistic_newton against gradient descent") {
  std::mt19937_64 rng(5);
  const Matrix D = oracle::random_matrix(30, 6, rng);
  Vector labels(30);
  for (Index j = 0; j < 30; ++j) labels[j] = j % 3 ? 1.0 : -1.0;
  const Vector anchor = oracle::random_vector(6, rng);
  for (double tau : {0.05, 1.0, 20.0}) {
    const Vector x = logistic_newton(D, labels, Vector::Zero(6), tau, anchor);
    const Vector ref = oracle::logistic_prox(D, labels, tau, anchor);
    CHECK((x - ref).norm() <= 1e-8 * (1.0 + ref.norm()));
  }
}

TEST_CASE("logistic_newton reports non-convergence") {
  std::mt19937_64 rng(6);
  const Matrix D = 50.0 * oracle::random_matrix(30, 6, rng);
  const Vector labels = Vector::Ones(30);
  LogisticOptions opts;
  opts.max_iter = 1;
  CHECK_THROWS_AS(logistic_newton(D, labels, Vector::Zero(6), 1e-3,
                                  10.0 * Vector::Ones(6), opts),
                  InnerNonConvergence);
}

TEST_CASE("FactorCache reuses factorizations") {
  std::mt19937_64 rng(7);
  const Matrix R = oracle::random_matrix(10, 10, rng);
  const Matrix Q = R.transpose() * R + Matrix::Identity(10, 10);
  const Matrix N = oracle::random_matrix(4, 10, rng);
  const Matrix G = N.transpose() * N;
  const Vector rhs = oracle::random_vector(10, rng);

  FactorCache dense(Q, G);
  FactorCache sparse(SparseMatrix(Q.sparseView()), SparseMatrix(G.sparseView()));
  for (double tau : {0.5, 0.5, 2.0, 2.0, 2.0}) {
    const Matrix sys = Q + tau * G;
    const Vector ref = sys.colPivHouseholderQr().solve(rhs);
    CHECK((dense.solve(tau, rhs) - ref).norm() <= 1e-10 * ref.norm());
    CHECK((sparse.solve(tau, rhs) - ref).norm() <= 1e-10 * ref.norm());
  }
  CHECK(dense.factorizations() == 2);
  CHECK(dense.reuses() == 3);
  CHECK(sparse.factorizations() == 2);

  const Vector x = quad_solve(Q, 0.5, LinearOperator::dense(N), rhs);
  CHECK((x - (Q + 0.5 * G).colPivHouseholderQr().solve(rhs)).norm() <=
        1e-10 * x.norm());
  CHECK_THROWS_AS(dense.solve(1.0, Vector(Vector::Ones(3))), DimensionMismatch);
}

TEST_CASE("FactorCache rejects singular systems") {
  const Matrix Z = Matrix::Zero(3, 3);
  FactorCache dense(Z, Z);
  CHECK_THROWS_AS(dense.solve(1.0, Vector(Vector::Ones(3))), SingularSystem);
}

TEST_CASE("grad_operator on a 2x3 image") {
  // height 2, width 3, column-major pixels.
  Matrix img(2, 3);
  img << 1, 2, 4, 3, 7, 0;
  const Vector x = Eigen::Map<const Vector>(img.data(), 6);
  const SparseMatrix G = grad_operator(3, 2);
  CHECK(G.rows() == 12);
  CHECK(G.cols() == 6);
  const Vector g = G * x;
  Vector expect(12);
  // horizontal x(i, j+1) - x(i, j), zero on the last column
  // vertical x(i+1, j) - x(i, j), zero on the last row
  expect << 1, 4, 2, -7, 0, 0,  //
      2, 0, 5, 0, -4, 0;
  CHECK((g - expect).norm() == 0.0);
  CHECK((G * Vector::Ones(6)).norm() == 0.0);
}

TEST_CASE("extreme_eigenvalues") {
  std::mt19937_64 rng(8);
  const Matrix R = oracle::random_matrix(15, 15, rng);
  const Matrix Q = R.transpose() * R + 0.1 * Matrix::Identity(15, 15);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  const EigenRange r = extreme_eigenvalues(Q, 1e-10);
  CHECK(r.min == Approx(es.eigenvalues().minCoeff()).epsilon(1e-6));
  CHECK(r.max == Approx(es.eigenvalues().maxCoeff()).epsilon(1e-6));

  Matrix bad = Matrix::Identity(3, 3);
  bad(2, 2) = -1.0;
  CHECK_THROWS_AS(extreme_eigenvalues(bad), NonPsdQ);
}
