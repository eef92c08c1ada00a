#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "aradmm/adaptivity.hpp"
#include "aradmm/problems.hpp"
#include "aradmm/solver.hpp"
#include "doctest.h"
#include "oracles/reference.hpp"
#include "test_util.hpp"

using namespace aradmm;
using aradmm::testing::normal_vector;
using aradmm::testing::policy;
using doctest::Approx;

namespace {

Vector alternating_labels(Index n) {
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = i % 2 ? -1.0 : 1.0;
  return y;
}

Matrix spd(Index n, std::mt19937_64& rng) {
  const Matrix R = oracle::random_matrix(n, n, rng);
  return R.transpose() * R / static_cast<double>(n) + Matrix::Identity(n, n);
}

// The oracle output must not be beaten by nearby points on the augmented
// objective. g (or h) enters the objective as a constant for the u (or v)
// subproblem.
void check_subproblem_optimality(const ProblemSpec& prob, const Vector& u_feas,
                                 const Vector& v_feas, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double tau = 0.7;
  const Vector lambda = normal_vector(prob.p, rng);
  const Vector relaxed = prob.A.apply(u_feas) + 0.1 * normal_vector(prob.p, rng);

  const Vector u = prob.u_oracle(v_feas, lambda, tau);
  auto Lu = [&](const Vector& x) {
    const Vector r = prob.b - prob.A.apply(x) - prob.B.apply(v_feas) +
                     lambda / tau;
    return prob.objective(x, v_feas) + 0.5 * tau * r.squaredNorm();
  };
  const Vector v = prob.v_oracle(relaxed, lambda, tau);
  auto Lv = [&](const Vector& y) {
    const Vector r = prob.b - relaxed - prob.B.apply(y) + lambda / tau;
    return prob.objective(u_feas, y) + 0.5 * tau * r.squaredNorm();
  };
  const double lu = Lu(u);
  const double lv = Lv(v);
  REQUIRE(std::isfinite(lu));
  REQUIRE(std::isfinite(lv));
  for (int t = 0; t < 20; ++t) {
    for (double eps : {1e-2, 1e-4}) {
      const Vector du = eps * normal_vector(prob.n, rng);
      const Vector dv = eps * normal_vector(prob.m, rng);
      CHECK(Lu(u + du) >= lu - 1e-9 * (1.0 + std::abs(lu)));
      CHECK(Lv(v + dv) >= lv - 1e-9 * (1.0 + std::abs(lv)));
    }
  }
}

}  // namespace

TEST_CASE("subproblem oracles minimize their augmented objectives") {
  std::mt19937_64 rng(21);
  SUBCASE("elastic net") {
    const Matrix D = oracle::random_matrix(12, 8, rng);
    const Vector c = oracle::random_vector(12, rng);
    const ProblemSpec p = build_elastic_net(D, c, 0.3, 0.2);
    check_subproblem_optimality(p, Vector::Zero(8), Vector::Zero(8), 1);
  }
  SUBCASE("low-rank least squares") {
    const Matrix D = oracle::random_matrix(10, 5, rng);
    const Matrix C = oracle::random_matrix(10, 4, rng);
    const ProblemSpec p = build_lrls(D, C, 0.5, 0.1);
    check_subproblem_optimality(p, Vector::Zero(20), Vector::Zero(20), 2);
  }
  SUBCASE("quadratic program") {
    const Matrix Q = spd(6, rng);
    const ProblemSpec p = build_qp(Q, oracle::random_vector(6, rng),
                                   oracle::random_matrix(9, 6, rng),
                                   Vector::Ones(9));
    check_subproblem_optimality(p, Vector::Zero(6), Vector::Ones(9), 3);
  }
  SUBCASE("dual SVM") {
    const Matrix X = oracle::random_matrix(10, 3, rng);
    const Vector y = alternating_labels(10);
    const Matrix Q = y.asDiagonal() * X * X.transpose() * y.asDiagonal();
    const ProblemSpec p = build_dual_svm(Q, y, 1.0);
    check_subproblem_optimality(p, Vector::Zero(10), Vector::Zero(10), 4);
  }
  SUBCASE("consensus logistic") {
    std::vector<LogisticBlock> blocks;
    for (int i = 0; i < 3; ++i) {
      blocks.push_back({oracle::random_matrix(8, 4, rng), alternating_labels(8)});
    }
    const ProblemSpec p = build_consensus_logistic(blocks, 0.2);
    check_subproblem_optimality(p, Vector::Zero(12), Vector::Zero(4), 5);
  }
  SUBCASE("unwrapped SVM") {
    const Matrix D = oracle::random_matrix(15, 4, rng);
    const ProblemSpec p = build_unwrapped_svm(D, alternating_labels(15), 1.0);
    check_subproblem_optimality(p, Vector::Zero(4), Vector::Zero(15), 6);
  }
  SUBCASE("total variation") {
    const Matrix img = oracle::random_matrix(5, 4, rng);
    const ProblemSpec p = build_tvid(img, 0.3);
    check_subproblem_optimality(p, Vector::Zero(20), Vector::Zero(40), 7);
  }
  SUBCASE("robust PCA") {
    const Matrix C = oracle::random_matrix(6, 5, rng);
    const ProblemSpec p = build_rpca(C, 0.4);
    check_subproblem_optimality(p, Vector::Zero(30), Vector::Zero(30), 8);
  }
  SUBCASE("scalar quadratic") {
    const ProblemSpec p = build_scalar_quadratic(2.0, 0.5);
    check_subproblem_optimality(p, Vector::Zero(1), Vector::Zero(1), 9);
  }
}

TEST_CASE("builders produce consistent operators") {
  std::mt19937_64 rng(22);
  std::vector<ProblemSpec> probs;
  probs.push_back(build_elastic_net(oracle::random_matrix(7, 5, rng),
                                    oracle::random_vector(7, rng), 0.1, 0.1));
  probs.push_back(build_qp(spd(4, rng), oracle::random_vector(4, rng),
                           oracle::random_matrix(6, 4, rng), Vector::Ones(6)));
  std::vector<LogisticBlock> blocks(2, {oracle::random_matrix(5, 3, rng),
                                        alternating_labels(5)});
  probs.push_back(build_consensus_logistic(blocks, 0.1));
  probs.push_back(build_unwrapped_svm(oracle::random_matrix(9, 3, rng),
                                      alternating_labels(9), 1.0));
  probs.push_back(build_tvid(oracle::random_matrix(6, 7, rng), 0.1));
  for (const ProblemSpec& p : probs) {
    CAPTURE(p.name);
    CHECK_NOTHROW(p.validate());
    CHECK(p.A.rows() == p.p);
    CHECK(p.B.rows() == p.p);
    CHECK(p.A.cols() == p.n);
    CHECK(p.B.cols() == p.m);
    CHECK(adjoint_mismatch(p.A, 10, 3) <= 1e-12);
    CHECK(adjoint_mismatch(p.B, 10, 3) <= 1e-12);
  }
}

TEST_CASE("builder argument errors") {
  std::mt19937_64 rng(23);
  const Matrix D = oracle::random_matrix(4, 3, rng);
  CHECK_THROWS_AS(build_elastic_net(D, Vector::Ones(3), 0.1, 0.1),
                  DimensionMismatch);
  CHECK_THROWS_AS(build_elastic_net(D, Vector::Ones(4), -0.1, 0.1),
                  InvalidArgument);
  Matrix Q = Matrix::Identity(3, 3);
  Q(1, 1) = -1.0;
  CHECK_THROWS_AS(build_qp(Q, Vector::Zero(3), D, Vector::Ones(4)), NonPsdQ);
  CHECK_THROWS_AS(build_consensus_logistic({}, 0.1), EmptyBlock);
  CHECK_THROWS_AS(build_scalar_quadratic(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(unflatten(Vector::Ones(5), 2, 3), DimensionMismatch);

  Vector x(6);
  x << 1, 2, 3, 4, 5, 6;
  const Matrix M = unflatten(x, 2, 3);
  CHECK(M(1, 0) == 2.0);
  CHECK(M(0, 2) == 5.0);
}

TEST_CASE("QP suggests the geometric mean of the extreme eigenvalues") {
  std::mt19937_64 rng(24);
  const Matrix Q = spd(8, rng);
  const ProblemSpec p = build_qp(Q, oracle::random_vector(8, rng),
                                 oracle::random_matrix(5, 8, rng),
                                 Vector::Ones(5));
  const Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
  REQUIRE(p.suggested_tau0.has_value());
  CHECK(*p.suggested_tau0 ==
        Approx(std::sqrt(es.eigenvalues().minCoeff() *
                         es.eigenvalues().maxCoeff()))
            .epsilon(1e-5));
}

namespace {

Vector solve_tight(const ProblemSpec& p, PolicyKind kind, std::uint64_t seed,
                   SolveResult* out = nullptr) {
  std::mt19937_64 rng(seed);
  PolicyConfig cfg = policy(kind);
  if (p.suggested_tau0) cfg.tau0 = *p.suggested_tau0;
  const SolveResult r =
      solve(p, cfg, normal_vector(p.m, rng), normal_vector(p.p, rng), 1e-9,
            20000);
  REQUIRE(r.status == SolveStatus::Converged);
  if (out) *out = r;
  return r.state.u;
}

}  // namespace

TEST_CASE("small instances match reference solvers") {
  std::mt19937_64 rng(25);
  for (PolicyKind kind : {PolicyKind::Vanilla, PolicyKind::ARADMM}) {
    CAPTURE(to_string(kind));
    {
      const Matrix D = oracle::random_matrix(20, 10, rng);
      const Vector c = oracle::random_vector(20, rng);
      const Vector ref = oracle::elastic_net(D, c, 0.5, 0.1);
      const Vector u = solve_tight(build_elastic_net(D, c, 0.5, 0.1), kind, 1);
      CHECK((u - ref).norm() <= 1e-6 * std::max(1.0, ref.norm()));
    }
    {
      const Matrix Q = spd(6, rng);
      const Vector q = oracle::random_vector(6, rng);
      const Matrix D = oracle::random_matrix(8, 6, rng);
      const Vector c = 0.2 * Vector::Ones(8);
      const Vector ref = oracle::qp(Q, q, D, c);
      const Vector u = solve_tight(build_qp(Q, q, D, c), kind, 2);
      CHECK((u - ref).norm() <= 1e-6 * std::max(1.0, ref.norm()));
    }
    {
      const Matrix X = oracle::random_matrix(16, 3, rng);
      const Vector y = alternating_labels(16);
      const Matrix Q = y.asDiagonal() * X * X.transpose() * y.asDiagonal() +
                       1e-3 * Matrix::Identity(16, 16);
      const Vector ref = oracle::dual_svm(Q, y, 1.0);
      const Vector u = solve_tight(build_dual_svm(Q, y, 1.0), kind, 3);
      CHECK((u - ref).norm() <= 1e-5 * std::max(1.0, ref.norm()));
    }
    {
      const Matrix D = oracle::random_matrix(30, 5, rng);
      const Vector y = alternating_labels(30);
      const Vector ref = oracle::linear_svm(D, y, 1.0);
      const Vector u = solve_tight(build_unwrapped_svm(D, y, 1.0), kind, 4);
      CHECK((u - ref).norm() <= 1e-5 * std::max(1.0, ref.norm()));
    }
  }
}

TEST_CASE("scalar quadratic iterates decay to zero") {
  const ProblemSpec p = build_scalar_quadratic(3.0, 0.4);
  Vector v0(1), l0(1);
  v0 << 2.0;
  l0 << -1.0;
  SolverState s = SolverState::initial(p, v0, l0, 1.0, 1.0);
  for (int k = 0; k < 300; ++k) s = iterate(s, p);
  CHECK(std::abs(s.u[0]) <= 1e-10);
  CHECK(std::abs(s.v[0]) <= 1e-10);
  CHECK(std::abs(s.lambda[0]) <= 1e-10);
}
