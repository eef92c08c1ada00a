#include "aradmm/problems.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

#include "aradmm/prox.hpp"

namespace aradmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A factor cache shared by the closures of one problem instance.
class LockedCache {
 public:
  template <class... Args>
  explicit LockedCache(Args&&... args) : cache_(std::forward<Args>(args)...) {}

  template <class Rhs>
  auto solve(double tau, const Rhs& rhs) {
    std::lock_guard lock(mutex_);
    return cache_.solve(tau, rhs);
  }

 private:
  std::mutex mutex_;
  FactorCache cache_;
};

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0)) {
    throw InvalidArgument(std::string(name) + " must be nonnegative");
  }
}

// Q must be positive semidefinite; returns sqrt(eig_max * eig_min) when it is
// positive definite.
std::optional<double> check_psd(const Matrix& Q) {
  require_same_size(Q.rows(), Q.cols(), "Q square");
  if (!Q.isApprox(Q.transpose(), 1e-12)) throw NonPsdQ("Q is not symmetric");
  try {
    const EigenRange range = extreme_eigenvalues(Q);
    return std::sqrt(range.max * range.min);
  } catch (const NonPsdQ&) {
    // Singular but semidefinite (e.g. a low-rank Gram matrix) is accepted.
    const Eigen::SelfAdjointEigenSolver<Matrix> es(Q, Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (es.info() != Eigen::Success || ev.minCoeff() < -tol) {
      throw NonPsdQ("Q is not positive semidefinite");
    }
    return std::nullopt;
  }
}

}  // namespace

Matrix unflatten(const Vector& x, Index rows, Index cols) {
  require_same_size(x.size(), rows * cols, "flattened size");
  return Eigen::Map<const Matrix>(x.data(), rows, cols);
}

ProblemSpec build_elastic_net(const Matrix& D, const Vector& c, double rho1,
                              double rho2) {
  require_same_size(D.rows(), c.size(), "elastic net D vs c");
  require_nonnegative(rho1, "rho1");
  require_nonnegative(rho2, "rho2");
  const Index n = D.cols();

  ProblemSpec prob;
  prob.name = "elastic_net";
  prob.n = prob.m = prob.p = n;
  prob.A = LinearOperator::identity(n);
  prob.B = LinearOperator::identity(n, -1.0);
  prob.b = Vector::Zero(n);

  auto cache = std::make_shared<LockedCache>(Matrix(D.transpose() * D),
                                             Matrix(Matrix::Identity(n, n)));
  const Vector Dtc = D.transpose() * c;
  prob.u_oracle = [cache, Dtc](const Vector& v, const Vector& lambda,
                               double tau) -> Vector {
    return cache->solve(tau, Vector(Dtc + tau * v + lambda));
  };
  prob.v_oracle = [rho1, rho2](const Vector& relaxed, const Vector& lambda,
                               double tau) -> Vector {
    const Vector w = relaxed - lambda / tau;
    return soft_threshold(tau / (rho2 + tau) * w, rho1 / (rho2 + tau));
  };
  prob.objective = [D, c, rho1, rho2](const Vector& u, const Vector& v) {
    return 0.5 * (D * u - c).squaredNorm() + rho1 * v.lpNorm<1>() +
           0.5 * rho2 * v.squaredNorm();
  };
  return prob;
}

ProblemSpec build_lrls(const Matrix& D, const Matrix& C, double rho1,
                       double rho2) {
  require_same_size(D.rows(), C.rows(), "LRLS D vs C rows");
  require_nonnegative(rho1, "rho1");
  require_nonnegative(rho2, "rho2");
  const Index rows = D.cols();
  const Index cols = C.cols();
  const Index n = rows * cols;

  ProblemSpec prob;
  prob.name = "lrls";
  prob.n = prob.m = prob.p = n;
  prob.A = LinearOperator::identity(n);
  prob.B = LinearOperator::identity(n, -1.0);
  prob.b = Vector::Zero(n);

  auto cache = std::make_shared<LockedCache>(
      Matrix(D.transpose() * D), Matrix(Matrix::Identity(rows, rows)));
  const Matrix DtC = D.transpose() * C;
  prob.u_oracle = [cache, DtC, rows, cols](const Vector& v,
                                           const Vector& lambda,
                                           double tau) -> Vector {
    const Matrix rhs =
        DtC + unflatten(Vector(tau * v + lambda), rows, cols);
    const Matrix X = cache->solve(tau, rhs);
    return Eigen::Map<const Vector>(X.data(), X.size());
  };
  prob.v_oracle = [rho1, rho2, rows, cols](const Vector& relaxed,
                                           const Vector& lambda,
                                           double tau) -> Vector {
    const Matrix W = unflatten(Vector(relaxed - lambda / tau), rows, cols);
    const Matrix Y = scaled_svt(W, rho1 / tau, rho2 / tau);
    return Eigen::Map<const Vector>(Y.data(), Y.size());
  };
  prob.objective = [D, C, rho1, rho2, rows, cols](const Vector& u,
                                                  const Vector& v) {
    const Matrix X = unflatten(u, rows, cols);
    const Matrix Y = unflatten(v, rows, cols);
    return 0.5 * (D * X - C).squaredNorm() + rho1 * nuclear_norm(Y) +
           0.5 * rho2 * Y.squaredNorm();
  };
  return prob;
}

ProblemSpec build_qp(const Matrix& Q, const Vector& q, const Matrix& D,
                     const Vector& c) {
  const Index n = Q.rows();
  require_same_size(q.size(), n, "QP q");
  require_same_size(D.cols(), n, "QP D columns");
  require_same_size(D.rows(), c.size(), "QP c");
  const std::optional<double> tau0 = check_psd(Q);
  const Index m = D.rows();

  ProblemSpec prob;
  prob.name = "qp";
  prob.n = n;
  prob.m = prob.p = m;
  prob.A = LinearOperator::dense(D);
  prob.B = LinearOperator::identity(m);
  prob.b = c;
  prob.suggested_tau0 = tau0;

  auto cache =
      std::make_shared<LockedCache>(Q, Matrix(D.transpose() * D));
  prob.u_oracle = [cache, q, D, c](const Vector& s, const Vector& lambda,
                                   double tau) -> Vector {
    return cache->solve(tau,
                        Vector(-q + D.transpose() * (tau * (c - s) + lambda)));
  };
  prob.v_oracle = [c](const Vector& relaxed, const Vector& lambda,
                      double tau) -> Vector {
    return project_box(c - relaxed + lambda / tau, 0.0, kInf);
  };
  prob.objective = [Q, q](const Vector& x, const Vector& s) {
    if ((s.array() < 0.0).any()) return kInf;
    return 0.5 * x.dot(Q * x) + q.dot(x);
  };
  return prob;
}

ProblemSpec build_dual_svm(const Matrix& Q, const Vector& labels, double C) {
  const Index n = Q.rows();
  require_same_size(labels.size(), n, "dual SVM labels");
  if (!(C >= 0.0)) throw InvalidArgument("C must be nonnegative");
  check_psd(Q);

  ProblemSpec prob;
  prob.name = "dual_svm";
  prob.n = prob.m = prob.p = n;
  prob.A = LinearOperator::identity(n);
  prob.B = LinearOperator::identity(n, -1.0);
  prob.b = Vector::Zero(n);

  auto cache = std::make_shared<LockedCache>(Q, Matrix(Matrix::Identity(n, n)));
  prob.u_oracle = [cache, n](const Vector& v, const Vector& lambda,
                             double tau) -> Vector {
    return cache->solve(tau, Vector(Vector::Ones(n) + tau * v + lambda));
  };
  prob.v_oracle = [labels, C](const Vector& relaxed, const Vector& lambda,
                              double tau) -> Vector {
    return project_box_hyperplane(relaxed - lambda / tau, 0.0, C, labels);
  };
  prob.objective = [Q, labels, C](const Vector& z, const Vector& v) {
    const double tol = 1e-9 * std::max(1.0, C);
    if ((v.array() < -tol).any() || (v.array() > C + tol).any() ||
        std::abs(labels.dot(v)) > tol * std::max<double>(1.0, v.size())) {
      return kInf;
    }
    return 0.5 * z.dot(Q * z) - z.sum();
  };
  return prob;
}

ProblemSpec build_consensus_logistic(const std::vector<LogisticBlock>& blocks,
                                     double rho) {
  if (blocks.empty()) throw EmptyBlock("no blocks");
  require_nonnegative(rho, "rho");
  const Index f = blocks.front().D.cols();
  for (const LogisticBlock& blk : blocks) {
    if (blk.D.rows() == 0) throw EmptyBlock("block without samples");
    require_same_size(blk.D.cols(), f, "block feature count");
    require_same_size(blk.D.rows(), blk.labels.size(), "block labels");
  }
  const Index N = static_cast<Index>(blocks.size());

  ProblemSpec prob;
  prob.name = "consensus_logistic";
  prob.n = prob.p = N * f;
  prob.m = f;
  prob.A = LinearOperator::identity(N * f);
  SparseMatrix replicate(N * f, f);
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < N; ++i) {
    for (Index j = 0; j < f; ++j) trip.emplace_back(i * f + j, j, -1.0);
  }
  replicate.setFromTriplets(trip.begin(), trip.end());
  prob.B = LinearOperator::sparse(replicate);
  prob.b = Vector::Zero(N * f);

  prob.u_oracle = [blocks, N, f](const Vector& z, const Vector& lambda,
                                 double tau) -> Vector {
    Vector u(N * f);
    for (Index i = 0; i < N; ++i) {
      const Vector anchor = z + lambda.segment(i * f, f) / tau;
      u.segment(i * f, f) = logistic_newton(blocks[i].D, blocks[i].labels,
                                            anchor, tau, anchor);
    }
    return u;
  };
  prob.v_oracle = [rho, N, f](const Vector& relaxed, const Vector& lambda,
                              double tau) -> Vector {
    Vector mean = Vector::Zero(f);
    for (Index i = 0; i < N; ++i) {
      mean += relaxed.segment(i * f, f) - lambda.segment(i * f, f) / tau;
    }
    mean /= static_cast<double>(N);
    return soft_threshold(mean, rho / (static_cast<double>(N) * tau));
  };
  prob.objective = [blocks, rho, N, f](const Vector& u, const Vector& z) {
    double loss = 0.0;
    for (Index i = 0; i < N; ++i) {
      const Vector margin =
          blocks[i].labels.cwiseProduct(blocks[i].D * u.segment(i * f, f));
      for (Index j = 0; j < margin.size(); ++j) {
        const double t = -margin[j];
        loss += t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
      }
    }
    return loss + rho * z.lpNorm<1>();
  };
  return prob;
}

ProblemSpec build_unwrapped_svm(const Matrix& D, const Vector& labels,
                                double C) {
  require_same_size(D.rows(), labels.size(), "SVM labels");
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  const Index samples = D.rows();
  const Index f = D.cols();

  ProblemSpec prob;
  prob.name = "unwrapped_svm";
  prob.n = f;
  prob.m = prob.p = samples;
  prob.A = LinearOperator::dense(D);
  prob.B = LinearOperator::identity(samples, -1.0);
  prob.b = Vector::Zero(samples);

  auto cache = std::make_shared<LockedCache>(Matrix(Matrix::Identity(f, f)),
                                             Matrix(D.transpose() * D));
  prob.u_oracle = [cache, D](const Vector& y, const Vector& lambda,
                             double tau) -> Vector {
    return cache->solve(tau, Vector(D.transpose() * (tau * y + lambda)));
  };
  prob.v_oracle = [labels, C](const Vector& relaxed, const Vector& lambda,
                              double tau) -> Vector {
    return hinge_prox(relaxed - lambda / tau, labels, C, tau);
  };
  prob.objective = [labels, C](const Vector& x, const Vector& y) {
    const double hinge =
        (1.0 - labels.cwiseProduct(y).array()).max(0.0).sum();
    return 0.5 * x.squaredNorm() + C * hinge;
  };
  return prob;
}

ProblemSpec build_tvid(const Matrix& image, double rho) {
  require_nonnegative(rho, "rho");
  const Index height = image.rows();
  const Index width = image.cols();
  const Index npix = width * height;
  const SparseMatrix G = grad_operator(width, height);
  const Vector c = Eigen::Map<const Vector>(image.data(), npix);

  ProblemSpec prob;
  prob.name = "tvid";
  prob.n = npix;
  prob.m = prob.p = 2 * npix;
  prob.A = LinearOperator::sparse(G);
  prob.B = LinearOperator::identity(2 * npix, -1.0);
  prob.b = Vector::Zero(2 * npix);

  SparseMatrix I(npix, npix);
  I.setIdentity();
  auto cache = std::make_shared<LockedCache>(I, SparseMatrix(G.transpose() * G));
  const LinearOperator grad = prob.A;
  prob.u_oracle = [cache, grad, c](const Vector& y, const Vector& lambda,
                                   double tau) -> Vector {
    return cache->solve(tau, Vector(c + grad.adjoint(tau * y + lambda)));
  };
  prob.v_oracle = [rho](const Vector& relaxed, const Vector& lambda,
                        double tau) -> Vector {
    return soft_threshold(relaxed - lambda / tau, rho / tau);
  };
  prob.objective = [c, rho](const Vector& x, const Vector& y) {
    return 0.5 * (x - c).squaredNorm() + rho * y.lpNorm<1>();
  };
  return prob;
}

ProblemSpec build_rpca(const Matrix& C, double rho) {
  require_nonnegative(rho, "rho");
  const Index rows = C.rows();
  const Index cols = C.cols();
  const Index n = rows * cols;

  ProblemSpec prob;
  prob.name = "rpca";
  prob.n = prob.m = prob.p = n;
  prob.A = LinearOperator::identity(n);
  prob.B = LinearOperator::identity(n);
  prob.b = Eigen::Map<const Vector>(C.data(), n);

  const Vector c = prob.b;
  prob.u_oracle = [c, rows, cols](const Vector& e, const Vector& lambda,
                                  double tau) -> Vector {
    const Matrix Z =
        svt(unflatten(Vector(c - e + lambda / tau), rows, cols), 1.0 / tau);
    return Eigen::Map<const Vector>(Z.data(), Z.size());
  };
  prob.v_oracle = [c, rho](const Vector& relaxed, const Vector& lambda,
                           double tau) -> Vector {
    return soft_threshold(c - relaxed + lambda / tau, rho / tau);
  };
  prob.objective = [rho, rows, cols](const Vector& z, const Vector& e) {
    return nuclear_norm(unflatten(z, rows, cols)) + rho * e.lpNorm<1>();
  };
  return prob;
}

ProblemSpec build_scalar_quadratic(double a, double c) {
  if (!(a > 0.0 && c > 0.0)) throw InvalidArgument("need a, c > 0");
  ProblemSpec prob;
  prob.name = "scalar_quadratic";
  prob.n = prob.m = prob.p = 1;
  prob.A = LinearOperator::identity(1);
  prob.B = LinearOperator::identity(1, -1.0);
  prob.b = Vector::Zero(1);
  prob.u_oracle = [a](const Vector& v, const Vector& lambda,
                      double tau) -> Vector {
    return (lambda + tau * v) / (a + tau);
  };
  prob.v_oracle = [c](const Vector& relaxed, const Vector& lambda,
                      double tau) -> Vector {
    return (tau * relaxed - lambda) / (c + tau);
  };
  prob.objective = [a, c](const Vector& u, const Vector& v) {
    return 0.5 * a * u.squaredNorm() + 0.5 * c * v.squaredNorm();
  };
  return prob;
}

}  // namespace aradmm
