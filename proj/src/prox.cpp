#include "aradmm/prox.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace aradmm {

Vector soft_threshold(const Vector& x, double kappa) {
  if (!(kappa >= 0.0)) throw InvalidArgument("kappa must be nonnegative");
  return (x.array() - kappa).max(0.0) + (x.array() + kappa).min(0.0);
}

namespace {

Matrix shrink_singular_values(const Matrix& M, double kappa, double divisor) {
  if (M.size() == 0) return M;
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw SvdFailure("SVD did not converge");
  }
  const Vector s =
      ((svd.singularValues().array() - kappa).max(0.0) / divisor).matrix();
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace

Matrix svt(const Matrix& M, double kappa) {
  if (!(kappa >= 0.0)) throw InvalidArgument("kappa must be nonnegative");
  return shrink_singular_values(M, kappa, 1.0);
}

Matrix scaled_svt(const Matrix& M, double kappa1, double kappa2) {
  if (!(kappa1 >= 0.0 && kappa2 >= 0.0)) {
    throw InvalidArgument("kappas must be nonnegative");
  }
  return shrink_singular_values(M, kappa1, 1.0 + kappa2);
}

double nuclear_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(M);
  if (svd.info() != Eigen::Success) throw SvdFailure("SVD did not converge");
  return svd.singularValues().sum();
}

Vector project_box(const Vector& x, double lo, double hi) {
  if (lo > hi) throw InvalidArgument("empty box");
  return x.cwiseMax(lo).cwiseMin(hi);
}

Vector project_box_hyperplane(const Vector& x, double lo, double hi,
                              const Vector& c) {
  require_same_size(x.size(), c.size(), "hyperplane normal");
  if (lo > hi) throw InvalidArgument("empty box");

  // c^T z over the box ranges over [lowest, highest].
  double lowest = 0.0, highest = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    lowest += c[i] > 0 ? c[i] * lo : c[i] * hi;
    highest += c[i] > 0 ? c[i] * hi : c[i] * lo;
  }
  const double feas_tol = 1e-12 * c.lpNorm<1>() * std::max(std::abs(lo), std::abs(hi));
  if (lowest > feas_tol || highest < -feas_tol) {
    throw InfeasibleSet("hyperplane misses the box");
  }

  auto z_of = [&](double nu) -> Vector {
    return (x - nu * c).cwiseMax(lo).cwiseMin(hi);
  };
  auto phi = [&](double nu) { return c.dot(z_of(nu)); };

  // phi is continuous, nonincreasing and linear between breakpoints where a
  // coordinate enters or leaves the box.
  std::vector<double> bps;
  bps.reserve(2 * static_cast<std::size_t>(c.size()));
  for (Index i = 0; i < c.size(); ++i) {
    if (c[i] != 0.0) {
      bps.push_back((x[i] - lo) / c[i]);
      bps.push_back((x[i] - hi) / c[i]);
    }
  }
  if (bps.empty()) return z_of(0.0);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  // phi is constant outside [bps.front(), bps.back()].
  if (phi(bps.front()) <= 0.0) return z_of(bps.front());
  if (phi(bps.back()) >= 0.0) return z_of(bps.back());

  std::size_t left = 0, right = bps.size() - 1;
  while (right - left > 1) {
    const std::size_t mid = left + (right - left) / 2;
    if (phi(bps[mid]) >= 0.0) {
      left = mid;
    } else {
      right = mid;
    }
  }

  // Exact root on the linear piece (bps[left], bps[right]).
  const double nu_mid = 0.5 * (bps[left] + bps[right]);
  double free_cx = 0.0, free_cc = 0.0, clamped = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    const double t = x[i] - nu_mid * c[i];
    if (t > lo && t < hi) {
      free_cx += c[i] * x[i];
      free_cc += c[i] * c[i];
    } else {
      clamped += c[i] * (t <= lo ? lo : hi);
    }
  }
  double nu = bps[left];
  if (free_cc > 0.0) {
    nu = std::clamp((free_cx + clamped) / free_cc, bps[left], bps[right]);
  }
  return z_of(nu);
}

Vector hinge_prox(const Vector& w, const Vector& labels, double C, double tau) {
  require_same_size(w.size(), labels.size(), "hinge labels");
  if (!(C > 0.0 && tau > 0.0)) throw InvalidArgument("need C, tau > 0");
  const double step = C / tau;
  Vector y(w.size());
  for (Index j = 0; j < w.size(); ++j) {
    const double s = labels[j] * w[j];
    double t;
    if (s > 1.0) {
      t = s;
    } else if (s < 1.0 - step) {
      t = s + step;
    } else {
      t = 1.0;
    }
    y[j] = labels[j] * t;
  }
  return y;
}

struct FactorCache::Dense {
  Matrix Q;
  Matrix G;
  Matrix system;
  Eigen::LLT<Matrix> llt;
};

struct FactorCache::Sparse {
  SparseMatrix Q;
  SparseMatrix G;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool analyzed = false;
};

FactorCache::FactorCache(Matrix Q, Matrix G) : dense_(std::make_unique<Dense>()) {
  require_same_size(Q.rows(), Q.cols(), "Q square");
  require_same_size(G.rows(), G.cols(), "G square");
  require_same_size(Q.rows(), G.rows(), "Q vs G");
  dense_->Q = std::move(Q);
  dense_->G = std::move(G);
}

FactorCache::FactorCache(SparseMatrix Q, SparseMatrix G)
    : sparse_(std::make_unique<Sparse>()) {
  require_same_size(Q.rows(), Q.cols(), "Q square");
  require_same_size(G.rows(), G.cols(), "G square");
  require_same_size(Q.rows(), G.rows(), "Q vs G");
  sparse_->Q = std::move(Q);
  sparse_->G = std::move(G);
}

FactorCache::~FactorCache() = default;

Index FactorCache::dim() const {
  return dense_ ? dense_->Q.rows() : sparse_->Q.rows();
}

void FactorCache::refactor(double tau) {
  if (factored_ && tau == tau_) {
    ++reuses_;
    return;
  }
  factored_ = false;
  if (dense_) {
    dense_->system = dense_->Q + tau * dense_->G;
    dense_->llt.compute(dense_->system);
    if (dense_->llt.info() != Eigen::Success) {
      throw SingularSystem("dense factorization failed");
    }
  } else {
    const SparseMatrix system = sparse_->Q + tau * sparse_->G;
    if (!sparse_->analyzed) {
      sparse_->ldlt.analyzePattern(system);
      sparse_->analyzed = true;
    }
    sparse_->ldlt.factorize(system);
    if (sparse_->ldlt.info() != Eigen::Success ||
        (sparse_->ldlt.vectorD().array() <= 0.0).any()) {
      throw SingularSystem("sparse factorization failed");
    }
  }
  tau_ = tau;
  factored_ = true;
  ++factorizations_;
}

Vector FactorCache::solve(double tau, const Vector& rhs) {
  require_same_size(rhs.size(), dim(), "rhs");
  refactor(tau);
  if (dense_) {
    Vector x = dense_->llt.solve(rhs);
    // One refinement step keeps the residual near round-off for
    // moderately conditioned systems.
    x += dense_->llt.solve(rhs - dense_->system * x);
    return x;
  }
  return sparse_->ldlt.solve(rhs);
}

Matrix FactorCache::solve(double tau, const Matrix& rhs) {
  require_same_size(rhs.rows(), dim(), "rhs");
  refactor(tau);
  if (dense_) {
    Matrix x = dense_->llt.solve(rhs);
    x += dense_->llt.solve(rhs - dense_->system * x);
    return x;
  }
  return sparse_->ldlt.solve(rhs);
}

Vector quad_solve(const Matrix& Q, double tau, const LinearOperator& N,
                  const Vector& rhs) {
  require_same_size(Q.rows(), N.cols(), "Q vs N");
  FactorCache cache(Q, N.gram_dense());
  return cache.solve(tau, rhs);
}

Vector quad_solve(FactorCache& cache, double tau, const Vector& rhs) {
  return cache.solve(tau, rhs);
}

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// 1 / (1 + exp(-t)).
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

Vector logistic_newton(const Matrix& D, const Vector& labels, const Vector& w0,
                       double tau, const Vector& anchor,
                       const LogisticOptions& opts) {
  require_same_size(D.rows(), labels.size(), "logistic labels");
  require_same_size(D.cols(), w0.size(), "logistic start");
  require_same_size(D.cols(), anchor.size(), "logistic anchor");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");

  const double gtol = opts.tol * (1.0 + anchor.norm());

  auto objective = [&](const Vector& x) {
    const Vector margin = labels.cwiseProduct(D * x);
    double f = 0.5 * tau * (x - anchor).squaredNorm();
    for (Index j = 0; j < margin.size(); ++j) f += softplus(-margin[j]);
    return f;
  };

  Vector x = w0;
  Eigen::LLT<Matrix> llt;
  for (int it = 0; it <= opts.max_iter; ++it) {
    const Vector margin = labels.cwiseProduct(D * x);
    Vector p(margin.size());  // probability of misclassification
    Vector w(margin.size());  // Hessian weights
    for (Index j = 0; j < margin.size(); ++j) {
      p[j] = sigmoid(-margin[j]);
      w[j] = p[j] * (1.0 - p[j]);
    }
    const Vector grad =
        -D.transpose() * labels.cwiseProduct(p) + tau * (x - anchor);
    if (grad.norm() <= gtol) return x;
    if (it == opts.max_iter) break;

    Matrix H = D.transpose() * w.asDiagonal() * D;
    H.diagonal().array() += tau;
    llt.compute(H);
    if (llt.info() != Eigen::Success) {
      throw InnerNonConvergence("Newton system not positive definite");
    }
    const Vector step = -llt.solve(grad);
    const double slope = grad.dot(step);
    const double f0 = objective(x);
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(f0) + 1.0);
    double t = 1.0;
    Vector trial = x + step;
    for (int ls = 0;
         ls < 60 && objective(trial) > f0 + 1e-4 * t * slope + noise; ++ls) {
      t *= 0.5;
      trial = x + t * step;
    }
    if ((trial - x).norm() == 0.0) {
      // Round-off floor: the step no longer moves x.
      if (grad.norm() <= 1e3 * gtol) return x;
      throw InnerNonConvergence("line search stalled");
    }
    x = trial;
  }
  throw InnerNonConvergence("no convergence in " +
                            std::to_string(opts.max_iter) + " iterations");
}

SparseMatrix grad_operator(Index width, Index height) {
  if (width < 0 || height < 0) throw InvalidArgument("negative image size");
  const Index npix = width * height;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(4 * npix));
  auto idx = [height](Index i, Index j) { return i + j * height; };
  for (Index j = 0; j < width; ++j) {
    for (Index i = 0; i < height; ++i) {
      if (j + 1 < width) {
        trip.emplace_back(idx(i, j), idx(i, j + 1), 1.0);
        trip.emplace_back(idx(i, j), idx(i, j), -1.0);
      }
      if (i + 1 < height) {
        trip.emplace_back(npix + idx(i, j), idx(i + 1, j), 1.0);
        trip.emplace_back(npix + idx(i, j), idx(i, j), -1.0);
      }
    }
  }
  SparseMatrix G(2 * npix, npix);
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

EigenRange extreme_eigenvalues(const Matrix& Q, double rel_tol) {
  require_same_size(Q.rows(), Q.cols(), "Q square");
  const Index n = Q.rows();
  if (n == 0) throw InvalidArgument("empty matrix");
  Eigen::LLT<Matrix> llt(Q);
  if (llt.info() != Eigen::Success) {
    throw NonPsdQ("matrix is not positive definite");
  }

  // Deterministic start with components along every coordinate.
  Vector start(n);
  for (Index i = 0; i < n; ++i) start[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  start.normalize();

  auto power = [&](auto&& multiply) {
    Vector x = start;
    double rayleigh = 0.0;
    constexpr int kMaxIter = 20000;
    for (int it = 0; it < kMaxIter; ++it) {
      Vector y = multiply(x);
      const double next = x.dot(y);
      const double ny = y.norm();
      if (ny == 0.0) return 0.0;
      x = y / ny;
      if (it > 0 && std::abs(next - rayleigh) <= rel_tol * std::abs(next)) {
        return next;
      }
      rayleigh = next;
    }
    return rayleigh;
  };

  EigenRange range;
  range.max = power([&](const Vector& x) -> Vector { return Q * x; });
  const double inv_max =
      power([&](const Vector& x) -> Vector { return llt.solve(x); });
  range.min = 1.0 / inv_max;
  return range;
}

}  // namespace aradmm
