#include "aradmm/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "aradmm/audit.hpp"
#include "aradmm/data_io.hpp"
#include "aradmm/problems.hpp"
#include "aradmm/prox.hpp"
#include "aradmm/solver.hpp"

namespace aradmm::bench {

namespace {

Vector to_pm1(const Vector& labels) {
  return labels.unaryExpr([](double y) { return y > 0.0 ? 1.0 : -1.0; });
}

// Synthetic samples are scaled to unit norm, the usual preprocessing for
// LIBSVM-style data; files are used as given.
ClassificationData classification_data(const ProblemOptions& opts,
                                       Index samples, Index features,
                                       double margin) {
  if (!opts.data_path.empty()) {
    const SparseDataset ds = read_sparse_dataset(opts.data_path);
    return {Matrix(ds.D), to_pm1(ds.labels)};
  }
  ClassificationData data =
      gen_classification(samples, features, margin, opts.seed);
  for (Index i = 0; i < data.D.rows(); ++i) {
    const double norm = data.D.row(i).norm();
    if (norm > 0.0) data.D.row(i) /= norm;
  }
  return data;
}

ProblemSpec make_en(const ProblemOptions& opts) {
  Matrix D;
  Vector c;
  if (!opts.data_path.empty()) {
    const SparseDataset ds = read_sparse_dataset(opts.data_path);
    D = Matrix(ds.D);
    c = ds.labels;
  } else {
    RegressionData data = gen_regression(50, 40, 0.2, 0.1, opts.seed);
    D = std::move(data.D);
    c = std::move(data.c);
  }
  return build_elastic_net(D, c, opts.rho.value_or(1.0), 1.0);
}

ProblemSpec make_lrls(const ProblemOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto gaussian = [&](Index r, Index c) {
    Matrix M(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) M(i, j) = normal(rng);
    return M;
  };
  const Matrix D = gaussian(200, 20);
  const Matrix X0 = gaussian(20, 2) * gaussian(2, 10);
  const Matrix C = D * X0 + 0.1 * gaussian(200, 10);
  return build_lrls(D, C, opts.rho.value_or(1.0), 1.0);
}

ProblemSpec make_qp(const ProblemOptions& opts) {
  constexpr Index kVars = 100;
  constexpr Index kCons = 50;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix M(kVars, kVars);
  for (Index j = 0; j < kVars; ++j)
    for (Index i = 0; i < kVars; ++i) M(i, j) = normal(rng);
  const Matrix Q = M.transpose() * M / static_cast<double>(kVars) +
                   0.01 * Matrix::Identity(kVars, kVars);
  Vector q(kVars);
  for (auto& e : q) e = normal(rng);
  Matrix D(kCons, kVars);
  for (Index j = 0; j < kVars; ++j)
    for (Index i = 0; i < kCons; ++i) D(i, j) = normal(rng);
  Vector c(kCons);
  for (auto& e : c) e = unit(rng);
  return build_qp(Q, q, D, c);
}

ProblemSpec make_dual_svm(const ProblemOptions& opts) {
  const ClassificationData data = classification_data(opts, 40, 50, 1.0);
  const Matrix K = data.D * data.D.transpose();
  const Matrix Q = data.labels.asDiagonal() * K * data.labels.asDiagonal();
  return build_dual_svm(Q, data.labels, opts.rho.value_or(1.0));
}

ProblemSpec make_consensus(const ProblemOptions& opts) {
  constexpr Index kBlocks = 4;
  const ClassificationData data = classification_data(opts, 200, 25, 0.5);
  const Index rows = data.D.rows();
  if (rows < kBlocks) throw EmptyBlock("fewer samples than blocks");
  std::vector<LogisticBlock> blocks;
  Index start = 0;
  for (Index b = 0; b < kBlocks; ++b) {
    const Index count = rows / kBlocks + (b < rows % kBlocks ? 1 : 0);
    blocks.push_back({data.D.middleRows(start, count),
                      data.labels.segment(start, count)});
    start += count;
  }
  return build_consensus_logistic(blocks, opts.rho.value_or(1.0));
}

ProblemSpec make_svm(const ProblemOptions& opts) {
  const ClassificationData data = classification_data(opts, 200, 25, 1.0);
  return build_unwrapped_svm(data.D, data.labels, opts.rho.value_or(1.0));
}

ProblemSpec make_tvid(const ProblemOptions& opts) {
  const Matrix image = opts.image_path.empty()
                           ? gen_tv_image(64, 64, 0.1, opts.seed)
                           : read_pgm(opts.image_path);
  return build_tvid(image, opts.rho.value_or(0.1));
}

ProblemSpec make_rpca(const ProblemOptions& opts) {
  // Observations scaled to unit peak magnitude, like image intensities.
  const RpcaData data = gen_rpca(60, 60, 2, 0.05, opts.seed);
  const double peak = data.C.cwiseAbs().maxCoeff();
  return build_rpca(peak > 0.0 ? Matrix(data.C / peak) : data.C,
                    opts.rho.value_or(1.0 / std::sqrt(60.0)));
}

ProblemSpec make_scalar(const ProblemOptions&) {
  return build_scalar_quadratic(2.0, 3.0);
}

struct Entry {
  const char* id;
  ProblemSpec (*make)(const ProblemOptions&);
};

constexpr Entry kRegistry[] = {
    {"en", make_en},           {"lrls", make_lrls},
    {"qp", make_qp},           {"dual_svm", make_dual_svm},
    {"consensus", make_consensus}, {"svm", make_svm},
    {"tvid", make_tvid},       {"rpca", make_rpca},
    {"scalar", make_scalar},
};

std::string fnv1a_hex(const Vector& a, const Vector& b) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const Vector& v) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
    for (std::size_t i = 0; i < static_cast<std::size_t>(v.size()) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  mix(a);
  mix(b);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Runs fn(0..count-1) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string three_significant(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const Entry& e : kRegistry) out.emplace_back(e.id);
    return out;
  }();
  return ids;
}

ProblemSpec make_problem(const std::string& id, const ProblemOptions& opts) {
  for (const Entry& e : kRegistry) {
    if (id == e.id) {
      ProblemSpec prob = e.make(opts);
      prob.validate();
      return prob;
    }
  }
  throw InvalidArgument("unknown problem '" + id + "'");
}

InitialPoint draw_initial_point(const ProblemSpec& prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  InitialPoint init;
  init.v0.resize(prob.m);
  init.lambda0.resize(prob.p);
  for (auto& e : init.v0) e = normal(rng);
  for (auto& e : init.lambda0) e = normal(rng);
  init.hash = fnv1a_hex(init.v0, init.lambda0);
  return init;
}

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return kExitConverged;
    case SolveStatus::MaxIter:
      return kExitMaxIter;
    case SolveStatus::Failed:
      return kExitFailed;
  }
  return kExitFailed;
}

RunOutcome run_cell(const ProblemSpec& prob, const RunRequest& req,
                    const InitialPoint& init) {
  PolicyConfig policy = req.policy;
  if (!req.tau0_overridden && prob.suggested_tau0) {
    policy.tau0 = std::max(*prob.suggested_tau0, policy.tau_floor);
  }
  SolveResult result =
      solve(prob, policy, init.v0, init.lambda0, req.tol, req.maxiter);
  result.trace.meta.seed = req.problem_options.seed;
  result.trace.meta.init_hash = init.hash;
  if (!req.problem.empty()) result.trace.meta.problem = req.problem;

  RunOutcome out;
  out.status = result.status;
  out.iterations = result.trace.iterations();
  out.wall_seconds = result.trace.meta.wall_seconds;
  out.monotonicity_violations = result.monotonicity_violations;
  out.failure = result.failure;
  out.trace = std::move(result.trace);
  return out;
}

int cmd_run(const RunRequest& req, std::ostream& log) {
  ProblemSpec prob;
  try {
    prob = make_problem(req.problem, req.problem_options);
  } catch (const InvalidArgument& e) {
    log << e.what() << '\n';
    return kExitUsage;
  }
  const InitialPoint init = draw_initial_point(prob, req.problem_options.seed);
  const RunOutcome out = run_cell(prob, req, init);
  if (!req.out_csv.empty()) write_trace_csv(out.trace, req.out_csv);
  if (!req.out_json.empty()) write_summary_json({out.trace}, req.out_json);
  log << req.problem << ' ' << to_string(req.policy.kind) << ": "
      << to_string(out.status) << " after " << out.iterations
      << " iterations (" << three_significant(out.wall_seconds) << " s)\n";
  if (!out.failure.empty()) log << out.failure << '\n';
  return exit_code(out.status);
}

std::vector<CompareRow> cmd_compare(const RunRequest& base,
                                    const std::vector<PolicyKind>& policies,
                                    unsigned workers) {
  const ProblemSpec probe = make_problem(base.problem, base.problem_options);
  const InitialPoint init = draw_initial_point(probe, base.problem_options.seed);
  std::vector<CompareRow> rows(policies.size());
  parallel_for(policies.size(), workers, [&](std::size_t i) {
    // Each cell owns its problem instance (and factor cache).
    const ProblemSpec prob = make_problem(base.problem, base.problem_options);
    RunRequest req = base;
    req.policy.kind = policies[i];
    const RunOutcome out = run_cell(prob, req, init);
    rows[i] = {to_string(policies[i]), out.iterations, out.wall_seconds,
               out.status, init.hash};
  });
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "policy,iterations,runtime,status\n";
  for (const CompareRow& r : rows) {
    out << r.policy << ',' << r.iterations << ','
        << three_significant(r.wall_seconds) << ',' << to_string(r.status)
        << '\n';
  }
  return out.str();
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "tau0") return SweepAxis::Tau0;
  if (name == "gamma0") return SweepAxis::Gamma0;
  if (name == "eps_cor" || name == "eps-cor") return SweepAxis::EpsCor;
  throw InvalidArgument("unknown sweep axis '" + name + "'");
}

std::vector<double> default_tau0_grid() {
  std::vector<double> grid;
  for (int e = -5; e <= 5; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

std::vector<double> default_gamma0_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(1.0 + 0.1 * i);
  return grid;
}

SweepResult cmd_sweep(const RunRequest& base, SweepAxis axis,
                      const std::vector<double>& grid,
                      const std::vector<PolicyKind>& policies,
                      unsigned workers) {
  if (grid.empty()) throw InvalidArgument("empty sweep grid");
  if (policies.empty()) throw InvalidArgument("no policies to sweep");
  SweepResult result;
  result.axis = axis;
  result.grid = grid;
  result.policies = policies;
  result.iterations.assign(grid.size(), std::vector<Index>(policies.size()));
  result.status.assign(grid.size(),
                       std::vector<SolveStatus>(policies.size()));

  const ProblemSpec probe = make_problem(base.problem, base.problem_options);
  const InitialPoint init = draw_initial_point(probe, base.problem_options.seed);
  const std::size_t cells = grid.size() * policies.size();
  parallel_for(cells, workers, [&](std::size_t cell) {
    const std::size_t i = cell / policies.size();
    const std::size_t j = cell % policies.size();
    RunRequest req = base;
    req.policy.kind = policies[j];
    switch (axis) {
      case SweepAxis::Tau0:
        req.policy.tau0 = grid[i];
        req.tau0_overridden = true;
        break;
      case SweepAxis::Gamma0:
        req.policy.gamma0 = grid[i];
        break;
      case SweepAxis::EpsCor:
        req.policy.eps_cor = grid[i];
        break;
    }
    const ProblemSpec prob = make_problem(base.problem, base.problem_options);
    const RunOutcome out = run_cell(prob, req, init);
    result.iterations[i][j] = out.iterations;
    result.status[i][j] = out.status;
  });
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << (result.axis == SweepAxis::Tau0     ? "tau0"
          : result.axis == SweepAxis::Gamma0 ? "gamma0"
                                             : "eps_cor");
  for (PolicyKind p : result.policies) out << ',' << to_string(p);
  out << '\n';
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    out << three_significant(result.grid[i]);
    for (std::size_t j = 0; j < result.policies.size(); ++j) {
      out << ',' << result.iterations[i][j];
    }
    out << '\n';
  }
  return out.str();
}

int cmd_audit(const std::string& trace_csv_path, std::ostream& out,
              std::ostream& err) {
  std::vector<TraceRow> rows;
  try {
    rows = read_trace_csv(trace_csv_path);
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kExitDataError;
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kExitDataError;
  }
  Trace trace;
  trace.rows = std::move(rows);
  try {
    out << audit_json(audit(ParamSequence::from_trace(trace))) << '\n';
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitDataError;
  }
  return kExitConverged;
}

}  // namespace aradmm::bench
