#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aradmm/adaptivity.hpp"
#include "aradmm/problem.hpp"
#include "aradmm/trace.hpp"

namespace aradmm::bench {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitMaxIter = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitDataError = 65;

/// Problem ids accepted by make_problem.
const std::vector<std::string>& problem_ids();

struct ProblemOptions {
  std::uint64_t seed = 0;
  std::string data_path;   // sparse dataset for en/svm/logistic problems
  std::string image_path;  // PGM for tvid
  std::optional<double> rho;  // main regularization weight override
};

/// Desk-scale instance of a named problem; throws InvalidArgument for an
/// unknown id.
ProblemSpec make_problem(const std::string& id, const ProblemOptions& opts);

struct InitialPoint {
  Vector v0;
  Vector lambda0;
  std::string hash;  // hex digest of the raw bytes
};

/// v0, lambda0 drawn from a seeded standard normal.
InitialPoint draw_initial_point(const ProblemSpec& prob, std::uint64_t seed);

struct RunRequest {
  std::string problem;
  PolicyConfig policy;
  bool tau0_overridden = false;
  double tol = 1e-3;
  Index maxiter = 2000;
  ProblemOptions problem_options;
  std::string out_csv;
  std::string out_json;
};

struct RunOutcome {
  Trace trace;
  SolveStatus status = SolveStatus::MaxIter;
  Index iterations = 0;
  double wall_seconds = 0.0;
  Index monotonicity_violations = 0;
  std::string failure;
};

/// Builds the problem, solves from the seeded initial point and returns the
/// trace. When the problem suggests tau0 and the request does not override
/// it, the suggestion is used.
RunOutcome run_cell(const ProblemSpec& prob, const RunRequest& req,
                    const InitialPoint& init);

int exit_code(SolveStatus status);

/// Solve one cell and write outputs; returns the exit code.
int cmd_run(const RunRequest& req, std::ostream& log);

struct CompareRow {
  std::string policy;
  Index iterations = 0;
  double wall_seconds = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  std::string init_hash;
};

/// Every listed policy from one shared initial point. Cells run on up to
/// `workers` threads.
std::vector<CompareRow> cmd_compare(const RunRequest& base,
                                    const std::vector<PolicyKind>& policies,
                                    unsigned workers = 1);
/// "policy,iterations,runtime,status" with 3 significant digits for runtime.
std::string compare_csv(const std::vector<CompareRow>& rows);

enum class SweepAxis { Tau0, Gamma0, EpsCor };
SweepAxis parse_axis(const std::string& name);

/// Eleven log-spaced points 1e-5 .. 1e5.
std::vector<double> default_tau0_grid();
/// 1.0, 1.1, ..., 1.9.
std::vector<double> default_gamma0_grid();

struct SweepResult {
  SweepAxis axis = SweepAxis::Tau0;
  std::vector<double> grid;
  std::vector<PolicyKind> policies;
  // iterations[i][j]: grid point i, policy j
  std::vector<std::vector<Index>> iterations;
  std::vector<std::vector<SolveStatus>> status;
};

/// Throws InvalidArgument on an empty grid.
SweepResult cmd_sweep(const RunRequest& base, SweepAxis axis,
                      const std::vector<double>& grid,
                      const std::vector<PolicyKind>& policies,
                      unsigned workers = 1);
/// "value,<policy>,<policy>,..." rows of iteration counts.
std::string sweep_csv(const SweepResult& result);

/// Reads a trace CSV and audits its parameter sequence. Returns the exit
/// code and writes the JSON report to out.
int cmd_audit(const std::string& trace_csv_path, std::ostream& out,
              std::ostream& err);

}  // namespace aradmm::bench
