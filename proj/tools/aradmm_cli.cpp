// Command-line harness: run one (problem, policy) cell, compare policies,
// sweep initializations, or audit a recorded parameter sequence.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aradmm/bench.hpp"
#include "aradmm/data_io.hpp"

namespace {

using namespace aradmm;

struct Flags {
  std::string problem = "en";
  std::string policy = "aradmm";
  std::vector<std::string> policies = {"vanilla", "relaxed", "rb", "aadmm",
                                       "aradmm"};
  double tau0 = 0.1;
  double gamma0 = 1.0;
  double tol = 1e-3;
  long long maxiter = 2000;
  std::uint64_t seed = 0;
  std::string out;
  double eps_cor = 0.2;
  int T_f = 2;
  double C_cg = 1e10;
  std::string data;
  std::string image;
  double rho = -1.0;
  unsigned workers = 1;
  std::string axis = "tau0";
  std::vector<double> grid;
  std::string trace;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--problem", f.problem, "problem id")
      ->check(CLI::IsMember(bench::problem_ids()));
  cmd->add_option("--tau0", f.tau0, "initial penalty");
  cmd->add_option("--gamma0", f.gamma0, "initial relaxation");
  cmd->add_option("--tol", f.tol, "relative stopping tolerance");
  cmd->add_option("--maxiter", f.maxiter, "iteration cap");
  cmd->add_option("--seed", f.seed, "data and initialization seed");
  cmd->add_option("--out", f.out, "output path prefix");
  cmd->add_option("--eps-cor", f.eps_cor, "safeguarding correlation threshold");
  cmd->add_option("--Tf", f.T_f, "adaptation period");
  cmd->add_option("--Ccg", f.C_cg, "convergence guard constant");
  cmd->add_option("--data", f.data, "sparse dataset (label idx:val ...)");
  cmd->add_option("--image", f.image, "PGM image for tvid");
  cmd->add_option("--rho", f.rho, "override the main regularization weight");
}

bench::RunRequest make_request(const Flags& f, const CLI::App* cmd) {
  bench::RunRequest req;
  req.problem = f.problem;
  req.policy.kind = parse_policy(f.policy);
  req.policy.tau0 = f.tau0;
  req.policy.gamma0 = f.gamma0;
  req.policy.eps_cor = f.eps_cor;
  req.policy.T_f = f.T_f;
  req.policy.C_cg = f.C_cg;
  req.policy.validate();
  req.tau0_overridden = cmd->count("--tau0") > 0;
  req.tol = f.tol;
  req.maxiter = f.maxiter;
  req.problem_options.seed = f.seed;
  req.problem_options.data_path = f.data;
  req.problem_options.image_path = f.image;
  if (f.rho >= 0.0) req.problem_options.rho = f.rho;
  if (!f.out.empty()) {
    req.out_csv = f.out + ".csv";
    req.out_json = f.out + ".json";
  }
  if (!(req.tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (req.maxiter < 1) throw InvalidArgument("--maxiter must be at least 1");
  return req;
}

std::vector<PolicyKind> parse_policies(const std::vector<std::string>& names) {
  std::vector<PolicyKind> kinds;
  for (const auto& n : names) kinds.push_back(parse_policy(n));
  return kinds;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive relaxed ADMM benchmark harness"};
  app.require_subcommand(1);
  Flags f;

  auto* run = app.add_subcommand("run", "solve one problem with one policy");
  add_common(run, f);
  run->add_option("--policy", f.policy, "vanilla|relaxed|rb|aadmm|aradmm");

  auto* compare = app.add_subcommand("compare", "all policies, shared init");
  add_common(compare, f);
  compare->add_option("--policies", f.policies, "policies to compare");
  compare->add_option("--workers", f.workers, "parallel cells");

  auto* sweep = app.add_subcommand("sweep", "initialization sensitivity");
  add_common(sweep, f);
  sweep->add_option("--axis", f.axis, "tau0|gamma0|eps_cor");
  sweep->add_option("--grid", f.grid, "grid values (default per axis)");
  sweep->add_option("--policies", f.policies, "policies to sweep");
  sweep->add_option("--workers", f.workers, "parallel cells");

  auto* audit = app.add_subcommand("audit", "audit a trace CSV");
  audit->add_option("trace", f.trace, "trace CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bench::kExitUsage;
  }

  try {
    if (*audit) return bench::cmd_audit(f.trace, std::cout, std::cerr);

    if (*run) {
      return bench::cmd_run(make_request(f, run), std::cerr);
    }
    if (*compare) {
      const bench::RunRequest req = make_request(f, compare);
      const auto rows =
          bench::cmd_compare(req, parse_policies(f.policies), f.workers);
      emit(bench::compare_csv(rows), f.out.empty() ? "" : f.out + ".csv");
      for (const auto& r : rows) {
        std::cerr << r.policy << " init=" << r.init_hash << '\n';
      }
      return 0;
    }
    if (*sweep) {
      const bench::RunRequest req = make_request(f, sweep);
      const bench::SweepAxis axis = bench::parse_axis(f.axis);
      std::vector<double> grid = f.grid;
      if (grid.empty()) {
        grid = axis == bench::SweepAxis::Tau0     ? bench::default_tau0_grid()
               : axis == bench::SweepAxis::Gamma0 ? bench::default_gamma0_grid()
                                                  : std::vector<double>{0.1, 0.2, 0.3, 0.4};
      }
      const auto result =
          bench::cmd_sweep(req, axis, grid, parse_policies(f.policies), f.workers);
      emit(bench::sweep_csv(result), f.out.empty() ? "" : f.out + ".csv");
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << e.what() << '\n';
    return bench::kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return bench::kExitDataError;
  } catch (const IndexOutOfOrder& e) {
    std::cerr << e.what() << '\n';
    return bench::kExitDataError;
  } catch (const UnsupportedFormat& e) {
    std::cerr << e.what() << '\n';
    return bench::kExitDataError;
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return bench::kExitDataError;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return bench::kExitFailed;
  }
  return bench::kExitUsage;
}
