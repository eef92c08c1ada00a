#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aradmm/types.hpp"

namespace aradmm {

enum class SolveStatus { Converged, MaxIter, Failed };

const char* to_string(SolveStatus status);
SolveStatus parse_status(const std::string& text);

/// One outer iteration: the parameters used to produce iterate k and the
/// residuals measured at it.
struct TraceRow {
  Index k = 0;
  double tau = 0.0;
  double gamma = 0.0;
  double r_norm = 0.0;
  double d_norm = 0.0;
  double r_rel = 0.0;
  double d_rel = 0.0;
  double objective = 0.0;

  bool operator==(const TraceRow&) const = default;
};

struct TraceMeta {
  std::string problem;
  std::string policy;
  std::uint64_t seed = 0;
  double tol = 0.0;
  SolveStatus status = SolveStatus::MaxIter;
  double wall_seconds = 0.0;
  std::string init_hash;
};

struct Trace {
  std::vector<TraceRow> rows;
  TraceMeta meta;

  Index iterations() const {
    return rows.empty() ? 0 : rows.back().k;
  }
};

}  // namespace aradmm
