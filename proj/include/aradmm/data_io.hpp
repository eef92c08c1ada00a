#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aradmm/audit.hpp"
#include "aradmm/trace.hpp"

namespace aradmm {

struct RegressionData {
  Matrix D;
  Vector c;
  Vector x_true;
};

/// Standard normal design, x_true with ceil(sparsity * n_features) nonzero
/// normal entries, c = D x_true + noise_sigma * N(0, 1).
RegressionData gen_regression(Index n_samples, Index n_features,
                              double sparsity, double noise_sigma,
                              std::uint64_t seed);

struct ClassificationData {
  Matrix D;
  Vector labels;
};

/// Unit-variance Gaussian clouds centred at +-margin * direction for a random
/// unit direction; labels alternate +1, -1.
ClassificationData gen_classification(Index n_samples, Index n_features,
                                      double margin, std::uint64_t seed);

struct RpcaData {
  Matrix C;
  Matrix Z_true;
  Matrix E_true;
};

/// Z_true = L R^T with standard normal L (rows x rank) and R (cols x rank);
/// round(spike_fraction * rows * cols) entries of E_true are +-U(5, 10).
RpcaData gen_rpca(Index rows, Index cols, Index rank, double spike_fraction,
                  std::uint64_t seed);

/// Piecewise-constant test image in [0, 1] (background, a square and a
/// disc) plus Gaussian noise.
Matrix gen_tv_image(Index width, Index height, double noise_sigma,
                    std::uint64_t seed);

struct SparseDataset {
  SparseMatrix D;  // rows = samples
  Vector labels;
};

/// "label idx:val idx:val ..." lines with 1-based increasing indices. Blank
/// lines and '#' comments are skipped. Throws ParseError / IndexOutOfOrder
/// with the line number.
SparseDataset read_sparse_dataset(const std::filesystem::path& path);
SparseDataset parse_sparse_dataset(std::istream& in);
void write_sparse_dataset(const SparseDataset& data,
                          const std::filesystem::path& path);

/// PGM (P2 or P5, maxval <= 255), values scaled to [0, 1]; rows = height.
Matrix read_pgm(const std::filesystem::path& path);
/// Writes binary P5 with maxval 255 (or ASCII P2 when ascii is set).
void write_pgm(const Matrix& image, const std::filesystem::path& path,
               bool ascii = false);

inline constexpr const char* kTraceCsvHeader =
    "k,tau,gamma,r_norm,d_norm,r_rel,d_rel,objective";

void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
void write_trace_csv(const Trace& trace, std::ostream& out);
/// Reads the row data back; throws ParseError on a malformed file.
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);
std::vector<TraceRow> parse_trace_csv(std::istream& in);

/// {"runs": [{problem, policy, seed, tol, status, iterations, wall_seconds,
/// init_hash}, ...]}
std::string summary_json(const std::vector<Trace>& traces);
void write_summary_json(const std::vector<Trace>& traces,
                        const std::filesystem::path& path);

std::string audit_json(const AuditReport& report);

}  // namespace aradmm
