#include "aradmm/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace aradmm {

namespace {

using Rng = std::mt19937_64;

Matrix normal_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix M(rows, cols);
  // Fill in a fixed (column-major) order for reproducibility.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  }
  return M;
}

void require_sizes(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_index(std::string_view text, long long& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

RegressionData gen_regression(Index n_samples, Index n_features,
                              double sparsity, double noise_sigma,
                              std::uint64_t seed) {
  require_sizes(n_samples > 0 && n_features > 0, "sizes must be positive");
  require_sizes(sparsity >= 0.0 && sparsity <= 1.0, "sparsity in [0, 1]");
  require_sizes(noise_sigma >= 0.0, "noise must be nonnegative");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  RegressionData out;
  out.D = normal_matrix(n_samples, n_features, rng);

  const auto nnz = static_cast<Index>(
      std::ceil(sparsity * static_cast<double>(n_features)));
  std::vector<Index> perm(static_cast<std::size_t>(n_features));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  out.x_true = Vector::Zero(n_features);
  for (Index i = 0; i < nnz; ++i) out.x_true[perm[i]] = normal(rng);

  out.c = out.D * out.x_true;
  if (noise_sigma > 0.0) {
    for (Index i = 0; i < n_samples; ++i) out.c[i] += noise_sigma * normal(rng);
  }
  return out;
}

ClassificationData gen_classification(Index n_samples, Index n_features,
                                      double margin, std::uint64_t seed) {
  require_sizes(n_samples > 0 && n_features > 0, "sizes must be positive");
  require_sizes(margin >= 0.0, "margin must be nonnegative");
  Rng rng(seed);
  Vector direction = normal_matrix(n_features, 1, rng);
  direction.normalize();
  ClassificationData out;
  out.D = normal_matrix(n_samples, n_features, rng);
  out.labels.resize(n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    const double label = (i % 2 == 0) ? 1.0 : -1.0;
    out.labels[i] = label;
    out.D.row(i) += label * margin * direction.transpose();
  }
  return out;
}

RpcaData gen_rpca(Index rows, Index cols, Index rank, double spike_fraction,
                  std::uint64_t seed) {
  require_sizes(rows > 0 && cols > 0 && rank >= 0, "invalid sizes");
  require_sizes(spike_fraction >= 0.0 && spike_fraction <= 1.0,
                "spike fraction in [0, 1]");
  Rng rng(seed);
  RpcaData out;
  if (rank > 0) {
    const Matrix L = normal_matrix(rows, rank, rng);
    const Matrix R = normal_matrix(cols, rank, rng);
    out.Z_true = L * R.transpose();
  } else {
    out.Z_true = Matrix::Zero(rows, cols);
  }
  out.E_true = Matrix::Zero(rows, cols);
  const Index total = rows * cols;
  const auto spikes = static_cast<Index>(
      std::llround(spike_fraction * static_cast<double>(total)));
  std::vector<Index> perm(static_cast<std::size_t>(total));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> magnitude(5.0, 10.0);
  std::bernoulli_distribution sign;
  for (Index s = 0; s < spikes; ++s) {
    const double value = magnitude(rng);
    out.E_true.data()[perm[s]] = sign(rng) ? value : -value;
  }
  out.C = out.Z_true + out.E_true;
  return out;
}

Matrix gen_tv_image(Index width, Index height, double noise_sigma,
                    std::uint64_t seed) {
  require_sizes(width > 0 && height > 0, "image size must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Matrix img(height, width);
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  const double radius = 0.2 * std::min(h, w);
  for (Index j = 0; j < width; ++j) {
    for (Index i = 0; i < height; ++i) {
      const double y = static_cast<double>(i);
      const double x = static_cast<double>(j);
      double value = 0.2;
      if (y >= h / 4 && y < h / 2 && x >= w / 4 && x < 3 * w / 4) value = 0.8;
      const double dy = y - 0.7 * h;
      const double dx = x - 0.6 * w;
      if (dx * dx + dy * dy <= radius * radius) value = 0.5;
      img(i, j) = value + noise_sigma * normal(rng);
    }
  }
  return img;
}

SparseDataset parse_sparse_dataset(std::istream& in) {
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> labels;
  Index max_col = 0;
  std::string raw;
  long long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      return ParseError("line " + std::to_string(line_no) + ": " + msg);
    };

    std::istringstream tokens(line);
    std::string tok;
    tokens >> tok;
    double label = 0.0;
    if (!parse_double(tok, label)) throw fail("bad label '" + tok + "'");
    const auto row = static_cast<Index>(labels.size());
    labels.push_back(label);

    long long last = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw fail("expected index:value, got '" + tok + "'");
      long long idx = 0;
      double value = 0.0;
      if (!parse_index(std::string_view(tok).substr(0, colon), idx) || idx < 1) {
        throw fail("bad index in '" + tok + "'");
      }
      if (!parse_double(std::string_view(tok).substr(colon + 1), value)) {
        throw fail("bad value in '" + tok + "'");
      }
      if (idx <= last) {
        throw IndexOutOfOrder("line " + std::to_string(line_no) + ": index " +
                              std::to_string(idx) + " after " +
                              std::to_string(last));
      }
      last = idx;
      max_col = std::max<Index>(max_col, static_cast<Index>(idx));
      trip.emplace_back(row, static_cast<Index>(idx - 1), value);
    }
  }
  SparseDataset out;
  out.labels = Eigen::Map<const Vector>(labels.data(),
                                        static_cast<Index>(labels.size()));
  out.D.resize(static_cast<Index>(labels.size()), max_col);
  out.D.setFromTriplets(trip.begin(), trip.end());
  out.D.makeCompressed();
  return out;
}

SparseDataset read_sparse_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_sparse_dataset(in);
}

void write_sparse_dataset(const SparseDataset& data,
                          const std::filesystem::path& path) {
  require_same_size(data.D.rows(), data.labels.size(), "dataset labels");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  // Row-major traversal gives increasing column indices per line.
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows(data.D);
  for (Index i = 0; i < rows.outerSize(); ++i) {
    out << format_double(data.labels[i]);
    for (decltype(rows)::InnerIterator it(rows, i); it; ++it) {
      out << ' ' << (it.col() + 1) << ':' << format_double(it.value());
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw ParseError("truncated PGM header");
  return tok;
}

long long pgm_int(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  long long v = 0;
  if (!parse_index(tok, v) || v < 0) {
    throw ParseError(std::string("bad PGM ") + what + " '" + tok + "'");
  }
  return v;
}

}  // namespace

Matrix read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") {
    throw UnsupportedFormat("PGM magic '" + magic + "'");
  }
  const long long width = pgm_int(in, "width");
  const long long height = pgm_int(in, "height");
  const long long maxval = pgm_int(in, "maxval");
  if (maxval < 1 || maxval > 255) {
    throw UnsupportedFormat("maxval " + std::to_string(maxval));
  }
  Matrix img(height, width);
  const double scale = static_cast<double>(maxval);
  for (long long i = 0; i < height; ++i) {
    for (long long j = 0; j < width; ++j) {
      long long value;
      if (magic == "P2") {
        value = pgm_int(in, "pixel");
      } else {
        const int ch = in.get();
        if (ch == EOF) throw ParseError("truncated P5 raster");
        value = ch;
      }
      if (value > maxval) throw ParseError("pixel exceeds maxval");
      img(i, j) = static_cast<double>(value) / scale;
    }
  }
  return img;
}

void write_pgm(const Matrix& image, const std::filesystem::path& path,
               bool ascii) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << (ascii ? "P2" : "P5") << '\n'
      << image.cols() << ' ' << image.rows() << '\n'
      << 255 << '\n';
  for (Index i = 0; i < image.rows(); ++i) {
    for (Index j = 0; j < image.cols(); ++j) {
      const double v = std::clamp(image(i, j), 0.0, 1.0);
      const int level = static_cast<int>(std::lround(v * 255.0));
      if (ascii) {
        out << level << (j + 1 == image.cols() ? '\n' : ' ');
      } else {
        out.put(static_cast<char>(static_cast<unsigned char>(level)));
      }
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << format_double(r.tau) << ',' << format_double(r.gamma)
        << ',' << format_double(r.r_norm) << ',' << format_double(r.d_norm)
        << ',' << format_double(r.r_rel) << ',' << format_double(r.d_rel)
        << ',' << format_double(r.objective) << '\n';
  }
}

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_trace_csv(trace, out);
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<TraceRow> parse_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTraceCsvHeader) {
    throw ParseError("line 1: missing trace header");
  }
  std::vector<TraceRow> rows;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(trim(line));
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 8) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 8 fields");
    }
    TraceRow r;
    long long k = 0;
    double* targets[] = {&r.tau, &r.gamma, &r.r_norm, &r.d_norm,
                         &r.r_rel, &r.d_rel, &r.objective};
    bool ok = parse_index(fields[0], k);
    for (std::size_t i = 0; i < 7 && ok; ++i) {
      ok = parse_double(fields[i + 1], *targets[i]);
    }
    if (!ok) {
      throw ParseError("line " + std::to_string(line_no) + ": bad number");
    }
    r.k = static_cast<Index>(k);
    if (!rows.empty() && r.k <= rows.back().k) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": iteration index not increasing");
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_trace_csv(in);
}

namespace {

// "70(0.026)" or "2000+(0.642)" for a run stopped at the iteration cap.
std::string table_entry(const Trace& t) {
  char runtime[32];
  std::snprintf(runtime, sizeof runtime, "%.3g", t.meta.wall_seconds);
  return std::to_string(t.iterations()) +
         (t.meta.status == SolveStatus::MaxIter ? "+" : "") + "(" + runtime +
         ")";
}

}  // namespace

std::string summary_json(const std::vector<Trace>& traces) {
  nlohmann::json runs = nlohmann::json::array();
  for (const Trace& t : traces) {
    runs.push_back({{"problem", t.meta.problem},
                    {"policy", t.meta.policy},
                    {"seed", t.meta.seed},
                    {"tol", t.meta.tol},
                    {"status", to_string(t.meta.status)},
                    {"iterations", t.iterations()},
                    {"wall_seconds", t.meta.wall_seconds},
                    {"table_entry", table_entry(t)},
                    {"init_hash", t.meta.init_hash}});
  }
  return nlohmann::json{{"runs", runs}}.dump(2);
}

void write_summary_json(const std::vector<Trace>& traces,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << summary_json(traces) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::string audit_json(const AuditReport& report) {
  return nlohmann::json{{"sum_eta_sq", report.sum_eta_sq},
                        {"sum_theta_sq", report.sum_theta_sq},
                        {"tail_eta_sq", report.tail_eta_sq},
                        {"tail_theta_sq", report.tail_theta_sq},
                        {"tau_min", report.tau_min},
                        {"tau_max", report.tau_max},
                        {"gammas_in_range", report.gammas_in_range},
                        {"satisfies_A1", report.satisfies_A1},
                        {"satisfies_A2", report.satisfies_A2}}
      .dump(2);
}

}  // namespace aradmm
