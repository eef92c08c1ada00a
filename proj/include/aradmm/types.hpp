#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <stdexcept>
#include <string>

namespace aradmm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Every recoverable failure in the library derives from Error so callers can
// catch one type; the concrete classes carry the failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ARADMM_DEFINE_ERROR(Name)              \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(#Name ": " + what) {}          \
  }

ARADMM_DEFINE_ERROR(InvalidArgument);
ARADMM_DEFINE_ERROR(DimensionMismatch);
ARADMM_DEFINE_ERROR(OracleFailure);
ARADMM_DEFINE_ERROR(NonFiniteIterate);
ARADMM_DEFINE_ERROR(InvalidCurvature);
ARADMM_DEFINE_ERROR(GammaOutOfRange);
ARADMM_DEFINE_ERROR(SvdFailure);
ARADMM_DEFINE_ERROR(InfeasibleSet);
ARADMM_DEFINE_ERROR(SingularSystem);
ARADMM_DEFINE_ERROR(InnerNonConvergence);
ARADMM_DEFINE_ERROR(NonPsdQ);
ARADMM_DEFINE_ERROR(EmptyBlock);
ARADMM_DEFINE_ERROR(ParseError);
ARADMM_DEFINE_ERROR(IndexOutOfOrder);
ARADMM_DEFINE_ERROR(UnsupportedFormat);
ARADMM_DEFINE_ERROR(IoError);

#undef ARADMM_DEFINE_ERROR

inline void require_same_size(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + " (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

}  // namespace aradmm
