#include "aradmm/problem.hpp"

namespace aradmm {

void ProblemSpec::validate() const {
  require_same_size(A.cols(), n, "A columns vs n");
  require_same_size(B.cols(), m, "B columns vs m");
  require_same_size(A.rows(), p, "A rows vs p");
  require_same_size(B.rows(), p, "B rows vs p");
  require_same_size(b.size(), p, "b vs p");
  if (!u_oracle || !v_oracle || !objective) {
    throw InvalidArgument("problem '" + name + "' is missing an oracle");
  }
  constexpr double kAdjointTol = 1e-12;
  if (adjoint_mismatch(A, 3, 7) > kAdjointTol ||
      adjoint_mismatch(B, 3, 11) > kAdjointTol) {
    throw DimensionMismatch("adjoint probe failed for '" + name + "'");
  }
}

}  // namespace aradmm
