#include "superwave/linalg.hpp"

#include <stdexcept>

namespace superwave {

PinvSolution pinv_solve(const CMatrix& a, const CVector& b, double relative_cutoff) {
  if (a.rows() != b.rows()) throw std::invalid_argument("pinv_solve: row count mismatch");
  if (!(relative_cutoff >= 0.0)) throw std::invalid_argument("pinv_solve: negative cutoff");
  Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  PinvSolution out;
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
  out.cutoff = relative_cutoff * smax;
  CVector ub = svd.matrixU().adjoint() * b;
  for (Eigen::Index i = 0; i < ub.size(); ++i) {
    const double s = out.singular_values(i);
    if (s > out.cutoff && s > 0.0) {
      ub(i) /= s;
      ++out.rank;
    } else {
      ub(i) = 0.0;
    }
  }
  out.x = svd.matrixV() * ub;
  return out;
}

}  // namespace superwave
