#include "depnet/mat_core.hpp"

#include <cmath>

namespace depnet {

Vector vec(const Matrix& a) {
  Vector out(a.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(k++) = a(i, j);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix SpdFactor::solve(const Matrix& b) const {
  if (b.rows() != lower_.rows())
    throw DimensionError("SpdFactor::solve: incompatible dimensions");
  Matrix y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

double SpdFactor::log_det() const {
  return 2.0 * lower_.diagonal().array().log().sum();
}

SpdFactor spd_factorize(const Matrix& a, JitterPolicy policy) {
  if (a.rows() != a.cols())
    throw DimensionError("spd_factorize: matrix must be square");
  const double sym_err = (a - a.transpose()).norm();
  if (sym_err > 1e-12 * std::max(1.0, a.norm()))
    throw NotPdError("spd_factorize: matrix is not symmetric");

  const double scale = a.diagonal().sum() / static_cast<double>(a.rows());
  double jitter = 0.0;
  for (;;) {
    Matrix work = a;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(work);
    if (llt.info() == Eigen::Success) {
      Matrix l = llt.matrixL();
      // Eigen accepts some semidefinite inputs; insist on a strictly
      // positive diagonal so L L^T reconstructs the input.
      if ((l.diagonal().array() > 0.0).all())
        return SpdFactor(std::move(l), jitter);
    }
    if (policy == JitterPolicy::none)
      throw NotPdError("spd_factorize: matrix is not positive definite");
    if (jitter == 0.0)
      jitter = 1e-12 * scale;
    else
      jitter *= 10.0;
    if (!(jitter > 0.0) || jitter > 1e-6 * scale)
      throw NotPdError(
          "spd_factorize: not positive definite after maximum jitter");
  }
}

Matrix spd_solve(const SpdFactor& f, const Matrix& b) { return f.solve(b); }

Eigen::Index rank(const Matrix& a, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("rank: tol must be positive");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(tol);
  return qr.rank();
}

}  // namespace depnet
