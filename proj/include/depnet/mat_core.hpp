#ifndef DEPNET_MAT_CORE_HPP_
#define DEPNET_MAT_CORE_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace depnet {

// Dense column-major matrices throughout; all external formats carry
// explicit row/column indices so the storage order never leaks.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NotPdError : std::runtime_error {
  explicit NotPdError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// Column-stacking vectorization, leftmost column first.
Vector vec(const Matrix& a);

/// Kronecker (tensor) product: block (i,j) equals a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

enum class JitterPolicy { none, adaptive };

/// Cholesky factor of a symmetric positive definite matrix, with an
/// optional escalating diagonal jitter for matrices that are PD in
/// theory but near-singular after Monte Carlo estimation.
class SpdFactor {
 public:
  SpdFactor(Matrix lower, double applied_jitter)
      : lower_(std::move(lower)), jitter_(applied_jitter) {}

  Eigen::Index dim() const { return lower_.rows(); }
  const Matrix& matrix_l() const { return lower_; }
  double applied_jitter() const { return jitter_; }

  /// Solves (L L^T) X = B.
  Matrix solve(const Matrix& b) const;

  /// log det(L L^T)
  double log_det() const;

 private:
  Matrix lower_;
  double jitter_;
};

/// Factorizes a symmetric matrix as L L^T (+ jitter * I when the policy
/// allows). Throws NotPdError when the factorization fails even after
/// the maximum jitter, which signals a violated positive-definiteness
/// assumption upstream.
SpdFactor spd_factorize(const Matrix& a,
                        JitterPolicy policy = JitterPolicy::adaptive);

Matrix spd_solve(const SpdFactor& f, const Matrix& b);

/// Numerical rank via column-pivoted QR; pivots below tol * |largest
/// pivot| are treated as zero.
Eigen::Index rank(const Matrix& a, double tol = 1e-10);

}  // namespace depnet

#endif  // DEPNET_MAT_CORE_HPP_
