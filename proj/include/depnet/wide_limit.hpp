#ifndef DEPNET_WIDE_LIMIT_HPP_
#define DEPNET_WIDE_LIMIT_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "depnet/network.hpp"

namespace depnet {

struct LevySpec {
  enum class Tag { none, inv_sqrt_cube } tag = Tag::none;
  double eps = 1e-6;  // truncation threshold for the point series
};

struct LimitLayerSpec {
  double drift = 0.0;  // a^(l) >= 0
  LevySpec levy;
};

// Per-layer drift / Levy data for the kernel chain, plus the Monte
// Carlo sample count for the conditional expectation term.
struct LimitSpec {
  std::vector<LimitLayerSpec> layers;  // size L, layers 1..L
  int mc_samples = 100000;

  void validate() const;

  /// Model 1: drift 24 (= E[WE^2]), no Levy part.
  static LimitSpec model1(int depth, int mc_samples = 100000);
  /// Model 2: zero drift, x^{-3/2} Levy measure.
  static LimitSpec model2(int depth, double eps = 1e-6);
};

struct KernelChain {
  std::vector<Matrix> kernels;     // K^(1) .. K^(L+1), d x d symmetric
  std::vector<Matrix> mc_stderrs;  // entrywise MC standard errors (zero for K^(1))
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  int mc_samples = 0;
  double neglected_mass = 0.0;  // total Poisson truncation bound over layers
};

/// K^(1)[i,i'] = C_B + C_W <x(i), x(i')> / n0. Warns on stderr when
/// rank(X) < d, which breaks the positive-definiteness guarantee.
Matrix k1(const Matrix& x, double c_b, double c_w);

/// One kernel-chain transition:
///   C_B 11^T + C_W ( a E[sigma(z) sigma(z)^T | K] + sum_j T_j sigma(z_j) sigma(z_j)^T )
/// with the expectation estimated by mc_samples Gaussian draws and the
/// Levy sum over the truncated point series; the result is symmetrized.
Matrix k_step(RngStream& rng, const Matrix& k_prev, const LimitLayerSpec& layer,
              double c_b, double c_w, const Activation& act, int mc_samples,
              Matrix* stderr_out = nullptr, double* neglected_mass = nullptr);

KernelChain sample_kernel_chain(RngStream& rng, const Matrix& x,
                                const LimitSpec& spec, double c_b, double c_w,
                                const Activation& act);

/// Given K = K^(L+1), returns (lambda, D) of the limit posterior:
/// D = 2 I + K^{-1}, lambda = 2 Y D^{-1} (as an n_out x d matrix); the
/// conditional covariance of the limit draw is Id_{n_out} (x) D^{-1}.
std::pair<Matrix, Matrix> limit_posterior_params(const Matrix& k,
                                                 const Matrix& y);

/// One draw of the limit posterior MG(lambda, Id (x) D^{-1}). The
/// posterior tilts the kernel law by the marginal likelihood
///   det(I + 2K)^{-n_out/2} exp(Tr(Y lambda^T) - |Y|_F^2)  (<= 1),
/// so when the chain is random (any Levy layer) kernel proposals are
/// accepted by exact rejection with that probability; a drift-only
/// chain has a deterministic kernel, making the tilt a constant that
/// cancels, so it is drawn once. After acceptance the output is a
/// Gaussian draw row by row.
Matrix sample_limit_posterior(RngStream& rng, const Matrix& x, const Matrix& y,
                              const LimitSpec& spec, int n_out, double c_b,
                              double c_w, const Activation& act,
                              Matrix* lambda_out = nullptr,
                              Matrix* d_out = nullptr);

/// One draw of the limit prior MG(0, Id (x) K^(L+1)).
Matrix sample_limit_prior(RngStream& rng, const Matrix& x,
                          const LimitSpec& spec, int n_out, double c_b,
                          double c_w, const Activation& act);

}  // namespace depnet

#endif  // DEPNET_WIDE_LIMIT_HPP_
