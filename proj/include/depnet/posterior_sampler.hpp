#ifndef DEPNET_POSTERIOR_SAMPLER_HPP_
#define DEPNET_POSTERIOR_SAMPLER_HPP_

#include <utility>
#include <vector>

#include "depnet/network.hpp"

namespace depnet {

struct RejectionConfig {
  int replica_count = 100;       // N
  double delta = 0.99;           // clamp level, in (1/2, 1)
  long max_proposals = 1000000;  // per layer
  bool replica_per_proposal = false;  // default: one family per output sample

  void validate() const;
};

struct LayerStats {
  int layer = 0;  // 2 .. L+1
  long proposals = 0;
  long acceptances = 0;
  double seconds = 0.0;

  double acceptance_rate() const {
    return proposals > 0 ? static_cast<double>(acceptances) /
                               static_cast<double>(proposals)
                         : 0.0;
  }
};

struct RejectionStats {
  std::vector<LayerStats> layers;

  /// Associative merge for combining per-sample stats.
  void merge(const RejectionStats& other);
};

struct ProposalBudgetExceeded : std::runtime_error {
  explicit ProposalBudgetExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// Z^(1) under the posterior (same Gaussian law as under the prior):
/// each of the n1 rows is an independent N(0, C) draw with
/// C = (x^T|1) diag(C_W/n0, ..., C_W/n0, C_B) (x^T|1)^T, the ones
/// column omitted when C_B = 0.
Matrix sample_z1_posterior(RngStream& rng, const Matrix& x,
                           const Architecture& arch);

// One prior draw of a layer's weights and bias; the per-neuron
// variances are redrawn on every call (the proposal law is the
// V-mixture itself) and retained for diagnostics.
struct WeightDraw {
  Vector bias;     // zero vector when C_B = 0
  Matrix weights;  // n_l x n_{l-1}
  Vector variances;
};

/// 2 <= layer <= L+1.
WeightDraw prior_weight_draw(RngStream& rng, const Architecture& arch,
                             int layer);

// Fixed family of prior replicas for layers l+1 .. L+1:
// replicas[r][s] holds the layer l+1+s draw of replica r.
using ReplicaFamily = std::vector<std::vector<WeightDraw>>;

ReplicaFamily draw_replicas(RngStream& rng, const Architecture& arch, int layer,
                            int count);

/// Exact last-layer acceptance probability
/// exp(-sum_i ||Phi_theta(sigma(z_L)) col i - y(i)||^2), in (0, 1].
double acceptance_exact_last(const Vector& bias, const Matrix& weights,
                             const Matrix& z_l, const Matrix& y,
                             const Activation& act);

/// Clamped Monte Carlo estimate of the intermediate acceptance
/// probability: mean over replicas of [(1-delta) v Psi] ^ delta, where
/// Psi composes the proposal layer with the replica layers up to L+1.
double acceptance_estimate(const ReplicaFamily& replicas, const Vector& bias,
                           const Matrix& weights, const Matrix& z_prev,
                           const Matrix& y, const Activation& act,
                           double delta);

/// One rejection-sampling transition z^(l-1) -> z^(l) under the
/// posterior: loops prior proposals against the estimated (l <= L) or
/// exact (l = L+1) acceptance probability, then maps the accepted draw
/// through b 1^T + W sigma(z_prev).
Matrix rejection_step(RngStream& rng, const Matrix& z_prev,
                      const Architecture& arch, int layer,
                      const RejectionConfig& cfg, const Matrix& y,
                      LayerStats& stats);

/// Full layered sampler: closed-form Z^(1), then rejection steps for
/// l = 2 .. L+1. Returns the output matrix and per-layer stats.
std::pair<Matrix, RejectionStats> sample_posterior_deep(
    RngStream& rng, const Architecture& arch, const Matrix& x, const Matrix& y,
    const RejectionConfig& cfg);

/// Exact shallow (L = 1) sampler: Gaussian-mixture transition
/// Z^(2) | Z^(1) = z with precision-like matrix
/// S = 2 (sigma(z); 1)(sigma(z); 1)^T + diag(C_W V, C_B)^{-1}.
Matrix sample_posterior_shallow(RngStream& rng, const Architecture& arch,
                                const Matrix& x, const Matrix& y);

}  // namespace depnet

#endif  // DEPNET_POSTERIOR_SAMPLER_HPP_
