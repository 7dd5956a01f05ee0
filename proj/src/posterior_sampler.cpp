#include "depnet/posterior_sampler.hpp"

#include <chrono>
#include <cmath>

namespace depnet {

void RejectionConfig::validate() const {
  if (replica_count < 1)
    throw std::invalid_argument("RejectionConfig: N must be >= 1");
  if (!(delta > 0.5 && delta < 1.0))
    throw std::invalid_argument("RejectionConfig: delta must be in (1/2, 1)");
  if (max_proposals < 1)
    throw std::invalid_argument("RejectionConfig: max_proposals must be >= 1");
}

void RejectionStats::merge(const RejectionStats& other) {
  if (other.layers.empty()) return;
  if (layers.empty()) {
    layers = other.layers;
    return;
  }
  if (layers.size() != other.layers.size())
    throw std::invalid_argument("RejectionStats::merge: layer count mismatch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].proposals += other.layers[i].proposals;
    layers[i].acceptances += other.layers[i].acceptances;
    layers[i].seconds += other.layers[i].seconds;
  }
}

Matrix sample_z1_posterior(RngStream& rng, const Matrix& x,
                           const Architecture& arch) {
  arch.validate();
  if (x.rows() != arch.n0())
    throw DimensionError("sample_z1_posterior: input width mismatch");
  const Eigen::Index d = x.cols();
  const int n1 = arch.widths[1];
  const double scale = arch.c_w / static_cast<double>(arch.n0());
  // Row covariance (x^T|1) diag(C_W/n0, ..., C_B) (x^T|1)^T.
  Matrix cov = scale * (x.transpose() * x);
  if (arch.c_b > 0.0) cov.array() += arch.c_b;
  cov = (0.5 * (cov + cov.transpose())).eval();
  Matrix z(n1, d);
  const Vector zero = Vector::Zero(d);
  for (int h = 0; h < n1; ++h)
    z.row(h) = sample_mvn(rng, zero, cov).transpose();
  return z;
}

WeightDraw prior_weight_draw(RngStream& rng, const Architecture& arch,
                             int layer) {
  if (layer < 2 || layer > arch.depth + 1)
    throw std::invalid_argument("prior_weight_draw: layer out of range");
  const int n_in = arch.widths[layer - 1];
  const int n = arch.widths[layer];
  WeightDraw draw;
  draw.variances =
      sample_variance_vector(rng, arch.variance_model_into(layer), n_in);
  draw.weights.resize(n, n_in);
  const double sd_w = std::sqrt(arch.c_w);
  for (int j = 0; j < n_in; ++j) {
    const double sd = sd_w * std::sqrt(draw.variances(j));
    for (int h = 0; h < n; ++h) draw.weights(h, j) = sd * rng.normal();
  }
  draw.bias = Vector::Zero(n);
  if (arch.c_b > 0.0) {
    const double sd_b = std::sqrt(arch.c_b);
    for (int h = 0; h < n; ++h) draw.bias(h) = sd_b * rng.normal();
  }
  return draw;
}

ReplicaFamily draw_replicas(RngStream& rng, const Architecture& arch, int layer,
                            int count) {
  ReplicaFamily family(count);
  for (int r = 0; r < count; ++r) {
    family[r].reserve(arch.depth + 1 - layer);
    for (int s = layer + 1; s <= arch.depth + 1; ++s)
      family[r].push_back(prior_weight_draw(rng, arch, s));
  }
  return family;
}

double acceptance_exact_last(const Vector& bias, const Matrix& weights,
                             const Matrix& z_l, const Matrix& y,
                             const Activation& act) {
  return std::exp(gaussian_log_likelihood(phi_sigma(bias, weights, z_l, act), y));
}

double acceptance_estimate(const ReplicaFamily& replicas, const Vector& bias,
                           const Matrix& weights, const Matrix& z_prev,
                           const Matrix& y, const Activation& act,
                           double delta) {
  const Matrix base = phi_sigma(bias, weights, z_prev, act);
  double total = 0.0;
  for (const auto& replica : replicas) {
    Matrix m = base;
    for (const auto& layer : replica)
      m = phi_sigma(layer.bias, layer.weights, m, act);
    const double psi = std::exp(gaussian_log_likelihood(m, y));
    total += std::min(std::max(psi, 1.0 - delta), delta);
  }
  return total / static_cast<double>(replicas.size());
}

Matrix rejection_step(RngStream& rng, const Matrix& z_prev,
                      const Architecture& arch, int layer,
                      const RejectionConfig& cfg, const Matrix& y,
                      LayerStats& stats) {
  cfg.validate();
  const bool last = layer == arch.depth + 1;
  const auto t0 = std::chrono::steady_clock::now();
  stats.layer = layer;
  ReplicaFamily family;
  if (!last && !cfg.replica_per_proposal)
    family = draw_replicas(rng, arch, layer, cfg.replica_count);
  for (long n = 0; n < cfg.max_proposals; ++n) {
    if (!last && cfg.replica_per_proposal)
      family = draw_replicas(rng, arch, layer, cfg.replica_count);
    WeightDraw draw = prior_weight_draw(rng, arch, layer);
    const double u = rng.uniform();
    const double acc =
        last ? acceptance_exact_last(draw.bias, draw.weights, z_prev, y,
                                     arch.activation)
             : acceptance_estimate(family, draw.bias, draw.weights, z_prev, y,
                                   arch.activation, cfg.delta);
    ++stats.proposals;
    if (u <= acc) {
      ++stats.acceptances;
      stats.seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      return phi_sigma(draw.bias, draw.weights, z_prev, arch.activation);
    }
  }
  stats.seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  throw ProposalBudgetExceeded(
      "rejection_step: proposal budget exhausted at layer " +
      std::to_string(layer) +
      "; the data may lie far outside the prior mass (consider raising the "
      "budget or moving delta toward 1)");
}

std::pair<Matrix, RejectionStats> sample_posterior_deep(
    RngStream& rng, const Architecture& arch, const Matrix& x, const Matrix& y,
    const RejectionConfig& cfg) {
  arch.validate();
  Matrix z = sample_z1_posterior(rng, x, arch);
  RejectionStats stats;
  for (int layer = 2; layer <= arch.depth + 1; ++layer) {
    LayerStats layer_stats;
    z = rejection_step(rng, z, arch, layer, cfg, y, layer_stats);
    stats.layers.push_back(layer_stats);
  }
  return {z, stats};
}

Matrix sample_posterior_shallow(RngStream& rng, const Architecture& arch,
                                const Matrix& x, const Matrix& y) {
  arch.validate();
  if (arch.depth != 1)
    throw std::invalid_argument("sample_posterior_shallow: requires L = 1");
  const int n1 = arch.widths[1];
  const int n2 = arch.widths[2];
  const Eigen::Index d = x.cols();
  const bool with_bias = arch.c_b > 0.0;
  const int m = with_bias ? n1 + 1 : n1;

  Matrix z1 = sample_z1_posterior(rng, x, arch);

  // a = (sigma(z1)^T | 1_d): d x m.
  Matrix a(d, m);
  a.leftCols(n1) = arch.activation.apply(z1).transpose();
  if (with_bias) a.col(n1).setOnes();

  // The mixture does not use the prior law of V: conditioning on the
  // data tilts it by the marginal likelihood of the layer-2 weights,
  // prod_h m_h(V) with
  //   m_h(V) = [det(D) det(S)]^{-1/2}
  //            exp(2 y_h A S^{-1} A^T y_h^T - ||y_h||^2) <= 1,
  // D = diag(C_W V, C_B). Each factor is an expectation of exp(-r^2),
  // so the product is an exact rejection probability for prior-V
  // proposals. Everything reduces to the d x d matrix G = A D A^T:
  // det(D) det(S) = det(Id + 2 G) (Sylvester) and, by Woodbury,
  // A S^{-1} A^T = (Id + 2 G)^{-1} G.
  const double y_norm2 = y.squaredNorm();
  Matrix cov;  // A S^{-1} A^T, the d x d row covariance
  for (;;) {
    Vector v = sample_variance_vector(rng, arch.variance_model_into(2), n1);
    Vector dvec(m);
    dvec.head(n1) = arch.c_w * v;
    if (with_bias) dvec(n1) = arch.c_b;
    Matrix g = a * dvec.asDiagonal() * a.transpose();
    g = (0.5 * (g + g.transpose())).eval();
    const SpdFactor f =
        spd_factorize(Matrix::Identity(d, d) + 2.0 * g, JitterPolicy::none);
    cov = f.solve(g);
    cov = (0.5 * (cov + cov.transpose())).eval();
    const double quad = (y * cov * y.transpose()).trace();
    const double log_accept =
        2.0 * quad - y_norm2 - 0.5 * static_cast<double>(n2) * f.log_det();
    if (std::log(rng.uniform()) < log_accept) break;
  }
  const Matrix nu = 2.0 * y * cov;  // n2 x d row means

  Matrix out(n2, d);
  for (int h = 0; h < n2; ++h)
    out.row(h) = sample_mvn(rng, nu.row(h).transpose(), cov).transpose();
  return out;
}

}  // namespace depnet
