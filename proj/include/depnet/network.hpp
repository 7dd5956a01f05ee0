#ifndef DEPNET_NETWORK_HPP_
#define DEPNET_NETWORK_HPP_

#include <functional>
#include <string>
#include <vector>

#include "depnet/mat_core.hpp"
#include "depnet/rand_core.hpp"

namespace depnet {

enum class ActivationTag { relu, identity, custom };

// Pointwise activation. Callers are expected to respect the polynomial
// growth bound |sigma(z)| <= a1 + a2 |z|^a3 for custom closures; this is
// a documented precondition, not a runtime check.
struct Activation {
  ActivationTag tag = ActivationTag::relu;
  std::function<double(double)> fn;

  static Activation relu() { return {ActivationTag::relu, {}}; }
  static Activation identity() { return {ActivationTag::identity, {}}; }
  static Activation custom(std::function<double(double)> f) {
    return {ActivationTag::custom, std::move(f)};
  }

  double operator()(double z) const {
    switch (tag) {
      case ActivationTag::relu:
        return z > 0.0 ? z : 0.0;  // relu(0) = 0, matching max{0, x}
      case ActivationTag::identity:
        return z;
      case ActivationTag::custom:
        return fn(z);
    }
    return z;
  }

  Matrix apply(const Matrix& m) const {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, j) = (*this)(m(i, j));
    return out;
  }
};

// Layer widths are indexed 0..L+1; variance_models[l] governs the
// per-neuron variances on hidden layer l+1 (i.e. the weights feeding
// layer l+2). Layer 0 always uses the fixed 1/n0 convention.
struct Architecture {
  int depth = 1;               // L >= 1
  std::vector<int> widths;     // n_0 .. n_{L+1}
  double c_b = 1.0;            // >= 0
  double c_w = 1.0;            // > 0
  Activation activation = Activation::relu();
  std::vector<VarianceModel> variance_models;  // size L, layers 1..L

  void validate() const;
  int n0() const { return widths.front(); }
  int n_out() const { return widths.back(); }
  /// Variance model for the inputs of layer `layer` (2 <= layer <= L+1).
  VarianceModel variance_model_into(int layer) const {
    return variance_models.at(static_cast<std::size_t>(layer) - 2);
  }
};

struct LayerParams {
  Vector bias;       // n_l
  Matrix weights;    // n_l x n_{l-1}, W_hj = sqrt(V_j) N_hj
  Matrix gaussians;  // the underlying N_hj draws
  Vector variances;  // V^{(l-1)}, one per input neuron, all > 0
};

struct NetworkParams {
  std::vector<LayerParams> layers;  // layers[l-1] holds layer l, l = 1..L+1
};

struct DataSet {
  Matrix inputs;   // n0 x d
  Matrix targets;  // n_out x d

  int d() const { return static_cast<int>(inputs.cols()); }

  /// CSV with a header row; columns x_1..x_{n0}, y_1..y_{n_out}; one row
  /// per input point.
  static DataSet load_csv(const std::string& path, int n0, int n_out);
};

NetworkParams sample_prior_params(RngStream& rng, const Architecture& arch);

/// Z^(1) = b^(1) 1^T + W^(1) X, then Z^(l) = b^(l) 1^T + W^(l) sigma(Z^(l-1)).
/// Returns Z^(1) .. Z^(L+1).
std::vector<Matrix> forward(const NetworkParams& params, const Matrix& x,
                            const Activation& act);

/// b 1^T + W sigma(M), the one-layer affine map applied after the
/// activation; composing these over layers reproduces forward().
Matrix phi_sigma(const Vector& bias, const Matrix& weights, const Matrix& m,
                 const Activation& act);

/// -sum_i ||xi(i) - y(i)||^2 = -Tr[(Xi - Y)(Xi - Y)^T], in log scale.
double gaussian_log_likelihood(const Matrix& xi, const Matrix& y);

}  // namespace depnet

#endif  // DEPNET_NETWORK_HPP_
