#include "depnet/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace depnet {

void Architecture::validate() const {
  if (depth < 1) throw std::invalid_argument("Architecture: depth must be >= 1");
  if (widths.size() != static_cast<std::size_t>(depth) + 2)
    throw std::invalid_argument("Architecture: need depth + 2 widths");
  for (int w : widths)
    if (w < 1) throw std::invalid_argument("Architecture: widths must be >= 1");
  if (c_b < 0.0) throw std::invalid_argument("Architecture: C_B must be >= 0");
  if (!(c_w > 0.0)) throw std::invalid_argument("Architecture: C_W must be > 0");
  if (variance_models.size() != static_cast<std::size_t>(depth))
    throw std::invalid_argument(
        "Architecture: need one variance model per hidden layer");
}

DataSet DataSet::load_csv(const std::string& path, int n0, int n_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("dataset missing header row: " + path);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != static_cast<std::size_t>(n0 + n_out))
      throw std::runtime_error("dataset row has wrong column count: " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("dataset has no data rows: " + path);
  DataSet ds;
  const int d = static_cast<int>(rows.size());
  ds.inputs.resize(n0, d);
  ds.targets.resize(n_out, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < n0; ++j) ds.inputs(j, i) = rows[i][j];
    for (int j = 0; j < n_out; ++j) ds.targets(j, i) = rows[i][n0 + j];
  }
  return ds;
}

NetworkParams sample_prior_params(RngStream& rng, const Architecture& arch) {
  arch.validate();
  NetworkParams params;
  params.layers.reserve(arch.depth + 1);
  for (int layer = 1; layer <= arch.depth + 1; ++layer) {
    const int n_in = arch.widths[layer - 1];
    const int n = arch.widths[layer];
    LayerParams p;
    p.bias = Vector::Zero(n);
    if (arch.c_b > 0.0) {
      const double sd = std::sqrt(arch.c_b);
      for (int h = 0; h < n; ++h) p.bias(h) = sd * rng.normal();
    }
    p.variances = layer == 1
                      ? sample_variance_vector(rng, VarianceModel::fixed, n_in)
                      : sample_variance_vector(
                            rng, arch.variance_model_into(layer), n_in);
    p.gaussians.resize(n, n_in);
    const double sd_w = std::sqrt(arch.c_w);
    for (int j = 0; j < n_in; ++j)
      for (int h = 0; h < n; ++h) p.gaussians(h, j) = sd_w * rng.normal();
    p.weights.resize(n, n_in);
    for (int j = 0; j < n_in; ++j)
      p.weights.col(j) = std::sqrt(p.variances(j)) * p.gaussians.col(j);
    params.layers.push_back(std::move(p));
  }
  return params;
}

Matrix phi_sigma(const Vector& bias, const Matrix& weights, const Matrix& m,
                 const Activation& act) {
  if (weights.cols() != m.rows())
    throw DimensionError("phi_sigma: incompatible dimensions");
  Matrix out = weights * act.apply(m);
  out.colwise() += bias;
  return out;
}

std::vector<Matrix> forward(const NetworkParams& params, const Matrix& x,
                            const Activation& act) {
  if (params.layers.empty()) throw std::invalid_argument("forward: no layers");
  if (params.layers.front().weights.cols() != x.rows())
    throw DimensionError("forward: input width mismatch");
  std::vector<Matrix> zs;
  zs.reserve(params.layers.size());
  Matrix z = params.layers.front().weights * x;
  z.colwise() += params.layers.front().bias;
  zs.push_back(z);
  for (std::size_t l = 1; l < params.layers.size(); ++l) {
    z = phi_sigma(params.layers[l].bias, params.layers[l].weights, zs.back(),
                  act);
    zs.push_back(z);
  }
  return zs;
}

double gaussian_log_likelihood(const Matrix& xi, const Matrix& y) {
  if (xi.rows() != y.rows() || xi.cols() != y.cols())
    throw DimensionError("gaussian_log_likelihood: shape mismatch");
  return -(xi - y).squaredNorm();
}

}  // namespace depnet
