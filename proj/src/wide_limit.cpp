#include "depnet/wide_limit.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "depnet/posterior_sampler.hpp"

namespace depnet {

void LimitSpec::validate() const {
  if (layers.empty())
    throw std::invalid_argument("LimitSpec: at least one layer required");
  if (mc_samples < 1)
    throw std::invalid_argument("LimitSpec: mc_samples must be >= 1");
  for (const auto& layer : layers) {
    if (layer.drift < 0.0)
      throw std::invalid_argument("LimitSpec: drift must be >= 0");
    if (layer.drift == 0.0 && layer.levy.tag == LevySpec::Tag::none)
      throw std::invalid_argument(
          "LimitSpec: zero drift with no Levy part gives a degenerate chain");
    if (layer.levy.tag == LevySpec::Tag::inv_sqrt_cube && !(layer.levy.eps > 0.0))
      throw std::invalid_argument("LimitSpec: Levy eps must be positive");
  }
}

LimitSpec LimitSpec::model1(int depth, int mc_samples) {
  LimitSpec spec;
  spec.mc_samples = mc_samples;
  spec.layers.assign(depth, LimitLayerSpec{24.0, {LevySpec::Tag::none, 1e-6}});
  return spec;
}

LimitSpec LimitSpec::model2(int depth, double eps) {
  LimitSpec spec;
  spec.layers.assign(depth,
                     LimitLayerSpec{0.0, {LevySpec::Tag::inv_sqrt_cube, eps}});
  return spec;
}

Matrix k1(const Matrix& x, double c_b, double c_w) {
  const double n0 = static_cast<double>(x.rows());
  const Eigen::Index d = x.cols();
  if (rank(x) < d)
    std::cerr << "depnet: warning: input matrix has rank < d; the kernel "
                 "chain may be singular\n";
  Matrix k = Matrix::Constant(d, d, c_b);
  k += (c_w / n0) * (x.transpose() * x);
  return k;
}

Matrix k_step(RngStream& rng, const Matrix& k_prev, const LimitLayerSpec& layer,
              double c_b, double c_w, const Activation& act, int mc_samples,
              Matrix* stderr_out, double* neglected_mass) {
  const Eigen::Index d = k_prev.rows();
  const SpdFactor f = spd_factorize(k_prev);
  const Matrix& l = f.matrix_l();
  const Vector zero = Vector::Zero(d);

  Matrix k = c_b * Matrix::Ones(d, d);
  Matrix sum = Matrix::Zero(d, d);
  Matrix sum_sq = Matrix::Zero(d, d);
  if (layer.drift > 0.0) {
    for (int m = 0; m < mc_samples; ++m) {
      Vector s = act.apply(l * sample_std_normal(rng, static_cast<int>(d)));
      Matrix outer = s * s.transpose();
      sum += outer;
      sum_sq += outer.cwiseProduct(outer);
    }
    const double inv_m = 1.0 / static_cast<double>(mc_samples);
    k += c_w * layer.drift * inv_m * sum;
    if (stderr_out) {
      Matrix var = inv_m * sum_sq - (inv_m * sum).cwiseProduct(inv_m * sum);
      *stderr_out = c_w * layer.drift *
                    (var.cwiseMax(0.0) * inv_m).cwiseSqrt();
    }
  } else if (stderr_out) {
    *stderr_out = Matrix::Zero(d, d);
  }

  if (layer.levy.tag == LevySpec::Tag::inv_sqrt_cube) {
    PoissonPointSeries series = sample_poisson_points(rng, layer.levy.eps);
    for (double t : series.points) {
      Vector s = act.apply(l * sample_std_normal(rng, static_cast<int>(d)));
      k += c_w * t * s * s.transpose();
    }
    if (neglected_mass) *neglected_mass += c_w * series.neglected_mass;
  }

  return 0.5 * (k + k.transpose());
}

KernelChain sample_kernel_chain(RngStream& rng, const Matrix& x,
                                const LimitSpec& spec, double c_b, double c_w,
                                const Activation& act) {
  spec.validate();
  KernelChain chain;
  chain.seed = rng.seed();
  chain.stream = rng.stream();
  chain.mc_samples = spec.mc_samples;
  chain.kernels.push_back(k1(x, c_b, c_w));
  chain.mc_stderrs.push_back(Matrix::Zero(x.cols(), x.cols()));
  for (const auto& layer : spec.layers) {
    Matrix se;
    chain.kernels.push_back(k_step(rng, chain.kernels.back(), layer, c_b, c_w,
                                   act, spec.mc_samples, &se,
                                   &chain.neglected_mass));
    chain.mc_stderrs.push_back(std::move(se));
  }
  return chain;
}

std::pair<Matrix, Matrix> limit_posterior_params(const Matrix& k,
                                                 const Matrix& y) {
  const Eigen::Index d = k.rows();
  if (y.cols() != d)
    throw DimensionError("limit_posterior_params: Y has wrong column count");
  const SpdFactor fk = spd_factorize(k);
  Matrix dmat = 2.0 * Matrix::Identity(d, d) + fk.solve(Matrix::Identity(d, d));
  dmat = (0.5 * (dmat + dmat.transpose())).eval();
  const SpdFactor fd = spd_factorize(dmat);
  Matrix lambda = 2.0 * fd.solve(y.transpose()).transpose();
  return {lambda, dmat};
}

namespace {

bool has_random_kernel(const LimitSpec& spec) {
  for (const auto& layer : spec.layers)
    if (layer.levy.tag != LevySpec::Tag::none) return true;
  return false;
}

}  // namespace

Matrix sample_limit_posterior(RngStream& rng, const Matrix& x, const Matrix& y,
                              const LimitSpec& spec, int n_out, double c_b,
                              double c_w, const Activation& act,
                              Matrix* lambda_out, Matrix* d_out) {
  const bool random_kernel = has_random_kernel(spec);
  const double y_norm2 = y.squaredNorm();
  constexpr long kMaxKernelProposals = 10000000;
  Matrix lambda, dmat;
  for (long attempt = 0;; ++attempt) {
    if (attempt >= kMaxKernelProposals)
      throw ProposalBudgetExceeded(
          "sample_limit_posterior: kernel proposal budget exhausted (" +
          std::to_string(kMaxKernelProposals) + " chain draws)");
    KernelChain chain = sample_kernel_chain(rng, x, spec, c_b, c_w, act);
    std::tie(lambda, dmat) = limit_posterior_params(chain.kernels.back(), y);
    if (!random_kernel) break;  // tilt is constant: it cancels in the mixture
    const Eigen::Index dk = chain.kernels.back().rows();
    const double log_det_i2k =
        spd_factorize(Matrix::Identity(dk, dk) + 2.0 * chain.kernels.back())
            .log_det();
    const double log_accept = -0.5 * static_cast<double>(n_out) * log_det_i2k +
                              (y * lambda.transpose()).trace() - y_norm2;
    if (std::log(rng.uniform()) < log_accept) break;
  }
  if (lambda_out) *lambda_out = lambda;
  if (d_out) *d_out = dmat;
  const Eigen::Index d = dmat.rows();
  const Matrix cov = spd_factorize(dmat).solve(Matrix::Identity(d, d));
  const Matrix cov_sym = 0.5 * (cov + cov.transpose());
  Matrix out(n_out, d);
  for (int h = 0; h < n_out; ++h)
    out.row(h) = sample_mvn(rng, lambda.row(h).transpose(), cov_sym).transpose();
  return out;
}

Matrix sample_limit_prior(RngStream& rng, const Matrix& x,
                          const LimitSpec& spec, int n_out, double c_b,
                          double c_w, const Activation& act) {
  KernelChain chain = sample_kernel_chain(rng, x, spec, c_b, c_w, act);
  const Matrix& k = chain.kernels.back();
  const Eigen::Index d = k.rows();
  Matrix out(n_out, d);
  const Vector zero = Vector::Zero(d);
  for (int h = 0; h < n_out; ++h)
    out.row(h) = sample_mvn(rng, zero, k).transpose();
  return out;
}

}  // namespace depnet
