#include "depnet/rand_core.hpp"

#include <cmath>

namespace depnet {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t fmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  state_ = fmix64(seed + kGolden) ^ fmix64(stream * 0xda942042e4dd58b5ULL + 1);
}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return fmix64(state_);
}

double RngStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  cached_ = r * std::sin(t);
  have_cached_ = true;
  return r * std::cos(t);
}

double RngStream::exponential() { return -std::log(uniform()); }

Vector sample_std_normal(RngStream& rng, int n) {
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = rng.normal();
  return out;
}

Vector sample_mvn(RngStream& rng, const Vector& mean, const Matrix& cov) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size())
    throw DimensionError("sample_mvn: incompatible dimensions");
  if (cov.isZero(0.0)) return mean;
  SpdFactor f = spd_factorize(cov, JitterPolicy::adaptive);
  Vector z = sample_std_normal(rng, static_cast<int>(mean.size()));
  return mean + f.matrix_l() * z;
}

double sample_weibull_half(RngStream& rng) {
  const double u = rng.uniform();
  const double l = -std::log(u);
  return l * l;
}

double sample_half_cauchy(RngStream& rng) {
  return std::tan(0.5 * M_PI * rng.uniform());
}

PoissonPointSeries sample_poisson_points(RngStream& rng, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("sample_poisson_points: eps must be positive");
  PoissonPointSeries series;
  series.eps = eps;
  series.neglected_mass = 2.0 * std::sqrt(eps);
  // Ordered points of the x^{-3/2} process: T_(j) = 4 / (E_1+...+E_j)^2
  // with standard exponential E_k; stop at the first point below eps.
  double partial = 0.0;
  for (;;) {
    partial += rng.exponential();
    const double t = 4.0 / (partial * partial);
    if (t < eps) break;
    series.points.push_back(t);
  }
  return series;
}

Vector sample_variance_vector(RngStream& rng, VarianceModel model, int n) {
  if (n < 1)
    throw std::invalid_argument("sample_variance_vector: n must be >= 1");
  Vector out(n);
  const double width = static_cast<double>(n);
  switch (model) {
    case VarianceModel::fixed:
      out.setConstant(1.0 / width);
      break;
    case VarianceModel::model1:
      for (int j = 0; j < n; ++j) {
        const double we = sample_weibull_half(rng);
        out(j) = we * we / width;
      }
      break;
    case VarianceModel::model2:
      for (int j = 0; j < n; ++j) {
        const double hc = sample_half_cauchy(rng);
        out(j) = M_PI * M_PI * hc * hc / (width * width);
      }
      break;
  }
  return out;
}

}  // namespace depnet
