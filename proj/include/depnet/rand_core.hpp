#ifndef DEPNET_RAND_CORE_HPP_
#define DEPNET_RAND_CORE_HPP_

#include <cstdint>
#include <vector>

#include "depnet/mat_core.hpp"

namespace depnet {

// Counter-based 64-bit generator (splitmix-style output function over a
// keyed counter). Same (seed, stream) gives a bit-identical sequence on
// every platform; distinct streams are decorrelated by the key hash.
//
// Reference output, seed 0 / stream 0, first four next_u64() values:
//   3777882419325163568
//   7716964493799840330
//   7937410054970136411
//   8812776324531318729
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform draw in the open interval (0,1).
  double uniform();
  /// Standard normal via Box-Muller (pair cached).
  double normal();
  /// Exponential with mean 1.
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

Vector sample_std_normal(RngStream& rng, int n);

/// mean + L z for z standard normal; cov is factorized with the
/// adaptive jitter policy. A zero covariance returns the mean exactly.
Vector sample_mvn(RngStream& rng, const Vector& mean, const Matrix& cov);

/// Weibull(1, 1/2) by inverse CDF: (-ln U)^2, survival e^{-sqrt(x)}.
double sample_weibull_half(RngStream& rng);

/// Half-Cauchy by inverse CDF: tan(pi U / 2).
double sample_half_cauchy(RngStream& rng);

// Ordered points of the Poisson process with mean measure
// x^{-3/2} 1{x>0} dx, truncated below eps.
struct PoissonPointSeries {
  std::vector<double> points;  // strictly decreasing, all >= eps
  double eps;
  double neglected_mass;  // integral of x * x^{-3/2} over (0, eps) = 2 sqrt(eps)
};

PoissonPointSeries sample_poisson_points(RngStream& rng, double eps);

enum class VarianceModel { fixed, model1, model2 };

/// One per-neuron variance vector of length n:
///   fixed:  1/n in every slot
///   model1: WE^2 / n,        WE ~ Weibull(1, 1/2)
///   model2: pi^2 HC^2 / n^2, HC ~ half-Cauchy
Vector sample_variance_vector(RngStream& rng, VarianceModel model, int n);

}  // namespace depnet

#endif  // DEPNET_RAND_CORE_HPP_
