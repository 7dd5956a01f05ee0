#ifndef DEPNET_METRICS_HPP_
#define DEPNET_METRICS_HPP_

#include <vector>

namespace depnet {

struct EcdfCurve {
  std::vector<double> support;  // sorted, unique
  std::vector<double> heights;  // nondecreasing, last = 1

  /// Right-continuous evaluation F(x).
  double operator()(double x) const;
};

EcdfCurve ecdf(std::vector<double> samples);

/// Exact two-sample sup-norm distance between the ECDFs (merged sweep,
/// no binning).
double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

struct SampleSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, n-1 divisor
  double q01 = 0.0, q05 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q95 = 0.0,
         q99 = 0.0;
};

/// Linear-interpolation quantiles on the sorted sample.
SampleSummary summary(std::vector<double> samples);

/// Asymptotic two-sample critical value c(alpha) sqrt((m+n)/(mn)) with
/// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_value(double alpha, std::size_t m, std::size_t n);

}  // namespace depnet

#endif  // DEPNET_METRICS_HPP_
