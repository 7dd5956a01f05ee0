#include "depnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace depnet {

double EcdfCurve::operator()(double x) const {
  auto it = std::upper_bound(support.begin(), support.end(), x);
  if (it == support.begin()) return 0.0;
  return heights[static_cast<std::size_t>(it - support.begin()) - 1];
}

EcdfCurve ecdf(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ecdf: empty input");
  std::sort(samples.begin(), samples.end());
  EcdfCurve curve;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    curve.support.push_back(samples[i]);
    curve.heights.push_back(static_cast<double>(i + 1) / n);
  }
  return curve;
}

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_distance: empty input");
  std::vector<double> sa(a), sb(b);
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

double quantile_sorted(const std::vector<double>& s, double p) {
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] * (1.0 - frac) + s[hi] * frac;
}

}  // namespace

SampleSummary summary(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("summary: empty input");
  SampleSummary out;
  const double n = static_cast<double>(samples.size());
  double total = 0.0;
  for (double x : samples) total += x;
  out.mean = total / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - out.mean) * (x - out.mean);
    out.variance = ss / (n - 1.0);
  }
  std::sort(samples.begin(), samples.end());
  out.q01 = quantile_sorted(samples, 0.01);
  out.q05 = quantile_sorted(samples, 0.05);
  out.q25 = quantile_sorted(samples, 0.25);
  out.median = quantile_sorted(samples, 0.50);
  out.q75 = quantile_sorted(samples, 0.75);
  out.q95 = quantile_sorted(samples, 0.95);
  out.q99 = quantile_sorted(samples, 0.99);
  return out;
}

double ks_critical_value(double alpha, std::size_t m, std::size_t n) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double mm = static_cast<double>(m);
  const double nn = static_cast<double>(n);
  return c * std::sqrt((mm + nn) / (mm * nn));
}

}  // namespace depnet
