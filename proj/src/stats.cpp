#include "dioph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dioph/cumulants.hpp"
#include "dioph/errors.hpp"

namespace dioph {

SummaryStats summarize(std::span<const double> samples, const std::function<double(double)>& cdf) {
  SummaryStats s;
  s.sample_count = samples.size();
  if (samples.empty()) return s;
  const double S = static_cast<double>(samples.size());
  for (double x : samples) s.mean += x;
  s.mean /= S;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / (S - 1.0);
  }
  s.stderr_mean = std::sqrt(s.variance / S);
  if (samples.size() >= 10) {
    s.cum3 = cumulants::empirical_cumulant(samples, 3);
    s.cum4 = cumulants::empirical_cumulant(samples, 4);
  }
  if (cdf) s.ks_distance = ks_statistic(samples, cdf);
  return s;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw PreconditionError("ks_statistic needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double S = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double below = static_cast<double>(i) / S;
    const double at = static_cast<double>(j) / S;
    const double f_left = cdf(std::nextafter(x[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, at - cdf(x[i]), f_left - below, cdf(x[i]) - at, below - f_left});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

double normal_cdf(double x, double variance) {
  if (!(variance > 0.0)) throw PreconditionError("normal_cdf needs variance > 0");
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double N = static_cast<double>(n);
  const double p = static_cast<double>(k) / N;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * N)) / (1 + z2 / N);
  const double half = z * std::sqrt(p * (1 - p) / N + z2 / (4 * N * N)) / (1 + z2 / N);
  const double low = k == 0 ? 0.0 : std::max(0.0, centre - half);
  const double high = k == n ? 1.0 : std::min(1.0, centre + half);
  return {low, high};
}

namespace {

double mean_of(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("covariance needs paired samples, S >= 2");
  const double mx = mean_of(x), my = mean_of(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - mx) * (y[i] - my);
  return acc / static_cast<double>(x.size() - 1);
}

double covariance_stderr(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("covariance needs paired samples, S >= 2");
  const double mx = mean_of(x), my = mean_of(y);
  std::vector<double> prod(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  const double mp = mean_of(prod);
  double ss = 0.0;
  for (double p : prod) ss += (p - mp) * (p - mp);
  const double S = static_cast<double>(x.size());
  return std::sqrt(ss / (S - 1.0) / S);
}

nlohmann::json to_json(const SummaryStats& s) {
  return {{"mean", s.mean},         {"variance", s.variance},       {"cum3", s.cum3},
          {"cum4", s.cum4},         {"ks_distance", s.ks_distance}, {"stderr_mean", s.stderr_mean},
          {"sample_count", s.sample_count}};
}

}  // namespace dioph
