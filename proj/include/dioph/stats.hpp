#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include <json.hpp>

namespace dioph {

struct SummaryStats {
  double mean = 0.0;
  double variance = 0.0;  // denominator S - 1 (0 when S = 1)
  double cum3 = 0.0;      // plug-in, 0 when S < 10
  double cum4 = 0.0;
  double ks_distance = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t sample_count = 0;
};

// ks_distance is left at 0 unless a cdf is given.
SummaryStats summarize(std::span<const double> samples, const std::function<double(double)>& cdf = {});

// sup_x |F_S(x) - cdf(x)| over both one-sided gaps at each distinct sample
// point; the left gap uses cdf just below the point, so ties and step cdfs
// are handled exactly.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

// P(X <= x) for X ~ N(0, variance).
double normal_cdf(double x, double variance);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

// Standard error of the sample covariance, from the spread of the centred products.
double covariance_stderr(std::span<const double> x, std::span<const double> y);
double covariance(std::span<const double> x, std::span<const double> y);

nlohmann::json to_json(const SummaryStats& s);

}  // namespace dioph
