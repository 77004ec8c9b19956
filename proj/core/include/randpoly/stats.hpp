#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace randpoly::stats {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
Interval wilson(std::size_t successes, std::size_t trials, double z = kZ95);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample sd / sqrt(n); 0 for n < 2
};

MeanSe mean_se(std::span<const double> values);

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  double residual_rms = 0.0;
  double residual_max = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov survival function Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_q(double t);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value at the
/// effective size n1 n2 / (n1 + n2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Radical inverse of `index` in `base` (van der Corput).
double radical_inverse(std::uint64_t index, int base);
/// k-th prime, k = 0 -> 2.
int prime(int k);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace randpoly::stats
