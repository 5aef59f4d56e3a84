#pragma once

#include <cstdint>
#include <vector>

namespace mbl {

/// A Monte Carlo estimate together with its standard error and the number
/// of draws behind it. All statistical thresholds downstream are phrased
/// in multiples of `se`.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
  std::int64_t n = 0;
};

/// Estimate of a Bernoulli probability from `hits` successes in `n` trials.
Estimate bernoulli_estimate(std::int64_t hits, std::int64_t n);

/// Sample mean and standard error of the mean.
Estimate mean_estimate(const std::vector<double>& values);

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
/// Exact over the pooled sample; ties are handled by advancing both sides.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sided p-value for the two-sample KS statistic `d` with
/// sample sizes n1, n2 (Kolmogorov limiting distribution).
double ks_pvalue(double d, std::size_t n1, std::size_t n2);

/// Survival function Q(lambda) of the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Empirical p-quantile (linear interpolation) of a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace mbl
