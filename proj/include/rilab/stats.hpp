#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rilab {

/// Monte Carlo proportion with its binomial standard error.
struct Estimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  std::uint64_t seed = 0;

  static Estimate proportion(std::uint64_t successes, std::uint64_t samples, std::uint64_t seed);
};

/// Sample mean and standard error of the mean.
struct MeanEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
};

MeanEstimate mean_of(std::span<const double> values);

/// sup_s |F_n(s) - F(s)| for the empirical CDF of `values` (sorted internally).
/// Checks both one-sided limits at every atom, so ties are handled exactly.
double ks_distance(std::vector<double> values, const std::function<double(double)>& cdf);

/// Pearson chi-square statistic over cells with expected count > 0.
double chi_square(std::span<const std::uint64_t> observed, std::span<const double> probabilities);

}  // namespace rilab
