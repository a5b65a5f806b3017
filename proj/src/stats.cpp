#include "rilab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rilab/lattice.hpp"

namespace rilab {

Estimate Estimate::proportion(std::uint64_t successes, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("estimate needs at least one sample");
  Estimate e;
  e.samples = samples;
  e.successes = successes;
  e.seed = seed;
  e.mean = static_cast<double>(successes) / static_cast<double>(samples);
  e.std_error = std::sqrt(e.mean * (1 - e.mean) / static_cast<double>(samples));
  return e;
}

MeanEstimate mean_of(std::span<const double> values) {
  if (values.empty()) throw InputError("mean of an empty sample");
  MeanEstimate m;
  m.samples = values.size();
  const double n = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0;
  for (const double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  return m;
}

double ks_distance(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw InputError("KS distance of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double D = 0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double f = cdf(values[i]);
    D = std::max({D, std::abs(static_cast<double>(i) / n - f), std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return D;
}

double chi_square(std::span<const std::uint64_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size()) throw InputError("chi-square cell counts differ");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  double x2 = 0;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double expected = total * probabilities[c];
    if (expected <= 0) continue;
    const double diff = static_cast<double>(observed[c]) - expected;
    x2 += diff * diff / expected;
  }
  return x2;
}

}  // namespace rilab
