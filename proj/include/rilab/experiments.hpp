#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rilab/lattice.hpp"
#include "rilab/pattern.hpp"
#include "rilab/stats.hpp"
#include "rilab/walk.hpp"

namespace rilab {

// Every experiment is a pure function of (cfg, arguments): run i draws from the
// stream (cfg.seed, i), and cfg.workers only changes who computes which run.
// The walk-based experiments share the walk stream tag, so they see the same
// trajectories for the same seed.

/// All coordinates floor(N/2), projected: the torus point farthest from o.
TorusPoint far_corner(const WalkConfig& cfg);

/// Smallest torus distance from o to the translated pattern ball tau_x phi(B_R).
double separation_distance(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x);

/// Throws InputError unless tau_x phi(B_R(o)) and phi(B_g(o)) are disjoint,
/// g = floor(N^zeta).
void check_separation(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x);

/// Hit masks of the projected pre-exit trajectory on tau_x phi(K), one per run.
std::vector<std::uint64_t> hit_masks(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x,
                                     std::uint64_t runs);

/// Fraction of runs whose projected trajectory avoids tau_x phi(K) before T.
Estimate estimate_lhs(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x, std::uint64_t runs);

struct VerifyReport {
  Estimate lhs;
  double rhs = 0;
  double gap = 0;
  double z = 0;
  double bias_tol = 0.05;
  bool within_bias = false;  // |gap| <= bias_tol
  bool within_noise = false;  // |z| <= 3
};

/// z uses max(std_error, 1/runs) so it stays finite when lhs is 0 or 1.
VerifyReport verify_theorem(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x, std::uint64_t runs,
                            double bias_tol = 0.05);

/// CDF of 2 d A sigma_1, the limit law of n S / N^d.
double scaled_exit_cdf(double s, int d, double A);

struct KsReport {
  double D = 0;            // n S / N^d against 2 d A sigma_1
  double D_exit_time = 0;  // T / N^d against the same law
  std::vector<double> scaled_stretches;
  std::vector<double> scaled_exit_times;
  double predicted_mean = 0;
};

KsReport ks_exit_time(const WalkConfig& cfg, std::uint64_t runs);

struct MixingReport {
  std::int64_t t = 0;
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> histogram;  // indexed by enumerate_index
  double max_scaled = 0;                 // N^d max_x P[phi(Y_t) = x]
  double min_scaled = 0;
};

/// Throws InputError if t < n or samples < 100 N^d.
MixingReport mixing_check(const WalkConfig& cfg, std::int64_t t, std::uint64_t samples);

struct StretchReport {
  StretchClassifier thresholds;
  std::int64_t n = 0;
  std::uint64_t runs = 0;
  std::uint64_t stretches = 0;
  std::uint64_t over_good = 0;
  std::uint64_t over_bad = 0;
  double frac_over_good = 0;
  double frac_over_bad = 0;
  double mean_S = 0;
  double frac_outside_window = 0;  // S n / N^d outside [1/sqrt(log log n), log N]
  double frac_above_log_N = 0;     // S n / N^d > log N
};

StretchReport bad_stretch_stats(const WalkConfig& cfg, std::uint64_t runs);

inline constexpr std::size_t kMaxEmpiricalPoints = 4;

/// Empirical law of the visited subset of K, keyed by bit mask over K's points.
/// Every one of the 2^|K| masks is present; the means sum to exactly 1.
std::map<std::uint64_t, Estimate> empirical_marginals(const WalkConfig& cfg, const PatternSet& K,
                                                      const TorusPoint& x, std::uint64_t runs);

struct HashBenchRow {
  std::int64_t N = 0;
  int d = 0;
  std::int64_t m = 0;
  std::int64_t L = 0;
  std::uint64_t inserted = 0;
  std::uint64_t occupied = 0;
  double load_factor = 0;
  std::uint64_t max_chain = 0;
  double mean_probes = 0;
  std::uint64_t dense_bytes_equiv = 0;
  std::uint64_t store_bytes = 0;
};

struct HashBenchReport {
  std::vector<HashBenchRow> rows;
  double memory_ratio = 0;  // (2L-1)^d / N^d
  double mean_occupied_fraction = 0;
  double mean_load_factor = 0;
  std::uint64_t max_chain = 0;
};

/// Stores each pre-exit trajectory in a HashStore and profiles its occupancy.
HashBenchReport hash_bench(const WalkConfig& cfg, std::uint64_t runs);

double dense_memory_ratio(const WalkConfig& cfg);

}  // namespace rilab
