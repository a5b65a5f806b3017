#include "rilab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rilab/brownian.hpp"
#include "rilab/hash_store.hpp"
#include "rilab/interlace.hpp"
#include "rilab/parallel.hpp"

namespace rilab {

namespace {

void check_runs(std::uint64_t runs) {
  if (runs == 0) throw InputError("runs must be positive");
}

void check_pattern(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x) {
  if (K.dim() != cfg.d || x.dim() != cfg.d) throw DimensionError("pattern/translation dimension differs from d");
  if (x.side() != cfg.N) throw DimensionError("translation lives on a torus of a different side");
}

RandomStream walk_stream(const WalkConfig& cfg, std::uint64_t run) {
  return RandomStream(cfg.seed, run, stream_tag::walk);
}

}  // namespace

TorusPoint far_corner(const WalkConfig& cfg) {
  LatticePoint c(cfg.d);
  for (int j = 0; j < cfg.d; ++j) c[j] = cfg.N / 2;
  return project(c, cfg.N);
}

double separation_distance(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x) {
  check_pattern(cfg, K, x);
  const auto R = static_cast<std::int64_t>(std::ceil(K.radius()));
  double best = std::numeric_limits<double>::infinity();
  // Odometer over [-R, R]^d, keeping the points of the open ball B_R.
  LatticePoint y(cfg.d);
  for (int j = 0; j < cfg.d; ++j) y[j] = -R;
  for (;;) {
    if (y.norm() < K.radius()) {
      // Coordinates in [-N/2, N/2) are the shortest lift of a torus point.
      best = std::min(best, translate(project(y, cfg.N), x).lattice().norm());
    }
    int j = 0;
    while (j < cfg.d && y[j] == R) y[j++] = -R;
    if (j == cfg.d) break;
    ++y[j];
  }
  return best;
}

void check_separation(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x) {
  const auto g = cfg.separation();
  const double dist = separation_distance(cfg, K, x);
  if (dist < static_cast<double>(g)) {
    throw InputError("separation hypothesis violated: tau_x phi(B_R) must avoid phi(B_g) with g = floor(N^zeta) = " +
                     std::to_string(g) + ", but the translated pattern ball reaches distance " +
                     std::to_string(dist) + " from o");
  }
}

std::vector<std::uint64_t> hit_masks(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x,
                                     std::uint64_t runs) {
  require_valid(cfg);
  check_runs(runs);
  check_separation(cfg, K, x);
  const TorusTarget target(K, x);
  RunOptions opts;
  opts.stretches = false;
  return map_runs(runs, cfg.workers, [&](std::uint64_t i) {
    RandomStream rng = walk_stream(cfg, i);
    return run_stopped(cfg, &target, rng, opts).hit_mask;
  });
}

Estimate estimate_lhs(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x, std::uint64_t runs) {
  const auto masks = hit_masks(cfg, K, x, runs);
  const auto avoided = static_cast<std::uint64_t>(std::count(masks.begin(), masks.end(), std::uint64_t{0}));
  return Estimate::proportion(avoided, runs, cfg.seed);
}

VerifyReport verify_theorem(const WalkConfig& cfg, const PatternSet& K, const TorusPoint& x, std::uint64_t runs,
                            double bias_tol) {
  check_runs(runs);
  VerifyReport r;
  r.lhs = estimate_lhs(cfg, K, x, runs);
  r.rhs = rhs_theorem(K, MixtureSpec{cfg.d, cfg.A()});
  r.gap = r.lhs.mean - r.rhs;
  r.z = r.gap / std::max(r.lhs.std_error, 1.0 / static_cast<double>(runs));
  r.bias_tol = bias_tol;
  r.within_bias = std::abs(r.gap) <= bias_tol;
  r.within_noise = std::abs(r.z) <= 3.0;
  return r;
}

double scaled_exit_cdf(double s, int d, double A) {
  if (s <= 0) return 0.0;
  return 1.0 - survival_cube(s / (2.0 * d * A), d);
}

KsReport ks_exit_time(const WalkConfig& cfg, std::uint64_t runs) {
  require_valid(cfg);
  check_runs(runs);
  struct Sample {
    double stretches;
    double exit;
  };
  const double n = static_cast<double>(cfg.n());
  const double vol = static_cast<double>(cfg.volume());
  const auto samples = map_runs(runs, cfg.workers, [&](std::uint64_t i) {
    RandomStream rng = walk_stream(cfg, i);
    const RunSummary run = run_stopped(cfg, static_cast<const TorusTarget*>(nullptr), rng);
    return Sample{n * static_cast<double>(run.stretches) / vol, static_cast<double>(run.exit_time) / vol};
  });
  KsReport r;
  for (const auto& s : samples) {
    r.scaled_stretches.push_back(s.stretches);
    r.scaled_exit_times.push_back(s.exit);
  }
  const int d = cfg.d;
  const double A = cfg.A();
  auto cdf = [d, A](double s) { return scaled_exit_cdf(s, d, A); };
  r.D = ks_distance(r.scaled_stretches, cdf);
  r.D_exit_time = ks_distance(r.scaled_exit_times, cdf);
  r.predicted_mean = 2.0 * d * A * mean_sigma1(d);
  return r;
}

MixingReport mixing_check(const WalkConfig& cfg, std::int64_t t, std::uint64_t samples) {
  require_valid(cfg);
  if (t < cfg.n()) throw InputError("mixing check needs t >= n = " + std::to_string(cfg.n()));
  const std::uint64_t vol = cfg.volume();
  if (samples < 100 * vol) {
    throw InputError("mixing check needs samples >= 100 N^d = " + std::to_string(100 * vol));
  }
  MixingReport r;
  r.t = t;
  r.samples = samples;
  const int d = cfg.d;
  r.histogram = histogram_runs(samples, cfg.workers, vol, [&](std::uint64_t i) {
    RandomStream rng(cfg.seed, i, stream_tag::mixing);
    LatticePoint pos(d);
    for (std::int64_t s = 0; s < t; ++s) {
      const Move mv = draw_move(d, rng);
      if (mv.axis >= 0) pos[mv.axis] += mv.sign;
    }
    return static_cast<std::size_t>(enumerate_index(project(pos, cfg.N)));
  });
  const auto [lo, hi] = std::minmax_element(r.histogram.begin(), r.histogram.end());
  const double scale = static_cast<double>(vol) / static_cast<double>(samples);
  r.max_scaled = static_cast<double>(*hi) * scale;
  r.min_scaled = static_cast<double>(*lo) * scale;
  return r;
}

StretchReport bad_stretch_stats(const WalkConfig& cfg, std::uint64_t runs) {
  require_valid(cfg);
  check_runs(runs);
  StretchReport r;
  r.thresholds = StretchClassifier::from_config(cfg);
  r.n = cfg.n();
  r.runs = runs;
  struct PerRun {
    std::int64_t S;
    std::int64_t over_good;
    std::int64_t over_bad;
    std::size_t count;
    double scaled;
  };
  const auto per_run = map_runs(runs, cfg.workers, [&](std::uint64_t i) {
    RandomStream rng = walk_stream(cfg, i);
    const RunSummary run = run_stopped(cfg, static_cast<const TorusTarget*>(nullptr), rng);
    const StretchStats s = stretch_summary(run, cfg);
    return PerRun{run.stretches, s.over_good, s.over_bad, s.displacements.size(), s.scaled_exit};
  });
  const double n = static_cast<double>(r.n);
  const double lower = 1.0 / std::sqrt(std::log(std::log(n)));
  const double upper = std::log(static_cast<double>(cfg.N));
  std::uint64_t outside = 0;
  std::uint64_t above = 0;
  double sum_S = 0;
  for (const auto& p : per_run) {
    r.stretches += p.count;
    r.over_good += static_cast<std::uint64_t>(p.over_good);
    r.over_bad += static_cast<std::uint64_t>(p.over_bad);
    sum_S += static_cast<double>(p.S);
    if (p.scaled < lower || p.scaled > upper) ++outside;
    if (p.scaled > upper) ++above;
  }
  const double total = static_cast<double>(std::max<std::uint64_t>(r.stretches, 1));
  r.frac_over_good = static_cast<double>(r.over_good) / total;
  r.frac_over_bad = static_cast<double>(r.over_bad) / total;
  r.mean_S = sum_S / static_cast<double>(runs);
  r.frac_outside_window = static_cast<double>(outside) / static_cast<double>(runs);
  r.frac_above_log_N = static_cast<double>(above) / static_cast<double>(runs);
  return r;
}

std::map<std::uint64_t, Estimate> empirical_marginals(const WalkConfig& cfg, const PatternSet& K,
                                                      const TorusPoint& x, std::uint64_t runs) {
  if (K.size() > kMaxEmpiricalPoints) {
    throw InputError("empirical marginals limited to " + std::to_string(kMaxEmpiricalPoints) + " pattern points");
  }
  const auto masks = hit_masks(cfg, K, x, runs);
  std::vector<std::uint64_t> counts(std::size_t{1} << K.size(), 0);
  for (const auto m : masks) ++counts[m];
  std::map<std::uint64_t, Estimate> out;
  for (std::uint64_t B = 0; B < counts.size(); ++B) out[B] = Estimate::proportion(counts[B], runs, cfg.seed);
  return out;
}

double dense_memory_ratio(const WalkConfig& cfg) {
  const double side = static_cast<double>(2 * cfg.L() - 1);
  return std::pow(side, cfg.d) / static_cast<double>(cfg.volume());
}

HashBenchReport hash_bench(const WalkConfig& cfg, std::uint64_t runs) {
  require_valid(cfg);
  check_runs(runs);
  const auto dense_cells = ipow(static_cast<std::uint64_t>(2 * cfg.L() - 1), cfg.d);
  RunOptions opts;
  opts.stretches = false;
  opts.record_trajectory = true;
  HashBenchReport r;
  r.rows = map_runs(runs, cfg.workers, [&](std::uint64_t i) {
    RandomStream rng = walk_stream(cfg, i);
    const RunSummary run = run_stopped(cfg, static_cast<const TorusTarget*>(nullptr), rng, opts);
    HashStore store(cfg.d, cfg.N, cfg.L(), 64, ChainPolicy::report);
    for (std::size_t t = 0; t < run.trajectory.size(); ++t) {
      store.insert_visit(run.trajectory[t], static_cast<HashStore::Payload>(t));
    }
    const OccupancyProfile prof = store.occupancy_profile();
    HashBenchRow row;
    row.N = cfg.N;
    row.d = cfg.d;
    row.m = cfg.m;
    row.L = cfg.L();
    row.inserted = prof.inserted;
    row.occupied = prof.occupied;
    row.load_factor = prof.load_factor;
    row.max_chain = prof.max_chain;
    row.mean_probes = prof.mean_probes;
    row.dense_bytes_equiv = dense_cells * sizeof(HashStore::Payload);
    row.store_bytes = store.store_bytes();
    return row;
  });
  const double vol = static_cast<double>(cfg.volume());
  for (const auto& row : r.rows) {
    r.mean_occupied_fraction += static_cast<double>(row.occupied) / vol;
    r.mean_load_factor += row.load_factor;
    r.max_chain = std::max(r.max_chain, row.max_chain);
  }
  r.mean_occupied_fraction /= static_cast<double>(runs);
  r.mean_load_factor /= static_cast<double>(runs);
  r.memory_ratio = dense_memory_ratio(cfg);
  return r;
}

}  // namespace rilab
