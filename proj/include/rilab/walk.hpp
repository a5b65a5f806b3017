#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rilab/lattice.hpp"
#include "rilab/pattern.hpp"
#include "rilab/rng.hpp"

namespace rilab {

/// Lazy simple random walk kernel: hold with probability 1/2, otherwise move
/// to one of the 2d neighbours uniformly.
struct StepLaw {
  int d = 3;
  double stay_prob() const { return 0.5; }
  double neighbor_prob() const { return 1.0 / (4.0 * d); }
  /// Per-coordinate variance of one step.
  double step_variance() const { return 1.0 / (2.0 * d); }
};

/// One kernel draw. axis < 0 means the walk holds.
struct Move {
  int axis = -1;
  std::int64_t sign = 0;
};

/// Consumes exactly one uniform: [0, 1/2) holds, the rest is split into 2d
/// equal intervals ordered (+e0, -e0, +e1, -e1, ...).
inline Move draw_move(int d, RandomStream& rng) {
  const double u = rng.uniform();
  if (u < 0.5) return {};
  int k = static_cast<int>((u - 0.5) * (4.0 * d));
  if (k >= 2 * d) k = 2 * d - 1;
  return {k >> 1, (k & 1) ? std::int64_t{-1} : std::int64_t{1}};
}

LatticePoint lazy_step(const LatticePoint& pos, RandomStream& rng);

/// Bit mask per torus site: bit i set iff the site equals the translated
/// projection of pattern point i.
class TorusTarget {
public:
  TorusTarget(const PatternSet& pattern, const TorusPoint& translation);

  std::uint64_t at(std::uint64_t index) const { return masks_[index]; }
  std::int64_t side() const { return side_; }
  int dim() const { return d_; }
  std::size_t pattern_size() const { return pattern_size_; }

private:
  std::vector<std::uint64_t> masks_;
  std::int64_t side_;
  int d_;
  std::size_t pattern_size_;
};

struct RunOptions {
  /// Continue past T to find S and the stretch endpoints.
  bool stretches = true;
  /// Keep Y_0, ..., Y_{T-1}.
  bool record_trajectory = false;
  /// Count distinct sites visited before T (via a HashStore).
  bool count_distinct = false;
};

struct RunSummary {
  std::int64_t exit_time = 0;  // T
  LatticePoint exit_point;     // Y_T
  std::int64_t stretches = 0;  // S; 0 when RunOptions::stretches is off
  std::vector<LatticePoint> stretch_endpoints;  // Y_n, Y_2n, ..., Y_Sn
  bool hit_pattern = false;
  std::uint64_t hit_mask = 0;  // pattern points whose translated projection was visited before T
  std::optional<std::int64_t> visited_count;
  std::vector<LatticePoint> trajectory;
};

/// Lazy walk from the origin stopped on leaving (-L, L)^d.
///
/// Pattern hits are recorded for 0 <= t < T only. With stretches enabled the
/// walk then continues until the first multiple of n at which it is outside the
/// box, which defines S (T <= S n).
RunSummary run_stopped(const WalkConfig& cfg, const TorusTarget* target, RandomStream& rng,
                       const RunOptions& options = {});

RunSummary run_stopped(const WalkConfig& cfg, const PatternSet* pattern, const TorusPoint* translation,
                       RandomStream& rng, const RunOptions& options = {});

/// Displacement thresholds separating good and bad stretches.
struct StretchClassifier {
  double good_threshold = 0;  // C1 sqrt(log N) sqrt(n)
  double bad_threshold = 0;   // 10 sqrt(n) log log n

  /// Throws InputError when n < 16 (log log n must be positive).
  static StretchClassifier from_config(const WalkConfig& cfg);
};

struct StretchStats {
  std::vector<double> displacements;
  std::int64_t over_good = 0;
  std::int64_t over_bad = 0;
  double scaled_exit = 0;  // n S / N^d
};

StretchStats stretch_summary(const RunSummary& run, const WalkConfig& cfg);

}  // namespace rilab
