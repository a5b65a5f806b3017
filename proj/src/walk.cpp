#include "rilab/walk.hpp"

#include <cmath>
#include <limits>

#include "rilab/hash_store.hpp"

namespace rilab {

LatticePoint lazy_step(const LatticePoint& pos, RandomStream& rng) {
  const Move mv = draw_move(pos.dim(), rng);
  LatticePoint next = pos;
  if (mv.axis >= 0) next[mv.axis] += mv.sign;
  return next;
}

TorusTarget::TorusTarget(const PatternSet& pattern, const TorusPoint& translation)
    : side_(translation.side()), d_(translation.dim()), pattern_size_(pattern.size()) {
  if (pattern.dim() != d_) throw DimensionError("pattern and translation differ in dimension");
  masks_.assign(torus_volume(d_, side_), 0);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const TorusPoint site = translate(project(pattern[i], side_), translation);
    masks_[enumerate_index(site)] |= std::uint64_t{1} << i;
  }
}

namespace {

/// Projected position maintained incrementally: one add per move instead of d
/// modular reductions.
class TorusCursor {
public:
  TorusCursor(int d, std::int64_t side) : side_(side) {
    std::uint64_t stride = 1;
    for (int j = 0; j < d; ++j) {
      offset_[j] = side / 2;  // origin
      stride_[j] = stride;
      index_ += static_cast<std::uint64_t>(offset_[j]) * stride;
      stride *= static_cast<std::uint64_t>(side);
    }
  }

  void move(int axis, std::int64_t sign) {
    std::int64_t& o = offset_[axis];
    const std::uint64_t s = stride_[axis];
    o += sign;
    if (o == side_) {
      o = 0;
      index_ -= static_cast<std::uint64_t>(side_ - 1) * s;
    } else if (o < 0) {
      o = side_ - 1;
      index_ += static_cast<std::uint64_t>(side_ - 1) * s;
    } else if (sign > 0) {
      index_ += s;
    } else {
      index_ -= s;
    }
  }

  std::uint64_t index() const { return index_; }

private:
  std::int64_t side_;
  std::array<std::int64_t, kMaxDim> offset_{};
  std::array<std::uint64_t, kMaxDim> stride_{};
  std::uint64_t index_ = 0;
};

}  // namespace

RunSummary run_stopped(const WalkConfig& cfg, const TorusTarget* target, RandomStream& rng,
                       const RunOptions& options) {
  require_valid(cfg);
  if (target && (target->side() != cfg.N || target->dim() != cfg.d)) {
    throw DimensionError("pattern target built for a different torus");
  }
  const int d = cfg.d;
  const std::int64_t L = cfg.L();
  const std::int64_t n = cfg.n();

  RunSummary run;
  LatticePoint pos(d);
  TorusCursor cursor(d, cfg.N);
  std::optional<HashStore> sites;
  if (options.count_distinct) sites.emplace(d, cfg.N, L, 64, ChainPolicy::report);

  auto visit = [&] {
    if (target) run.hit_mask |= target->at(cursor.index());
    if (options.record_trajectory) run.trajectory.push_back(pos);
    if (sites) sites->insert_visit(pos, 0);
  };

  visit();
  bool inside = true;
  for (std::int64_t t = 1;; ++t) {
    const Move mv = draw_move(d, rng);
    if (mv.axis >= 0) {
      pos[mv.axis] += mv.sign;
      cursor.move(mv.axis, mv.sign);
    }
    if (inside) {
      if (mv.axis >= 0 && std::abs(pos[mv.axis]) >= L) {
        inside = false;
        run.exit_time = t;
        run.exit_point = pos;
        if (!options.stretches) break;
      } else if (mv.axis >= 0 || options.record_trajectory) {
        visit();
      }
    }
    if (options.stretches && t % n == 0) {
      run.stretch_endpoints.push_back(pos);
      if (!inside && pos.norm_inf() >= L) {
        run.stretches = t / n;
        break;
      }
    }
    if (t == std::numeric_limits<std::int64_t>::max()) throw Error("walk step counter overflow");
  }
  run.hit_pattern = run.hit_mask != 0;
  if (sites) run.visited_count = static_cast<std::int64_t>(sites->inserted_count());
  return run;
}

RunSummary run_stopped(const WalkConfig& cfg, const PatternSet* pattern, const TorusPoint* translation,
                       RandomStream& rng, const RunOptions& options) {
  if (!pattern) return run_stopped(cfg, static_cast<const TorusTarget*>(nullptr), rng, options);
  const TorusPoint x = translation ? *translation : project(LatticePoint(cfg.d), cfg.N);
  const TorusTarget target(*pattern, x);
  return run_stopped(cfg, &target, rng, options);
}

StretchClassifier StretchClassifier::from_config(const WalkConfig& cfg) {
  const auto n = static_cast<double>(cfg.n());
  if (n < 16) throw InputError("stretch classification needs n >= 16 so that log log n > 0");
  StretchClassifier c;
  c.good_threshold = cfg.C1 * std::sqrt(std::log(static_cast<double>(cfg.N))) * std::sqrt(n);
  c.bad_threshold = 10.0 * std::sqrt(n) * std::log(std::log(n));
  return c;
}

StretchStats stretch_summary(const RunSummary& run, const WalkConfig& cfg) {
  StretchStats s;
  const double good = cfg.C1 * std::sqrt(std::log(static_cast<double>(cfg.N))) * std::sqrt(static_cast<double>(cfg.n()));
  const double bad = cfg.n() >= 16 ? StretchClassifier::from_config(cfg).bad_threshold
                                   : std::numeric_limits<double>::infinity();
  LatticePoint prev(cfg.d);
  for (const auto& y : run.stretch_endpoints) {
    const double disp = (y - prev).norm();
    s.displacements.push_back(disp);
    if (disp > good) ++s.over_good;
    if (disp > bad) ++s.over_bad;
    prev = y;
  }
  s.scaled_exit = static_cast<double>(cfg.n()) * static_cast<double>(run.stretches) /
                  static_cast<double>(cfg.volume());
  return s;
}

}  // namespace rilab
