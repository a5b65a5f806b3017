#include "rilab/lerw.hpp"

#include <map>

#include "rilab/hash_store.hpp"
#include "rilab/parallel.hpp"
#include "rilab/rng.hpp"
#include "rilab/walk.hpp"

namespace rilab {

namespace {

/// Returns false for a repeat, true for a unit step, and throws on a jump.
bool is_step(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw DimensionError("path mixes dimensions");
  const auto d2 = (b - a).norm2();
  if (d2 > 1) throw InputError("path jumps from " + a.to_string() + " to " + b.to_string());
  return d2 == 1;
}

class HashSites {
public:
  HashSites(int d, std::int64_t side, std::int64_t half_box)
      : store_(d, side, half_box, 64, ChainPolicy::report) {}

  const std::int64_t* get(const LatticePoint& x) { return store_.find(x); }

  void set(const LatticePoint& x, std::int64_t pos) {
    if (std::int64_t* slot = store_.find(x)) {
      *slot = pos;
    } else {
      store_.insert_visit(x, pos);
    }
  }

  std::uint64_t visited() const { return store_.inserted_count(); }
  std::uint64_t probes() const { return store_.probe_count(); }

private:
  HashStore store_;
};

class DenseSites {
public:
  DenseSites(int d, std::int64_t half_box) : d_(d), half_(half_box), width_(2 * half_box - 1) {
    const std::uint64_t cells = ipow(static_cast<std::uint64_t>(width_), d);
    if (cells > kMaxDenseCells) {
      throw InputError("dense site index needs " + std::to_string(cells) + " cells, above the " +
                       std::to_string(kMaxDenseCells) + " limit");
    }
    cells_.assign(cells, -1);
  }

  const std::int64_t* get(const LatticePoint& x) {
    scratch_ = cells_[offset(x)];
    return scratch_ < 0 ? nullptr : &scratch_;
  }

  void set(const LatticePoint& x, std::int64_t pos) {
    std::int32_t& c = cells_[offset(x)];
    if (c < 0) ++visited_;
    c = static_cast<std::int32_t>(pos);
  }

  std::uint64_t visited() const { return visited_; }
  std::uint64_t probes() const { return 0; }

private:
  std::size_t offset(const LatticePoint& x) const {
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int j = 0; j < d_; ++j) {
      idx += static_cast<std::size_t>(x[j] + half_ - 1) * stride;
      stride *= static_cast<std::size_t>(width_);
    }
    return idx;
  }

  int d_;
  std::int64_t half_;
  std::int64_t width_;
  std::vector<std::int32_t> cells_;
  std::int64_t scratch_ = 0;
  std::uint64_t visited_ = 0;
};

/// Online erasure with lazily invalidated positions: a stored position is
/// trusted only if the current path still holds the same site there. Erased
/// vertices are never removed from the index.
template <class Sites>
class Eraser {
public:
  Eraser(Sites& sites, const LatticePoint& start, std::int64_t half_box) : sites_(sites), half_(half_box) {
    if (start.norm_inf() >= half_) throw InputError("path starts outside the box");
    path_.push_back(start);
    sites_.set(start, 0);
  }

  /// Feeds the next point; returns false once a point outside the box ended the path.
  bool push(const LatticePoint& p) {
    if (done_) throw InputError("path continues after leaving the box");
    if (!is_step(path_.back(), p)) return true;
    if (p.norm_inf() >= half_) {
      path_.push_back(p);
      done_ = true;
      return false;
    }
    const std::int64_t* slot = sites_.get(p);
    if (slot) {
      const auto i = static_cast<std::size_t>(*slot);
      if (i < path_.size() && path_[i] == p) {
        path_.resize(i + 1);
        return true;
      }
    }
    path_.push_back(p);
    sites_.set(p, static_cast<std::int64_t>(path_.size() - 1));
    return true;
  }

  std::vector<LatticePoint> take() { return std::move(path_); }

private:
  Sites& sites_;
  std::int64_t half_;
  std::vector<LatticePoint> path_;
  bool done_ = false;
};

template <class Sites>
ErasedPath erase_with(Sites& sites, std::span<const LatticePoint> path, std::int64_t half_box) {
  Eraser<Sites> eraser(sites, path.front(), half_box);
  for (std::size_t t = 1; t < path.size(); ++t) eraser.push(path[t]);
  return {eraser.take(), static_cast<std::int64_t>(path.size() - 1)};
}

template <class Sites>
LerwResult walk_and_erase(const WalkConfig& cfg, Sites& sites, RandomStream& rng) {
  const std::int64_t L = cfg.L();
  LatticePoint pos(cfg.d);
  Eraser<Sites> eraser(sites, pos, L);
  std::int64_t t = 0;
  for (bool inside = true; inside;) {
    const Move mv = draw_move(cfg.d, rng);
    ++t;
    if (mv.axis < 0) continue;
    pos[mv.axis] += mv.sign;
    inside = eraser.push(pos);
  }
  LerwResult r;
  r.path = {eraser.take(), t};
  r.metrics.generator_length = t;
  r.metrics.erased_length = static_cast<std::int64_t>(r.path.vertices.size());
  r.metrics.visited = sites.visited();
  r.metrics.store_probes = sites.probes();
  return r;
}

}  // namespace

ErasedPath loop_erase(std::span<const LatticePoint> path) {
  if (path.empty()) throw InputError("cannot erase an empty path");
  ErasedPath out;
  out.generator_length = static_cast<std::int64_t>(path.size() - 1);
  std::map<LatticePoint, std::size_t> where;
  out.vertices.push_back(path.front());
  where[path.front()] = 0;
  for (std::size_t t = 1; t < path.size(); ++t) {
    const LatticePoint& p = path[t];
    if (!is_step(out.vertices.back(), p)) continue;
    const auto it = where.find(p);
    if (it != where.end()) {
      const std::size_t keep = it->second + 1;
      for (std::size_t k = keep; k < out.vertices.size(); ++k) where.erase(out.vertices[k]);
      out.vertices.resize(keep);
    } else {
      where[p] = out.vertices.size();
      out.vertices.push_back(p);
    }
  }
  return out;
}

ErasedPath loop_erase_online(std::span<const LatticePoint> path, std::int64_t side, std::int64_t half_box,
                             SiteIndex index) {
  if (path.empty()) throw InputError("cannot erase an empty path");
  const int d = path.front().dim();
  if (index == SiteIndex::dense) {
    DenseSites sites(d, half_box);
    return erase_with(sites, path, half_box);
  }
  HashSites sites(d, side, half_box);
  return erase_with(sites, path, half_box);
}

LerwResult generate_lerw(const WalkConfig& cfg, std::uint64_t run, SiteIndex index) {
  require_valid(cfg);
  RandomStream rng(cfg.seed, run, stream_tag::lerw);
  if (index == SiteIndex::dense) {
    DenseSites sites(cfg.d, cfg.L());
    return walk_and_erase(cfg, sites, rng);
  }
  HashSites sites(cfg.d, cfg.N, cfg.L());
  return walk_and_erase(cfg, sites, rng);
}

std::vector<LerwMetrics> lerw_ensemble(const WalkConfig& cfg, std::uint64_t runs, SiteIndex index) {
  if (runs == 0) throw InputError("runs must be positive");
  return map_runs(runs, cfg.workers, [&](std::uint64_t i) { return generate_lerw(cfg, i, index).metrics; });
}

}  // namespace rilab
