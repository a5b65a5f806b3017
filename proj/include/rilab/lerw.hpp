#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rilab/lattice.hpp"

namespace rilab {

struct ErasedPath {
  std::vector<LatticePoint> vertices;
  std::int64_t generator_length = 0;  // steps of the underlying walk

  friend bool operator==(const ErasedPath&, const ErasedPath&) = default;
};

/// Offline chronological loop erasure. Consecutive points must be at lattice
/// distance 0 or 1; repeats (lazy steps) are dropped.
ErasedPath loop_erase(std::span<const LatticePoint> path);

/// Where online erasure remembers the path position of each site.
enum class SiteIndex {
  hash_store,  // HashStore keyed by the torus projection
  dense,       // flat array over the box, only for small boxes
};

/// Same contract as loop_erase, but erases while scanning, finding revisits
/// through a site index over the box (-half_box, half_box)^d. Every point of
/// the path except the last must lie inside that box.
ErasedPath loop_erase_online(std::span<const LatticePoint> path, std::int64_t side, std::int64_t half_box,
                             SiteIndex index);

struct LerwMetrics {
  std::int64_t generator_length = 0;
  std::int64_t erased_length = 0;  // vertices in the erased path
  std::uint64_t visited = 0;        // distinct sites visited before exit
  std::uint64_t store_probes = 0;   // chain entries scanned; 0 for the dense index

  friend bool operator==(const LerwMetrics&, const LerwMetrics&) = default;
};

struct LerwResult {
  ErasedPath path;
  LerwMetrics metrics;
};

/// Dense arrays are refused above this many cells.
inline constexpr std::uint64_t kMaxDenseCells = std::uint64_t{1} << 25;

/// Loop-erased lazy walk from o to the first exit from (-L, L)^d, erased
/// online. Run `run` draws from the stream (cfg.seed, run, lerw tag).
LerwResult generate_lerw(const WalkConfig& cfg, std::uint64_t run, SiteIndex index = SiteIndex::hash_store);

/// Metrics of runs [0, runs), computed with cfg.workers threads.
std::vector<LerwMetrics> lerw_ensemble(const WalkConfig& cfg, std::uint64_t runs,
                                       SiteIndex index = SiteIndex::hash_store);

}  // namespace rilab
