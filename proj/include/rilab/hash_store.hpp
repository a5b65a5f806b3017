#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rilab/lattice.hpp"

namespace rilab {

/// A bucket grew past the configured chain bound under the strict policy.
class CapacityError : public Error {
public:
  using Error::Error;
};

enum class InsertResult { inserted, already_present };

/// What happens when a chain would exceed its bound.
enum class ChainPolicy { strict, report };

struct OccupancyProfile {
  std::map<std::uint64_t, std::uint64_t> histogram;  // chain length -> bucket count
  std::uint64_t buckets = 0;
  std::uint64_t occupied = 0;
  std::uint64_t inserted = 0;
  double load_factor = 0;
  std::uint64_t max_chain = 0;
  double mean_probes = 0;
};

/// Trajectory store keyed by the torus hash f(x) = enumerate_index(project(x)).
///
/// One bucket per torus site (N^d buckets) with separate chaining, so bucket
/// occupancy is exactly the set of torus sites the stored keys project to.
/// Entries keep the full lattice key; lookups never confuse colliding keys.
/// Single writer; concurrent readers are fine once writing has stopped.
class HashStore {
public:
  using Payload = std::int64_t;

  HashStore(int d, std::int64_t side, std::int64_t half_box, std::uint32_t chain_bound = 64,
            ChainPolicy policy = ChainPolicy::strict);

  /// Throws InputError if x is outside (-L, L)^d, CapacityError if the bucket
  /// chain is full under ChainPolicy::strict.
  InsertResult insert_visit(const LatticePoint& x, Payload payload);

  std::optional<Payload> lookup(const LatticePoint& x) const;

  /// Mutable access to an existing payload, or nullptr.
  Payload* find(const LatticePoint& x);

  /// Stores payload under x, overwriting an existing entry.
  void assign(const LatticePoint& x, Payload payload);

  std::uint64_t bucket_of(const LatticePoint& x) const;
  std::uint64_t bucket_count() const { return heads_.size(); }
  std::uint64_t inserted_count() const { return entries_.size(); }
  std::uint64_t probe_count() const { return probes_; }
  std::uint64_t operation_count() const { return operations_; }
  std::uint64_t chain_overflows() const { return overflows_; }

  /// Bytes held by the bucket heads and entry arena.
  std::uint64_t store_bytes() const;

  OccupancyProfile occupancy_profile() const;

private:
  struct Entry {
    LatticePoint key;
    Payload payload;
    std::int32_t next;
  };

  std::int32_t locate(const LatticePoint& x, std::uint64_t bucket, std::uint32_t& chain) const;

  int d_;
  std::int64_t side_;
  std::int64_t half_box_;
  std::uint32_t chain_bound_;
  ChainPolicy policy_;
  std::vector<std::int32_t> heads_;
  std::vector<std::uint32_t> chain_len_;
  std::vector<Entry> entries_;
  mutable std::uint64_t probes_ = 0;
  mutable std::uint64_t operations_ = 0;
  std::uint64_t overflows_ = 0;
};

}  // namespace rilab
