#include "rilab/hash_store.hpp"

#include <algorithm>
#include <limits>

namespace rilab {

HashStore::HashStore(int d, std::int64_t side, std::int64_t half_box, std::uint32_t chain_bound, ChainPolicy policy)
    : d_(d), side_(side), half_box_(half_box), chain_bound_(chain_bound), policy_(policy) {
  if (d < 1 || d > kMaxDim) throw DimensionError("hash store dimension out of range");
  if (half_box < 1) throw InputError("hash store half box side must be positive");
  if (chain_bound == 0) throw InputError("chain bound must be positive");
  const std::uint64_t buckets = torus_volume(d, side);
  if (buckets > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
    throw InputError("hash store limited to 2^31 buckets");
  }
  heads_.assign(buckets, -1);
  chain_len_.assign(buckets, 0);
}

std::uint64_t HashStore::bucket_of(const LatticePoint& x) const {
  std::uint64_t idx = 0;
  std::uint64_t stride = 1;
  const std::int64_t half = side_ / 2;
  for (int j = 0; j < d_; ++j) {
    idx += static_cast<std::uint64_t>(wrap_coordinate(x[j], side_) + half) * stride;
    stride *= static_cast<std::uint64_t>(side_);
  }
  return idx;
}

std::int32_t HashStore::locate(const LatticePoint& x, std::uint64_t bucket, std::uint32_t& chain) const {
  ++operations_;
  chain = 0;
  for (std::int32_t e = heads_[bucket]; e >= 0; e = entries_[static_cast<std::size_t>(e)].next) {
    ++chain;
    ++probes_;
    if (entries_[static_cast<std::size_t>(e)].key == x) return e;
  }
  return -1;
}

InsertResult HashStore::insert_visit(const LatticePoint& x, Payload payload) {
  if (x.dim() != d_) throw DimensionError("hash store key has wrong dimension");
  if (x.norm_inf() >= half_box_) throw InputError("hash store key " + x.to_string() + " outside (-L, L)^d");
  const std::uint64_t b = bucket_of(x);
  std::uint32_t chain = 0;
  if (locate(x, b, chain) >= 0) return InsertResult::already_present;
  if (chain_len_[b] >= chain_bound_) {
    if (policy_ == ChainPolicy::strict) {
      throw CapacityError("bucket " + std::to_string(b) + " exceeds chain bound " + std::to_string(chain_bound_));
    }
    ++overflows_;
  }
  if (entries_.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw CapacityError("hash store entry arena is full");
  }
  entries_.push_back({x, payload, heads_[b]});
  heads_[b] = static_cast<std::int32_t>(entries_.size() - 1);
  ++chain_len_[b];
  return InsertResult::inserted;
}

std::optional<HashStore::Payload> HashStore::lookup(const LatticePoint& x) const {
  if (x.dim() != d_) return std::nullopt;
  std::uint32_t chain = 0;
  const std::int32_t e = locate(x, bucket_of(x), chain);
  if (e < 0) return std::nullopt;
  return entries_[static_cast<std::size_t>(e)].payload;
}

HashStore::Payload* HashStore::find(const LatticePoint& x) {
  if (x.dim() != d_) return nullptr;
  std::uint32_t chain = 0;
  const std::int32_t e = locate(x, bucket_of(x), chain);
  return e < 0 ? nullptr : &entries_[static_cast<std::size_t>(e)].payload;
}

void HashStore::assign(const LatticePoint& x, Payload payload) {
  if (Payload* p = find(x)) {
    *p = payload;
    return;
  }
  insert_visit(x, payload);
}

std::uint64_t HashStore::store_bytes() const {
  return heads_.size() * (sizeof(std::int32_t) + sizeof(std::uint32_t)) + entries_.capacity() * sizeof(Entry);
}

OccupancyProfile HashStore::occupancy_profile() const {
  OccupancyProfile p;
  p.buckets = heads_.size();
  p.inserted = entries_.size();
  for (const std::uint32_t len : chain_len_) {
    ++p.histogram[len];
    if (len > 0) ++p.occupied;
    p.max_chain = std::max<std::uint64_t>(p.max_chain, len);
  }
  p.load_factor = static_cast<double>(p.occupied) / static_cast<double>(p.buckets);
  p.mean_probes = operations_ ? static_cast<double>(probes_) / static_cast<double>(operations_) : 0.0;
  return p;
}

}  // namespace rilab
