#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "rilab/hash_store.hpp"
#include "rilab/walk.hpp"

using namespace rilab;

TEST(HashStore, InsertTwiceIsIdempotent) {
  HashStore s(3, 16, 64);
  EXPECT_EQ(s.insert_visit({1, 2, 3}, 7), InsertResult::inserted);
  EXPECT_EQ(s.insert_visit({1, 2, 3}, 9), InsertResult::already_present);
  EXPECT_EQ(s.inserted_count(), 1u);
  EXPECT_EQ(s.lookup({1, 2, 3}), 7);
}

TEST(HashStore, PeriodicKeysCollideButStaySeparate) {
  HashStore s(3, 16, 64);
  const LatticePoint x{1, 2, 3};
  const LatticePoint y = x + LatticePoint::unit(3, 0).scaled(16);
  EXPECT_EQ(s.bucket_of(x), s.bucket_of(y));
  s.insert_visit(x, 1);
  EXPECT_FALSE(s.lookup(y).has_value());
  s.insert_visit(y, 2);
  EXPECT_EQ(s.inserted_count(), 2u);
  EXPECT_EQ(s.lookup(x), 1);
  EXPECT_EQ(s.lookup(y), 2);
  EXPECT_EQ(s.occupancy_profile().max_chain, 2u);
}

TEST(HashStore, LookupOnEmpty) {
  const HashStore s(3, 4, 8);
  EXPECT_FALSE(s.lookup({0, 0, 0}).has_value());
  EXPECT_FALSE(s.lookup({0, 0}).has_value());
}

TEST(HashStore, RejectsKeysOutsideBox) {
  HashStore s(3, 16, 64);
  EXPECT_THROW(s.insert_visit({64, 0, 0}, 0), InputError);
  EXPECT_THROW(s.insert_visit({0, -64, 0}, 0), InputError);
  EXPECT_NO_THROW(s.insert_visit({63, -63, 0}, 0));
  EXPECT_THROW(s.insert_visit({0, 0}, 0), DimensionError);
}

TEST(HashStore, ChainBoundPolicies) {
  HashStore strict(1, 2, 20, 3);
  strict.insert_visit({0}, 0);
  strict.insert_visit({2}, 0);
  strict.insert_visit({4}, 0);
  EXPECT_THROW(strict.insert_visit({6}, 0), CapacityError);
  HashStore report(1, 2, 20, 3, ChainPolicy::report);
  for (std::int64_t k = 0; k < 5; ++k) report.insert_visit({2 * k}, 0);
  EXPECT_EQ(report.chain_overflows(), 2u);
  EXPECT_EQ(report.inserted_count(), 5u);
}

TEST(HashStore, AssignAndFind) {
  HashStore s(2, 4, 10);
  s.assign({1, 1}, 5);
  EXPECT_EQ(s.lookup({1, 1}), 5);
  s.assign({1, 1}, 6);
  EXPECT_EQ(s.lookup({1, 1}), 6);
  EXPECT_EQ(s.inserted_count(), 1u);
  ASSERT_NE(s.find({1, 1}), nullptr);
  *s.find({1, 1}) = 8;
  EXPECT_EQ(s.lookup({1, 1}), 8);
  EXPECT_EQ(s.find({5, 1}), nullptr);
}

TEST(HashStore, ProbesCountScannedChain) {
  HashStore s(1, 2, 20);
  s.insert_visit({0}, 0);
  s.insert_visit({2}, 0);
  s.insert_visit({4}, 0);
  const auto before = s.probe_count();
  EXPECT_FALSE(s.lookup({6}).has_value());
  EXPECT_EQ(s.probe_count() - before, 3u);
}

TEST(OccupancyProfile, EmptyAndSingle) {
  HashStore s(3, 4, 8);
  auto p = s.occupancy_profile();
  EXPECT_EQ(p.histogram.at(0), 64u);
  EXPECT_EQ(p.histogram.size(), 1u);
  EXPECT_EQ(p.load_factor, 0.0);
  s.insert_visit({1, 0, 0}, 0);
  p = s.occupancy_profile();
  EXPECT_EQ(p.histogram.at(0), 63u);
  EXPECT_EQ(p.histogram.at(1), 1u);
  EXPECT_EQ(p.load_factor, 1.0 / 64);
}

TEST(HashStore, BucketPlacementExhaustive) {
  const std::int64_t N = 4;
  const std::int64_t half = 18;  // keys in a 9N-wide cube around o
  HashStore s(3, N, half + 1, 1000);
  std::uint64_t count = 0;
  for (std::int64_t a = -half; a <= half; ++a) {
    for (std::int64_t b = -half; b <= half; ++b) {
      for (std::int64_t c = -half; c <= half; ++c) {
        const LatticePoint x{a, b, c};
        ASSERT_EQ(s.bucket_of(x), enumerate_index(project(x, N)));
        s.insert_visit(x, static_cast<HashStore::Payload>(count++));
      }
    }
  }
  const auto p = s.occupancy_profile();
  std::uint64_t total = 0;
  for (const auto& [k, c] : p.histogram) total += k * c;
  EXPECT_EQ(total, s.inserted_count());
  EXPECT_EQ(p.occupied, 64u);
  for (std::int64_t a = -half; a <= half; a += 5) EXPECT_TRUE(s.lookup({a, -a / 2, 0}).has_value());
}

TEST(HashStore, ExactnessAgainstMap) {
  HashStore s(3, 5, 30, 64, ChainPolicy::report);
  std::map<LatticePoint, HashStore::Payload> ref;
  RandomStream rng(4, 0);
  for (int i = 0; i < 5000; ++i) {
    LatticePoint x(3);
    for (int a = 0; a < 3; ++a) x[a] = static_cast<std::int64_t>(rng.below(59)) - 29;
    if (ref.emplace(x, i).second) {
      EXPECT_EQ(s.insert_visit(x, i), InsertResult::inserted);
    } else {
      EXPECT_EQ(s.insert_visit(x, i), InsertResult::already_present);
    }
  }
  EXPECT_EQ(s.inserted_count(), ref.size());
  for (const auto& [k, v] : ref) EXPECT_EQ(s.lookup(k), v);
  for (int i = 0; i < 2000; ++i) {
    LatticePoint x(3);
    for (int a = 0; a < 3; ++a) x[a] = static_cast<std::int64_t>(rng.below(59)) - 29;
    const auto it = ref.find(x);
    EXPECT_EQ(s.lookup(x).has_value(), it != ref.end());
  }
}

TEST(HashStore, StoppedTrajectoryMemory) {
  WalkConfig cfg;
  RunOptions opts;
  opts.record_trajectory = true;
  opts.stretches = false;
  RandomStream rng(1, 0);
  const auto run = run_stopped(cfg, static_cast<const TorusTarget*>(nullptr), rng, opts);
  HashStore s(3, cfg.N, cfg.L());
  for (const auto& y : run.trajectory) s.insert_visit(y, 0);
  EXPECT_EQ(s.bucket_count(), 4096u);
  EXPECT_LE(s.inserted_count(), static_cast<std::uint64_t>(run.exit_time));
  EXPECT_EQ(ipow(127, 3), 2048383u);
  EXPECT_LT(s.store_bytes(), ipow(127, 3) * sizeof(HashStore::Payload));
}
