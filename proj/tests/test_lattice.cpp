#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rilab/lattice.hpp"

using namespace rilab;

namespace {

bool has_violation(const WalkConfig& cfg, const std::string& name) {
  const auto v = validate_params(cfg);
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.name == name; });
}

// Brute-force representative: step through the residue class until it lands in [-N/2, N/2).
std::int64_t slow_wrap(std::int64_t v, std::int64_t N) {
  while (2 * v >= N) v -= N;
  while (2 * v < -N) v += N;
  return v;
}

}  // namespace

TEST(Project, Examples) {
  EXPECT_EQ(project({2, -3, 5}, 4), TorusPoint({-2, 1, 1}, 4));
  EXPECT_EQ(project({3, -3, 7}, 5), TorusPoint({-2, 2, 2}, 5));
  for (int d = 1; d <= 5; ++d) {
    EXPECT_EQ(project(LatticePoint::unit(d, 0).scaled(7), 7), project(LatticePoint(d), 7));
  }
}

TEST(Project, RangeAndResidueExhaustive) {
  for (std::int64_t N = 1; N <= 8; ++N) {
    for (std::int64_t v = -3 * N; v <= 3 * N; ++v) {
      const std::int64_t w = wrap_coordinate(v, N);
      EXPECT_EQ(w, slow_wrap(v, N)) << "N=" << N << " v=" << v;
      EXPECT_LE(-N, 2 * w);
      EXPECT_LT(2 * w, N);
      EXPECT_EQ(((v - w) % N + N) % N, 0);
    }
  }
}

TEST(Project, Periodic) {
  const LatticePoint x{5, -11, 2};
  for (int axis = 0; axis < 3; ++axis) {
    EXPECT_EQ(project(x + LatticePoint::unit(3, axis).scaled(6), 6), project(x, 6));
    EXPECT_EQ(project(x - LatticePoint::unit(3, axis).scaled(18), 6), project(x, 6));
  }
}

TEST(Project, RejectsBadSide) { EXPECT_THROW(project({1, 2, 3}, 0), InputError); }

TEST(TorusPoint, RejectsOutOfRange) {
  EXPECT_THROW(TorusPoint({2, 0, 0}, 4), InputError);
  EXPECT_NO_THROW(TorusPoint({-2, 1, 1}, 4));
  EXPECT_THROW(TorusPoint({-3, 0}, 5), InputError);
  EXPECT_NO_THROW(TorusPoint({2, -2}, 5));
}

TEST(Translate, Examples) {
  EXPECT_EQ(translate(TorusPoint({1, 1, 1}, 4), TorusPoint({0, 0, 0}, 4)), TorusPoint({1, 1, 1}, 4));
  EXPECT_EQ(translate(TorusPoint({1, 0, 0}, 4), TorusPoint({1, 0, 0}, 4)), TorusPoint({-2, 0, 0}, 4));
  EXPECT_EQ(translate(TorusPoint({2, 2, 0}, 5), TorusPoint({2, 0, 0}, 5)), TorusPoint({-1, 2, 0}, 5));
}

TEST(Translate, MismatchIsDimensionError) {
  EXPECT_THROW(translate(TorusPoint({0, 0, 0}, 4), TorusPoint({0, 0, 0}, 5)), DimensionError);
  EXPECT_THROW(translate(TorusPoint({0, 0, 0}, 4), TorusPoint({0, 0}, 4)), DimensionError);
}

TEST(Translate, GroupLaws) {
  const std::int64_t N = 5;
  const int d = 2;
  for (std::uint64_t a = 0; a < 25; ++a) {
    const TorusPoint x = torus_point_at(a, d, N);
    std::set<std::uint64_t> image;
    for (std::uint64_t b = 0; b < 25; ++b) {
      const TorusPoint y = torus_point_at(b, d, N);
      const TorusPoint t = translate(y, x);
      image.insert(enumerate_index(t));
      EXPECT_EQ(translate(t, negate(x)), y);
      for (std::uint64_t c = 0; c < 25; c += 7) {
        const TorusPoint z = torus_point_at(c, d, N);
        EXPECT_EQ(translate(t, z), translate(y, project(x.lattice() + z.lattice(), N)));
      }
    }
    EXPECT_EQ(image.size(), 25u);
  }
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_index(TorusPoint({-2, -2, -2}, 4)), 0u);
  EXPECT_EQ(enumerate_index(TorusPoint({1, 1, 1}, 4)), 63u);
  EXPECT_EQ(enumerate_index(TorusPoint({0, 0}, 5)), 12u);
}

TEST(Enumerate, BijectionSmallTori) {
  for (int d = 1; d <= 3; ++d) {
    for (std::int64_t N = 1; N <= 6; ++N) {
      const std::uint64_t vol = torus_volume(d, N);
      std::vector<bool> seen(vol, false);
      for (std::uint64_t i = 0; i < vol; ++i) {
        const TorusPoint y = torus_point_at(i, d, N);
        const std::uint64_t j = enumerate_index(y);
        ASSERT_LT(j, vol);
        EXPECT_FALSE(seen[j]);
        seen[j] = true;
        EXPECT_EQ(j, i);
      }
    }
  }
}

TEST(TorusVolume, OverflowGuard) {
  EXPECT_EQ(torus_volume(3, 16), 4096u);
  EXPECT_THROW(torus_volume(8, std::int64_t{1} << 20), InputError);
}

TEST(LatticePoint, Arithmetic) {
  const LatticePoint a{1, -2, 3};
  const LatticePoint b{0, 4, -1};
  EXPECT_EQ(a + b, LatticePoint({1, 2, 2}));
  EXPECT_EQ(a - b, LatticePoint({1, -6, 4}));
  EXPECT_EQ(-a, LatticePoint({-1, 2, -3}));
  EXPECT_EQ(a.norm2(), 14);
  EXPECT_EQ(a.norm_inf(), 3);
  EXPECT_EQ(a.to_string(), "(1,-2,3)");
  EXPECT_EQ(LatticePoint::unit(4, 2, -1), LatticePoint({0, 0, -1, 0}));
}

TEST(WalkConfig, DefaultIsValid) {
  const WalkConfig cfg;
  EXPECT_TRUE(validate_params(cfg).empty());
  EXPECT_EQ(cfg.L(), 64);
  EXPECT_EQ(cfg.A(), 1.0);
  EXPECT_NO_THROW(require_valid(cfg));
}

TEST(WalkConfig, StretchLengthFloors) {
  // 16^2.625 = 2^10.5 = sqrt(2^21); 9^2.625 = 3^5.25; 6^2.625.
  WalkConfig cfg;
  std::int64_t isqrt = 0;
  while ((isqrt + 1) * (isqrt + 1) <= (std::int64_t{1} << 21)) ++isqrt;
  EXPECT_EQ(cfg.n(), isqrt);
  EXPECT_EQ(cfg.n(), 1448);
  cfg.N = 9;
  cfg.m = 3;
  EXPECT_EQ(cfg.n(), 319);
  cfg.N = 6;
  EXPECT_EQ(cfg.n(), 110);
}

TEST(WalkConfig, SquareSidesGiveUnitA) {
  for (std::int64_t m : {3, 4, 5}) {
    WalkConfig cfg;
    cfg.m = m;
    cfg.N = m * m;
    EXPECT_EQ(cfg.A(), 1.0);
    const auto [num, den] = cfg.A_rational();
    EXPECT_EQ(num, den);
    EXPECT_TRUE(validate_params(cfg).empty());
  }
}

TEST(WalkConfig, SeparationRadius) {
  WalkConfig cfg;
  EXPECT_EQ(cfg.separation(), 4);
  cfg.N = 9;
  EXPECT_EQ(cfg.separation(), 3);
}

TEST(Validate, DeltaViolation) {
  WalkConfig cfg;
  cfg.delta = 2.2;
  EXPECT_TRUE(has_violation(cfg, "2δ > d²/(d−1)"));
  EXPECT_THROW(require_valid(cfg), InputError);
}

TEST(Validate, ZetaViolation) {
  WalkConfig cfg;
  cfg.zeta = 0.3;
  EXPECT_TRUE(has_violation(cfg, "ζ(d−2) > d−δ"));
  EXPECT_FALSE(has_violation(cfg, "2δ > d²/(d−1)"));
}

TEST(Validate, ReportsEveryViolation) {
  WalkConfig cfg;
  cfg.d = 2;
  cfg.delta = 1.5;
  cfg.zeta = -1;
  cfg.workers = 0;
  cfg.C1 = 0;
  const auto v = validate_params(cfg);
  EXPECT_GE(v.size(), 5u);
  EXPECT_TRUE(has_violation(cfg, "d >= 3"));
  EXPECT_TRUE(has_violation(cfg, "workers >= 1"));
  EXPECT_TRUE(has_violation(cfg, "C1 > 0"));
}

TEST(Validate, BoxTooLarge) {
  WalkConfig cfg;
  cfg.m = std::int64_t{1} << 17;
  EXPECT_TRUE(has_violation(cfg, "L <= 2^20"));
}

TEST(Validate, ErrorMessageNamesConstraint) {
  WalkConfig cfg;
  cfg.delta = 2.2;
  try {
    require_valid(cfg);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("2δ > d²/(d−1)"), std::string::npos);
  }
}
