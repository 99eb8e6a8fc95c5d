#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "reference.hpp"
#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"
#include "wiener/lattice.hpp"

using namespace wiener;

TEST(LrNorm, Examples) {
  EXPECT_DOUBLE_EQ(lr_norm({3, 4}, 2), 5);
  EXPECT_DOUBLE_EQ(lr_norm({1, -2, 3}, 1), 6);
  EXPECT_DOUBLE_EQ(lr_norm({5, -7}, kInf), 7);
  EXPECT_DOUBLE_EQ(lr_norm({1, 4}, 0.5), 9);
}

TEST(LrNorm, RejectsBadExponent) {
  EXPECT_THROW(lr_norm({1}, 0), InvalidArgument);
  EXPECT_THROW(lr_norm({1}, -1), InvalidArgument);
}

TEST(ShellIndex, MatchesReferenceOnBoundaries) {
  for (double r : {0.5, 1.0, 2.0, kInf})
    ref::scan_cube(2, 9, [&](const ref::Point& k) { ASSERT_EQ(shell_index(k, r), ref::shell_of(k, r)) << r; });
  EXPECT_EQ(shell_index({3, 4}, 2), 5);
  EXPECT_EQ(shell_index({2, 8}, 0.5), 18);
  EXPECT_TRUE(within_ball({2, 8}, 0.5, 18));
  EXPECT_FALSE(within_ball({2, 8}, 0.5, 17));
}

TEST(BallCount, Examples) {
  EXPECT_EQ(ball_count(1, kInf, 2), 9u);
  EXPECT_EQ(ball_count(1, 1, 2), 5u);
  EXPECT_EQ(ball_count(3, 2, 1), 7u);
  EXPECT_EQ(ball_count(0, 0.5, 3), 1u);
}

TEST(BallCount, CubeFormulaForMaxNorm) {
  for (int d = 1; d <= 4; ++d)
    for (std::int64_t s = 0; s <= 40; ++s) EXPECT_EQ(ball_count(s, kInf, d), std::pow(2 * s + 1, d));
}

TEST(BallCount, AgreesWithCubeScan) {
  for (double r : {0.5, 1.0, 2.0, kInf})
    for (int d = 1; d <= 3; ++d) {
      auto expected = ref::ball_counts(r, d, 20);
      for (std::int64_t s = 0; s <= 20; ++s) ASSERT_EQ(ball_count(s, r, d), expected[s]) << r << " " << d << " " << s;
    }
}

TEST(BallCount, CrossPolytopeClosedForm) {
  // l_1 balls count as sum_j 2^j C(d, j) C(s, j).
  auto choose = [](std::int64_t n, std::int64_t k) {
    double c = 1;
    for (std::int64_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
  };
  for (int d = 1; d <= 5; ++d)
    for (std::int64_t s : {1, 7, 50}) {
      double expected = 0;
      for (int j = 0; j <= std::min<std::int64_t>(d, s); ++j) expected += std::pow(2, j) * choose(d, j) * choose(s, j);
      EXPECT_EQ(static_cast<double>(ball_count(s, 1, d)), expected);
    }
}

TEST(InverseCount, Examples) {
  EXPECT_EQ(inverse_count(4, kInf, 1), 2);
  EXPECT_EQ(inverse_count(9, kInf, 2), 1);
  EXPECT_EQ(inverse_count(10, kInf, 2), 2);
  EXPECT_EQ(inverse_count(1, 2, 3), 0);
  EXPECT_THROW(inverse_count(0, 2, 1), InvalidArgument);
}

TEST(InverseCount, BracketsEveryM) {
  for (double r : {0.5, 1.0, 2.0, kInf})
    for (std::uint64_t m = 1; m <= 400; ++m) {
      auto n = inverse_count(m, r, 2);
      EXPECT_LE(m, ball_count(n, r, 2));
      if (n > 0) {
        EXPECT_GT(m, ball_count(n - 1, r, 2));
      }
    }
}

TEST(VolConstant, Examples) {
  EXPECT_DOUBLE_EQ(vol_constant(kInf, 2), 4);
  EXPECT_DOUBLE_EQ(vol_constant(1, 2), 2);
  EXPECT_NEAR(vol_constant(2, 2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(vol_constant(2, 3), 4 * std::numbers::pi / 3, 1e-14);
  for (double r : {0.5, 1.0, 2.0, 3.0})
    for (int d = 1; d <= 4; ++d) EXPECT_NEAR(vol_constant(r, d), ref::unit_ball_volume(r, d), 1e-12 * vol_constant(r, d));
}

TEST(VolumeSandwich, HoldsForComputedCounts) {
  for (double r : {0.5, 1.0, 2.0, kInf})
    for (int d = 1; d <= 3; ++d)
      for (std::int64_t s = 0; s <= 60; ++s) {
        double v = static_cast<double>(ball_count(s, r, d));
        double c = std::pow(d, 1 / r) / 2;
        double m = ref::unit_ball_volume(r, d);
        EXPECT_LE(m * std::pow(std::max(s - c, 0.0), d), v * (1 + 1e-12));
        EXPECT_GE(m * std::pow(s + c, d), v * (1 - 1e-12));
        EXPECT_NEAR(volume_lower(r, d, s), m * std::pow(std::max(s - c, 0.0), d), 1e-9 * (1 + v));
        EXPECT_NEAR(volume_upper(r, d, s), m * std::pow(s + c, d), 1e-9 * (1 + v));
      }
}

TEST(ShellSizes, GrowLikeSurfaceArea) {
  for (double r : {1.0, 2.0, kInf})
    for (int d = 2; d <= 3; ++d) {
      double lo = 1e300, hi = 0;
      for (std::int64_t s = 2; s <= 200; ++s) {
        double ratio = static_cast<double>(ball_count(s, r, d) - ball_count(s - 1, r, d)) / std::pow(s, d - 1);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      EXPECT_GT(lo, 0);
      EXPECT_LT(hi / lo, 8) << r << " " << d;
    }
}

TEST(EnumerateShell, Examples) {
  EXPECT_EQ(enumerate_shell(0, 2, 2), (std::vector<LatticeVector>{{0, 0}}));
  EXPECT_EQ(enumerate_shell(1, 1, 2), (std::vector<LatticeVector>{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}));
  EXPECT_EQ(enumerate_shell(1, kInf, 1), (std::vector<LatticeVector>{{-1}, {1}}));
}

TEST(EnumerateShell, PartitionsTheBall) {
  for (double r : {0.5, 1.0, 2.0, kInf}) {
    std::set<LatticeVector> seen;
    for (std::int64_t s = 0; s <= 8; ++s) {
      auto shell = enumerate_shell(s, r, 2);
      EXPECT_TRUE(std::is_sorted(shell.begin(), shell.end()));
      for (const auto& k : shell) {
        EXPECT_EQ(ref::shell_of(k, r), s);
        EXPECT_TRUE(seen.insert(k).second);
      }
      EXPECT_EQ(seen.size(), ball_count(s, r, 2));
    }
  }
}

TEST(BallCounter, SharedInstanceIsReused) {
  auto a = shared_counter(2, 2);
  auto b = shared_counter(2, 2);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(a->shell_size(0), 1u);
  EXPECT_EQ(a->count(-1), 0u);
}
