#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "reference.hpp"
#include "wiener/errors.hpp"
#include "wiener/spectral.hpp"

using namespace wiener;
using namespace std::complex_literals;

namespace {

CoefficientField line_field(std::initializer_list<std::pair<std::int64_t, Complex>> terms) {
  CoefficientField f(1);
  for (auto& [k, c] : terms) f.set({k}, c);
  return f;
}

CoefficientField random_field(std::mt19937_64& rng, int d, int terms, std::int64_t radius) {
  std::uniform_int_distribution<std::int64_t> coord(-radius, radius);
  std::normal_distribution<double> gauss;
  CoefficientField f(d);
  while (static_cast<int>(f.size()) < terms) {
    LatticeVector k(d);
    for (auto& x : k) x = coord(rng);
    f.set(k, Complex(gauss(rng), gauss(rng)));
  }
  return f;
}

}  // namespace

TEST(CoefficientField, Basics) {
  CoefficientField f(2);
  f.set({1, -2}, 3.0);
  f.set({0, 0}, 0.0);
  EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(f.at({1, -2}), Complex(3));
  EXPECT_EQ(f.at({5, 5}), Complex(0));
  EXPECT_EQ(f.max_coordinate(), 2);
  f.set({1, -2}, 0.0);
  EXPECT_TRUE(f.empty());
  EXPECT_THROW(f.set({1}, 1.0), InvalidArgument);
}

TEST(CoefficientField, JsonRoundTrip) {
  std::mt19937_64 rng(3);
  auto f = random_field(rng, 2, 9, 5);
  auto g = field_from_json(field_to_json(f), 2);
  EXPECT_EQ(f.entries(), g.entries());
  EXPECT_THROW(field_from_json("[[[1,2],1]]", 2), InvalidArgument);
}

TEST(SpNorm, Examples) {
  auto f = line_field({{0, 3.0}, {1, 4.0i}});
  EXPECT_DOUBLE_EQ(sp_norm(f, 2), 5);
  EXPECT_DOUBLE_EQ(sp_norm(f, 1), 7);
  EXPECT_DOUBLE_EQ(sp_norm(f, kInf), 4);
  EXPECT_EQ(sp_norm(CoefficientField(1), 2), 0);
}

TEST(SpNorm, NonIncreasingInP) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto f = random_field(rng, 2, 12, 4);
    double prev = 1e300;
    for (double p : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 8.0, kInf}) {
      double v = sp_norm(f, p);
      EXPECT_LE(v, prev * (1 + 1e-14));
      prev = v;
    }
  }
}

TEST(ClassNorm, Examples) {
  auto w = parse_weight("pow:s=2");
  for (double q : {0.5, 1.0, 2.0, kInf}) {
    ClassParams prm{2, q, 2, 2};
    CoefficientField f(2);
    f.set({3, -1}, w(std::ceil(std::sqrt(10.0))) * 1i);
    EXPECT_NEAR(class_norm(f, w, prm), 1, 1e-14);
    EXPECT_EQ(class_norm(CoefficientField(2), w, prm), 0);
  }
}

TEST(GreedyOrder, TieBreakAndScaling) {
  auto f = line_field({{2, 1.0}, {-1, 1.0}, {0, 0.5}, {1, -1.0}});
  auto order = greedy_order(f);
  EXPECT_EQ(order[0].k, LatticeVector{-1});
  EXPECT_EQ(order[1].k, LatticeVector{1});
  EXPECT_EQ(order[2].k, LatticeVector{2});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    auto g = random_field(rng, 2, 10, 3);
    g.set({0, 1}, 1.0);
    g.set({1, 0}, -1.0);
    auto base = greedy_order(g);
    for (Complex c : {Complex(-2.5), Complex(0, 3), Complex(1e-3, -1e-3)}) {
      auto scaled = greedy_order(g.scaled(c));
      ASSERT_EQ(scaled.size(), base.size());
      for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(scaled[i].k, base[i].k);
    }
  }
}

TEST(GreedyResidual, Examples) {
  auto f = line_field({{0, 1.0}, {1, 0.5}, {-1, 0.5}, {2, 0.25}});
  EXPECT_DOUBLE_EQ(greedy_residual(f, 1, SequenceNorm{1}), 1.25);
  EXPECT_EQ(greedy_residual(f, 4, SequenceNorm{1}), 0);
  EXPECT_EQ(greedy_residual(f, 4, GridNorm{3}), 0);
  CoefficientField e(2);
  e.set({2, -3}, 1.0);
  for (double p : {1.0, 2.0, 3.0, kInf}) EXPECT_NEAR(greedy_residual(e, 0, GridNorm{p}), 1, 1e-12);
}

TEST(GreedyResidual, MatchesExhaustiveSubsets) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 60; ++t) {
    auto f = random_field(rng, 1 + t % 2, 10, 8);
    std::vector<double> mod;
    for (auto& [k, c] : f.entries()) mod.push_back(std::abs(c));
    for (double p : {0.5, 1.0, 2.0, kInf})
      for (std::uint64_t m : {0, 1, 3, 6}) {
        double expected = ref::min_over_subsets(mod, m, p);
        EXPECT_NEAR(greedy_residual(f, m, SequenceNorm{p}), expected, 1e-12 * expected);
      }
  }
}

TEST(LpGridNorm, Examples) {
  CoefficientField c(2);
  c.set({0, 0}, Complex(-3, 4));
  for (double p : {1.0, 2.0, 5.0, kInf}) EXPECT_NEAR(lp_grid_norm(c, p, 8), 5, 1e-12);
  auto f = line_field({{0, 1.0}, {1, 1.0}});
  EXPECT_NEAR(lp_grid_norm(f, 2, 8), std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(lp_grid_norm(f, kInf, 4096), 2, 1e-5);
  // mean |1 + e^{ix}| = 4/pi
  EXPECT_NEAR(lp_grid_norm(f, 1, 1 << 14), 4 / std::numbers::pi, 1e-7);
  EXPECT_THROW(lp_grid_norm(f, 0.5, 8), InvalidArgument);
}

TEST(LpGridNorm, Parseval) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    int d = 1 + t % 3;
    auto f = random_field(rng, d, 15, 10);
    auto n = 2 * f.max_coordinate() + 1;
    EXPECT_NEAR(lp_grid_norm(f, 2, n), sp_norm(f, 2), 1e-8);
    EXPECT_NEAR(lp_grid_norm(f, 2, default_grid_size(f)), sp_norm(f, 2), 1e-8);
  }
}

TEST(LpGridNorm, Estimate) {
  std::mt19937_64 rng(29);
  auto f = random_field(rng, 1, 8, 6);
  auto est = lp_norm_estimate(f, 1);
  EXPECT_EQ(est.n % default_grid_size(f), 0);
  EXPECT_LT(est.change, 1e-3 * est.value);
  EXPECT_LE(est.value, sp_norm(f, 2) * (1 + 1e-12));
}

TEST(GreedyChain, OnGridNorms) {
  // best subset residual <= greedy residual in L_p.
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto f = random_field(rng, 1, 7, 4);
    for (double p : {1.0, 3.0})
      for (std::uint64_t m : {1, 2, 3}) {
        double greedy = greedy_residual(f, m, GridNorm{p, 64});
        std::vector<LatticeVector> keys;
        for (auto& [k, c] : f.entries()) keys.push_back(k);
        std::vector<int> mask(keys.size(), 0);
        std::fill(mask.end() - static_cast<std::ptrdiff_t>(m), mask.end(), 1);
        double best = 1e300;
        do {
          IndexSet gamma;
          for (std::size_t i = 0; i < keys.size(); ++i)
            if (mask[i]) gamma.insert(keys[i]);
          best = std::min(best, lp_grid_norm(f.without(gamma), p, 64));
        } while (std::next_permutation(mask.begin(), mask.end()));
        EXPECT_LE(best, greedy * (1 + 1e-12));
      }
  }
}

TEST(Extremal, H4IsTheNextShellValue) {
  auto w = parse_weight("pow:s=1");
  ClassParams prm{2, 2, 2, 2};
  StepRearrangement sr(2, 2, w);
  for (std::uint64_t m = 1; m < 30; ++m) {
    auto h = extremal(ExtremalKind::H4, prm, w, m);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_NEAR(std::abs(h.entries().begin()->second), sr.at(m + 1).value(), 1e-15);
    EXPECT_EQ(optimal_index_set(2, 2, m).count(h.entries().begin()->first), 0u);
  }
}

TEST(Extremal, H2AndH3AreNormalized) {
  auto w = parse_weight("pow:s=1");
  ClassParams prm{2, 2, 2, 1};
  auto h = extremal(ExtremalKind::H2, prm, w, 2);
  EXPECT_EQ(h.size(), 3u);
  for (auto& [k, c] : h.entries()) EXPECT_NEAR(std::abs(c), std::pow(3.0, -0.5), 1e-15);
  EXPECT_NEAR(class_norm(h, w, prm), 1, 1e-10);
  for (auto spec : {"pow:s=2", "geom:b=2", "exp:a=1,s=2"})
    for (double q : {1.0, 2.0, 3.0})
      for (std::uint64_t m : {1, 4, 9, 30}) {
        ClassParams line{2, q, 2, 1};
        ClassParams plane{2, q, kInf, 2};
        auto ww = parse_weight(spec);
        EXPECT_NEAR(class_norm(extremal(ExtremalKind::H2, plane, ww, m), ww, plane), 1, 1e-10);
        EXPECT_NEAR(class_norm(extremal(ExtremalKind::H3, line, ww, m), ww, line), 1, 1e-10);
      }
  EXPECT_THROW(extremal(ExtremalKind::H3, ClassParams{2, 2, 2, 2}, w, 3), InvalidArgument);
}

TEST(Extremal, H1FlatOnTheUnitCrossPolytope) {
  auto w = parse_weight("pow:s=2");
  ClassParams prm{2, 2, 1, 2};
  bool found = false;
  for (std::uint64_t m = 1; m < 12; ++m) {
    auto h = extremal(ExtremalKind::H1, prm, w, m);
    if (h.size() != 5) continue;
    found = true;
    std::set<LatticeVector> support;
    for (auto& [k, c] : h.entries()) {
      support.insert(k);
      EXPECT_NEAR(std::abs(c), std::abs(h.entries().begin()->second), 1e-15);
    }
    EXPECT_EQ(support, (std::set<LatticeVector>{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}}));
    EXPECT_NEAR(class_norm(h, w, prm), 1, 1e-12);
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(parse_extremal("h9"), InvalidArgument);
}
