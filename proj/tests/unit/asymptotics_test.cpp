#include <gtest/gtest.h>

#include <cmath>

#include "wiener/asymptotics.hpp"
#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

using namespace wiener;

namespace {

std::vector<AuditRow> rows_from(const std::vector<std::uint64_t>& grid, double (*factor)(double)) {
  std::vector<AuditRow> rows;
  for (auto m : grid) {
    LogValue pred = LogValue::of(1.0 / static_cast<double>(m));
    rows.push_back({m, pred * LogValue::of(factor(static_cast<double>(m))), {pred, pred, "test"}});
  }
  return rows;
}

}  // namespace

TEST(GeometricGrid, Shape) {
  auto g = geometric_grid(8, 4096, 2);
  EXPECT_EQ(g.front(), 8u);
  EXPECT_EQ(g.back(), 4096u);
  EXPECT_EQ(g.size(), 10u);
  auto dense = geometric_grid(1, 10, 1.1);
  EXPECT_TRUE(std::is_sorted(dense.begin(), dense.end()));
  EXPECT_EQ(std::adjacent_find(dense.begin(), dense.end()), dense.end());
  EXPECT_EQ(dense.back(), 10u);
  EXPECT_THROW(geometric_grid(10, 5, 2), InvalidArgument);
  EXPECT_THROW(geometric_grid(1, 5, 1), InvalidArgument);
}

TEST(MidShell, SitsInsideItsShell) {
  auto c = shared_counter(kInf, 2);
  for (std::int64_t s = 1; s < 20; ++s) {
    auto m = mid_shell_m(*c, s);
    EXPECT_GT(m, c->count(s - 1));
    EXPECT_LE(m, c->count(s));
  }
}

TEST(PredictSp, PowerTypeExample) {
  ClassParams prm{2, 2, 2, 2};
  auto w = parse_weight("pow:s=2");
  for (std::uint64_t m : {8, 100, 4096}) {
    auto pr = predict_sp(prm, w, m, SpQuantity::Sigma);
    EXPECT_TRUE(pr.point());
    EXPECT_NEAR(pr.lo.value() * static_cast<double>(m), 1, 1e-12);
  }
}

TEST(PredictSp, ExponentialExample) {
  ClassParams prm{1, 2, 2, 1};
  auto w = parse_weight("exp:a=1,s=1");
  for (std::uint64_t m : {8, 64, 512}) {
    double expected = std::exp(-static_cast<double>(m) / 2) * std::pow(2, 1 - 0.5);
    EXPECT_NEAR(predict_sp(prm, w, m, SpQuantity::Sigma).lo.value(), expected, 1e-12 * expected);
  }
}

TEST(PredictSp, SuperExponentialShellBottom) {
  const double p = 1, q = 2;
  ClassParams prm{p, q, kInf, 2};
  auto w = parse_weight("exp:a=1,s=2");
  for (std::int64_t s = 2; s <= 6; ++s) {
    double vs = std::pow(2 * s + 1, 2), vprev = std::pow(2 * s - 1, 2);
    auto m = static_cast<std::uint64_t>(vprev);
    double expected_log = -static_cast<double>(s * s) + std::log(vs - vprev) / p - std::log(vprev) / (2 * q);
    EXPECT_NEAR(predict_sp(prm, w, m, SpQuantity::Sigma).lo.log(), expected_log, 1e-10 * std::abs(expected_log));
  }
}

TEST(PredictSp, SuperExponentialRegimeSwitch) {
  const double p = 2, q = 1;
  ClassParams prm{p, q, kInf, 2};
  auto w = parse_weight("exp:a=1,s=2");
  auto c = shared_counter(kInf, 2);
  for (std::int64_t s = 1; s <= 5; ++s)
    for (auto m = c->count(s - 1); m < c->count(s); ++m) {
      if (m == 0) continue;
      bool flat = m == c->count(s - 1) || p * static_cast<double>(c->count(s) - m) >= q * static_cast<double>(c->shell_size(s));
      EXPECT_EQ(predict_sp(prm, w, m, SpQuantity::Sigma).regime, flat ? "super-exp flat" : "super-exp top") << m;
    }
}

TEST(PredictSp, RegimeMismatch) {
  ClassParams prm{2, 2, 2, 1};
  EXPECT_THROW(predict_sp(prm, parse_weight("geom:b=2"), 8, SpQuantity::Sigma, Regime::Doubling), RegimeMismatch);
  EXPECT_THROW(predict_sp(prm, parse_weight("pow:s=2"), 8, SpQuantity::Sigma, Regime::SuperExp), RegimeMismatch);
  EXPECT_THROW(predict_sp(prm, parse_weight("const:c=1"), 8, SpQuantity::Sigma), RegimeMismatch);
  ClassParams tail{1, 2, 2, 2};
  EXPECT_THROW(predict_sp(tail, parse_weight("pow:s=1"), 8, SpQuantity::Sigma), RegimeMismatch);
  EXPECT_THROW(predict_sp(prm, parse_weight("pow:s=2"), 0, SpQuantity::Sigma), InvalidArgument);
}

TEST(PredictSp, ShellExactWidthIsExact) {
  ClassParams prm{2, 1, 2, 2};
  auto w = parse_weight("exp:a=1,s=2");
  for (std::uint64_t m = 1; m < 50; ++m) {
    auto pr = predict_sp(prm, w, m, SpQuantity::Width);
    EXPECT_TRUE(pr.exact);
    EXPECT_EQ(pr.lo, basis_width(prm, w, m));
  }
}

TEST(PredictLp, PowerExamples) {
  auto w = parse_weight("pow:s=3");
  for (std::uint64_t m : {16, 256}) {
    const double dm = static_cast<double>(m);
    ClassParams low{1.5, 2, 2, 2};
    auto pr = predict_lp(low, w, m, LpQuantity::SigmaPerp);
    EXPECT_NEAR(pr.lo.log(), std::log(dm) * (-1.5 - 0.5 + 0.5), 1e-10);
    ClassParams high{4, 2, 2, 2};
    auto g = predict_lp(high, w, m, LpQuantity::Greedy);
    EXPECT_NEAR(g.hi.log(), std::log(dm) * (-1.5 - 0.5 + 1 - 0.25), 1e-10);
  }
}

TEST(PredictLp, ProjectionWidthIdentity) {
  ClassParams prm{4, 1, 2, 1};
  auto w = parse_weight("pow:s=1");
  for (std::uint64_t m = 1; m < 30; ++m) {
    auto pr = predict_lp(prm, w, m, LpQuantity::WidthPerp);
    EXPECT_TRUE(pr.exact);
    EXPECT_EQ(pr.lo, StepRearrangement(2, 1, w).at(m + 1));
  }
  EXPECT_THROW(predict_lp({0.5, 1, 2, 1}, w, 4, LpQuantity::Sigma), InvalidArgument);
}

TEST(PredictLp, MatchesSequencePredictorAtTwo) {
  auto w = parse_weight("pow:s=2");
  for (int d : {1, 2})
    for (double q : {1.0, 2.0, 4.0})
      for (std::uint64_t m : {8, 64, 1024}) {
        ClassParams prm{2, q, 2, d};
        auto a = predict_sp(prm, w, m, SpQuantity::Sigma);
        auto b = predict_lp(prm, w, m, LpQuantity::SigmaPerp);
        EXPECT_NEAR(a.lo.log(), b.lo.log(), 1e-12);
        EXPECT_NEAR(a.lo.log(), b.hi.log(), 1e-12);
      }
}

TEST(UpperChainLp, Examples) {
  auto w = parse_weight("pow:s=2");
  for (std::uint64_t m : {1, 5, 20}) {
    auto s2 = sigma_m({2, 2, 2, 1}, w, m).value;
    EXPECT_EQ(upper_chain_lp({2, 2, 2, 1}, w, m), s2);
    EXPECT_EQ(upper_chain_lp({1, 2, 2, 1}, w, m), s2);
    EXPECT_EQ(upper_chain_lp({4, 2, 2, 1}, w, m), sigma_m({4.0 / 3, 2, 2, 1}, w, m).value);
  }
}

TEST(RatioAudit, BoundedOscillationPasses) {
  auto audit = ratio_audit(rows_from(geometric_grid(8, 4096, 1.5), [](double m) { return 1 + 0.1 * std::sin(m); }));
  EXPECT_TRUE(audit.pass) << audit.reason;
  EXPECT_LE(audit.spread, 1.23);
}

TEST(RatioAudit, LogarithmicDriftFails) {
  auto audit = ratio_audit(rows_from(geometric_grid(8, 4096, 2), [](double m) { return std::log(m); }));
  EXPECT_FALSE(audit.pass);
  EXPECT_GT(audit.drift_slope, 0.05);
  EXPECT_FALSE(audit.reason.empty());
}

TEST(RatioAudit, SpreadBound) {
  AuditOptions loose;
  loose.check_drift = false;
  auto rows = rows_from(geometric_grid(8, 4096, 2), [](double m) { return m; });
  EXPECT_FALSE(ratio_audit(rows, loose).pass);
  loose.spread = 1e4;
  EXPECT_TRUE(ratio_audit(rows, loose).pass);
}

TEST(RatioAudit, ExactSigmaAgainstPowerPredictor) {
  // d = 1: psi(m) m^(1/p - 1/q) = m^-2.
  ClassParams prm{2, 2, 2, 1};
  auto w = parse_weight("pow:s=2");
  std::vector<AuditRow> rows;
  for (auto m : geometric_grid(8, 4096, 2)) {
    auto pr = predict_sp(prm, w, m, SpQuantity::Sigma);
    EXPECT_NEAR(pr.lo.value() * std::pow(static_cast<double>(m), 2), 1, 1e-12);
    rows.push_back({m, sigma_m(prm, w, m).value, pr});
  }
  auto audit = ratio_audit(rows);
  EXPECT_TRUE(audit.pass) << audit.reason;
}

TEST(SigmaOverWidth, BoundedWhenPBelowQ) {
  ClassParams prm{1, 2, 2, 1};
  auto w = parse_weight("pow:s=2");
  double lo = 1e300, hi = 0;
  for (auto m : geometric_grid(8, 4096, 2)) {
    double ratio = (sigma_m(prm, w, m).value / basis_width(prm, w, m)).value();
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LT(hi / lo, 1.5);
  EXPECT_LE(hi, 1 + 1e-12);
}

TEST(SigmaOverWidth, VanishesWhenQBelowP) {
  ClassParams prm{2, 1, 2, 1};
  auto w = parse_weight("pow:s=2");
  double prev = 1e300;
  for (auto m : geometric_grid(8, 4096, 2)) {
    double ratio = (sigma_m(prm, w, m).value / basis_width(prm, w, m)).value();
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_LT(prev, 0.1);
}
