#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wiener/exact_values.hpp"
#include "wiener/lattice.hpp"
#include "wiener/log_value.hpp"
#include "wiener/weights.hpp"

namespace wiener {

/// Predicted order of a quantity: a point (lo == hi) or a two-sided window.
struct Prediction {
  LogValue lo;
  LogValue hi;
  std::string regime;
  bool exact = false;  // the formula is an identity, not only an order
  bool point() const { return lo == hi; }
};

enum class SpQuantity { Sigma, Width };

/// Which asymptotic regime supplies the predictor.
enum class Regime {
  Auto,        // chosen from the weight family
  Doubling,    // power-type weights
  ExpType,     // sub-exponential and exponential weights
  SuperExp,    // super-exponential weights, shell-resolved
  ShellExact,  // basis width identity psi(n_{m+1}) for q <= p
};

/// Order of sigma_m or D_m in S^p. Throws RegimeMismatch when the weight
/// family or the slope condition does not fit the regime.
Prediction predict_sp(const ClassParams& params, const WeightFunction& w, std::uint64_t m, SpQuantity quantity,
                      Regime regime = Regime::Auto);

enum class LpQuantity { Sigma, SigmaPerp, Greedy, WidthPerp };

struct LpPredictOptions {
  /// For d > 1 super-exponential weights, m counts as sitting at the top
  /// (bottom) of its shell when within this many points of it.
  std::uint64_t shell_slack = 4;
};

/// Order of an L_p quantity (1 <= p < inf).
Prediction predict_lp(const ClassParams& params, const WeightFunction& w, std::uint64_t m, LpQuantity quantity,
                      const LpPredictOptions& opts = {});

/// Exact S^2 (p <= 2) or S^{p'} (p >= 2) value bounding the L_p errors from above.
LogValue upper_chain_lp(const ClassParams& params, const WeightFunction& w, std::uint64_t m,
                        const EvalOptions& opts = {});

/// Default m(s) = V_{s-1} + ceil(nu_s / 2), a point in the middle of shell s.
std::uint64_t mid_shell_m(const BallCounter& counter, std::int64_t s);

/// Strictly increasing integers start, ~start*factor, ..., ending at stop.
std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, double factor);

struct AuditRow {
  std::uint64_t m = 0;
  LogValue value;
  Prediction prediction;
  double ratio() const { return (value / prediction.lo).value(); }
};

struct AuditOptions {
  double spread = 32;
  double drift = 0.05;  // allowed |slope| of log10 ratio per decade of m
  bool check_drift = true;
  /// Fraction of the grid, from the top, that the drift slope is fitted on;
  /// the low end of a grid is often still pre-asymptotic.
  double drift_window = 0.5;
};

struct OrderAudit {
  std::vector<AuditRow> rows;
  double ratio_min = 0;
  double ratio_max = 0;
  double spread = 0;
  double drift_slope = 0;
  bool pass = false;
  std::string reason;
};

/// Bounded-ratio test. Window predictions only check containment: the ratio
/// to the lower end may not drift down and the ratio to the upper end may
/// not drift up.
OrderAudit ratio_audit(std::vector<AuditRow> rows, const AuditOptions& opts = {});

}  // namespace wiener
