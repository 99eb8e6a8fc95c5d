#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wiener/exact_values.hpp"
#include "wiener/lattice.hpp"
#include "wiener/log_value.hpp"
#include "wiener/rearrangement.hpp"
#include "wiener/spectral.hpp"
#include "wiener/weights.hpp"

namespace wiener {

/// Every k with |k|_r <= shell_cap, found by scanning the cube [-cap, cap]^d.
/// Points are ordered by (shell, lexicographic).
struct TruncatedUniverse {
  std::int64_t shell_cap = 0;
  std::vector<LatticeVector> points;

  static TruncatedUniverse build(double r, int d, std::int64_t shell_cap);
};

struct SubsetResult {
  IndexSet gamma;
  double value = 0;
};

/// Minimum S^p residual over every m-subset of the support. Guard: support <= 14, m <= 6.
SubsetResult brute_best_subset(const CoefficientField& f, std::uint64_t m, double p);

struct BruteWidth {
  LogValue value;
  IndexSet gamma;  // first minimizer in lexicographic subset order
};

/// Minimum of best_by_set over every m-subset of the truncated universe, with
/// sums cut at the same shell. Guard: V <= 20, m <= 5.
BruteWidth brute_width(const ClassParams& params, const WeightFunction& w, std::uint64_t m, std::int64_t shell_cap);

struct ScanAudit {
  std::optional<std::uint64_t> l;  // empty when the value is the limit at infinity
  LogValue value;
  bool certified = false;
};

/// Plain scan of (l-m)^(1/p) / (sum_{j<=l} entry_j^-q)^(1/q) over m < l <= l_cap (q <= p < inf).
ScanAudit sup_scan_audit(const StepRearrangement& sr, const ClassParams& params, std::uint64_t m,
                         std::uint64_t l_cap);

struct SigmaOracleOptions {
  std::uint64_t l_cap = 200;    // largest flat block tried
  std::int64_t shell_cap = 0;   // 0: smallest cap holding 2 l_cap points
};

/// Best m-term value of the class in S^p from explicit class members: flat
/// blocks, Hoelder-optimal flat-plus-tail sequences and the weight sequence
/// itself, each evaluated by its greedy residual. Weights beyond the cap enter
/// through an independent tail sum (Euler-Maclaurin for d = 1 powers, shell
/// extension otherwise).
LogValue brute_sigma(const ClassParams& params, const WeightFunction& w, std::uint64_t m,
                     const SigmaOracleOptions& opts = {});

}  // namespace wiener
