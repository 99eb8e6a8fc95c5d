#pragma once

#include <cstdint>
#include <optional>
#include <set>

#include "wiener/lattice.hpp"
#include "wiener/log_value.hpp"
#include "wiener/rearrangement.hpp"
#include "wiener/weights.hpp"

namespace wiener {

/// Target space S^p (or L_p), class exponent q, lattice norm r, dimension d.
struct ClassParams {
  double p = 2;
  double q = 2;
  double r = 2;
  int d = 1;

  void validate() const;
  /// p < q: the tail branch; otherwise the sup branch.
  bool tail_branch() const { return p < q; }
  /// Exponent applied to the masked weights in the tail branch.
  double tail_exponent() const;
};

/// A set of distinct frequencies.
using IndexSet = std::set<LatticeVector>;

struct EvalOptions {
  double rel_tol = 1e-12;
  /// When set, sums stop at this shell (truncated universe).
  std::optional<std::int64_t> shell_cap;
  /// Largest shell the case (i) scan and l_m search may visit.
  std::int64_t scan_cap = 1'000'000;
};

/// j-th largest of |Psi_k| over k outside gamma.
LogValue masked_rearranged(const StepRearrangement& sr, const IndexSet& gamma, std::uint64_t j);

/// Best approximation error of the class by polynomials with spectrum gamma.
LogValue best_by_set(const ClassParams& params, const WeightFunction& w, const IndexSet& gamma,
                     const EvalOptions& opts = {});

/// The first m vectors of the shell-by-shell lexicographic order.
IndexSet optimal_index_set(double r, int d, std::uint64_t m);

struct WidthResult {
  LogValue width;             // basis width
  LogValue projection_width;  // equal to width in S^p
  IndexSet optimal_set;
};

/// Basis width value alone.
LogValue basis_width(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts = {});

WidthResult widths(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts = {});

struct BalancePoint {
  std::optional<std::uint64_t> l;  // empty: the supremum sits at infinity
  LogValue head;                   // sum of entry^-q over j <= l
};

/// Smallest l > m with entry_l^-q <= head(l)/(l-m) < entry_{l+1}^-q.
BalancePoint find_lm(const StepRearrangement& sr, double q, std::uint64_t m, std::int64_t scan_cap = 1'000'000);

/// Which closed form produced a best m-term value.
enum class SigmaCase { SupScan, Balance, FlatTop, TailP, Step };

struct SigmaResult {
  LogValue value;
  SigmaCase form = SigmaCase::Step;
  std::optional<std::uint64_t> argmax;  // maximizing l for the scan / balance forms
  bool at_infinity = false;             // supremum approached only as l -> inf
};

/// Best m-term approximation of the class in S^p.
SigmaResult sigma_m(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts = {});

/// Upper bound for (l-m)^(1/p) head(l)^(-1/q) over every l beyond l_prime, used
/// as the certified stopping rule of the sup scan (q <= p < inf).
LogValue scan_tail_bound(const StepRearrangement& sr, double p, double q, std::uint64_t m, std::uint64_t l_prime,
                         LogValue head_at_l_prime);

}  // namespace wiener
