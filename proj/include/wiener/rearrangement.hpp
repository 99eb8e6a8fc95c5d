#pragma once

#include <cstdint>
#include <memory>

#include "wiener/lattice.hpp"
#include "wiener/log_value.hpp"
#include "wiener/weights.hpp"

namespace wiener {

/// A series value with a certified bound on the truncation error.
struct SeriesValue {
  LogValue value;
  LogValue error;          // |true - value| <= error
  std::int64_t last_shell = 0;  // last shell summed exactly
};

/// Non-increasing rearrangement of the lattice weights |Psi_k| = psi(shell(k)).
///
/// Constant on shells: entries j in (V_{s-1}, V_s] equal psi(s), with the
/// origin shell carrying psi(1).
class StepRearrangement {
 public:
  StepRearrangement(std::shared_ptr<const BallCounter> counter, WeightFunction weight);
  StepRearrangement(double r, int d, WeightFunction weight);

  const BallCounter& counter() const { return *counter_; }
  const WeightFunction& weight() const { return weight_; }

  /// Value on shell s.
  LogValue step(std::int64_t s) const;
  /// j-th entry, j >= 1.
  LogValue at(std::uint64_t j) const;

  /// Sum of entry^sigma over j <= l.
  LogValue head_sum(double sigma, std::uint64_t l) const;
  /// Sum of entry^sigma over j > l, certified to rel_tol. Throws
  /// DivergentSeries when the series does not converge.
  SeriesValue tail_sum(double sigma, std::uint64_t l, double rel_tol = 1e-12) const;
  /// Sum of entry^sigma over l < j <= V_{shell_cap}.
  LogValue truncated_tail_sum(double sigma, std::uint64_t l, std::int64_t shell_cap) const;

  /// Sum over shells s >= first of count(s) * psi(s)^sigma, where count(first)
  /// is replaced by first_count.
  SeriesValue shell_series(double sigma, std::int64_t first, std::uint64_t first_count, double rel_tol) const;

  /// Throws DivergentSeries unless sum_s nu_s psi(s)^sigma converges.
  void require_summable(double sigma) const;

 private:
  std::shared_ptr<const BallCounter> counter_;
  WeightFunction weight_;
};

double rearranged(const StepRearrangement& sr, std::uint64_t j);
double head_sum(const StepRearrangement& sr, double sigma, std::uint64_t l);
SeriesValue tail_sum(const StepRearrangement& sr, double sigma, std::uint64_t l, double rel_tol = 1e-12);

}  // namespace wiener
