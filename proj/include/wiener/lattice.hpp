#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace wiener {

/// Integer frequency vector; its length is the ambient dimension.
using LatticeVector = std::vector<std::int64_t>;

/// (sum |k_i|^r)^(1/r), or max |k_i| when r is infinite.
double lr_norm(const LatticeVector& k, double r);

/// Exact test of lr_norm(k, r) <= s.
bool within_ball(const LatticeVector& k, double r, std::int64_t s);

/// Smallest integer s >= 0 with lr_norm(k, r) <= s (the shell holding k).
std::int64_t shell_index(const LatticeVector& k, double r);

/// Volume of the unit l_r ball in R^d.
double vol_constant(double r, int d);

/// Offset d^(1/r)/2 of the two-sided volume estimate for V_s.
double ball_gap(double r, int d);

/// Lower and upper volume estimates M((s-c)_+)^d and M(s+c)^d.
double volume_lower(double r, int d, double s);
double volume_upper(double r, int d, double s);

/// Cached lattice point counts V_s = #{k : |k|_r <= s} for fixed (r, d).
///
/// Thread-safe: readers share a lock, cache growth takes it exclusively.
class BallCounter {
 public:
  BallCounter(double r, int d);

  double r() const noexcept { return r_; }
  int d() const noexcept { return d_; }

  /// V_s; V_{-1} = 0.
  std::uint64_t count(std::int64_t s) const;
  /// nu_s = V_s - V_{s-1}.
  std::uint64_t shell_size(std::int64_t s) const;
  /// Smallest s with V_s >= m (m >= 1).
  std::int64_t inverse(std::uint64_t m) const;
  /// Vectors of shell s in lexicographic order.
  std::vector<LatticeVector> shell(std::int64_t s) const;

 private:
  enum class Kind { Line, Max, Integer, General };

  void ensure(std::int64_t s) const;
  std::uint64_t count_integer(int dims, unsigned __int128 budget) const;
  void fill_general(std::int64_t target) const;

  double r_;
  int d_;
  Kind kind_;
  int int_r_ = 0;
  mutable std::shared_mutex mutex_;
  mutable std::vector<std::uint64_t> counts_;
  mutable std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> memo_;
};

/// Process-wide shared counter for (r, d).
std::shared_ptr<BallCounter> shared_counter(double r, int d);

std::uint64_t ball_count(std::int64_t s, double r, int d);
std::int64_t inverse_count(std::uint64_t m, double r, int d);
std::vector<LatticeVector> enumerate_shell(std::int64_t s, double r, int d);

}  // namespace wiener
