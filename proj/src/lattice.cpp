#include "wiener/lattice.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

namespace wiener {
namespace {

using u128 = unsigned __int128;
using Precise = boost::multiprecision::cpp_bin_float_100;

constexpr double kGuard = 1e-12;
constexpr u128 kSaturated = ~u128{0};

void check_r(double r) {
  if (!(r > 0)) throw InvalidArgument("r", "must be in (0, inf]");
}

void check_d(int d) {
  if (d < 1) throw InvalidArgument("d", "must be at least 1");
}

// Integer exponents up to this size use exact 128-bit arithmetic.
int integer_exponent(double r) {
  if (is_inf(r) || r < 1 || r > 16 || r != std::floor(r)) return 0;
  return static_cast<int>(r);
}

u128 saturating_pow(std::uint64_t base, int e) {
  u128 out = 1;
  for (int i = 0; i < e; ++i) {
    if (base != 0 && out > kSaturated / base) return kSaturated;
    out *= base;
  }
  return out;
}

u128 saturating_add(u128 a, u128 b) { return a > kSaturated - b ? kSaturated : a + b; }

std::uint64_t magnitude(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

u128 integer_power_sum(const LatticeVector& k, int e) {
  u128 sum = 0;
  for (auto v : k) sum = saturating_add(sum, saturating_pow(magnitude(v), e));
  return sum;
}

// Largest x with x^e <= budget.
std::uint64_t integer_root(u128 budget, int e) {
  if (budget == 0) return 0;
  auto x = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(budget), 1.0 / e)));
  while (x > 0 && saturating_pow(x, e) > budget) --x;
  while (saturating_pow(x + 1, e) <= budget) ++x;
  return x;
}

// Tie-aware comparison of sum |k_i|^r against s^r for non-integer r.
bool general_within(const LatticeVector& k, double r, std::int64_t s) {
  double sum = 0;
  for (auto v : k) sum += std::pow(static_cast<double>(magnitude(v)), r);
  double target = std::pow(static_cast<double>(s), r);
  if (sum < target * (1 - kGuard)) return true;
  if (sum > target * (1 + kGuard)) return false;
  Precise exact_sum = 0;
  for (auto v : k) exact_sum += boost::multiprecision::pow(Precise(magnitude(v)), Precise(r));
  Precise exact_target = boost::multiprecision::pow(Precise(s), Precise(r));
  return exact_sum <= exact_target * (1 + Precise("1e-80"));
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    throw CountOverflow("lattice count exceeds 64-bit range");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > std::numeric_limits<std::uint64_t>::max() - a)
    throw CountOverflow("lattice count exceeds 64-bit range");
  return a + b;
}

// Calls visit(k) for every k in [-s, s]^d whose partial l_r sums stay inside
// the radius-s ball (with slack), coordinates in lexicographic order.
template <class Visit>
void walk_ball(double r, int d, std::int64_t s, Visit&& visit) {
  LatticeVector k(static_cast<std::size_t>(d), 0);
  const bool max_norm = is_inf(r);
  const double budget = max_norm ? 0.0 : std::pow(static_cast<double>(s), r) * (1 + 1e-9);
  auto rec = [&](auto&& self, int axis, double used) -> void {
    if (axis == d) {
      visit(static_cast<const LatticeVector&>(k));
      return;
    }
    for (std::int64_t v = -s; v <= s; ++v) {
      double next = used;
      if (!max_norm) {
        next += std::pow(static_cast<double>(magnitude(v)), r);
        if (next > budget) continue;
      }
      k[static_cast<std::size_t>(axis)] = v;
      self(self, axis + 1, next);
    }
    k[static_cast<std::size_t>(axis)] = 0;
  };
  rec(rec, 0, 0.0);
}

}  // namespace

double lr_norm(const LatticeVector& k, double r) {
  check_r(r);
  if (k.empty()) throw InvalidArgument("k", "dimension must be at least 1");
  if (is_inf(r)) {
    std::uint64_t m = 0;
    for (auto v : k) m = std::max(m, magnitude(v));
    return static_cast<double>(m);
  }
  if (r == 1) {
    double sum = 0;
    for (auto v : k) sum += static_cast<double>(magnitude(v));
    return sum;
  }
  if (r == 2) {
    double acc = 0;
    for (auto v : k) acc = std::hypot(acc, static_cast<double>(v));
    return acc;
  }
  double sum = 0;
  for (auto v : k) sum += std::pow(static_cast<double>(magnitude(v)), r);
  return std::pow(sum, 1.0 / r);
}

bool within_ball(const LatticeVector& k, double r, std::int64_t s) {
  check_r(r);
  if (s < 0) return false;
  if (is_inf(r) || k.size() == 1) {
    for (auto v : k)
      if (magnitude(v) > static_cast<std::uint64_t>(s)) return false;
    return true;
  }
  if (int e = integer_exponent(r)) {
    return integer_power_sum(k, e) <= saturating_pow(static_cast<std::uint64_t>(s), e);
  }
  return general_within(k, r, s);
}

std::int64_t shell_index(const LatticeVector& k, double r) {
  check_r(r);
  if (is_inf(r) || k.size() == 1) {
    std::uint64_t m = 0;
    for (auto v : k) m = std::max(m, magnitude(v));
    return static_cast<std::int64_t>(m);
  }
  if (int e = integer_exponent(r)) {
    u128 sum = integer_power_sum(k, e);
    if (sum == kSaturated) throw CountOverflow("lattice vector too large for exact shell index");
    std::uint64_t root = integer_root(sum, e);
    return static_cast<std::int64_t>(saturating_pow(root, e) == sum ? root : root + 1);
  }
  auto c = static_cast<std::int64_t>(std::ceil(lr_norm(k, r)));
  while (c > 0 && within_ball(k, r, c - 1)) --c;
  while (!within_ball(k, r, c)) ++c;
  return c;
}

double vol_constant(double r, int d) {
  check_r(r);
  check_d(d);
  if (is_inf(r)) return std::ldexp(1.0, d);
  double log_m = d * (std::log(2.0) + std::lgamma(1 + 1 / r)) - std::lgamma(1 + d / r);
  return std::exp(log_m);
}

double ball_gap(double r, int d) {
  check_r(r);
  check_d(d);
  return 0.5 * std::pow(static_cast<double>(d), reciprocal(r));
}

double volume_lower(double r, int d, double s) {
  return vol_constant(r, d) * std::pow(std::max(0.0, s - ball_gap(r, d)), d);
}

double volume_upper(double r, int d, double s) {
  return vol_constant(r, d) * std::pow(s + ball_gap(r, d), d);
}

BallCounter::BallCounter(double r, int d) : r_(r), d_(d) {
  check_r(r);
  check_d(d);
  if (d == 1) {
    kind_ = Kind::Line;
  } else if (is_inf(r)) {
    kind_ = Kind::Max;
  } else if ((int_r_ = integer_exponent(r)) != 0) {
    kind_ = Kind::Integer;
    memo_.resize(static_cast<std::size_t>(d) + 1);
  } else {
    kind_ = Kind::General;
  }
}

std::uint64_t BallCounter::count(std::int64_t s) const {
  if (s < 0) return 0;
  switch (kind_) {
    case Kind::Line:
      return checked_add(checked_mul(2, static_cast<std::uint64_t>(s)), 1);
    case Kind::Max: {
      std::uint64_t side = checked_add(checked_mul(2, static_cast<std::uint64_t>(s)), 1);
      std::uint64_t out = 1;
      for (int i = 0; i < d_; ++i) out = checked_mul(out, side);
      return out;
    }
    default:
      break;
  }
  {
    std::shared_lock lock(mutex_);
    if (static_cast<std::size_t>(s) < counts_.size()) return counts_[static_cast<std::size_t>(s)];
  }
  ensure(s);
  std::shared_lock lock(mutex_);
  return counts_[static_cast<std::size_t>(s)];
}

std::uint64_t BallCounter::shell_size(std::int64_t s) const {
  if (s < 0) return 0;
  return count(s) - count(s - 1);
}

std::int64_t BallCounter::inverse(std::uint64_t m) const {
  if (m == 0) throw InvalidArgument("m", "must be at least 1");
  if (kind_ == Kind::Line) return static_cast<std::int64_t>(m / 2);
  std::int64_t hi = 1;
  while (count(hi) < m) hi *= 2;
  std::int64_t lo = 0;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (count(mid) >= m)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::vector<LatticeVector> BallCounter::shell(std::int64_t s) const {
  std::vector<LatticeVector> out;
  if (s < 0) return out;
  walk_ball(r_, d_, s, [&](const LatticeVector& k) {
    if (shell_index(k, r_) == s) out.push_back(k);
  });
  return out;
}

void BallCounter::ensure(std::int64_t s) const {
  std::unique_lock lock(mutex_);
  if (static_cast<std::size_t>(s) < counts_.size()) return;
  if (kind_ == Kind::General) {
    auto have = static_cast<std::int64_t>(counts_.size());
    fill_general(std::max({s, 2 * have, std::int64_t{8}}));
    return;
  }
  for (auto next = static_cast<std::int64_t>(counts_.size()); next <= s; ++next) {
    u128 budget = saturating_pow(static_cast<std::uint64_t>(next), int_r_);
    counts_.push_back(count_integer(d_, budget));
  }
}

std::uint64_t BallCounter::count_integer(int dims, u128 budget) const {
  if (budget == kSaturated || budget > std::numeric_limits<std::uint64_t>::max())
    throw CountOverflow("ball radius too large for exact counting");
  std::uint64_t top = integer_root(budget, int_r_);
  if (dims == 1) return checked_add(checked_mul(2, top), 1);
  auto key = static_cast<std::uint64_t>(budget);
  auto& memo = memo_[static_cast<std::size_t>(dims)];
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::uint64_t total = 0;
  for (std::uint64_t x = 0; x <= top; ++x) {
    std::uint64_t inner = count_integer(dims - 1, budget - saturating_pow(x, int_r_));
    total = checked_add(total, x == 0 ? inner : checked_mul(2, inner));
  }
  memo.emplace(key, total);
  return total;
}

void BallCounter::fill_general(std::int64_t target) const {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(target) + 1, 0);
  walk_ball(r_, d_, target, [&](const LatticeVector& k) {
    std::int64_t sh = shell_index(k, r_);
    if (sh <= target) ++hist[static_cast<std::size_t>(sh)];
  });
  counts_.assign(hist.size(), 0);
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < hist.size(); ++i) counts_[i] = run = checked_add(run, hist[i]);
}

std::shared_ptr<BallCounter> shared_counter(double r, int d) {
  static std::mutex registry_mutex;
  static std::map<std::pair<double, int>, std::shared_ptr<BallCounter>> registry;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[{r, d}];
  if (!slot) slot = std::make_shared<BallCounter>(r, d);
  return slot;
}

std::uint64_t ball_count(std::int64_t s, double r, int d) {
  if (s < 0) throw InvalidArgument("s", "must be nonnegative");
  return shared_counter(r, d)->count(s);
}

std::int64_t inverse_count(std::uint64_t m, double r, int d) { return shared_counter(r, d)->inverse(m); }

std::vector<LatticeVector> enumerate_shell(std::int64_t s, double r, int d) {
  if (s < 0) throw InvalidArgument("s", "must be nonnegative");
  return shared_counter(r, d)->shell(s);
}

}  // namespace wiener
