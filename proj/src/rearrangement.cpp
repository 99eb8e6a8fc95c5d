#include "wiener/rearrangement.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <optional>
#include <string>

#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

namespace wiener {
namespace {

struct Quadrature {
  double value = 0;
  double error = 0;
};

template <class F>
Quadrature integrate_to_infinity(const F& f, double a) {
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  Quadrature q;
  double l1 = 0;
  q.value = rule.integrate(f, a, std::numeric_limits<double>::infinity(), 1e-13, &q.error, &l1);
  return q;
}

// Remainder of sum_{n > S} nu_n g(n) in units of g(S+1).
struct Remainder {
  double lo;
  double hi;
  double quadrature_error;
};

}  // namespace

StepRearrangement::StepRearrangement(std::shared_ptr<const BallCounter> counter, WeightFunction weight)
    : counter_(std::move(counter)), weight_(std::move(weight)) {}

StepRearrangement::StepRearrangement(double r, int d, WeightFunction weight)
    : StepRearrangement(shared_counter(r, d), std::move(weight)) {}

LogValue StepRearrangement::step(std::int64_t s) const {
  return weight_.value(static_cast<double>(std::max<std::int64_t>(s, 1)));
}

LogValue StepRearrangement::at(std::uint64_t j) const {
  if (j == 0) throw InvalidArgument("j", "must be at least 1");
  return step(counter_->inverse(j));
}

LogValue StepRearrangement::head_sum(double sigma, std::uint64_t l) const {
  if (l == 0) return LogValue::zero();
  std::int64_t n = counter_->inverse(l);
  LogSum sum;
  for (std::int64_t s = 0; s < n; ++s) sum.add(step(s).pow(sigma), static_cast<double>(counter_->shell_size(s)));
  sum.add(step(n).pow(sigma), static_cast<double>(l - counter_->count(n - 1)));
  return sum.total();
}

void StepRearrangement::require_summable(double sigma) const {
  if (!(sigma > 0)) throw InvalidArgument("sigma", "tail exponent must be positive");
  double rate = sigma * weight_.asymptotic_slope();
  if (!(rate > counter_->d()))
    throw DivergentSeries("sum of psi^" + format_number(sigma) + " over Z^" + std::to_string(counter_->d()) +
                          " diverges for " + weight_.spec());
}

LogValue StepRearrangement::truncated_tail_sum(double sigma, std::uint64_t l, std::int64_t shell_cap) const {
  std::uint64_t top = counter_->count(shell_cap);
  if (l >= top) return LogValue::zero();
  std::int64_t n = l == 0 ? 0 : counter_->inverse(l);
  if (l > 0 && counter_->count(n) == l) ++n;
  LogSum sum;
  sum.add(step(n).pow(sigma), static_cast<double>(counter_->count(n) - std::max(l, counter_->count(n - 1))));
  for (std::int64_t s = n + 1; s <= shell_cap; ++s)
    sum.add(step(s).pow(sigma), static_cast<double>(counter_->shell_size(s)));
  return sum.total();
}

SeriesValue StepRearrangement::shell_series(double sigma, std::int64_t first, std::uint64_t first_count,
                                            double rel_tol) const {
  require_summable(sigma);
  if (!(rel_tol > 0)) throw InvalidArgument("rel_tol", "must be positive");
  const int d = counter_->d();
  const double r = counter_->r();
  const bool exact_shells = d == 1 || is_inf(r);
  const double mvol = vol_constant(r, d);
  const double gap = ball_gap(r, d);
  const bool geometric_bound = weight_.family() == WeightFamily::SuperExponential;

  auto nu = [d](double t) { return d == 1 ? 2.0 : std::pow(2 * t + 1, d) - std::pow(2 * t - 1, d); };

  auto bounds = [&](std::int64_t S) -> std::optional<Remainder> {
    const double a = static_cast<double>(S + 1);
    const double ref = weight_.log_value(a);
    auto scaled = [&](double t, double log_poly) { return std::exp(log_poly + sigma * (weight_.log_value(t) - ref)); };
    if (exact_shells) {
      if (sigma * weight_.slope_floor(static_cast<double>(S)) < d - 1) return std::nullopt;
      // f is non-increasing from S on: int_a^inf f <= sum_{n>=a} f(n) <= f(a) + int_a^inf f.
      auto f = [&](double t) { return scaled(t, std::log(nu(t))); };
      Quadrature far = integrate_to_infinity(f, a);
      Remainder rem{far.value, far.value + nu(a), far.error};
      if (geometric_bound) {
        double rho = std::exp(-sigma * weight_.log_slope(a));
        double growth = nu(a + 1) / nu(a);
        if (rho * growth < 1) rem.hi = std::min(rem.hi, nu(a) / (1 - rho * growth));
      }
      return rem;
    }
    if (a + 1 - gap <= 1) return std::nullopt;
    if (sigma * weight_.slope_floor(a) < d - 1) return std::nullopt;
    if (sigma * weight_.slope_floor(a + 1) < (d - 1) * (a + 1) / (a - gap)) return std::nullopt;
    const double vs = static_cast<double>(counter_->count(S));
    auto upper = [&](double t) { return scaled(t, std::log(d * mvol) + (d - 1) * std::log(t + gap)); };
    auto lower = [&](double t) { return scaled(t, std::log(d * mvol) + (d - 1) * std::log(t - 1 - gap)); };
    Quadrature up = integrate_to_infinity(upper, a);
    Quadrature low = integrate_to_infinity(lower, a + 1);
    Remainder rem{volume_lower(r, d, a) - vs + low.value, volume_upper(r, d, a) - vs + up.value,
                  up.error + low.error};
    rem.lo = std::max(rem.lo, 0.0);
    return rem;
  };

  LogSum partial;
  partial.add(step(first).pow(sigma), static_cast<double>(first_count));
  std::int64_t S = first;
  std::int64_t next_check = first + 1;
  double previous_error = std::numeric_limits<double>::infinity();
  int stalls = 0;
  for (;;) {
    if (S >= next_check) {
      next_check = first + 2 * (next_check - first);
      if (auto rem = bounds(S)) {
        LogValue scale = weight_.value(static_cast<double>(S + 1)).pow(sigma);
        LogValue value = partial.total() + scale * LogValue::of(0.5 * (rem->lo + rem->hi));
        LogValue error = scale * LogValue::of(0.5 * (rem->hi - rem->lo) + 2 * rem->quadrature_error);
        if (value.is_finite() && error.log() <= value.log() + std::log(rel_tol)) return {value, error, S};
        double rel = error.log() - value.log();
        if (rel >= previous_error && ++stalls > 6)
          throw DivergentSeries("remainder bound stopped decreasing for " + weight_.spec());
        previous_error = rel;
      }
    }
    ++S;
    if (S > 4'000'000 || counter_->count(S) > 2'000'000'000ULL)
      throw ScanCapExceeded("tail sum of " + weight_.spec() + " did not reach tolerance " + format_number(rel_tol));
    partial.add(step(S).pow(sigma), static_cast<double>(counter_->shell_size(S)));
  }
}

SeriesValue StepRearrangement::tail_sum(double sigma, std::uint64_t l, double rel_tol) const {
  if (l == 0) return shell_series(sigma, 0, 1, rel_tol);
  std::int64_t n = counter_->inverse(l);
  return shell_series(sigma, n, counter_->count(n) - l, rel_tol);
}

double rearranged(const StepRearrangement& sr, std::uint64_t j) { return sr.at(j).value(); }

double head_sum(const StepRearrangement& sr, double sigma, std::uint64_t l) {
  if (l == 0) throw InvalidArgument("l", "must be at least 1");
  if (sigma == 0) throw InvalidArgument("sigma", "must be nonzero");
  return sr.head_sum(sigma, l).value();
}

SeriesValue tail_sum(const StepRearrangement& sr, double sigma, std::uint64_t l, double rel_tol) {
  return sr.tail_sum(sigma, l, rel_tol);
}

}  // namespace wiener
