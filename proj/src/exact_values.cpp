#include "wiener/exact_values.hpp"

#include <cmath>
#include <map>
#include <string>

#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

namespace wiener {
namespace {

std::map<std::int64_t, std::uint64_t> shell_hits(const IndexSet& gamma, double r, int d) {
  std::map<std::int64_t, std::uint64_t> hits;
  for (const auto& k : gamma) {
    if (static_cast<int>(k.size()) != d) throw InvalidArgument("gamma", "vector of wrong dimension");
    ++hits[shell_index(k, r)];
  }
  return hits;
}

std::uint64_t hits_at(const std::map<std::int64_t, std::uint64_t>& hits, std::int64_t s) {
  auto it = hits.find(s);
  return it == hits.end() ? 0 : it->second;
}

// log of (l-m)^(1/p) S^(-1/q) with S = exp(log_a) * y.
double scan_objective(double p, double q, double x, double log_a, double y) {
  return std::log(x) / p - (log_a + std::log(y)) / q;
}

}  // namespace

void ClassParams::validate() const {
  require_positive_extended(p, "p");
  require_positive_extended(q, "q");
  require_positive_extended(r, "r");
  if (d < 1) throw InvalidArgument("d", "must be at least 1");
}

double ClassParams::tail_exponent() const {
  if (!tail_branch()) throw InvalidArgument("p", "tail exponent needs p < q");
  return is_inf(q) ? p : p * q / (q - p);
}

LogValue masked_rearranged(const StepRearrangement& sr, const IndexSet& gamma, std::uint64_t j) {
  if (j == 0) throw InvalidArgument("j", "must be at least 1");
  const auto& counter = sr.counter();
  auto hits = shell_hits(gamma, counter.r(), counter.d());
  for (std::int64_t s = 0;; ++s) {
    std::uint64_t avail = counter.shell_size(s) - hits_at(hits, s);
    if (j <= avail) return sr.step(s);
    j -= avail;
  }
}

LogValue best_by_set(const ClassParams& params, const WeightFunction& w, const IndexSet& gamma,
                     const EvalOptions& opts) {
  params.validate();
  StepRearrangement sr(params.r, params.d, w);
  const auto& counter = sr.counter();
  auto hits = shell_hits(gamma, params.r, params.d);
  std::int64_t last_hit = hits.empty() ? -1 : hits.rbegin()->first;
  std::int64_t cap = opts.shell_cap.value_or(std::numeric_limits<std::int64_t>::max());

  if (!params.tail_branch()) {
    for (std::int64_t s = 0; s <= cap; ++s)
      if (counter.shell_size(s) > hits_at(hits, s)) return sr.step(s);
    return LogValue::zero();
  }
  double sigma = params.tail_exponent();
  LogSum sum;
  for (std::int64_t s = 0; s <= std::min(last_hit, cap); ++s)
    sum.add(sr.step(s).pow(sigma), static_cast<double>(counter.shell_size(s) - hits_at(hits, s)));
  if (opts.shell_cap) {
    if (last_hit < cap) sum.add(sr.truncated_tail_sum(sigma, counter.count(last_hit), cap));
  } else {
    std::int64_t next = last_hit + 1;
    sum.add(sr.shell_series(sigma, next, counter.shell_size(next), opts.rel_tol).value);
  }
  return sum.total().pow(1 / sigma);
}

IndexSet optimal_index_set(double r, int d, std::uint64_t m) {
  IndexSet out;
  auto counter = shared_counter(r, d);
  for (std::int64_t s = 0; out.size() < m; ++s)
    for (auto& k : counter->shell(s)) {
      if (out.size() == m) break;
      out.insert(std::move(k));
    }
  return out;
}

LogValue basis_width(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts) {
  params.validate();
  StepRearrangement sr(params.r, params.d, w);
  if (!params.tail_branch()) {
    if (opts.shell_cap && m + 1 > sr.counter().count(*opts.shell_cap)) return LogValue::zero();
    return sr.at(m + 1);
  }
  double sigma = params.tail_exponent();
  LogValue tail = opts.shell_cap ? sr.truncated_tail_sum(sigma, m, *opts.shell_cap)
                                 : sr.tail_sum(sigma, m, opts.rel_tol).value;
  return tail.pow(1 / sigma);
}

WidthResult widths(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts) {
  LogValue value = basis_width(params, w, m, opts);
  return {value, value, optimal_index_set(params.r, params.d, m)};
}

BalancePoint find_lm(const StepRearrangement& sr, double q, std::uint64_t m, std::int64_t scan_cap) {
  if (!(q > 0) || is_inf(q)) throw InvalidArgument("q", "balance point needs finite q > 0");
  const auto& counter = sr.counter();
  const double limit = sr.weight().limit_value();
  LogSum head;
  for (std::int64_t n = 0; n <= scan_cap; ++n) {
    head.add(sr.step(n).pow(-q), static_cast<double>(counter.shell_size(n)));
    std::uint64_t vn = counter.count(n);
    if (vn <= m) continue;
    LogValue total = head.total();
    double average = total.log() - std::log(static_cast<double>(vn - m));
    double next = -q * sr.step(n + 1).log();
    if (average < next) {
      double here = -q * sr.step(n).log();
      if (here > average + 1e-12 * std::max(1.0, std::abs(average)))
        throw Error("balance point check failed at l=" + std::to_string(vn));
      return {vn, total};
    }
    if (limit > 0 && sr.step(n + 1).log() <= std::log(limit) + 1e-15) return {std::nullopt, total};
  }
  throw ScanCapExceeded("balance point not found within " + std::to_string(scan_cap) + " shells");
}

LogValue scan_tail_bound(const StepRearrangement& sr, double p, double q, std::uint64_t m, std::uint64_t l_prime,
                         LogValue head_at_l_prime) {
  const double kappa = p / q;
  const double log_a = -q * sr.at(l_prime + 1).log();
  const double ratio = std::exp(head_at_l_prime.log() - log_a);
  const double x0 = static_cast<double>(l_prime - m);
  const double u = ratio - x0;
  if (p == q) {
    if (u > 0) return LogValue::from_log(-log_a / p);
    return LogValue::from_log(scan_objective(p, q, x0, log_a, ratio));
  }
  if (u > 0) {
    double xs = u / (kappa - 1);
    if (xs > x0) return LogValue::from_log(scan_objective(p, q, xs, log_a, kappa * xs));
  }
  return LogValue::from_log(scan_objective(p, q, x0, log_a, ratio));
}

SigmaResult sigma_m(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts) {
  params.validate();
  StepRearrangement sr(params.r, params.d, w);
  const auto& counter = sr.counter();
  const double p = params.p, q = params.q;

  if (is_inf(p) && is_inf(q)) return {sr.at(m + 1), SigmaCase::Step, std::nullopt, false};
  if (is_inf(p)) return {sr.head_sum(-q, m + 1).pow(-1 / q), SigmaCase::FlatTop, m + 1, false};
  if (p < q && is_inf(q)) return {sr.tail_sum(p, m, opts.rel_tol).value.pow(1 / p), SigmaCase::TailP, std::nullopt, false};

  if (p < q) {
    double sigma = params.tail_exponent();
    sr.require_summable(sigma);
    BalancePoint bal = find_lm(sr, q, m, opts.scan_cap);
    if (!bal.l) throw DivergentSeries("balance point at infinity for " + w.spec());
    std::uint64_t l = *bal.l;
    LogValue flat = LogValue::from_log(q / (q - p) * std::log(static_cast<double>(l - m)) +
                                       p / (p - q) * bal.head.log());
    LogValue tail = sr.tail_sum(sigma, l, opts.rel_tol).value;
    return {(flat + tail).pow((q - p) / (p * q)), SigmaCase::Balance, l, false};
  }

  // q <= p < inf: supremum over l > m, shell by shell.
  const double kappa = p / q;
  const double limit = w.limit_value();
  LogSum head;
  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_l = 0;
  for (std::int64_t n = 0; n <= opts.scan_cap; ++n) {
    const double log_a = -q * sr.step(n).log();
    const std::uint64_t v_prev = counter.count(n - 1);
    const std::uint64_t v_n = counter.count(n);
    if (v_n > m) {
      const double ratio = head.empty() ? 0.0 : std::exp(head.total().log() - log_a);
      const std::uint64_t lo = std::max(v_prev + 1, m + 1);
      auto consider = [&](std::uint64_t l) {
        if (l < lo || l > v_n) return;
        double y = ratio + static_cast<double>(l - v_prev);
        double f = scan_objective(p, q, static_cast<double>(l - m), log_a, y);
        if (f > best || (f == best && l < best_l)) {
          best = f;
          best_l = l;
        }
      };
      consider(lo);
      consider(v_n);
      double u = ratio - static_cast<double>(v_prev) + static_cast<double>(m);
      if (kappa > 1 && u > 0) {
        double xs = u / (kappa - 1) + static_cast<double>(m);
        if (xs >= static_cast<double>(lo) && xs <= static_cast<double>(v_n)) {
          consider(static_cast<std::uint64_t>(std::floor(xs)));
          consider(static_cast<std::uint64_t>(std::ceil(xs)));
        }
      }
    }
    head.add(sr.step(n).pow(-q), static_cast<double>(counter.shell_size(n)));
    if (v_n <= m) continue;
    LogValue bound = scan_tail_bound(sr, p, q, m, v_n, head.total());
    if (bound.log() <= best + 1e-13 * std::max(1.0, std::abs(best)))
      return {LogValue::from_log(best), SigmaCase::SupScan, best_l, false};
    if (p == q && limit > 0 && sr.step(n + 1).log() <= std::log(limit) + 1e-15) {
      if (std::log(limit) > best) return {LogValue::of(limit), SigmaCase::SupScan, std::nullopt, true};
      return {LogValue::from_log(best), SigmaCase::SupScan, best_l, false};
    }
  }
  throw ScanCapExceeded("supremum not certified within " + std::to_string(opts.scan_cap) + " shells for " + w.spec());
}

}  // namespace wiener
