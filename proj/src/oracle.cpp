#include "wiener/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

namespace wiener {
namespace {

// Calls visit(indices) for every m-subset of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t m, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// sum_{k >= a} k^-e for e > 1, a >= 2.
long double hurwitz_tail(long double a, long double e) {
  static constexpr long double kBernoulli[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730};
  long double sum = std::pow(a, 1 - e) / (e - 1) + std::pow(a, -e) / 2;
  long double rising = e;  // e (e+1) ... (e+2j-2)
  long double factorial = 2;
  for (int j = 1; j <= 6; ++j) {
    sum += kBernoulli[j - 1] / factorial * rising * std::pow(a, -e - 2 * j + 1);
    rising *= (e + 2 * j - 1) * (e + 2 * j);
    factorial *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

// sum over |k|_r > shell_cap of Psi_k^sigma.
long double reference_tail(const WeightFunction& w, double r, int d, std::int64_t shell_cap, double sigma) {
  if (w.spec().rfind("pow:", 0) == 0) {
    const double e = sigma * w.params().at("s");
    if (e <= d) throw DivergentSeries("weight sum diverges for " + w.spec() + " at exponent " + format_number(sigma));
    if (d != 1) throw GuardExceeded("no reference tail for power weights in dimension " + std::to_string(d));
    return 2 * hurwitz_tail(static_cast<long double>(shell_cap + 1), e);
  }
  auto counter = shared_counter(r, d);
  long double total = 0;
  int quiet = 0;
  for (std::int64_t s = shell_cap + 1; s <= shell_cap + 100000; ++s) {
    long double term = static_cast<long double>(counter->shell_size(s)) *
                       std::exp(static_cast<long double>(sigma) * w.log_value(static_cast<double>(s)));
    total += term;
    quiet = term <= 1e-20L * total ? quiet + 1 : 0;
    if (quiet >= 3 || total == 0) return total;
  }
  throw GuardExceeded("reference tail of " + w.spec() + " did not settle");
}

}  // namespace

TruncatedUniverse TruncatedUniverse::build(double r, int d, std::int64_t shell_cap) {
  if (shell_cap < 0) throw InvalidArgument("shell-cap", "must be nonnegative");
  if (d < 1) throw InvalidArgument("d", "must be at least 1");
  TruncatedUniverse out;
  out.shell_cap = shell_cap;
  std::vector<std::pair<std::int64_t, LatticeVector>> found;
  LatticeVector k(static_cast<std::size_t>(d), -shell_cap);
  while (true) {
    std::int64_t s = shell_index(k, r);
    if (s <= shell_cap) found.emplace_back(s, k);
    int i = d - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == shell_cap) k[static_cast<std::size_t>(i--)] = -shell_cap;
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
  std::sort(found.begin(), found.end());
  for (auto& [s, v] : found) out.points.push_back(std::move(v));
  return out;
}

SubsetResult brute_best_subset(const CoefficientField& f, std::uint64_t m, double p) {
  if (f.size() > 14 || m > 6) throw GuardExceeded("subset search limited to support <= 14 and m <= 6");
  if (m > f.size()) throw InvalidArgument("m", "exceeds the support size");
  std::vector<LatticeVector> keys;
  for (const auto& [k, v] : f.entries()) keys.push_back(k);
  SubsetResult best;
  bool have = false;
  for_each_subset(keys.size(), m, [&](const std::vector<std::size_t>& idx) {
    IndexSet gamma;
    for (auto i : idx) gamma.insert(keys[i]);
    double value = sp_norm(f.without(gamma), p);
    if (!have || value < best.value) {
      best = {std::move(gamma), value};
      have = true;
    }
  });
  return best;
}

BruteWidth brute_width(const ClassParams& params, const WeightFunction& w, std::uint64_t m, std::int64_t shell_cap) {
  params.validate();
  TruncatedUniverse uni = TruncatedUniverse::build(params.r, params.d, shell_cap);
  if (uni.points.size() > 20 || m > 5) throw GuardExceeded("width search limited to V <= 20 and m <= 5");
  if (m > uni.points.size()) throw InvalidArgument("m", "exceeds the truncated universe");
  EvalOptions opts;
  opts.shell_cap = shell_cap;
  BruteWidth best;
  bool have = false;
  for_each_subset(uni.points.size(), m, [&](const std::vector<std::size_t>& idx) {
    IndexSet gamma;
    for (auto i : idx) gamma.insert(uni.points[i]);
    LogValue value = best_by_set(params, w, gamma, opts);
    if (!have || value < best.value) {
      best = {value, std::move(gamma)};
      have = true;
    }
  });
  return best;
}

ScanAudit sup_scan_audit(const StepRearrangement& sr, const ClassParams& params, std::uint64_t m,
                         std::uint64_t l_cap) {
  params.validate();
  const double p = params.p, q = params.q;
  if (is_inf(p) || q > p) throw InvalidArgument("p", "sup scan needs q <= p < inf");
  if (l_cap <= m) throw InvalidArgument("l-cap", "must exceed m");
  LogSum head;
  for (std::uint64_t j = 1; j <= m; ++j) head.add(sr.at(j).pow(-q));
  ScanAudit out;
  double best = -kInf;
  for (std::uint64_t l = m + 1; l <= l_cap; ++l) {
    head.add(sr.at(l).pow(-q));
    double value = std::log(static_cast<double>(l - m)) / p - head.total().log() / q;
    if (value > best) {
      best = value;
      out.l = l;
    }
  }
  out.value = LogValue::from_log(best);
  LogValue bound = scan_tail_bound(sr, p, q, m, l_cap, head.total());
  out.certified = bound.log() <= best + 1e-13 * std::max(1.0, std::abs(best));
  const double limit = sr.weight().limit_value();
  if (!out.certified && p == q && limit > 0 && sr.at(l_cap + 1).log() <= std::log(limit) + 1e-15) {
    out.certified = true;
    if (std::log(limit) > best) {
      out.value = LogValue::of(limit);
      out.l.reset();
    }
  }
  return out;
}

LogValue brute_sigma(const ClassParams& params, const WeightFunction& w, std::uint64_t m,
                     const SigmaOracleOptions& opts) {
  params.validate();
  const double p = params.p, q = params.q;
  const int d = params.d;
  std::int64_t cap = opts.shell_cap;
  if (cap <= 0) {
    cap = 1;
    while (TruncatedUniverse::build(params.r, d, cap).points.size() < 2 * opts.l_cap) ++cap;
  }
  TruncatedUniverse uni = TruncatedUniverse::build(params.r, d, cap);
  std::vector<double> log_a;
  for (const auto& k : uni.points)
    log_a.push_back(w.log_value(static_cast<double>(std::max<std::int64_t>(1, shell_index(k, params.r)))));
  std::sort(log_a.begin(), log_a.end(), std::greater<>());
  const std::size_t n = log_a.size();
  if (m + 1 > n) throw GuardExceeded("m too large for the truncated universe");
  auto entry = [&](std::size_t j) { return static_cast<long double>(log_a[j - 1]); };  // 1-based

  // Suffix sums of entry^sigma over j >= i, tail included.
  auto suffix_sums = [&](double sigma) {
    std::vector<long double> suf(n + 2, 0);
    suf[n + 1] = reference_tail(w, params.r, d, cap, sigma);
    for (std::size_t j = n; j >= 1; --j) suf[j] = suf[j + 1] + std::exp(sigma * entry(j));
    return suf;
  };

  if (is_inf(q)) {
    if (is_inf(p)) return LogValue::from_log(static_cast<double>(entry(m + 1)));
    auto suf = suffix_sums(p);
    return LogValue::of(static_cast<double>(suf[m + 1])).pow(1 / p);
  }

  const std::size_t l_top = std::min<std::size_t>(n, opts.l_cap);
  std::vector<long double> head(n + 1, 0);
  for (std::size_t j = 1; j <= n; ++j) head[j] = head[j - 1] + std::exp(-q * entry(j));

  double best = -kInf;
  if (!params.tail_branch()) {
    for (std::size_t l = m + 1; l <= l_top; ++l) {
      double value = is_inf(p) ? 0.0 : std::log(static_cast<double>(l - m)) / p;
      best = std::max(best, value - static_cast<double>(std::log(head[l])) / q);
    }
    return LogValue::from_log(best);
  }

  const double sigma = p * q / (q - p);
  auto suf = suffix_sums(sigma);
  for (std::size_t l = m + 1; l <= l_top; ++l) {
    const long double tail = suf[l + 1];
    if (tail == 0) {
      best = std::max(best, std::log(static_cast<double>(l - m)) / p - static_cast<double>(std::log(head[l])) / q);
      continue;
    }
    // Split of the unit budget between the flat block and the tail.
    const long double log_rho = q / (q - p) * std::log(static_cast<long double>(l - m)) -
                                p / (q - p) * std::log(head[l]) - std::log(tail);
    const long double log_t = -std::log1p(std::exp(-log_rho));
    const long double log_rest = -std::log1p(std::exp(log_rho));
    const long double log_c = (log_t - std::log(head[l])) / q;
    const long double log_mu = (log_rest - std::log(tail)) / q;
    auto log_b = [&](std::size_t j) { return log_mu + q / (q - p) * entry(j); };
    // Greedy removes the m largest of {c (l times), b_{l+1} >= b_{l+2} >= ...}.
    std::size_t taken_c = 0, taken_b = 0;
    for (std::uint64_t step = 0; step < m; ++step) {
      bool b_left = l + 1 + taken_b <= n;
      if (taken_c < l && (!b_left || log_c >= log_b(l + 1 + taken_b)))
        ++taken_c;
      else
        ++taken_b;
    }
    long double residual = static_cast<long double>(l - taken_c) * std::exp(p * log_c) +
                           std::exp(p * log_mu) * suf[l + 1 + taken_b];
    best = std::max(best, static_cast<double>(std::log(residual)) / p);
  }
  return LogValue::from_log(best);
}

}  // namespace wiener
