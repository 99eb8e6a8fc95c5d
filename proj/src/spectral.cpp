#include "wiener/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <json.hpp>

#include "wiener/errors.hpp"
#include "wiener/rearrangement.hpp"

namespace wiener {
namespace {

constexpr std::int64_t kGridPointLimit = std::int64_t{1} << 28;

void check_key(const LatticeVector& k, int d) {
  if (static_cast<int>(k.size()) != d) throw InvalidArgument("k", "vector of wrong dimension");
}

// Psi_k in log form.
double log_weight(const WeightFunction& w, const LatticeVector& k, double r) {
  return w.log_value(static_cast<double>(std::max<std::int64_t>(1, shell_index(k, r))));
}

bool even_integer(double p) { return p == std::floor(p) && std::fmod(p, 2.0) == 0; }

}  // namespace

CoefficientField::CoefficientField(int d) : d_(d) {
  if (d < 1) throw InvalidArgument("d", "must be at least 1");
}

void CoefficientField::set(const LatticeVector& k, Complex c) {
  check_key(k, d_);
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidArgument("coefficient", "must be finite");
  if (c == Complex{}) {
    entries_.erase(k);
    return;
  }
  entries_[k] = c;
}

Complex CoefficientField::at(const LatticeVector& k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? Complex{} : it->second;
}

CoefficientField CoefficientField::scaled(Complex c) const {
  CoefficientField out(d_);
  for (const auto& [k, v] : entries_) out.set(k, v * c);
  return out;
}

CoefficientField CoefficientField::without(const IndexSet& gamma) const {
  CoefficientField out = *this;
  for (const auto& k : gamma) out.entries_.erase(k);
  return out;
}

std::int64_t CoefficientField::max_coordinate() const {
  std::int64_t out = 0;
  for (const auto& [k, v] : entries_)
    for (auto x : k) out = std::max(out, x < 0 ? -x : x);
  return out;
}

std::string field_to_json(const CoefficientField& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, v] : f.entries()) arr.push_back({k, v.real(), v.imag()});
  return arr.dump();
}

CoefficientField field_from_json(const std::string& text, int d) {
  CoefficientField out(d);
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("field", e.what());
  }
  if (!arr.is_array()) throw ParseError("field", "expected an array of [k, re, im]");
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 3 || !item[0].is_array())
      throw ParseError("field", "expected [k, re, im], got " + item.dump());
    out.set(item[0].get<LatticeVector>(), {item[1].get<double>(), item[2].get<double>()});
  }
  return out;
}

double sp_norm(const CoefficientField& f, double p) {
  require_positive_extended(p, "p");
  double top = 0;
  for (const auto& [k, v] : f.entries()) top = std::max(top, std::abs(v));
  if (top == 0 || is_inf(p)) return top;
  long double sum = 0;
  for (const auto& [k, v] : f.entries()) sum += std::pow(static_cast<long double>(std::abs(v) / top), p);
  return top * static_cast<double>(std::pow(sum, 1.0L / p));
}

double class_norm(const CoefficientField& f, const WeightFunction& w, const ClassParams& params) {
  params.validate();
  if (f.dim() != params.d) throw InvalidArgument("d", "field dimension differs from class dimension");
  if (f.empty()) return 0;
  if (is_inf(params.q)) {
    double best = -kInf;
    for (const auto& [k, v] : f.entries()) best = std::max(best, std::log(std::abs(v)) - log_weight(w, k, params.r));
    return std::exp(best);
  }
  LogSum sum;
  for (const auto& [k, v] : f.entries())
    sum.add(LogValue::from_log(params.q * (std::log(std::abs(v)) - log_weight(w, k, params.r))));
  return sum.total().pow(1 / params.q).value();
}

std::vector<RankedTerm> greedy_order(const CoefficientField& f, double r) {
  require_positive_extended(r, "r");
  struct Row {
    double modulus;
    std::int64_t shell;
    const LatticeVector* k;
  };
  std::vector<Row> rows;
  rows.reserve(f.size());
  for (const auto& [k, v] : f.entries()) rows.push_back({std::abs(v), shell_index(k, r), &k});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.modulus != b.modulus) return a.modulus > b.modulus;
    if (a.shell != b.shell) return a.shell < b.shell;
    return *a.k < *b.k;
  });
  std::vector<RankedTerm> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back({*row.k, row.modulus});
  return out;
}

IndexSet greedy_set(const CoefficientField& f, std::uint64_t m, double r) {
  IndexSet out;
  for (const auto& term : greedy_order(f, r)) {
    if (out.size() == m) break;
    out.insert(term.k);
  }
  return out;
}

double greedy_residual(const CoefficientField& f, std::uint64_t m, const NormSpace& space, double r) {
  CoefficientField rest = f.without(greedy_set(f, m, r));
  if (const auto* s = std::get_if<SequenceNorm>(&space)) return sp_norm(rest, s->p);
  const auto& g = std::get<GridNorm>(space);
  if (g.n > 0) return lp_grid_norm(rest, g.p, g.n);
  return lp_norm_estimate(rest, g.p).value;
}

double lp_grid_norm(const CoefficientField& f, double p, std::int64_t n) {
  require_positive_extended(p, "p");
  if (p < 1) throw InvalidArgument("p", "grid norms need p >= 1");
  if (n < 1) throw InvalidArgument("n", "grid size must be positive");
  const int d = f.dim();
  std::int64_t points = 1;
  for (int i = 0; i < d; ++i) {
    if (points > kGridPointLimit / n) throw GuardExceeded("grid of " + std::to_string(n) + "^" + std::to_string(d) +
                                                          " points exceeds the memory guard");
    points *= n;
  }
  if (f.empty()) return 0;

  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    double angle = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    roots[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<std::int64_t> freq;  // k_i mod n, term-major
  std::vector<Complex> coef;
  for (const auto& [k, v] : f.entries()) {
    for (auto x : k) freq.push_back(((x % n) + n) % n);
    coef.push_back(v);
  }
  const std::size_t terms = coef.size();

  std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
  long double acc = 0;
  double peak = 0;
  for (std::int64_t pt = 0; pt < points; ++pt) {
    Complex value{};
    for (std::size_t t = 0; t < terms; ++t) {
      std::int64_t phase = 0;
      for (int i = 0; i < d; ++i) phase += freq[t * d + i] * idx[static_cast<std::size_t>(i)] % n;
      value += coef[t] * roots[static_cast<std::size_t>(phase % n)];
    }
    double mod = std::abs(value);
    if (is_inf(p))
      peak = std::max(peak, mod);
    else
      acc += p == 2 ? static_cast<long double>(mod) * mod : std::pow(static_cast<long double>(mod), p);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < n) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  if (is_inf(p)) return peak;
  return static_cast<double>(std::pow(acc / static_cast<long double>(points), 1.0L / p));
}

std::int64_t default_grid_size(const CoefficientField& f) { return 8 * (2 * f.max_coordinate() + 1); }

GridEstimate lp_norm_estimate(const CoefficientField& f, double p) {
  std::int64_t n = default_grid_size(f);
  double base = lp_grid_norm(f, p, n);
  // |f|^p is itself a trigonometric polynomial here, so the rule is exact.
  if (!is_inf(p) && even_integer(p) && static_cast<double>(n) > p * static_cast<double>(f.max_coordinate()))
    return {base, 0, n};
  double fine = lp_grid_norm(f, p, 2 * n);
  return {fine, std::abs(fine - base), 2 * n};
}

ExtremalKind parse_extremal(const std::string& name) {
  if (name == "h1") return ExtremalKind::H1;
  if (name == "h2") return ExtremalKind::H2;
  if (name == "h3") return ExtremalKind::H3;
  if (name == "h4") return ExtremalKind::H4;
  throw InvalidArgument("kind", "unknown extremal function '" + name + "' (h1, h2, h3, h4)");
}

CoefficientField extremal(ExtremalKind kind, const ClassParams& params, const WeightFunction& w, std::uint64_t m,
                          const IndexSet* gamma) {
  params.validate();
  const int d = params.d;
  StepRearrangement sr(params.r, d, w);
  const auto& counter = sr.counter();
  CoefficientField out(d);

  auto flat_level = [&](const std::vector<std::pair<std::int64_t, std::uint64_t>>& shells) {
    if (is_inf(params.q)) {
      LogValue low = LogValue::infinity();
      for (const auto& [s, count] : shells) low = std::min(low, sr.step(s));
      return low;
    }
    LogSum sum;
    for (const auto& [s, count] : shells) sum.add(sr.step(s).pow(-params.q), static_cast<double>(count));
    return sum.total().pow(-1 / params.q);
  };

  switch (kind) {
    case ExtremalKind::H1: {
      if (m == 0) throw InvalidArgument("m", "must be at least 1");
      const double target = 2.0 * static_cast<double>(m) / vol_constant(params.r, d);
      auto radius = static_cast<std::int64_t>(std::floor(std::pow(target, 1.0 / d)));
      while (std::pow(static_cast<double>(radius + 1), d) <= target * (1 + 1e-12)) ++radius;
      while (radius > 0 && std::pow(static_cast<double>(radius), d) > target * (1 + 1e-12)) --radius;
      std::vector<std::pair<std::int64_t, std::uint64_t>> shells;
      for (std::int64_t s = 0; s <= radius; ++s) shells.emplace_back(s, counter.shell_size(s));
      double level = flat_level(shells).value();
      for (std::int64_t s = 0; s <= radius; ++s)
        for (const auto& k : counter.shell(s)) out.set(k, level);
      return out;
    }
    case ExtremalKind::H3:
      if (d != 1) throw InvalidArgument("kind", "h3 is defined for d = 1 only");
      [[fallthrough]];
    case ExtremalKind::H2: {
      IndexSet support = optimal_index_set(params.r, d, m + 1);
      std::map<std::int64_t, std::uint64_t> per_shell;
      for (const auto& k : support) ++per_shell[shell_index(k, params.r)];
      double level = flat_level({per_shell.begin(), per_shell.end()}).value();
      for (const auto& k : support) out.set(k, level);
      return out;
    }
    case ExtremalKind::H4: {
      IndexSet fallback;
      if (!gamma) {
        fallback = optimal_index_set(params.r, d, m);
        gamma = &fallback;
      }
      for (std::int64_t s = 0;; ++s) {
        for (const auto& k : counter.shell(s)) {
          if (gamma->count(k)) continue;
          out.set(k, sr.step(s).value());
          return out;
        }
      }
    }
  }
  throw InvalidArgument("kind", "unsupported extremal function");
}

}  // namespace wiener
