#include "wiener/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

namespace wiener {
namespace {

constexpr double kE = std::numbers::e;

struct Power {
  double s;
  double log_value(double t) const { return -s * std::log(t); }
  double slope(double t) const { return s / t; }
  double floor(double) const { return s; }
  double asymptotic() const { return s; }
  double limit() const { return 0; }
};

struct PowerLog {
  double s, eps;
  double log_value(double t) const { return -s * std::log(t) + eps * std::log(std::log(t + kE)); }
  double slope(double t) const { return s / t - eps / ((t + kE) * std::log(t + kE)); }
  double floor(double t) const { return eps <= 0 ? s : s - eps / std::log(t + kE); }
  double asymptotic() const { return s; }
  double limit() const { return 0; }
};

struct Stretched {
  double a, s;
  double log_value(double t) const { return -a * std::pow(t, s); }
  double slope(double t) const { return a * s * std::pow(t, s - 1); }
  double floor(double t) const { return a * s * std::pow(t, s); }
  double asymptotic() const { return kInf; }
  double limit() const { return 0; }
};

struct Constant {
  double c;
  double log_value(double) const { return std::log(c); }
  double slope(double) const { return 0; }
  double floor(double) const { return 0; }
  double asymptotic() const { return 0; }
  double limit() const { return c; }
};

struct Table {
  std::vector<double> logs;  // log psi(1), log psi(2), ...
  double tail_rate;          // per-unit log decay beyond the last sample

  double n() const { return static_cast<double>(logs.size()); }
  double log_value(double t) const {
    if (t >= n()) return logs.back() - (t - n()) * tail_rate;
    auto i = static_cast<std::size_t>(std::floor(t)) - 1;
    double frac = t - std::floor(t);
    return logs[i] + frac * (logs[i + 1] - logs[i]);
  }
  double segment_rate(std::size_t i) const {
    return i + 1 < logs.size() ? logs[i] - logs[i + 1] : tail_rate;
  }
  double slope(double t) const {
    if (t >= n()) return tail_rate;
    return segment_rate(static_cast<std::size_t>(std::floor(t)) - 1);
  }
  double floor(double t) const {
    double best = std::max(t, n()) * tail_rate;
    for (auto i = static_cast<std::size_t>(std::max(0.0, std::floor(t) - 1)); i + 1 < logs.size(); ++i)
      best = std::min(best, std::max(t, static_cast<double>(i + 1)) * segment_rate(i));
    return best;
  }
  double asymptotic() const { return tail_rate > 0 ? kInf : 0; }
  double limit() const { return tail_rate > 0 ? 0 : std::exp(logs.back()); }
};

using Shape = std::variant<Power, PowerLog, Stretched, Constant, Table>;

std::string spec_string(const std::string& name, const std::vector<std::pair<std::string, double>>& kv) {
  std::string out = name;
  char sep = ':';
  for (const auto& [k, v] : kv) {
    out += sep;
    out += k + "=" + format_number(v);
    sep = ',';
  }
  return out;
}

}  // namespace

struct WeightFunction::Model {
  Shape shape;
  WeightFamily family;
  FamilyWindow window;
  std::string spec;
  std::map<std::string, double> params;

  double log_value(double t) const {
    t = std::max(t, 1.0);
    return std::visit([t](const auto& s) { return s.log_value(t); }, shape);
  }
  double slope(double t) const {
    t = std::max(t, 1.0);
    return std::visit([t](const auto& s) { return s.slope(t); }, shape);
  }
};

namespace {

[[noreturn]] void fail(const std::string& spec, const std::string& what, double t) {
  throw FamilyMismatch(spec + ": " + what + " near t=" + format_number(t), t);
}

// Grid verification of the declared family; fills the empirical window.
void verify(WeightFunction::Model& m, double horizon = 64) {
  std::vector<double> grid;
  for (double t = 1; t <= horizon; t += 0.5) grid.push_back(t);
  auto tol = [](double x) { return 1e-12 * std::max(1.0, std::abs(x)); };

  for (std::size_t i = 0; i < grid.size(); ++i) {
    double l = m.log_value(grid[i]);
    if (!std::isfinite(l)) fail(m.spec, "weight is not positive and finite", grid[i]);
    if (m.slope(grid[i]) < -tol(0)) fail(m.spec, "derivative is positive", grid[i]);
    if (i > 0 && l > m.log_value(grid[i - 1]) + tol(l)) fail(m.spec, "weight increases", grid[i]);
  }

  auto rate = [&](double t) { return 1 / m.slope(t); };
  auto alpha_at = [&](double t) { return rate(t) / t; };
  bool convex_family = m.family == WeightFamily::SubExponential || m.family == WeightFamily::Exponential ||
                       m.family == WeightFamily::SuperExponential;

  if (m.family == WeightFamily::Doubling) {
    for (double t : grid) {
      double gap = m.log_value(t) - m.log_value(2 * t);
      if (!(gap > 1e-14)) fail(m.spec, "doubling ratio psi(t)/psi(2t) is not above 1", t);
      m.window.doubling_max = std::max(m.window.doubling_max, std::exp(gap));
    }
  }
  if (convex_family) {
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      double mid = m.log_value(grid[i]);
      double bend = std::expm1(m.log_value(grid[i - 1]) - mid) + std::expm1(m.log_value(grid[i + 1]) - mid);
      if (bend < -1e-9) fail(m.spec, "weight is not convex", grid[i]);
    }
    for (double t : grid)
      if (!(m.slope(t) > 0)) fail(m.spec, "derivative vanishes", t);
    m.window.rate_min = m.window.rate_max = rate(grid.front());
    for (double t : grid) {
      m.window.rate_min = std::min(m.window.rate_min, rate(t));
      m.window.rate_max = std::max(m.window.rate_max, rate(t));
    }
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double t0 = grid[i - 1], t1 = grid[i];
    switch (m.family) {
      case WeightFamily::SubExponential:
        if (rate(t1) < rate(t0) * (1 - 1e-12)) fail(m.spec, "psi/|psi'| decreases", t1);
        [[fallthrough]];
      case WeightFamily::Exponential:
        if (alpha_at(t1) > alpha_at(t0) * (1 + 1e-12)) fail(m.spec, "alpha increases", t1);
        break;
      case WeightFamily::SuperExponential:
        if (rate(t1) > rate(t0) * (1 + 1e-12)) fail(m.spec, "psi/|psi'| increases", t1);
        break;
      default:
        break;
    }
  }
  if (convex_family && !(alpha_at(horizon) < alpha_at(1))) fail(m.spec, "alpha does not decay", horizon);
  if (m.family == WeightFamily::Exponential && m.window.rate_max > 1e3 * m.window.rate_min)
    fail(m.spec, "psi/|psi'| is not bounded", horizon);
  if (m.family == WeightFamily::SuperExponential && !(rate(horizon) < rate(1)))
    fail(m.spec, "psi/|psi'| does not decay", horizon);
}

WeightFunction::Model make_model(Shape shape, WeightFamily family, std::string spec,
                                 std::map<std::string, double> params) {
  WeightFunction::Model m{std::move(shape), family, {}, std::move(spec), std::move(params)};
  verify(m);
  return m;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidArgument(field, what);
}

}  // namespace

std::string_view family_name(WeightFamily f) {
  switch (f) {
    case WeightFamily::Doubling: return "doubling";
    case WeightFamily::SubExponential: return "subexponential";
    case WeightFamily::Exponential: return "exponential";
    case WeightFamily::SuperExponential: return "superexponential";
    case WeightFamily::Monotone: return "monotone";
  }
  return "unknown";
}

WeightFunction WeightFunction::power(double s) {
  require(s > 0 && std::isfinite(s), "s", "power exponent must be positive");
  return WeightFunction(std::make_shared<Model>(
      make_model(Power{s}, WeightFamily::Doubling, spec_string("pow", {{"s", s}}), {{"s", s}})));
}

WeightFunction WeightFunction::power_log(double s, double eps) {
  require(s >= 0 && std::isfinite(s), "s", "power exponent must be nonnegative");
  require(std::isfinite(eps), "eps", "log exponent must be finite");
  require(s > 0 || eps < 0, "eps", "weight must decay");
  return WeightFunction(std::make_shared<Model>(make_model(PowerLog{s, eps}, WeightFamily::Doubling,
                                                           spec_string("powlog", {{"s", s}, {"eps", eps}}),
                                                           {{"s", s}, {"eps", eps}})));
}

WeightFunction WeightFunction::stretched_exp(double a, double s) {
  require(a > 0 && std::isfinite(a), "a", "rate must be positive");
  require(s > 0 && std::isfinite(s), "s", "exponent must be positive");
  WeightFamily fam = s < 1 ? WeightFamily::SubExponential
                           : (s == 1 ? WeightFamily::Exponential : WeightFamily::SuperExponential);
  return WeightFunction(std::make_shared<Model>(
      make_model(Stretched{a, s}, fam, spec_string("exp", {{"a", a}, {"s", s}}), {{"a", a}, {"s", s}})));
}

WeightFunction WeightFunction::geometric(double base) {
  require(base > 1 && std::isfinite(base), "b", "base must exceed 1");
  return WeightFunction(std::make_shared<Model>(make_model(Stretched{std::log(base), 1}, WeightFamily::Exponential,
                                                           spec_string("geom", {{"b", base}}), {{"b", base}})));
}

WeightFunction WeightFunction::constant(double c) {
  require(c > 0 && std::isfinite(c), "c", "constant must be positive");
  return WeightFunction(std::make_shared<Model>(
      make_model(Constant{c}, WeightFamily::Monotone, spec_string("const", {{"c", c}}), {{"c", c}})));
}

WeightFunction WeightFunction::table(std::vector<double> samples) {
  require(!samples.empty(), "v", "table needs at least one sample");
  std::vector<double> logs;
  std::string spec = "tab:v=";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i] > 0 && std::isfinite(samples[i]), "v", "samples must be positive");
    require(i == 0 || samples[i] <= samples[i - 1], "v", "samples must be non-increasing");
    logs.push_back(std::log(samples[i]));
    spec += (i ? "|" : "") + format_number(samples[i]);
  }
  double tail = logs.size() > 1 ? logs[logs.size() - 2] - logs.back() : 0;
  return WeightFunction(std::make_shared<Model>(make_model(Table{std::move(logs), tail}, WeightFamily::Monotone,
                                                           spec, {{"n", static_cast<double>(samples.size())}})));
}

double WeightFunction::operator()(double t) const { return std::exp(log_value(t)); }
double WeightFunction::log_value(double t) const { return model_->log_value(t); }
double WeightFunction::log_slope(double t) const { return model_->slope(t); }
double WeightFunction::derivative(double t) const { return -log_slope(t) * (*this)(t); }
double WeightFunction::slope_floor(double t) const {
  t = std::max(t, 1.0);
  return std::visit([t](const auto& s) { return s.floor(t); }, model_->shape);
}
double WeightFunction::asymptotic_slope() const {
  return std::visit([](const auto& s) { return s.asymptotic(); }, model_->shape);
}
double WeightFunction::limit_value() const {
  return std::visit([](const auto& s) { return s.limit(); }, model_->shape);
}
WeightFamily WeightFunction::family() const { return model_->family; }
const FamilyWindow& WeightFunction::window() const { return model_->window; }
const std::string& WeightFunction::spec() const { return model_->spec; }
const std::map<std::string, double>& WeightFunction::params() const { return model_->params; }

WeightFunction parse_weight(std::string_view spec) {
  auto colon = spec.find(':');
  std::string name(spec.substr(0, colon));
  std::map<std::string, std::string> raw;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw ParseError("psi", "expected key=value, got `" + std::string(item) + "`");
      raw[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto number = [](const std::string& key, const std::string& text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ParseError("psi." + key, "not a number: `" + text + "`");
    return v;
  };
  auto take = [&](const std::string& key, double fallback) {
    auto it = raw.find(key);
    if (it == raw.end()) return fallback;
    double v = number(key, it->second);
    raw.erase(it);
    return v;
  };
  auto done = [&] {
    if (!raw.empty()) throw ParseError("psi." + raw.begin()->first, "unknown key for `" + name + "`");
  };

  if (name == "pow") {
    double s = take("s", 1);
    done();
    return WeightFunction::power(s);
  }
  if (name == "powlog") {
    double s = take("s", 1), eps = take("eps", 1);
    done();
    return WeightFunction::power_log(s, eps);
  }
  if (name == "exp") {
    double a = take("a", 1), s = take("s", 1);
    done();
    return WeightFunction::stretched_exp(a, s);
  }
  if (name == "geom") {
    double b = take("b", 2);
    done();
    return WeightFunction::geometric(b);
  }
  if (name == "const") {
    double c = take("c", 1);
    done();
    return WeightFunction::constant(c);
  }
  if (name == "tab") {
    auto it = raw.find("v");
    if (it == raw.end()) throw ParseError("psi.v", "table needs v=a|b|...");
    std::vector<double> samples;
    std::string_view list = it->second;
    while (true) {
      auto bar = list.find('|');
      samples.push_back(number("v", std::string(list.substr(0, bar))));
      if (bar == std::string_view::npos) break;
      list = list.substr(bar + 1);
    }
    raw.erase(it);
    done();
    return WeightFunction::table(std::move(samples));
  }
  throw ParseError("psi", "unknown weight family `" + name + "`");
}

double alpha(const WeightFunction& w, double t) {
  double slope = w.log_slope(t);
  if (!(slope > 0)) throw InvalidArgument("t", "weight is locally constant, alpha undefined");
  return 1 / (std::max(t, 1.0) * slope);
}

EtaMu eta_mu(const WeightFunction& w, double t, double t_max) {
  if (t < 1) throw InvalidArgument("t", "must be at least 1");
  double target = w.log_value(t) - std::log(2.0);
  double lo = t, hi = 2 * t;
  while (w.log_value(hi) > target) {
    lo = hi;
    hi *= 2;
    if (hi > t_max) {
      if (w.log_value(t_max) > target) throw InvalidArgument("t", "weight does not halve below t_max");
      hi = t_max;
      break;
    }
  }
  for (int i = 0; i < 400 && hi - lo > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (w.log_value(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  double eta = 0.5 * (lo + hi);
  return {eta, t / (eta - t)};
}

DecayVerdict check_decay_condition(const WeightFunction& w, double beta, double horizon) {
  if (horizon < 10) throw InvalidArgument("horizon", "must be at least 10");
  DecayVerdict out;
  std::vector<double> logs;
  for (int i = 0;; ++i) {
    double t = std::min(horizon, std::exp2(i / 4.0));
    double lg = beta * std::log(t) + w.log_value(t + 1) - w.log_value(t);
    out.trace.emplace_back(t, std::exp(lg));
    logs.push_back(lg);
    if (t >= horizon) break;
  }
  std::size_t half = logs.size() / 2;
  bool decreasing = true;
  for (std::size_t i = half + 1; i < logs.size(); ++i)
    if (!(logs[i] < logs[i - 1])) decreasing = false;
  out.pass = decreasing && logs.back() < std::log(1e-6);
  auto worst = std::max_element(logs.begin() + static_cast<std::ptrdiff_t>(half), logs.end());
  out.witness = out.pass ? out.trace.back().first : out.trace[static_cast<std::size_t>(worst - logs.begin())].first;
  out.slope_form = w.log_slope(horizon) - beta * std::log(horizon);
  return out;
}

}  // namespace wiener
