#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wiener/log_value.hpp"

namespace wiener {

/// Weight classes with distinct asymptotic theory.
enum class WeightFamily {
  Doubling,          // power-type decay, psi(t)/psi(2t) bounded
  SubExponential,    // convex, alpha -> 0, psi/|psi'| -> inf (exp(-t^s), s < 1)
  Exponential,       // convex, alpha -> 0, psi/|psi'| bounded (exp(-a t))
  SuperExponential,  // convex, psi/|psi'| -> 0 (exp(-t^s), s > 1)
  Monotone,          // positive and non-increasing only
};

std::string_view family_name(WeightFamily f);

/// Empirical constants seen while verifying the family on the sample grid.
struct FamilyWindow {
  double doubling_max = 0;  // max psi(t)/psi(2t)
  double rate_min = 0;      // min psi/|psi'|
  double rate_max = 0;      // max psi/|psi'|
};

/// Positive non-increasing weight psi on [1, inf) with a declared family.
///
/// Arguments below 1 are clamped to 1. Values are available in log form,
/// which stays finite long after psi itself underflows.
class WeightFunction {
 public:
  static WeightFunction power(double s);                  // t^-s
  static WeightFunction power_log(double s, double eps);  // t^-s ln^eps(t + e)
  static WeightFunction stretched_exp(double a, double s);  // exp(-a t^s)
  static WeightFunction geometric(double base);           // base^-t
  static WeightFunction constant(double c);
  /// Samples psi(1), psi(2), ...; log-linear in between, geometric beyond.
  static WeightFunction table(std::vector<double> samples);

  double operator()(double t) const;
  double log_value(double t) const;
  LogValue value(double t) const { return LogValue::from_log(log_value(t)); }
  /// Right derivative psi'(t+).
  double derivative(double t) const;
  /// |psi'(t+)| / psi(t).
  double log_slope(double t) const;
  /// A lower bound for u |psi'(u)| / psi(u) over all u >= t.
  double slope_floor(double t) const;
  /// liminf of t |psi'| / psi; infinite for faster-than-power decay.
  double asymptotic_slope() const;
  /// lim psi(t) as t -> inf.
  double limit_value() const;

  WeightFamily family() const;
  const FamilyWindow& window() const;
  /// Canonical DSL form, e.g. `pow:s=2`.
  const std::string& spec() const;
  const std::map<std::string, double>& params() const;

  struct Model;

 private:
  explicit WeightFunction(std::shared_ptr<const Model> m) : model_(std::move(m)) {}
  std::shared_ptr<const Model> model_;
};

/// Parses `pow:s=2`, `powlog:s=2,eps=-1`, `exp:a=1,s=1`, `geom:b=2`,
/// `const:c=1` or `tab:v=1|0.5|0.2`.
WeightFunction parse_weight(std::string_view spec);

/// psi(t) / (t |psi'(t)|).
double alpha(const WeightFunction& w, double t);

struct EtaMu {
  double eta;
  double mu;
};

/// eta = psi^-1(psi(t)/2) by bisection, mu = t/(eta - t).
EtaMu eta_mu(const WeightFunction& w, double t, double t_max = 1e12);

struct DecayVerdict {
  bool pass = false;
  double witness = 0;  // grid point where the condition is seen to fail
  std::vector<std::pair<double, double>> trace;  // (t, t^beta psi(t+1)/psi(t))
  double slope_form = 0;  // |psi'|/psi - beta ln t at the horizon
};

/// Checks t^beta psi(t+1)/psi(t) -> 0 on a geometric grid up to horizon.
DecayVerdict check_decay_condition(const WeightFunction& w, double beta, double horizon = 1e4);

}  // namespace wiener
