#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>

namespace wiener {

/// Nonnegative real stored through its natural logarithm.
///
/// Weights such as exp(-t^2) leave the double range after a few dozen
/// shells, so sums and products are carried in log space.
class LogValue {
 public:
  constexpr LogValue() = default;

  static LogValue from_log(double log_value) noexcept {
    LogValue v;
    v.log_ = log_value;
    return v;
  }
  static LogValue of(double x) noexcept {
    return from_log(x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity());
  }
  static LogValue zero() noexcept { return {}; }
  static LogValue one() noexcept { return from_log(0.0); }
  static LogValue infinity() noexcept { return from_log(std::numeric_limits<double>::infinity()); }

  double log() const noexcept { return log_; }
  double value() const noexcept { return std::exp(log_); }
  bool is_zero() const noexcept { return std::isinf(log_) && log_ < 0; }
  bool is_finite() const noexcept { return !(std::isinf(log_) && log_ > 0) && !std::isnan(log_); }

  LogValue pow(double exponent) const noexcept {
    if (is_zero()) return exponent > 0 ? zero() : (exponent == 0 ? one() : infinity());
    return from_log(log_ * exponent);
  }

  friend LogValue operator*(LogValue a, LogValue b) noexcept { return from_log(a.log_ + b.log_); }
  friend LogValue operator/(LogValue a, LogValue b) noexcept { return from_log(a.log_ - b.log_); }
  friend LogValue operator+(LogValue a, LogValue b) noexcept {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    double hi = std::max(a.log_, b.log_);
    double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  LogValue& operator*=(LogValue o) noexcept { return *this = *this * o; }
  LogValue& operator+=(LogValue o) noexcept { return *this = *this + o; }

  friend bool operator==(LogValue a, LogValue b) noexcept { return a.log_ == b.log_; }
  friend auto operator<=>(LogValue a, LogValue b) noexcept { return a.log_ <=> b.log_; }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

/// Compensated sum of many LogValue terms around a floating reference scale.
class LogSum {
 public:
  void add(LogValue term, double multiplicity = 1.0) {
    if (term.is_zero() || multiplicity == 0) return;
    double l = term.log() + std::log(multiplicity);
    if (empty_) {
      ref_ = l;
      sum_ = 1.0;
      comp_ = 0.0;
      empty_ = false;
      return;
    }
    if (l > ref_ + 300) rescale(l);
    accumulate(std::exp(l - ref_));
  }
  void add(const LogSum& other) {
    if (!other.empty_) add(other.total());
  }

  LogValue total() const noexcept {
    if (empty_) return LogValue::zero();
    return LogValue::from_log(ref_ + std::log(sum_ + comp_));
  }
  bool empty() const noexcept { return empty_; }

 private:
  void rescale(double new_ref) {
    double f = std::exp(ref_ - new_ref);
    sum_ *= f;
    comp_ *= f;
    ref_ = new_ref;
  }
  void accumulate(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  bool empty_ = true;
  double ref_ = 0.0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace wiener
