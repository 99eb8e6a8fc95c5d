#include "wiener/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wiener/errors.hpp"
#include "wiener/extended_real.hpp"

namespace wiener {
namespace {

LogValue psi_at(const WeightFunction& w, double t) { return w.value(t); }

LogValue power_of(double base, double exponent) {
  return LogValue::from_log(exponent * std::log(base));
}

Prediction point(LogValue v, std::string regime, bool exact = false) { return {v, v, std::move(regime), exact}; }

void require_family(const WeightFunction& w, bool ok, const std::string& regime) {
  if (!ok)
    throw RegimeMismatch(regime + " predictor does not apply to " + std::string(family_name(w.family())) +
                         " weight " + w.spec());
}

void require_slope(const WeightFunction& w, double beta, const std::string& regime) {
  if (!(w.asymptotic_slope() > beta))
    throw RegimeMismatch(regime + " predictor needs decay slope above " + format_number(beta) + " for " + w.spec());
}

void require_decay(const WeightFunction& w, double beta, const std::string& regime) {
  if (!check_decay_condition(w, beta).pass)
    throw RegimeMismatch(regime + " predictor needs t^" + format_number(beta) + " psi(t+1)/psi(t) -> 0 for " +
                         w.spec());
}

double conjugate(double p) { return p == 1 ? kInf : (is_inf(p) ? 1.0 : p / (p - 1)); }

struct Shell {
  std::int64_t s;
  std::uint64_t top;     // V_s
  std::uint64_t bottom;  // V_{s-1}
};

Shell shell_of(const ClassParams& params, std::uint64_t m) {
  auto counter = shared_counter(params.r, params.d);
  std::int64_t s = counter->inverse(m + 1);
  return {s, counter->count(s), counter->count(s - 1)};
}

LogValue shell_psi(const WeightFunction& w, std::int64_t s) { return w.value(static_cast<double>(std::max<std::int64_t>(s, 1))); }

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0;
}

}  // namespace

Prediction predict_sp(const ClassParams& params, const WeightFunction& w, std::uint64_t m, SpQuantity quantity,
                      Regime regime) {
  params.validate();
  if (m == 0) throw InvalidArgument("m", "must be at least 1");
  const double p = params.p, q = params.q;
  const int d = params.d;
  const double gap_exp = reciprocal(p) - reciprocal(q);
  const double dm = static_cast<double>(m);
  const WeightFamily fam = w.family();

  if (regime == Regime::Auto) {
    if (quantity == SpQuantity::Width && !params.tail_branch() && fam == WeightFamily::SuperExponential)
      regime = Regime::ShellExact;
    else if (fam == WeightFamily::Doubling)
      regime = Regime::Doubling;
    else if (fam == WeightFamily::SubExponential || fam == WeightFamily::Exponential)
      regime = Regime::ExpType;
    else if (fam == WeightFamily::SuperExponential)
      regime = Regime::SuperExp;
    else if (quantity == SpQuantity::Width && !params.tail_branch())
      regime = Regime::ShellExact;
    else
      throw RegimeMismatch("no order predictor for " + std::string(family_name(fam)) + " weight " + w.spec());
  }

  switch (regime) {
    case Regime::ShellExact: {
      if (quantity != SpQuantity::Width || params.tail_branch())
        throw RegimeMismatch("shell identity covers the basis width with q <= p only");
      return point(shell_psi(w, shell_of(params, m).s), "shell-exact", true);
    }
    case Regime::Doubling: {
      require_family(w, fam == WeightFamily::Doubling, "power-type");
      if (params.tail_branch()) require_slope(w, d * gap_exp, "power-type");
      LogValue base = psi_at(w, std::pow(dm, 1.0 / d));
      if (quantity == SpQuantity::Width && !params.tail_branch()) return point(base, "power-type");
      return point(base * power_of(dm, gap_exp), "power-type");
    }
    case Regime::ExpType: {
      require_family(w, fam == WeightFamily::SubExponential || fam == WeightFamily::Exponential, "exp-type");
      double radius = std::pow(dm / vol_constant(params.r, d), 1.0 / d);
      LogValue base = psi_at(w, radius);
      if (quantity == SpQuantity::Width && !params.tail_branch()) return point(base, "exp-type");
      return point(base * power_of(dm * alpha(w, radius), gap_exp), "exp-type");
    }
    case Regime::SuperExp: {
      require_family(w, fam == WeightFamily::SuperExponential, "super-exp");
      Shell sh = shell_of(params, m);
      LogValue base = shell_psi(w, sh.s);
      const double above = static_cast<double>(sh.top - m);
      const double into = static_cast<double>(m + 1 - sh.bottom);
      if (quantity == SpQuantity::Width) {
        if (!params.tail_branch()) return point(base, "shell-exact", true);
        return point(base * power_of(above, gap_exp), "super-exp width");
      }
      auto upper_form = [&] {
        return base * power_of(above, reciprocal(p)) / power_of(dm, (d - 1) * reciprocal(q) / d);
      };
      if (params.tail_branch()) {
        require_decay(w, (d - 1) * reciprocal(p), "super-exp");
        return point(upper_form(), "super-exp top");
      }
      if (is_inf(p)) {
        if (is_inf(q)) return point(base, "super-exp step");
        return point(base / power_of(into, 1 / q), "super-exp flat");
      }
      require_decay(w, (d - 1) * reciprocal(q), "super-exp");
      bool flat = m == sh.bottom || p * above >= q * static_cast<double>(sh.top - sh.bottom);
      if (flat) return point(base / power_of(into, 1 / q - 1 / p), "super-exp flat");
      return point(upper_form(), "super-exp top");
    }
    case Regime::Auto:
      break;
  }
  throw RegimeMismatch("unresolved regime");
}

Prediction predict_lp(const ClassParams& params, const WeightFunction& w, std::uint64_t m, LpQuantity quantity,
                      const LpPredictOptions& opts) {
  params.validate();
  if (m == 0) throw InvalidArgument("m", "must be at least 1");
  const double p = params.p, q = params.q;
  if (p < 1 || is_inf(p)) throw InvalidArgument("p", "L_p predictors need 1 <= p < inf");
  const double pc = conjugate(p);
  const int d = params.d;
  const double dm = static_cast<double>(m);
  const double rq = reciprocal(q);
  const WeightFamily fam = w.family();

  if (quantity == LpQuantity::WidthPerp && q <= pc) {
    return point(shell_psi(w, shell_of(params, m).s), "projection width identity", true);
  }

  if (fam == WeightFamily::Doubling) {
    LogValue base = psi_at(w, std::pow(dm, 1.0 / d));
    LogValue low = base * power_of(dm, 0.5 - rq);
    LogValue high = base * power_of(dm, 1 - 1 / p - rq);
    if (pc < q) {
      if (p <= 2) require_slope(w, d * (0.5 - rq), "power-type L_p");
      if (p >= 2) require_slope(w, d * (1 - 1 / p - rq), "power-type L_p");
    }
    switch (quantity) {
      case LpQuantity::SigmaPerp:
      case LpQuantity::Greedy:
        return point(p <= 2 ? low : high, "power-type L_p");
      case LpQuantity::Sigma: {
        if (p <= 2) return point(low, "power-type L_p");
        bool narrow = !is_inf(q) && params.r >= 1 && w.asymptotic_slope() > d * std::max(0.0, 1 - rq);
        if (narrow) return point(low, "power-type L_p, p > 2");
        return {low, high, "power-type L_p window", false};
      }
      case LpQuantity::WidthPerp:
        return point(p < 2 ? low : high, "power-type L_p width");
    }
  }

  if (fam == WeightFamily::SuperExponential) {
    Shell sh = shell_of(params, m);
    LogValue base = shell_psi(w, sh.s);
    if (d == 1) return point(base, "super-exp L_p, d = 1");
    bool top = sh.top - m <= opts.shell_slack;
    bool bottom = m - sh.bottom <= opts.shell_slack;
    if (quantity == LpQuantity::WidthPerp) {
      if (top) return point(base, "super-exp L_p width");
      throw RegimeMismatch("projection width order known only near the top of a shell");
    }
    require_decay(w, std::max((d - 1) * reciprocal(pc), (d - 1) * rq), "super-exp L_p");
    if (top) return point(base / power_of(dm, (d - 1) * rq / d), "super-exp L_p top");
    if (bottom && (q < pc || (m == sh.bottom && q == pc))) return point(base, "super-exp L_p bottom");
    throw RegimeMismatch("m is neither near the top nor the bottom of its shell");
  }

  if (fam == WeightFamily::Exponential && d == 1) return point(psi_at(w, dm / 2), "exponential L_p, d = 1");

  throw RegimeMismatch("no L_p predictor for " + std::string(family_name(fam)) + " weight " + w.spec() +
                       " in dimension " + std::to_string(d));
}

LogValue upper_chain_lp(const ClassParams& params, const WeightFunction& w, std::uint64_t m, const EvalOptions& opts) {
  params.validate();
  if (params.p < 1 || is_inf(params.p)) throw InvalidArgument("p", "upper chain needs 1 <= p < inf");
  ClassParams seq = params;
  seq.p = params.p <= 2 ? 2.0 : conjugate(params.p);
  return sigma_m(seq, w, m, opts).value;
}

std::uint64_t mid_shell_m(const BallCounter& counter, std::int64_t s) {
  std::uint64_t nu = counter.shell_size(s);
  return counter.count(s - 1) + (nu + 1) / 2;
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, double factor) {
  if (start == 0) throw InvalidArgument("m-start", "must be at least 1");
  if (stop < start) throw InvalidArgument("m-stop", "must not be below m-start");
  if (!(factor > 1)) throw InvalidArgument("m-factor", "must exceed 1");
  std::vector<std::uint64_t> out;
  double x = static_cast<double>(start);
  std::uint64_t m = start;
  while (m < stop) {
    out.push_back(m);
    x *= factor;
    m = std::max(m + 1, static_cast<std::uint64_t>(std::llround(x)));
  }
  out.push_back(stop);
  return out;
}

OrderAudit ratio_audit(std::vector<AuditRow> rows, const AuditOptions& opts) {
  if (!(opts.spread >= 1)) throw InvalidArgument("spread", "must be at least 1");
  if (!(opts.drift > 0)) throw InvalidArgument("drift", "must be positive");
  if (!(opts.drift_window > 0 && opts.drift_window <= 1)) throw InvalidArgument("drift-window", "must be in (0, 1]");
  OrderAudit out;
  if (rows.empty()) throw InvalidArgument("series", "audit needs at least one row");
  bool window = false;
  std::vector<double> x, y_lo, y_hi;
  for (const auto& row : rows) {
    if (row.value.is_zero() || row.prediction.lo.is_zero() || row.prediction.hi.is_zero() ||
        !row.value.is_finite() || !row.prediction.hi.is_finite())
      throw InvalidArgument("series", "values and predictions must be positive at m=" + std::to_string(row.m));
    window = window || !row.prediction.point();
    x.push_back(std::log10(static_cast<double>(row.m)));
    y_lo.push_back((row.value / row.prediction.lo).log() / std::log(10.0));
    y_hi.push_back((row.value / row.prediction.hi).log() / std::log(10.0));
  }
  auto [lo_it, hi_it] = std::minmax_element(y_lo.begin(), y_lo.end());
  out.ratio_min = std::pow(10.0, *lo_it);
  out.ratio_max = std::pow(10.0, *hi_it);
  out.spread = std::pow(10.0, *hi_it - *lo_it);
  const std::size_t fit = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(opts.drift_window * static_cast<double>(x.size()))));
  const std::size_t skip = x.size() > fit ? x.size() - fit : 0;
  auto tail = [skip](const std::vector<double>& v) { return std::vector<double>(v.begin() + skip, v.end()); };
  out.drift_slope = least_squares_slope(tail(x), tail(y_lo));
  if (window) {
    double up = least_squares_slope(tail(x), tail(y_hi));
    if (opts.check_drift) {
      out.pass = out.drift_slope >= -opts.drift && up <= opts.drift;
      if (!out.pass) out.reason = "value leaves the predicted window";
    } else {
      out.pass = out.spread <= opts.spread;
      if (!out.pass) out.reason = "ratio spread " + format_number(out.spread) + " exceeds " + format_number(opts.spread);
    }
  } else {
    bool spread_ok = out.spread <= opts.spread;
    bool drift_ok = !opts.check_drift || std::abs(out.drift_slope) <= opts.drift;
    out.pass = spread_ok && drift_ok;
    if (!spread_ok) out.reason = "ratio spread " + format_number(out.spread) + " exceeds " + format_number(opts.spread);
    else if (!drift_ok) out.reason = "ratio drifts by " + format_number(out.drift_slope) + " per decade";
  }
  out.rows = std::move(rows);
  return out;
}

}  // namespace wiener
