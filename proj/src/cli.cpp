#include "wiener/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "wiener/asymptotics.hpp"
#include "wiener/errors.hpp"
#include "wiener/exact_values.hpp"
#include "wiener/extended_real.hpp"
#include "wiener/lattice.hpp"
#include "wiener/oracle.hpp"
#include "wiener/spectral.hpp"
#include "wiener/weights.hpp"

namespace wiener {
namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json verdict;  // null when the command has no verdict
  bool failed = false;
};

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json(format_number(x)); }

Json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* x = std::get_if<double>(&c)) return number_json(*x);
  return std::get<std::int64_t>(c);
}

std::string cell_csv(const Cell& c) {
  if (const auto* x = std::get_if<double>(&c)) return format_number(*x);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

Cell count_cell(std::uint64_t x) { return static_cast<std::int64_t>(x); }

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["p"] = number_json(c.p);
  j["q"] = number_json(c.q);
  j["r"] = number_json(c.r);
  j["d"] = c.d;
  j["psi"] = c.psi;
  if (c.command != "lattice") j["m"] = c.m_grid();
  j["rel_tol"] = c.tolerance();
  if (c.command == "order-audit" || c.command == "lp-audit") {
    j["quantity"] = c.quantity;
    j["spread"] = c.spread;
    j["drift"] = c.check_drift ? number_json(c.drift) : Json(nullptr);
    j["drift_window"] = c.drift_window;
  }
  if (c.command == "order-audit") j["regime"] = c.regime;
  if (c.command == "lp-audit") {
    j["extremal"] = c.extremal;
    j["grid"] = c.grid;
  }
  if (c.command == "greedy") {
    if (c.field.empty()) {
      j["seed"] = c.seed;
      j["terms"] = c.terms;
      j["radius"] = c.radius;
    } else {
      j["field"] = c.field;
    }
    j["grid"] = c.grid;
  }
  if (c.command == "oracle") j["shell_cap"] = c.shell_cap;
  return j;
}

void write_table(const Table& t, const RunConfig& c, std::ostream& out) {
  if (c.format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_csv(row[i]);
      out << '\n';
    }
    return;
  }
  Json doc;
  doc["config"] = config_json(c);
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["verdict"] = t.verdict;
  out << doc.dump(2) << '\n';
}

ClassParams class_params(const RunConfig& c) {
  ClassParams params{c.p, c.q, c.r, c.d};
  params.validate();
  return params;
}

EvalOptions eval_options(const RunConfig& c) {
  EvalOptions opts;
  opts.rel_tol = c.tolerance();
  return opts;
}

std::string_view sigma_case_name(SigmaCase c) {
  switch (c) {
    case SigmaCase::SupScan: return "sup-scan";
    case SigmaCase::Balance: return "balance";
    case SigmaCase::FlatTop: return "flat-top";
    case SigmaCase::TailP: return "tail";
    case SigmaCase::Step: return "step";
  }
  return "?";
}

Regime parse_regime(const std::string& s) {
  if (s == "auto") return Regime::Auto;
  if (s == "doubling") return Regime::Doubling;
  if (s == "exp") return Regime::ExpType;
  if (s == "super-exp") return Regime::SuperExp;
  if (s == "shell-exact") return Regime::ShellExact;
  throw InvalidArgument("regime", "unknown regime '" + s + "' (auto, doubling, exp, super-exp, shell-exact)");
}

LpQuantity parse_lp_quantity(const std::string& s) {
  if (s == "sigma") return LpQuantity::Sigma;
  if (s == "sigma-perp") return LpQuantity::SigmaPerp;
  if (s == "greedy") return LpQuantity::Greedy;
  if (s == "width-perp") return LpQuantity::WidthPerp;
  throw InvalidArgument("quantity", "unknown L_p quantity '" + s + "' (sigma, sigma-perp, greedy, width-perp)");
}

Json audit_json(const OrderAudit& a) {
  Json j;
  j["pass"] = a.pass;
  j["ratio_min"] = number_json(a.ratio_min);
  j["ratio_max"] = number_json(a.ratio_max);
  j["spread"] = number_json(a.spread);
  j["drift_slope"] = number_json(a.drift_slope);
  j["reason"] = a.reason;
  return j;
}

Table cmd_exact(const RunConfig& c) {
  ClassParams params = class_params(c);
  WeightFunction w = parse_weight(c.psi);
  EvalOptions opts = eval_options(c);
  Table t{{"m", "sigma", "width", "log_sigma", "log_width", "sigma_form", "l_star"}, {}, nullptr, false};
  for (auto m : c.m_grid()) {
    SigmaResult s = sigma_m(params, w, m, opts);
    LogValue width = basis_width(params, w, m, opts);
    std::string l_star = s.at_infinity ? "inf" : (s.argmax ? std::to_string(*s.argmax) : "");
    t.rows.push_back({count_cell(m), s.value.value(), width.value(), s.value.log(), width.log(),
                      std::string(sigma_case_name(s.form)), l_star});
  }
  return t;
}

Table cmd_order_audit(const RunConfig& c) {
  ClassParams params = class_params(c);
  WeightFunction w = parse_weight(c.psi);
  EvalOptions opts = eval_options(c);
  SpQuantity quantity;
  if (c.quantity.empty() || c.quantity == "sigma")
    quantity = SpQuantity::Sigma;
  else if (c.quantity == "width")
    quantity = SpQuantity::Width;
  else
    throw InvalidArgument("quantity", "unknown S^p quantity '" + c.quantity + "' (sigma, width)");
  Regime regime = parse_regime(c.regime);
  std::vector<AuditRow> rows;
  for (auto m : c.m_grid()) {
    LogValue value = quantity == SpQuantity::Sigma ? sigma_m(params, w, m, opts).value : basis_width(params, w, m, opts);
    rows.push_back({m, value, predict_sp(params, w, m, quantity, regime)});
  }
  OrderAudit audit = ratio_audit(rows, {c.spread, c.drift, c.check_drift, c.drift_window});
  Table t{{"m", "value", "prediction", "ratio", "log_value", "log_prediction", "regime"}, {}, audit_json(audit),
          !audit.pass};
  for (const auto& row : audit.rows)
    t.rows.push_back({count_cell(row.m), row.value.value(), row.prediction.lo.value(), row.ratio(), row.value.log(),
                      row.prediction.lo.log(), row.prediction.regime});
  return t;
}

Table cmd_lp_audit(const RunConfig& c) {
  ClassParams params = class_params(c);
  WeightFunction w = parse_weight(c.psi);
  EvalOptions opts = eval_options(c);
  LpQuantity quantity = parse_lp_quantity(c.quantity.empty() ? "sigma-perp" : c.quantity);
  ExtremalKind kind = parse_extremal(c.extremal);
  std::vector<AuditRow> lower_rows, upper_rows;
  bool sandwich = true;
  Table t{{"m", "lower", "upper", "prediction", "prediction_hi", "ratio_lower", "ratio_upper", "sandwich"},
          {},
          nullptr,
          false};
  for (auto m : c.m_grid()) {
    CoefficientField f = extremal(kind, params, w, m);
    double lower = greedy_residual(f, m, GridNorm{c.p, c.grid}, c.r);
    LogValue upper = upper_chain_lp(params, w, m, opts);
    Prediction pred = predict_lp(params, w, m, quantity);
    bool ok = lower <= upper.value() * (1 + 1e-9);
    sandwich = sandwich && ok;
    lower_rows.push_back({m, LogValue::of(lower), pred});
    upper_rows.push_back({m, upper, pred});
    t.rows.push_back({count_cell(m), lower, upper.value(), pred.lo.value(), pred.hi.value(),
                      (LogValue::of(lower) / pred.lo).value(), (upper / pred.lo).value(),
                      std::string(ok ? "yes" : "no")});
  }
  AuditOptions audit_opts{c.spread, c.drift, false, c.drift_window};
  OrderAudit low = ratio_audit(lower_rows, audit_opts);
  OrderAudit up = ratio_audit(upper_rows, audit_opts);
  t.failed = !(sandwich && low.pass && up.pass);
  t.verdict = {{"pass", !t.failed}, {"sandwich", sandwich}, {"lower", audit_json(low)}, {"upper", audit_json(up)}};
  return t;
}

CoefficientField random_field(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::int64_t> coord(-c.radius, c.radius);
  std::uniform_real_distribution<double> part(-1.0, 1.0);
  CoefficientField f(c.d);
  std::uint64_t limit = 1;
  for (int i = 0; i < c.d; ++i) limit *= static_cast<std::uint64_t>(2 * c.radius + 1);
  if (c.terms > limit) throw InvalidArgument("terms", "more terms than lattice points within the radius");
  while (f.size() < c.terms) {
    LatticeVector k(static_cast<std::size_t>(c.d));
    for (auto& x : k) x = coord(rng);
    double re = part(rng), im = part(rng);
    if (f.at(k) == Complex{} && (re != 0 || im != 0)) f.set(k, {re, im});
  }
  return f;
}

Table cmd_greedy(const RunConfig& c) {
  CoefficientField f(c.d);
  if (c.field.empty()) {
    f = random_field(c);
  } else {
    std::ifstream in(c.field);
    if (!in) throw InvalidArgument("field", "cannot read " + c.field);
    std::stringstream text;
    text << in.rdbuf();
    f = field_from_json(text.str(), c.d);
  }
  std::vector<std::uint64_t> grid;
  if (c.m || !c.m_list.empty())
    grid = c.m_grid();
  else
    for (std::uint64_t m = 0; m <= f.size(); ++m) grid.push_back(m);
  bool lp = c.p >= 1;
  Table t{{"m", "sp_residual", "lp_residual"}, {}, nullptr, false};
  for (auto m : grid) {
    double sp = greedy_residual(f, m, SequenceNorm{c.p}, c.r);
    Cell grid_value = lp ? Cell(greedy_residual(f, m, GridNorm{c.p, c.grid}, c.r)) : Cell(std::string());
    t.rows.push_back({count_cell(m), sp, grid_value});
  }
  return t;
}

Table cmd_oracle(const RunConfig& c) {
  ClassParams params = class_params(c);
  WeightFunction w = parse_weight(c.psi);
  EvalOptions opts = eval_options(c);
  const double tol = 1e-10;
  Table t{{"check", "m", "value", "reference", "rel_error", "pass"}, {}, nullptr, false};
  std::int64_t passed = 0, total = 0;
  auto record = [&](const std::string& check, std::uint64_t m, double value, double reference, bool ok) {
    double rel = reference != 0 ? std::abs(value - reference) / std::abs(reference) : std::abs(value);
    if (!std::isfinite(value) && !std::isfinite(reference)) rel = 0;
    t.rows.push_back({check, count_cell(m), value, reference, rel, std::string(ok ? "yes" : "no")});
    ++total;
    passed += ok;
  };
  auto agree = [&](LogValue a, LogValue b) { return std::abs(a.log() - b.log()) <= tol || a == b; };

  auto counter = shared_counter(c.r, c.d);
  StepRearrangement sr(counter, w);
  for (auto m : c.m_grid()) {
    std::optional<LogValue> exact, brute;
    bool exact_div = false, brute_div = false;
    try {
      exact = sigma_m(params, w, m, opts).value;
    } catch (const DivergentSeries&) {
      exact_div = true;
    }
    try {
      brute = brute_sigma(params, w, m);
    } catch (const DivergentSeries&) {
      brute_div = true;
    }
    if (exact_div || brute_div)
      record("sigma-divergent", m, exact_div ? kInf : exact->value(), brute_div ? kInf : brute->value(),
             exact_div && brute_div);
    else
      record("sigma-vs-witness", m, exact->value(), brute->value(), agree(*exact, *brute));

    if (!is_inf(c.p) && c.q <= c.p && exact) {
      ScanAudit scan = sup_scan_audit(sr, params, m, std::max<std::uint64_t>(1000, 8 * (m + 1)));
      record("sigma-vs-scan", m, exact->value(), scan.value.value(), scan.certified && agree(*exact, scan.value));
    }
    if (m <= 5 && counter->count(c.shell_cap) <= 20 && m <= counter->count(c.shell_cap)) {
      EvalOptions capped = opts;
      capped.shell_cap = c.shell_cap;
      LogValue width = basis_width(params, w, m, capped);
      BruteWidth brute_w = brute_width(params, w, m, c.shell_cap);
      record("width-vs-subsets", m, width.value(), brute_w.value.value(), agree(width, brute_w.value));
    }
  }
  t.failed = passed != total;
  t.verdict = {{"pass", !t.failed}, {"passed", passed}, {"checks", total}};
  return t;
}

Table cmd_lattice(const RunConfig& c) {
  if (c.d < 1) throw InvalidArgument("d", "must be at least 1");
  require_positive_extended(c.r, "r");
  std::int64_t lo = c.s ? *c.s : c.s_min;
  std::int64_t hi = c.s ? *c.s : c.s_max;
  if (lo < 0) throw InvalidArgument("s", "must be nonnegative");
  if (hi < lo) throw InvalidArgument("s-max", "must not be below s-min");
  auto counter = shared_counter(c.r, c.d);
  Table t{{"s", "V", "nu"}, {}, nullptr, false};
  for (std::int64_t s = lo; s <= hi; ++s)
    t.rows.push_back({s, count_cell(counter->count(s)), count_cell(counter->shell_size(s))});
  return t;
}

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> commands = {"exact", "order-audit", "lp-audit", "greedy", "oracle", "lattice"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw InvalidArgument("command", "unknown subcommand '" + command + "'");
  require_positive_extended(p, "p");
  require_positive_extended(q, "q");
  require_positive_extended(r, "r");
  if (d < 1 || d > 8) throw InvalidArgument("d", "must be between 1 and 8");
  if (rel_tol && (!(*rel_tol > 0) || !std::isfinite(*rel_tol))) throw InvalidArgument("rel-tol", "must be positive");
  if (!(drift_window > 0 && drift_window <= 1)) throw InvalidArgument("drift-window", "must be in (0, 1]");
  if (!(spread >= 1) || !std::isfinite(spread)) throw InvalidArgument("spread", "must be at least 1");
  if (!(drift > 0) || !std::isfinite(drift)) throw InvalidArgument("drift", "must be positive");
  if (grid < 0) throw InvalidArgument("grid", "must be nonnegative");
  if (command != "lattice" && command != "greedy") m_grid();
}

double RunConfig::tolerance() const {
  if (rel_tol) return *rel_tol;
  return command == "order-audit" || command == "lp-audit" ? 1e-8 : 1e-12;
}

std::vector<std::uint64_t> RunConfig::m_grid() const {
  if (m) return {*m};
  if (!m_list.empty()) {
    for (std::size_t i = 1; i < m_list.size(); ++i)
      if (m_list[i] <= m_list[i - 1]) throw InvalidArgument("m-list", "must be strictly increasing");
    return m_list;
  }
  return geometric_grid(m_start, m_stop, m_factor);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    Table table;
    if (config.command == "exact") table = cmd_exact(config);
    else if (config.command == "order-audit") table = cmd_order_audit(config);
    else if (config.command == "lp-audit") table = cmd_lp_audit(config);
    else if (config.command == "greedy") table = cmd_greedy(config);
    else if (config.command == "oracle") table = cmd_oracle(config);
    else table = cmd_lattice(config);

    if (config.output.empty()) {
      write_table(table, config, out);
    } else {
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw InvalidArgument("output", "cannot write " + config.output);
      write_table(table, config, file);
    }
    if (!table.verdict.is_null() && config.format == OutputFormat::Csv)
      err << "verdict: " << (table.failed ? "FAIL" : "PASS") << ' ' << table.verdict.dump() << '\n';
    return table.failed ? 2 : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact approximation characteristics of weighted Wiener classes", "wiener-approx"};
  app.require_subcommand(1);
  RunConfig config;
  std::string p_text = "2", q_text = "2", r_text = "2", format_text = "csv";
  bool no_drift = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", p_text, "target space exponent (inf allowed)");
    sub->add_option("--q", q_text, "class exponent (inf allowed)");
    sub->add_option("--r", r_text, "lattice norm exponent (inf allowed)");
    sub->add_option("--d", config.d, "dimension");
    sub->add_option("--format", format_text, "csv or json");
    sub->add_option("--output,-o", config.output, "output file (default stdout)");
  };
  auto weighted = [&](CLI::App* sub) {
    sub->add_option("--psi", config.psi, "weight, e.g. pow:s=2, exp:a=1,s=2, geom:b=2");
    sub->add_option("--rel-tol", config.rel_tol, "relative tolerance of series sums");
  };
  auto m_grid = [&](CLI::App* sub) {
    sub->add_option("--m", config.m, "single m");
    sub->add_option("--m-list", config.m_list, "comma separated m values")->delimiter(',');
    sub->add_option("--m-start", config.m_start, "first m of a geometric grid");
    sub->add_option("--m-stop", config.m_stop, "last m of a geometric grid");
    sub->add_option("--m-factor", config.m_factor, "grid growth factor");
  };
  auto audit = [&](CLI::App* sub) {
    sub->add_option("--quantity", config.quantity, "quantity to audit");
    sub->add_option("--spread", config.spread, "largest allowed max/min ratio");
  };

  auto* exact = app.add_subcommand("exact", "sigma_m and D_m over an m grid");
  common(exact);
  weighted(exact);
  m_grid(exact);

  auto* order = app.add_subcommand("order-audit", "exact S^p values against their predicted order");
  common(order);
  weighted(order);
  m_grid(order);
  audit(order);
  order->add_option("--regime", config.regime, "auto, doubling, exp, super-exp, shell-exact");
  order->add_option("--drift", config.drift, "allowed log10 ratio slope per decade");
  order->add_flag("--no-drift", no_drift, "check the spread only");
  order->add_option("--drift-window", config.drift_window, "top fraction of the grid used for the drift fit");

  auto* lp = app.add_subcommand("lp-audit", "extremal lower values and the upper chain in L_p");
  common(lp);
  weighted(lp);
  m_grid(lp);
  audit(lp);
  lp->add_option("--extremal", config.extremal, "h1, h2, h3 or h4");
  lp->add_option("--grid", config.grid, "grid points per axis (0: automatic)");

  auto* greedy = app.add_subcommand("greedy", "greedy residual curve of one coefficient field");
  common(greedy);
  m_grid(greedy);
  greedy->add_option("--field", config.field, "JSON file of [[k...], re, im] triples");
  greedy->add_option("--seed", config.seed, "seed of the random field");
  greedy->add_option("--terms", config.terms, "terms of the random field");
  greedy->add_option("--radius", config.radius, "max |k_i| of the random field");
  greedy->add_option("--grid", config.grid, "grid points per axis (0: automatic)");

  auto* oracle = app.add_subcommand("oracle", "small-instance certification of the exact formulas");
  common(oracle);
  weighted(oracle);
  m_grid(oracle);
  oracle->add_option("--shell-cap", config.shell_cap, "truncation shell of the width search");

  auto* lattice = app.add_subcommand("lattice", "V_s and nu_s tables");
  common(lattice);
  lattice->add_option("--s", config.s, "single radius");
  lattice->add_option("--s-min", config.s_min, "first radius");
  lattice->add_option("--s-max", config.s_max, "last radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  try {
    config.command = app.get_subcommands().front()->get_name();
    config.p = parse_extended(p_text, "p");
    config.q = parse_extended(q_text, "q");
    config.r = parse_extended(r_text, "r");
    if (format_text == "csv")
      config.format = OutputFormat::Csv;
    else if (format_text == "json")
      config.format = OutputFormat::Json;
    else
      throw InvalidArgument("format", "must be csv or json");
    config.check_drift = !no_drift;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return run(config, out, err);
}

}  // namespace wiener
