#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wiener {

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string command;  // exact, order-audit, lp-audit, greedy, oracle, lattice
  double p = 2;
  double q = 2;
  double r = 2;
  int d = 1;
  std::string psi = "pow:s=1";

  // m grid: a single value, an explicit list, or a geometric range.
  std::optional<std::uint64_t> m;
  std::vector<std::uint64_t> m_list;
  std::uint64_t m_start = 1;
  std::uint64_t m_stop = 1;
  double m_factor = 2;

  std::string output;  // empty: the output stream passed to run()
  OutputFormat format = OutputFormat::Csv;
  std::optional<double> rel_tol;  // empty: 1e-8 for the audits, 1e-12 otherwise

  // order-audit / lp-audit
  std::string quantity;  // empty: sigma for order-audit, sigma-perp for lp-audit
  std::string regime = "auto";
  double spread = 32;
  double drift = 0.05;
  bool check_drift = true;
  double drift_window = 0.5;

  // lp-audit / greedy
  std::string extremal = "h1";
  std::int64_t grid = 0;

  // greedy
  std::string field;  // JSON file; empty: seeded random field
  std::uint64_t seed = 1;
  std::uint64_t terms = 12;
  std::int64_t radius = 8;

  // lattice
  std::optional<std::int64_t> s;
  std::int64_t s_min = 0;
  std::int64_t s_max = 10;

  // oracle
  std::int64_t shell_cap = 2;

  void validate() const;
  double tolerance() const;
  std::vector<std::uint64_t> m_grid() const;
};

/// Runs one subcommand. Returns 0 on success, 2 when an audit fails and 1 on
/// invalid input (message on err).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a RunConfig and runs it.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wiener
