#pragma once

// Experiment pipelines behind the command-line tool. Every scenario turns an
// ExperimentConfig into a Table; the CLI writes it as CSV (and optionally SVG).
// Nothing here reads clocks or global state, so equal configs give equal bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mwadv/core.hpp"

namespace mwadv {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Scenario { EvalOffline, SolveOnline, Compare, MultiExpert, Verify };

Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);

struct ExperimentConfig {
  Scenario scenario = Scenario::Compare;

  double epsilon = 0.36787944117144233;  // 1/e
  std::vector<double> mu{0.5};
  std::vector<double> rho0{0.5};
  /// Horizon sweep; empty means the scenario default.
  std::vector<int> horizons;

  /// eval-offline: false, true, ratio, random, or an explicit F/T string.
  std::string policy = "ratio";
  double random_q = 0.5;

  /// multi-expert: honest accuracies and the adversary's relative weight.
  std::vector<double> accuracies{0.5, 0.5, 0.5, 0.5};
  double adversary_weight = 0.2;
  /// Largest N at which the exact K-expert DP column is filled.
  int exact_dp_max_n = 24;

  /// compare: largest N for the exhaustive offline column.
  int offline_max_n = 14;

  std::int64_t trials = 100;
  std::uint64_t seed = 1;

  std::string output_path;
  bool emit_svg = false;

  /// Throws DomainError on out-of-range values.
  void validate() const;
  /// Horizons to run, applying the scenario default when none were given.
  std::vector<int> effective_horizons() const;
  /// Sorted key=value lines of every field that affects results.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// A cell is blank, a number, or text.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Numeric column values; blanks and text are skipped with their x.
  std::vector<std::pair<double, double>> series(std::string_view x, std::string_view y) const;
  std::size_t column(std::string_view name) const;
};

/// 12 significant digits, '.' decimal separator, no locale.
std::string format_number(double v);
std::string csv_escape(std::string_view field);
/// Provenance comment line, header row, then the rows.
std::string to_csv(const Table& table, const ExperimentConfig& config);
/// Polyline chart of the listed y columns against x.
std::string to_svg(const Table& table, std::string_view x, const std::vector<std::string>& ys, std::string_view title);

struct ComparisonRow {
  int N = 0;
  double mu = 0.0;
  double rho0 = 0.0;
  double epsilon = 0.0;
  double v_false = 0.0;
  double v_true = 0.0;
  double v_ratio = 0.0;
  std::optional<double> v_offline_opt;
  double v_online = 0.0;
  double v_no_adversary = 0.0;
  double v_no_info = 0.0;
};

std::vector<ComparisonRow> compare_rows(const ExperimentConfig& config);
Table comparison_table(const std::vector<ComparisonRow>& rows);

Table run_eval_offline(const ExperimentConfig& config);
Table run_solve_online(const ExperimentConfig& config);
Table run_compare(const ExperimentConfig& config);
Table run_multi_expert(const ExperimentConfig& config);

struct VerifyCheck {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  double seconds = 0.0;
  bool all_passed() const;
  Table table() const;
};

/// Test hook: the block evaluator in the oracle-equivalence check runs with
/// epsilon * (1 + epsilon_perturbation) while the oracle keeps the true value.
struct VerifyOptions {
  double epsilon_perturbation = 0.0;
};

VerifyReport run_verify(const ExperimentConfig& config, const VerifyOptions& options = {});

/// Runs a non-verify scenario.
Table run_scenario(const ExperimentConfig& config);

}  // namespace mwadv
