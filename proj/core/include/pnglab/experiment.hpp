#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pnglab {

enum class ExperimentKind { PngHeight, PngLayers, RmtEdge, RmtDyson, DistEval, DistJoint, Compare };

std::string to_string(ExperimentKind kind);
/// Throws ConfigurationError for unknown names.
ExperimentKind parse_experiment(const std::string& name);
const std::vector<ExperimentKind>& all_experiments();

struct ParameterSpec {
  std::string key;
  std::string default_value;  // empty: no default
  bool required = false;
  std::string help;
};

/// Keys accepted by an experiment, shared keys included.
const std::vector<ParameterSpec>& parameter_specs(ExperimentKind kind);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::DistEval;
  std::map<std::string, std::string> parameters;

  /// Unknown keys, missing required keys and malformed values raise
  /// ConfigurationError; range checks happen in the modules.
  void validate() const;

  /// Value with the default applied; throws if absent and without default.
  std::string get(const std::string& key) const;
  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::uint64_t get_seed() const;
  int workers() const;
  OutputFormat format() const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_grid(const std::string& key) const;
};

/// Flat "key = value" file; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// "lo:hi:step" -> lo, lo + step, ..., up to hi (inclusive within rounding).
std::vector<double> parse_grid(const std::string& text);
/// "a,b,c" -> {a, b, c}.
std::vector<double> parse_list(const std::string& text);

using Cell = std::variant<std::int64_t, double, std::string>;

struct Column {
  std::string name;
  std::string type;  // "int", "float" or "string"
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

struct Report {
  ExperimentKind experiment = ExperimentKind::DistEval;
  std::string description;
  /// Resolved parameters that determine the data (no workers, paths or format).
  std::map<std::string, std::string> parameters;
  Table table;
  std::vector<std::pair<std::string, double>> summary;
  bool certified = true;
  std::string failure;  // first failed certificate, if any
};

/// Runs the experiment. Samples use make_stream(seed, i) for sample i and
/// are spread over `workers` threads; the output does not depend on the
/// worker count.
Report run_experiment(const ExperimentConfig& config);

/// CSV: a "# {json}" metadata line, the header row, data rows. JSON: one
/// object with metadata, columns, rows and summary.
void write_report(const Report& report, std::ostream& os, OutputFormat format);
void write_report_file(const Report& report, const std::string& path, OutputFormat format);

/// Reads either format back. Throws ConfigurationError on schema violations.
Table read_table(const std::string& path);

}  // namespace pnglab
