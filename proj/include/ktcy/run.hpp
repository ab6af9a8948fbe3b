#pragma once

// Batch front end shared by the ktcy tool and the tests: configuration,
// data sources, the five commands and the key = value run report.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ktcy/estimates.hpp"
#include "ktcy/field.hpp"
#include "ktcy/solver.hpp"

namespace ktcy::run {

inline constexpr const char* kVersion = "ktcy 1.0.0";

enum class Command { solve, verify, rotate, manufacture, export_data };
enum class ExportFormat { report_text, field_dump, csv_slice };

struct DatumSource {
  enum class Kind { none, builtin, file, expression };
  Kind kind = Kind::none;
  std::string value;  // builtin "name" or "name:amplitude", a path, or expression text
  std::string describe() const;
};

struct RunConfig {
  Command command = Command::solve;
  DatumSource datum;           // F, or u* for manufacture
  std::string solution_path;   // verify: dumped solution
  std::string input_path;      // export: field dump to convert
  solver::SolverConfig solver; // solver.grid is the run grid
  std::optional<std::pair<int, int>> angle;
  bool renormalize = false;
  std::string out_dir = ".";
  ExportFormat format = ExportFormat::report_text;
  Axis slice_axis = Axis::t;
  int slice_index = 0;

  /// Throws std::invalid_argument: no datum where one is needed, angle outside rotate, missing paths.
  void validate() const;
};

Command parse_command(const std::string& name);
std::string command_name(Command c);
ExportFormat parse_format(const std::string& name);

/// Applies one `key = value` setting. Throws std::invalid_argument on unknown keys or bad values.
/// Setting a datum key replaces any earlier datum source.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// Reads `key = value` lines; '#' starts a comment. Throws IoError or std::invalid_argument.
void load_config_file(RunConfig& cfg, const std::string& path);

/// "NX,NY,NT" → GridSpec on the unit box.
GridSpec parse_grid(const std::string& text);
std::pair<int, int> parse_angle(const std::string& text);

/// Builtins: zero, product[:a] = a sin(2πx) sin(2πy) sin(2πt) (a = 0.3),
/// sine_x[:a] = a sin(2πx) (a = 0.01), manufactured = 0.01 sin(2πx) + 0.02 cos(2πy) sin(2πt),
/// manufactured_small = 0.01 sin(2πx) + 0.005 cos(2πy) sin(2πt).
std::string builtin_expression(const std::string& spec);
/// Field from the datum source; a file datum must match `grid` exactly.
ScalarField load_datum(const DatumSource& source, const GridSpec& grid);

struct Manufactured {
  ScalarField F;
  ScalarField u_star;  // mean-zero
};
/// F = log(ma_lhs(u*)) after projecting u* to mean zero. Throws NonPositiveLHS with the
/// minimum and its location.
Manufactured manufacture(const ScalarField& u_star);

/// F - log(∫e^F dV / volume)
ScalarField renormalize(const ScalarField& F);

/// Ordered key = value report. Doubles use 17 significant digits.
class RunReport {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, double value);
  void add(const std::string& key, int value);
  void add(const std::string& key, bool value);
  void add_config(const RunConfig& cfg);
  void add_trace(const solver::ContinuationTrace& trace);
  void add_solve(const solver::SolveReport& r);
  void add_ellipticity(const pde::EllipticityReport& e);
  void add_estimates(const estimates::EstimateReport& e);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  /// Value for `key`; throws std::out_of_range.
  const std::string& get(const std::string& key) const;
  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// FNV-1a over the grid counts, periods and values.
std::string grid_checksum(const ScalarField& u);

/// Rows "coord1,coord2,value" over the plane with the given axis index fixed.
void write_csv_slice(std::ostream& out, const ScalarField& u, Axis fixed, int index);
void write_csv_slice_file(const std::string& path, const ScalarField& u, Axis fixed, int index);

enum ExitCode { ok = 0, usage = 2, normalization = 3, stalled = 4, non_positive = 5, io = 6, failure = 7 };

/// Exit code for the exception currently being handled.
int exit_code_for_current_exception();

/// Runs one command, writes files into cfg.out_dir and the report to `out`. Returns the report.
/// Library errors propagate.
RunReport execute(const RunConfig& cfg, std::ostream& out);

}  // namespace ktcy::run
