#include "ktcy/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "ktcy/errors.hpp"
#include "ktcy/expression.hpp"
#include "ktcy/pde.hpp"
#include "ktcy/rotation.hpp"

namespace ktcy::run {

std::string DatumSource::describe() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::builtin: return "builtin:" + value;
    case Kind::file: return "file:" + value;
    case Kind::expression: return "expression:" + value;
  }
  return "none";
}

void RunConfig::validate() const {
  solver.validate();
  if (angle && command != Command::rotate) throw std::invalid_argument("--angle is only valid with rotate");
  if (command == Command::rotate && !angle) throw std::invalid_argument("rotate needs --angle M,N");
  if (command == Command::export_data) {
    if (input_path.empty()) throw std::invalid_argument("export needs an input field dump");
    return;
  }
  if (datum.kind == DatumSource::Kind::none) throw std::invalid_argument("no datum given");
  if (command == Command::verify && solution_path.empty()) throw std::invalid_argument("verify needs a solution dump");
}

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::solve;
  if (name == "verify") return Command::verify;
  if (name == "rotate") return Command::rotate;
  if (name == "manufacture") return Command::manufacture;
  if (name == "export") return Command::export_data;
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::verify: return "verify";
    case Command::rotate: return "rotate";
    case Command::manufacture: return "manufacture";
    case Command::export_data: return "export";
  }
  return "solve";
}

ExportFormat parse_format(const std::string& name) {
  if (name == "report-text") return ExportFormat::report_text;
  if (name == "field-dump") return ExportFormat::field_dump;
  if (name == "csv-slice") return ExportFormat::csv_slice;
  throw std::invalid_argument("unknown export format '" + name + "' (report-text, field-dump, csv-slice)");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string p; std::getline(in, p, sep);) parts.push_back(trim(p));
  return parts;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": '" + v + "' is not an integer");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": '" + v + "' is not a number");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(key + ": '" + v + "' is not a boolean");
}

Axis to_axis(const std::string& key, const std::string& v) {
  if (v == "x") return Axis::x;
  if (v == "y") return Axis::y;
  if (v == "t") return Axis::t;
  throw std::invalid_argument(key + ": '" + v + "' is not one of x, y, t");
}

const char* axis_name(Axis a) { return a == Axis::x ? "x" : a == Axis::y ? "y" : "t"; }

}  // namespace

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw std::invalid_argument("grid: expected NX,NY,NT, got '" + text + "'");
  return GridSpec(to_int("grid", parts[0]), to_int("grid", parts[1]), to_int("grid", parts[2]));
}

std::pair<int, int> parse_angle(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("angle: expected M,N, got '" + text + "'");
  const std::pair<int, int> a{to_int("angle", parts[0]), to_int("angle", parts[1])};
  rotation::RationalAngle check(a.first, a.second);
  return a;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto& s = cfg.solver;
  if (key == "command") cfg.command = parse_command(value);
  else if (key == "grid") s.grid = parse_grid(value);
  else if (key == "datum") cfg.datum = {DatumSource::Kind::expression, value};
  else if (key == "datum_file") cfg.datum = {DatumSource::Kind::file, value};
  else if (key == "builtin") cfg.datum = {DatumSource::Kind::builtin, value};
  else if (key == "solution") cfg.solution_path = value;
  else if (key == "input") cfg.input_path = value;
  else if (key == "angle") cfg.angle = parse_angle(value);
  else if (key == "renormalize") cfg.renormalize = to_bool(key, value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "format") cfg.format = parse_format(value);
  else if (key == "slice_axis") cfg.slice_axis = to_axis(key, value);
  else if (key == "slice_index") cfg.slice_index = to_int(key, value);
  else if (key == "newton_tol") s.newton_tol = to_double(key, value);
  else if (key == "newton_max_iters") s.newton_max_iters = to_int(key, value);
  else if (key == "krylov_tol") s.krylov_tol = to_double(key, value);
  else if (key == "krylov_max_iters") s.krylov_max_iters = to_int(key, value);
  else if (key == "krylov_restart") s.krylov_restart = to_int(key, value);
  else if (key == "tau_initial_step") s.tau_initial_step = to_double(key, value);
  else if (key == "tau_min_step") s.tau_min_step = to_double(key, value);
  else if (key == "damping") s.damping.enabled = to_bool(key, value);
  else if (key == "backtracking_factor") s.damping.backtracking_factor = to_double(key, value);
  else if (key == "max_backtracks") s.damping.max_backtracks = to_int(key, value);
  else throw std::invalid_argument("unknown setting '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string builtin_expression(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::optional<double> amp =
      colon == std::string::npos ? std::nullopt : std::optional<double>(to_double("builtin", spec.substr(colon + 1)));
  const auto a = [&](double fallback) { return format_double(amp.value_or(fallback)); };
  if (name == "zero") return "0";
  if (name == "product") return a(0.3) + "*sin(2*pi*x)*sin(2*pi*y)*sin(2*pi*t)";
  if (name == "sine_x") return a(0.01) + "*sin(2*pi*x)";
  if (name == "manufactured") return "0.01*sin(2*pi*x) + 0.02*cos(2*pi*y)*sin(2*pi*t)";
  if (name == "manufactured_small") return "0.01*sin(2*pi*x) + 0.005*cos(2*pi*y)*sin(2*pi*t)";
  throw std::invalid_argument("unknown builtin '" + name + "' (zero, product, sine_x, manufactured, manufactured_small)");
}

ScalarField load_datum(const DatumSource& source, const GridSpec& grid) {
  switch (source.kind) {
    case DatumSource::Kind::none: throw std::invalid_argument("no datum given");
    case DatumSource::Kind::builtin:
      return expression::Expression::parse(builtin_expression(source.value)).sample(grid);
    case DatumSource::Kind::expression: return expression::Expression::parse(source.value).sample(grid);
    case DatumSource::Kind::file: {
      ScalarField f = read_field_file(source.value);
      require_same_grid(grid, f.grid(), "datum file");
      return f;
    }
  }
  throw std::invalid_argument("no datum given");
}

Manufactured manufacture(const ScalarField& u_star) {
  ScalarField u = project_mean_zero(u_star);
  const ScalarField lhs = pde::ma_lhs(u);
  const auto it = std::min_element(lhs.values().begin(), lhs.values().end());
  if (*it <= 0.0) {
    const GridSpec& g = lhs.grid();
    const auto n = static_cast<std::size_t>(it - lhs.values().begin());
    const int i = static_cast<int>(n % g.nx()), j = static_cast<int>((n / g.nx()) % g.ny()),
              k = static_cast<int>(n / (static_cast<std::size_t>(g.nx()) * g.ny()));
    std::ostringstream msg;
    msg << "ma_lhs(u*) reaches " << *it << " at grid index (" << i << ", " << j << ", " << k << "), point ("
        << i * g.spacing(Axis::x) << ", " << j * g.spacing(Axis::y) << ", " << k * g.spacing(Axis::t)
        << "); reduce the amplitude";
    throw NonPositiveLHS(msg.str());
  }
  return {lhs.map([](double v) { return std::log(v); }), std::move(u)};
}

ScalarField renormalize(const ScalarField& F) {
  const double ratio = integrate(F.map([](double f) { return std::exp(f); })) / F.grid().volume();
  ScalarField out = F;
  out += -std::log(ratio);
  return out;
}

void RunReport::add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
void RunReport::add(const std::string& key, double value) { add(key, format_double(value)); }
void RunReport::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void RunReport::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

const std::string& RunReport::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw std::out_of_range("report has no key " + key);
}

void RunReport::add_config(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  const GridSpec& g = s.grid;
  add("config.command", command_name(cfg.command));
  add("config.grid", std::to_string(g.nx()) + "," + std::to_string(g.ny()) + "," + std::to_string(g.nt()));
  add("config.datum", cfg.datum.describe());
  add("config.renormalize", cfg.renormalize);
  if (cfg.angle) add("config.angle", std::to_string(cfg.angle->first) + "," + std::to_string(cfg.angle->second));
  add("config.newton_tol", s.newton_tol);
  add("config.newton_max_iters", s.newton_max_iters);
  add("config.krylov_tol", s.krylov_tol);
  add("config.krylov_max_iters", s.krylov_max_iters);
  add("config.krylov_restart", s.krylov_restart);
  add("config.tau_initial_step", s.tau_initial_step);
  add("config.tau_min_step", s.tau_min_step);
  add("config.damping", s.damping.enabled);
  add("config.backtracking_factor", s.damping.backtracking_factor);
  add("config.max_backtracks", s.damping.max_backtracks);
}

void RunReport::add_trace(const solver::ContinuationTrace& trace) {
  add("trace.count", static_cast<int>(trace.size()));
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::string p = "trace." + std::to_string(i) + ".";
    add(p + "tau", trace[i].tau);
    add(p + "newton_iters", trace[i].newton_iters);
    add(p + "final_residual_sup", trace[i].final_residual_sup);
    add(p + "lambda_min", trace[i].lambda_min);
    add(p + "accepted", trace[i].accepted);
  }
}

void RunReport::add_ellipticity(const pde::EllipticityReport& e) {
  add("ellipticity.min_q", e.min_q);
  add("ellipticity.min_p", e.min_p);
  add("ellipticity.min_trace", e.min_trace);
  add("ellipticity.min_lambda", e.min_lambda);
  add("ellipticity.min_symbol_eig", e.min_symbol_eig);
  add("ellipticity.min_trace_gap", e.min_trace_gap);
  add("ellipticity.sqrt_clamped", e.sqrt_clamped);
  add("ellipticity.u_xx_ok", e.u_xx_ok);
  add("ellipticity.p_ok", e.p_ok);
  add("ellipticity.trace_ok", e.trace_ok);
}

void RunReport::add_estimates(const estimates::EstimateReport& e) {
  add("estimates.informative", e.informative);
  add("estimates.residual_sup", e.residual_sup);
  add("estimates.solution_threshold", e.solution_threshold);
  add("estimates.count", static_cast<int>(e.checks.size()));
  for (const auto& c : e.checks) {
    const std::string p = "estimates." + c.name + ".";
    add(p + "statement", c.statement);
    add(p + "lhs", c.lhs);
    add(p + "rhs", c.rhs);
    add(p + "margin", c.margin);
    add(p + "pass", c.pass);
  }
  add("estimates.all_pass", e.all_pass());
  add("estimates.sup_u", e.sup_u);
  add("estimates.sup_laplacian", e.sup_laplacian);
}

void RunReport::add_solve(const solver::SolveReport& r) {
  add_trace(r.trace);
  add("converged", r.converged);
  add("newton_iters_total", r.newton_iters_total);
  add("krylov_iters_total", r.krylov_iters_total);
  add("residual.sup", r.residual_sup);
  add("solution.mean", mean(r.u));
  add("solution.sup", sup_norm(r.u));
  add_ellipticity(r.ellipticity);
  add_estimates(r.estimates);
}

void RunReport::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

void RunReport::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path);
  write(out);
  if (!out) throw IoError("write failed for " + path);
}

std::string grid_checksum(const ScalarField& u) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const GridSpec& g = u.grid();
  const int counts[3] = {g.nx(), g.ny(), g.nt()};
  const double periods[3] = {g.lx(), g.ly(), g.lt()};
  mix(counts, sizeof counts);
  mix(periods, sizeof periods);
  mix(u.data(), u.size() * sizeof(double));
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_csv_slice(std::ostream& out, const ScalarField& u, Axis fixed, int index) {
  const GridSpec& g = u.grid();
  if (index < 0 || index >= g.count(fixed))
    throw std::invalid_argument("slice index " + std::to_string(index) + " outside axis " + axis_name(fixed));
  const Axis a = fixed == Axis::x ? Axis::y : Axis::x;
  const Axis b = fixed == Axis::t ? Axis::y : Axis::t;
  out << axis_name(a) << ',' << axis_name(b) << ",value\n";
  for (int j = 0; j < g.count(b); ++j)
    for (int i = 0; i < g.count(a); ++i) {
      int idx[3];
      idx[static_cast<int>(fixed)] = index;
      idx[static_cast<int>(a)] = i;
      idx[static_cast<int>(b)] = j;
      out << format_double(i * g.spacing(a)) << ',' << format_double(j * g.spacing(b)) << ','
          << format_double(u(idx[0], idx[1], idx[2])) << '\n';
    }
}

void write_csv_slice_file(const std::string& path, const ScalarField& u, Axis fixed, int index) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_csv_slice(out, u, fixed, index);
  if (!out) throw IoError("write failed for " + path);
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const NormalizationError&) {
    return ExitCode::normalization;
  } catch (const ContinuationStalled&) {
    return ExitCode::stalled;
  } catch (const NonPositiveLHS&) {
    return ExitCode::non_positive;
  } catch (const IoError&) {
    return ExitCode::io;
  } catch (const ParseError&) {
    return ExitCode::usage;
  } catch (const std::invalid_argument&) {
    return ExitCode::usage;
  } catch (...) {
    return ExitCode::failure;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
}

ScalarField datum_for_solve(const RunConfig& cfg, RunReport& report) {
  ScalarField F = load_datum(cfg.datum, cfg.solver.grid);
  const double integral = integrate(F.map([](double f) { return std::exp(f); }));
  report.add("datum.integral_exp", integral);
  report.add("datum.volume", F.grid().volume());
  if (cfg.renormalize) {
    F = renormalize(F);
    report.add("datum.renormalize_shift", -std::log(integral / F.grid().volume()));
  }
  report.add("datum.sup", sup_norm(F));
  return F;
}

}  // namespace

RunReport execute(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  ensure_out_dir(cfg);
  RunReport report;
  report.add("version", kVersion);
  report.add_config(cfg);
  const auto t0 = Clock::now();

  switch (cfg.command) {
    case Command::solve: {
      const ScalarField F = datum_for_solve(cfg, report);
      const auto ts = Clock::now();
      const solver::SolveReport r = solver::solve(F, cfg.solver);
      report.add("timing.solve_seconds", seconds_since(ts));
      report.add_solve(r);
      write_field_file(out_path(cfg, "solution.dump"), r.u);
      report.add("output.solution", out_path(cfg, "solution.dump"));
      report.add("grid.checksum", grid_checksum(r.u));
      break;
    }
    case Command::verify: {
      const ScalarField F = datum_for_solve(cfg, report);
      const ScalarField u = read_field_file(cfg.solution_path);
      require_same_grid(F.grid(), u.grid(), "verify");
      report.add("residual.sup", sup_norm(pde::residual(u, F)));
      report.add_ellipticity(pde::ellipticity_report(u, F));
      report.add_estimates(estimates::verify(u, F));
      report.add("grid.checksum", grid_checksum(u));
      break;
    }
    case Command::rotate: {
      const ScalarField F = datum_for_solve(cfg, report);
      const rotation::RationalAngle angle(cfg.angle->first, cfg.angle->second);
      const auto ts = Clock::now();
      const rotation::RotatedSolveReport r = rotation::solve_rotated(F, angle, cfg.solver);
      report.add("timing.solve_seconds", seconds_since(ts));
      report.add("rotation.m", r.m);
      report.add("rotation.n", r.n);
      report.add("rotation.L", r.period);
      report.add("rotation.cell_grid", r.report.u.grid().describe());
      report.add("rotation.cell_normalization", r.cell_normalization);
      report.add("rotation.sup_vp", r.sup_vp);
      report.add("rotation.vp_bound_ok", r.vp_bound_ok);
      report.add_solve(r.report);
      write_field_file(out_path(cfg, "solution.dump"), r.report.u);
      report.add("output.solution", out_path(cfg, "solution.dump"));
      report.add("grid.checksum", grid_checksum(r.report.u));
      break;
    }
    case Command::manufacture: {
      const Manufactured m = manufacture(load_datum(cfg.datum, cfg.solver.grid));
      report.add("manufacture.integral_exp", integrate(m.F.map([](double f) { return std::exp(f); })));
      report.add("manufacture.sup_F", sup_norm(m.F));
      report.add("manufacture.sup_u_star", sup_norm(m.u_star));
      write_field_file(out_path(cfg, "F.dump"), m.F);
      write_field_file(out_path(cfg, "u_star.dump"), m.u_star);
      report.add("output.F", out_path(cfg, "F.dump"));
      report.add("output.u_star", out_path(cfg, "u_star.dump"));
      report.add("grid.checksum", grid_checksum(m.F));
      break;
    }
    case Command::export_data: {
      const ScalarField u = read_field_file(cfg.input_path);
      const FieldNorms n = norms(u);
      report.add("field.grid", u.grid().describe());
      report.add("field.sup", n.sup);
      report.add("field.l2", n.l2);
      report.add("field.grad_sup", n.grad_sup);
      report.add("field.grad_l2", n.grad_l2);
      report.add("field.mean", mean(u));
      report.add("grid.checksum", grid_checksum(u));
      if (cfg.format == ExportFormat::field_dump) {
        write_field_file(out_path(cfg, "field.dump"), u);
        report.add("output.field", out_path(cfg, "field.dump"));
      } else if (cfg.format == ExportFormat::csv_slice) {
        write_csv_slice_file(out_path(cfg, "slice.csv"), u, cfg.slice_axis, cfg.slice_index);
        report.add("output.slice", out_path(cfg, "slice.csv"));
      }
      break;
    }
  }
  report.add("timing.total_seconds", seconds_since(t0));
  report.write_file(out_path(cfg, "report.txt"));
  report.write(out);
  return report;
}

}  // namespace ktcy::run
