#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ktcy/run.hpp"

namespace {

struct Flags {
  std::string config, grid, angle, out, datum, datum_file, builtin, solution, input, format, slice_axis;
  int slice_index = -1;
  bool renormalize = false;
  std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file; flags override it");
  cmd->add_option("--grid", f.grid, "grid counts NX,NY,NT");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--set", f.settings, "extra key=value setting, repeatable");
}

void add_datum(CLI::App* cmd, Flags& f) {
  auto* g = cmd->add_option_group("datum");
  g->add_option("--datum", f.datum, "closed-form expression in x, y, t");
  g->add_option("--datum-file", f.datum_file, "field dump");
  g->add_option("--builtin", f.builtin, "builtin datum name[:amplitude]");
  g->require_option(0, 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calabi-Yau equation solver on the Kodaira-Thurston manifold"};
  app.set_version_flag("--version", ktcy::run::kVersion);
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "solve for u given F");
  add_common(solve, f);
  add_datum(solve, f);
  solve->add_flag("--renormalize", f.renormalize, "shift F so that the integral of e^F equals the volume");

  auto* verify = app.add_subcommand("verify", "audit a dumped solution against F");
  add_common(verify, f);
  add_datum(verify, f);
  verify->add_flag("--renormalize", f.renormalize, "renormalize F first");
  verify->add_option("--solution", f.solution, "solution field dump");

  auto* rotate = app.add_subcommand("rotate", "solve for the rotated form with tan(theta) = N/M");
  add_common(rotate, f);
  add_datum(rotate, f);
  rotate->add_flag("--renormalize", f.renormalize, "renormalize F first");
  rotate->add_option("--angle", f.angle, "coprime pair M,N");

  auto* manufacture = app.add_subcommand("manufacture", "build F = log(ma_lhs(u*)) from u*");
  add_common(manufacture, f);
  add_datum(manufacture, f);

  auto* exp = app.add_subcommand("export", "convert a field dump");
  add_common(exp, f);
  exp->add_option("--input", f.input, "field dump");
  exp->add_option("--format", f.format, "report-text, field-dump or csv-slice");
  exp->add_option("--slice-axis", f.slice_axis, "fixed axis of a csv slice (x, y, t)");
  exp->add_option("--slice-index", f.slice_index, "grid index along the fixed axis");

  CLI11_PARSE(app, argc, argv);

  try {
    ktcy::run::RunConfig cfg;
    const CLI::App* cmd = app.get_subcommands().front();
    cfg.command = ktcy::run::parse_command(cmd->get_name());
    if (!f.config.empty()) {
      ktcy::run::load_config_file(cfg, f.config);
      cfg.command = ktcy::run::parse_command(cmd->get_name());
    }
    for (const auto& s : f.settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
      ktcy::run::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    using ktcy::run::apply_setting;
    if (!f.grid.empty()) apply_setting(cfg, "grid", f.grid);
    if (!f.out.empty()) apply_setting(cfg, "out", f.out);
    if (!f.datum.empty()) apply_setting(cfg, "datum", f.datum);
    if (!f.datum_file.empty()) apply_setting(cfg, "datum_file", f.datum_file);
    if (!f.builtin.empty()) apply_setting(cfg, "builtin", f.builtin);
    if (!f.solution.empty()) apply_setting(cfg, "solution", f.solution);
    if (!f.input.empty()) apply_setting(cfg, "input", f.input);
    if (!f.angle.empty()) apply_setting(cfg, "angle", f.angle);
    if (!f.format.empty()) apply_setting(cfg, "format", f.format);
    if (!f.slice_axis.empty()) apply_setting(cfg, "slice_axis", f.slice_axis);
    if (f.slice_index >= 0) cfg.slice_index = f.slice_index;
    if (f.renormalize) cfg.renormalize = true;
    ktcy::run::execute(cfg, std::cout);
    return ktcy::run::ExitCode::ok;
  } catch (const std::exception& e) {
    const int code = ktcy::run::exit_code_for_current_exception();
    std::cerr << "ktcy: " << e.what() << '\n';
    return code;
  }
}
