// Command-line front end: spectra, diagonals, resonance lines, overlap
// tables, time-domain comparisons, figure presets and parameter sweeps.

#include <iostream>

#include <CLI11.hpp>

#include "optoscatter/runner.hpp"

using namespace optoscatter;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  std::string preset;
  int threads = -1;
  int trunc = -1;
  double tolerance = -1.0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "RunConfig JSON file");
  cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
  cmd->add_option("--preset", o.preset, "Start from a figure preset")
      ->check(CLI::IsMember(preset_ids()));
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--trunc", o.trunc, "Fock and phonon-number truncation");
  cmd->add_option("--tolerance", o.tolerance, "Relative truncation tolerance");
}

RunConfig build_config(const CommonOptions& o) {
  RunConfig cfg;
  if (!o.config.empty()) {
    cfg = config_from_json(read_json(o.config));
    if (!o.preset.empty()) throw DomainError("--preset and --config are mutually exclusive");
  } else if (!o.preset.empty()) {
    cfg = preset_config(o.preset);
  }
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.threads >= 0) cfg.threads = o.threads;
  if (o.trunc >= 0) {
    cfg.truncation.fock = o.trunc;
    cfg.truncation.j_max = o.trunc;
    cfg.max_fock = std::max(cfg.max_fock, o.trunc);
  }
  if (o.tolerance >= 0.0) cfg.tolerance = o.tolerance;
  cfg.validate();
  return cfg;
}

void report(const std::vector<std::string>& files, const std::string& dir) {
  for (const auto& f : files) std::cout << dir << "/" << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon scattering spectra of a mixed optomechanical cavity"};
  app.require_subcommand(1);

  CommonOptions opts;
  const std::vector<std::pair<std::string, std::string>> single_tasks{
      {"spectrum", "2D joint spectrum S(Dp, Dq) on a grid"},
      {"diagonal", "S(D, D) along the diagonal"},
      {"resonances", "Predicted emission lines"},
      {"fc-table", "Dump of the Franck-Condon overlaps"},
      {"oracle-compare", "Time-domain integration compared with the analytic spectrum"}};
  for (const auto& [name, help] : single_tasks) add_common(app.add_subcommand(name, help), opts);

  auto* preset_cmd = app.add_subcommand("preset", "Run every task of a figure preset");
  add_common(preset_cmd, opts);
  std::string positional_preset;
  preset_cmd->add_option("id", positional_preset, "Preset id")->check(CLI::IsMember(preset_ids()));

  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat a configuration over parameter values");
  add_common(sweep_cmd, opts);
  std::string sweep_param;
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--param", sweep_param, "Parameter to vary")
      ->required()
      ->check(CLI::IsMember(sweep_parameters()));
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "preset") {
      if (!positional_preset.empty()) {
        if (!opts.preset.empty() && opts.preset != positional_preset)
          throw DomainError("conflicting preset ids");
        opts.preset = positional_preset;
      }
      if (opts.preset.empty()) throw DomainError("preset: an id is required");
      const RunConfig cfg = build_config(opts);
      report(run_config(cfg, cfg.output_dir), cfg.output_dir);
    } else if (name == "sweep") {
      const RunConfig base = build_config(opts);
      const json manifest = run_sweep(base, sweep_param, sweep_values, base.output_dir);
      int failed = 0;
      bool convergence = false;
      for (const auto& run : manifest["runs"]) {
        if (run["status"] != "failed") continue;
        ++failed;
        convergence = convergence || run["error_kind"] == "convergence";
      }
      std::cout << base.output_dir << "/manifest.json (" << manifest["runs"].size() << " runs, "
                << failed << " failed)\n";
      if (failed > 0) return convergence ? kExitConvergence : kExitValidation;
    } else {
      RunConfig cfg = build_config(opts);
      cfg.tasks = {name};
      report(run_config(cfg, cfg.output_dir), cfg.output_dir);
      if (name == "oracle-compare") {
        const auto doc = read_json(std::filesystem::path(cfg.output_dir) /
                                   (cfg.preset.value_or("run") + "_oracle_report.json"));
        std::cout << "rel_l2 = " << doc["comparison"]["rel_l2"].get<double>()
                  << ", residual intracavity = "
                  << doc["comparison"]["residual_intracavity"].get<double>() << "\n";
      }
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
