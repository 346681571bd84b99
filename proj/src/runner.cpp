#include "optoscatter/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>

namespace optoscatter {

namespace {

json provenance(const RunConfig& cfg, const TruncationRecord* record) {
  json p;
  p["software"] = "optoscatter";
  p["config"] = to_json(cfg);
  p["wavepacket_resolved"] = to_json(cfg.resolved_wavepacket());
  p["delta"] = delta_shift(cfg.model);
  p["nu"] = nu_shift(cfg.model);
  if (record) p["truncation_check"] = to_json(*record);
  p["assumptions"] = cfg.assumptions;
  return p;
}

std::vector<double> samples(const AxisSpec& a, int n) { return linspace(a.min, a.max, std::min(n, a.points)); }

}  // namespace

std::vector<std::pair<double, double>> truncation_probe_points(const RunConfig& cfg) {
  std::vector<std::pair<double, double>> pts;
  const auto wp = cfg.resolved_wavepacket();
  pts.emplace_back(wp.delta1, wp.delta2);
  auto add_grid = [&](const AxisSpec& p, const AxisSpec& q) {
    for (double x : samples(p, 7))
      for (double y : samples(q, 7)) pts.emplace_back(x, y);
  };
  const auto& tasks = cfg.tasks;
  auto wants = [&](const char* t) { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); };
  if (wants("spectrum")) {
    add_grid(cfg.p_axis, cfg.q_axis.value_or(cfg.p_axis));
    if (cfg.zoom_p_axis) add_grid(*cfg.zoom_p_axis, cfg.zoom_q_axis.value_or(*cfg.zoom_p_axis));
  }
  if (wants("diagonal"))
    for (double x : samples(cfg.diagonal, 49)) pts.emplace_back(x, x);
  return pts;
}

TruncationRecord converge_truncation(const RunConfig& cfg) {
  const auto wp = cfg.resolved_wavepacket();
  const auto points = truncation_probe_points(cfg);
  Truncation trunc = cfg.truncation;
  while (true) {
    const ScatteringModel model(cfg.model, wp, trunc);
    const auto record = check_truncation(model, cfg.state, points, cfg.tolerance);
    if (record.converged) return record;
    const Truncation next = trunc.doubled();
    if (next.fock > cfg.max_fock || next.j_max > cfg.max_fock) {
      char msg[200];
      std::snprintf(msg, sizeof msg,
                    "Fock truncation not converged: relative change %.3g > %.3g at fock=%d, j_max=%d",
                    record.max_rel_change, cfg.tolerance, trunc.fock, trunc.j_max);
      throw ConvergenceError(msg);
    }
    trunc = next;
  }
}

OracleRun run_oracle(const RunConfig& cfg) {
  const auto wp = cfg.resolved_wavepacket();
  const auto& o = cfg.oracle;
  const auto bath = BathGrid::uniform(o.half_width, o.n_modes, cfg.model.gamma_c);
  const auto fc = std::make_shared<const FCTable>(cfg.model, std::max(o.n_b, cfg.truncation.required_index()));
  OracleRun run;
  run.t_final = o.resolved_t_final(cfg.model, wp);
  run.recurrence_time = bath.recurrence_time();

  auto state = initialize(wp, o.n0, o.n_b, bath, o.min_band_fraction, o.arrival_delay);
  run.band_fraction = state.initial_norm;
  OracleOptions opts;
  opts.dt = o.dt;
  opts.norm_tolerance = o.norm_tolerance;
  opts.threads = cfg.threads;
  state = evolve(std::move(state), cfg.model, *fc, bath, o.arrival_delay + run.t_final, opts);

  const double center = 0.5 * (wp.delta1 + wp.delta2);
  const double half = o.window_half_width > 0.0 ? o.window_half_width : 10.0 * wp.epsilon;
  run.oracle_grid = extract_spectrum(state, bath, select_modes(bath, center - half, center + half, o.window_points));

  std::vector<cplx> amps(o.n0 + 1, 0.0);
  amps[o.n0] = 1.0;
  Truncation trunc = cfg.truncation;
  trunc.n0_max = std::max(trunc.n0_max, o.n0);
  const ScatteringModel model(cfg.model, wp, trunc, fc);
  run.comparison = compare_to_analytic(run.oracle_grid, model, MechanicalInitState::pure(amps), cfg.threads);
  run.comparison.residual_intracavity = state.intracavity_population();
  run.comparison.norm_error = std::abs(state.norm() - 1.0);
  run.analytic_grid = spectrum_grid(model, MechanicalInitState::pure(amps), run.oracle_grid.p_axis,
                                    run.oracle_grid.q_axis, cfg.threads);
  return run;
}

std::vector<std::string> run_config(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  std::vector<std::string> written;
  const std::string stem = cfg.preset.value_or("run");
  auto path = [&](const std::string& name) {
    written.push_back(name);
    return out_dir / name;
  };
  auto wants = [&](const char* t) {
    return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end();
  };
  const auto wp = cfg.resolved_wavepacket();

  if (wants("spectrum") || wants("diagonal")) {
    const auto record = converge_truncation(cfg);
    const ScatteringModel model(cfg.model, wp, record.trunc);
    const json prov = provenance(cfg, &record);
    if (wants("spectrum")) {
      const auto grid = spectrum_grid(model, cfg.state, cfg.p_axis.values(),
                                      cfg.q_axis.value_or(cfg.p_axis).values(), cfg.threads);
      write_grid_csv(path(stem + "_grid.csv"), grid);
      write_json(path(stem + "_grid.json"), grid_document(grid, prov));
      if (cfg.zoom_p_axis) {
        const auto zoom = spectrum_grid(model, cfg.state, cfg.zoom_p_axis->values(),
                                        cfg.zoom_q_axis.value_or(*cfg.zoom_p_axis).values(), cfg.threads);
        write_grid_csv(path(stem + "_zoom.csv"), zoom);
        write_json(path(stem + "_zoom.json"), grid_document(zoom, prov));
      }
    }
    if (wants("diagonal")) {
      const auto diag = diagonal_spectrum(model, cfg.state, cfg.diagonal.values(), cfg.threads);
      write_diagonal_csv(path(stem + "_diagonal.csv"), diag);
      write_json(path(stem + "_diagonal.json"), diagonal_document(diag, prov));
    }
  }
  if (wants("resonances")) {
    const auto lines = resonance_lines(cfg.model, cfg.resonance_j_max, cfg.resonance_s_max);
    write_json(path(stem + "_resonances.json"), resonance_document(lines, provenance(cfg, nullptr)));
  }
  if (wants("fc-table")) {
    const FCTable table(cfg.model, cfg.fc_max_index);
    write_fc_table_csv(path(stem + "_fc_table.csv"), table, cfg.fc_max_index);
  }
  if (wants("oracle-compare")) {
    const auto run = run_oracle(cfg);
    json report;
    report["schema_version"] = kSchemaVersion;
    report["kind"] = "oracle_comparison";
    report["provenance"] = provenance(cfg, nullptr);
    report["comparison"] = to_json(run.comparison);
    report["t_final"] = run.t_final;
    report["arrival_delay"] = cfg.oracle.arrival_delay;
    report["band_fraction"] = run.band_fraction;
    report["recurrence_time"] = run.recurrence_time;
    report["mode_spacing"] = 2.0 * cfg.oracle.half_width / (cfg.oracle.n_modes - 1);
    report["window_points"] = run.oracle_grid.p_axis.size();
    write_json(path(stem + "_oracle_report.json"), report);
    write_grid_csv(path(stem + "_oracle_grid.csv"), run.oracle_grid);
    write_grid_csv(path(stem + "_oracle_analytic.csv"), run.analytic_grid);
  }
  return written;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names{"g1", "g2", "gamma_c", "omega_m",
                                              "epsilon", "delta1", "delta2"};
  return names;
}

json run_sweep(const RunConfig& base, const std::string& param, const std::vector<double>& values,
               const std::filesystem::path& out_dir) {
  const auto& names = sweep_parameters();
  if (std::find(names.begin(), names.end(), param) == names.end())
    throw DomainError("unknown sweep parameter '" + param + "'");
  if (values.empty()) throw DomainError("sweep needs at least one value");

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["kind"] = "sweep_manifest";
  manifest["parameter"] = param;
  manifest["values"] = values;
  manifest["runs"] = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunConfig cfg = base;
    const double v = values[i];
    if (param == "g1") cfg.model.g1 = v;
    else if (param == "g2") cfg.model.g2 = v;
    else if (param == "gamma_c") cfg.model.gamma_c = v;
    else if (param == "omega_m") cfg.model.omega_m = v;
    else if (param == "epsilon") cfg.wavepacket.epsilon = v;
    else if (param == "delta1") cfg.wavepacket.delta1 = v;
    else cfg.wavepacket.delta2 = v;
    if (param == "delta1" || param == "delta2") cfg.detunings_at_shift = false;

    char dir[32];
    std::snprintf(dir, sizeof dir, "point_%03zu", i);
    cfg.output_dir = (out_dir / dir).string();
    json entry{{"index", i}, {"value", v}, {"dir", dir}};
    try {
      entry["files"] = run_config(cfg, out_dir / dir);
      entry["status"] = "ok";
    } catch (const ConvergenceError& e) {
      entry["status"] = "failed";
      entry["error_kind"] = "convergence";
      entry["error"] = e.what();
    } catch (const DomainError& e) {
      entry["status"] = "failed";
      entry["error_kind"] = "validation";
      entry["error"] = e.what();
    }
    entry["config"] = to_json(cfg);
    manifest["runs"].push_back(entry);
  }
  write_json(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace optoscatter
