#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "optoscatter/config.hpp"

namespace optoscatter {

/// Points where the truncation check is made for a configuration: 7x7
/// samples of each grid, 49 diagonal samples, and the input detunings.
std::vector<std::pair<double, double>> truncation_probe_points(const RunConfig& cfg);

/// Doubles the Fock limits until the probe points change by less than the
/// tolerance. Throws ConvergenceError when max_fock is exceeded.
TruncationRecord converge_truncation(const RunConfig& cfg);

/// Time-domain run compared with the analytic spectrum on the oracle window.
struct OracleRun {
  OracleComparison comparison;
  SpectrumGrid oracle_grid;
  SpectrumGrid analytic_grid;
  double t_final = 0.0;
  double band_fraction = 0.0;
  double recurrence_time = 0.0;
};

OracleRun run_oracle(const RunConfig& cfg);

/// Executes every task of the configuration and writes into out_dir.
/// Returns the list of files written (relative to out_dir).
std::vector<std::string> run_config(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Names accepted by run_sweep.
const std::vector<std::string>& sweep_parameters();

/// Runs the base configuration once per value into out_dir/point_NNN and
/// writes out_dir/manifest.json. Failed points are recorded, not fatal.
/// Returns the manifest.
json run_sweep(const RunConfig& base, const std::string& param, const std::vector<double>& values,
               const std::filesystem::path& out_dir);

}  // namespace optoscatter
