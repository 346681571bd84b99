#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optoscatter/io.hpp"

namespace optoscatter {

/// Uniform axis request.
struct AxisSpec {
  double min = -1.5;
  double max = 1.5;
  int points = 401;

  std::vector<double> values() const { return linspace(min, max, points); }
};

/// Time-domain comparison settings. A window half-width of zero means
/// ten wavepacket widths around the mean input detuning.
struct OracleSpec {
  int n_modes = 601;
  double half_width = 1.5;
  int n_b = 6;
  int n0 = 0;
  /// Zero selects max(20 / gamma_c, 10 / epsilon): the unscattered tail of the
  /// input interferes with the output and decays only as exp(-epsilon t).
  double t_final = 0.0;
  double dt = 0.2;
  double arrival_delay = 40.0;
  double window_half_width = 0.0;
  int window_points = 41;
  double min_band_fraction = 0.99;
  double norm_tolerance = 1e-5;

  double resolved_t_final(const ModelParams& p, const WavepacketParams& wp) const;
};

/// A single JSON document describing what to compute and where to put it.
struct RunConfig {
  std::optional<std::string> preset;
  std::vector<std::string> tasks{"spectrum"};
  ModelParams model;
  WavepacketParams wavepacket;
  /// Place both input photons on the one-photon resonance, Delta1 = Delta2 = -delta.
  bool detunings_at_shift = false;
  MechanicalInitState state;
  AxisSpec p_axis;
  std::optional<AxisSpec> q_axis;
  /// Optional second grid (e.g. a zoom on the main peak).
  std::optional<AxisSpec> zoom_p_axis;
  std::optional<AxisSpec> zoom_q_axis;
  AxisSpec diagonal{-3.0, 3.0, 1201};
  Truncation truncation;
  double tolerance = 5e-3;
  /// Largest Fock limit the automatic doubling may reach.
  int max_fock = 96;
  int threads = 1;
  int resonance_j_max = 6;
  int resonance_s_max = 6;
  int fc_max_index = 10;
  OracleSpec oracle;
  std::string output_dir = "out";
  std::vector<std::string> assumptions;

  /// Wavepacket with the shift placement applied.
  WavepacketParams resolved_wavepacket() const;
  /// Throws DomainError listing every invalid field.
  void validate() const;
};

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{"spectrum", "diagonal", "resonances", "fc-table",
                                              "oracle-compare"};
  return tasks;
}

/// Parses and validates; unknown keys are rejected with their path.
RunConfig config_from_json(const json& doc);
json to_json(const RunConfig& cfg);

const std::vector<std::string>& preset_ids();
/// Throws DomainError for unknown ids.
RunConfig preset_config(const std::string& id);

}  // namespace optoscatter
