#include "optoscatter/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace optoscatter {

namespace {

// Reads one JSON object, recording type errors and unknown keys by path.
class Fields {
public:
  Fields(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) {
      errors_.push_back(where() + ": expected an object");
      ok_ = false;
    }
  }

  bool has(const std::string& key) {
    if (!ok_ || !obj_.contains(key)) return false;
    used_.insert(key);
    return true;
  }
  const json& at(const std::string& key) const { return obj_.at(key); }
  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    if (!obj_[key].is_number()) return type_error(key, "a number");
    out = obj_[key].get<double>();
  }
  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    if (!obj_[key].is_number_integer()) return type_error(key, "an integer");
    out = obj_[key].get<int>();
  }
  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    if (!obj_[key].is_boolean()) return type_error(key, "true or false");
    out = obj_[key].get<bool>();
  }
  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    if (!obj_[key].is_string()) return type_error(key, "a string");
    out = obj_[key].get<std::string>();
  }
  void type_error(const std::string& key, const char* expected) {
    errors_.push_back(where(key) + ": expected " + expected);
  }

  void finish() {
    if (!ok_) return;
    for (const auto& [key, value] : obj_.items())
      if (!used_.count(key)) errors_.push_back(where(key) + ": unknown field");
  }

private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
  bool ok_ = true;
};

AxisSpec read_axis(const json& j, const std::string& path, AxisSpec base,
                   std::vector<std::string>& errors) {
  Fields f(j, path, errors);
  f.number("min", base.min);
  f.number("max", base.max);
  f.integer("points", base.points);
  f.finish();
  return base;
}

json axis_json(const AxisSpec& a) { return {{"min", a.min}, {"max", a.max}, {"points", a.points}}; }

void check_axis(const AxisSpec& a, const std::string& name, std::vector<std::string>& errors) {
  if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.max > a.min))
    errors.push_back(name + ": need finite min < max");
  if (a.points < 2) errors.push_back(name + ".points: need at least 2");
}

MechanicalInitState read_state(const json& j, std::vector<std::string>& errors) {
  Fields f(j, "state", errors);
  std::string kind = "ground";
  f.string("kind", kind);
  MechanicalInitState s;
  if (kind == "ground") {
    // defaults
  } else if (kind == "pure") {
    s.kind = MechanicalInitState::Kind::Pure;
    s.amplitudes.clear();
    if (f.has("amplitudes") && f.at("amplitudes").is_array()) {
      for (const auto& a : f.at("amplitudes")) {
        if (a.is_number()) {
          s.amplitudes.emplace_back(a.get<double>(), 0.0);
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
          s.amplitudes.emplace_back(a[0].get<double>(), a[1].get<double>());
        } else {
          errors.push_back("state.amplitudes: entries must be numbers or [re, im] pairs");
        }
      }
    } else {
      errors.push_back("state.amplitudes: required array for a pure state");
    }
  } else if (kind == "mixed") {
    s.kind = MechanicalInitState::Kind::Mixed;
    s.amplitudes.clear();
    if (f.has("probabilities") && f.at("probabilities").is_array()) {
      for (const auto& p : f.at("probabilities")) {
        if (p.is_number()) s.probabilities.push_back(p.get<double>());
        else errors.push_back("state.probabilities: entries must be numbers");
      }
    } else {
      errors.push_back("state.probabilities: required array for a mixed state");
    }
  } else if (kind == "thermal") {
    double mean = 0.0;
    int max_n0 = 0;
    f.number("mean_phonons", mean);
    f.integer("max_n0", max_n0);
    try {
      s = MechanicalInitState::thermal(mean, max_n0);
    } catch (const DomainError& e) {
      errors.push_back(std::string("state: ") + e.what());
    }
  } else {
    errors.push_back("state.kind: expected ground, pure, mixed or thermal");
  }
  f.finish();
  return s;
}

[[noreturn]] void throw_errors(const std::vector<std::string>& errors) {
  std::ostringstream msg;
  msg << "invalid configuration:";
  for (const auto& e : errors) msg << "\n  " << e;
  throw DomainError(msg.str());
}

}  // namespace

double OracleSpec::resolved_t_final(const ModelParams& p, const WavepacketParams& wp) const {
  if (t_final > 0.0) return t_final;
  return std::max(20.0 / p.gamma_c, 10.0 / wp.epsilon);
}

WavepacketParams RunConfig::resolved_wavepacket() const {
  WavepacketParams wp = wavepacket;
  if (detunings_at_shift) {
    const double d = delta_shift(model);
    wp.delta1 = -d;
    wp.delta2 = -d;
  }
  return wp;
}

void RunConfig::validate() const {
  std::vector<std::string> errors;
  auto guard = [&](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      errors.push_back(field + ": " + e.what());
    }
  };
  guard("model", [&] { model.validate(); });
  if (!std::isfinite(model.g1)) errors.push_back("model.g1: must be finite");
  guard("wavepacket", [&] { wavepacket.validate(); });
  guard("state", [&] { state.validate(); });
  if (tasks.empty()) errors.push_back("tasks: at least one task is required");
  for (const auto& t : tasks)
    if (std::find(known_tasks().begin(), known_tasks().end(), t) == known_tasks().end())
      errors.push_back("tasks: unknown task '" + t + "'");
  check_axis(p_axis, "grid.p", errors);
  if (q_axis) check_axis(*q_axis, "grid.q", errors);
  if (zoom_p_axis) check_axis(*zoom_p_axis, "zoom.p", errors);
  if (zoom_q_axis && !zoom_p_axis) errors.push_back("zoom.q: requires zoom.p");
  if (zoom_q_axis) check_axis(*zoom_q_axis, "zoom.q", errors);
  check_axis(diagonal, "diagonal", errors);
  if (truncation.fock < 0 || truncation.j_max < 0 || truncation.n0_max < 0)
    errors.push_back("truncation: limits must be non-negative");
  if (state.max_n0() > truncation.n0_max)
    errors.push_back("truncation.n0_max: smaller than the initial-state support");
  if (!(tolerance > 0.0)) errors.push_back("tolerance: must be positive");
  if (max_fock < truncation.fock) errors.push_back("truncation.max_fock: below truncation.fock");
  if (threads < 0) errors.push_back("threads: must be >= 0 (0 = all cores)");
  if (resonance_j_max < 0 || resonance_s_max < 0)
    errors.push_back("resonances: bounds must be non-negative");
  if (fc_max_index < 0 || fc_max_index > kMaxClosedFormIndex)
    errors.push_back("fc_table.max_index: outside 0.." + std::to_string(kMaxClosedFormIndex));

  const auto& o = oracle;
  if (o.n_modes < 3) errors.push_back("oracle.n_modes: need at least 3");
  if (!(o.half_width > 0.0)) errors.push_back("oracle.half_width: must be positive");
  if (o.n_b < 0 || o.n0 < 0 || o.n0 > o.n_b) errors.push_back("oracle.n0: must lie in 0..n_b");
  if (o.t_final < 0.0) errors.push_back("oracle.t_final: must be non-negative");
  if (!(o.dt > 0.0)) errors.push_back("oracle.dt: must be positive");
  if (o.arrival_delay < 0.0) errors.push_back("oracle.arrival_delay: must be non-negative");
  if (o.window_half_width < 0.0) errors.push_back("oracle.window_half_width: must be non-negative");
  if (o.window_points < 2) errors.push_back("oracle.window_points: need at least 2");
  if (!(o.min_band_fraction > 0.0 && o.min_band_fraction <= 1.0))
    errors.push_back("oracle.min_band_fraction: must lie in (0, 1]");
  if (!(o.norm_tolerance > 0.0)) errors.push_back("oracle.norm_tolerance: must be positive");
  const bool oracle_task = std::find(tasks.begin(), tasks.end(), "oracle-compare") != tasks.end();
  if (oracle_task && errors.empty() && o.n_modes >= 3 && o.half_width > 0.0) {
    const double spacing = 2.0 * o.half_width / (o.n_modes - 1);
    const double horizon = o.resolved_t_final(model, wavepacket) + o.arrival_delay;
    if (2.0 * std::numbers::pi / spacing <= horizon)
      errors.push_back("oracle: recurrence time of the bath is shorter than arrival_delay + t_final");
  }
  if (!errors.empty()) throw_errors(errors);
}

RunConfig config_from_json(const json& doc) {
  std::vector<std::string> errors;
  RunConfig cfg;
  Fields root(doc, "", errors);

  if (root.has("schema_version")) {
    const auto& v = root.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
      errors.push_back("schema_version: expected " + std::to_string(kSchemaVersion));
  }
  if (root.has("preset")) {
    if (root.at("preset").is_string()) cfg.preset = root.at("preset").get<std::string>();
    else root.type_error("preset", "a string");
  }
  if (root.has("tasks")) {
    const auto& t = root.at("tasks");
    if (t.is_array() && std::all_of(t.begin(), t.end(), [](const json& x) { return x.is_string(); }))
      cfg.tasks = t.get<std::vector<std::string>>();
    else root.type_error("tasks", "an array of strings");
  }
  if (root.has("model")) {
    Fields f(root.at("model"), "model", errors);
    f.number("omega_m", cfg.model.omega_m);
    f.number("g1", cfg.model.g1);
    f.number("g2", cfg.model.g2);
    f.number("gamma_c", cfg.model.gamma_c);
    if (f.has("omega_c") && !root.at("model").at("omega_c").is_null()) {
      if (root.at("model").at("omega_c").is_number())
        cfg.model.omega_c = root.at("model").at("omega_c").get<double>();
      else f.type_error("omega_c", "a number or null");
    }
    f.finish();
  }
  if (root.has("wavepacket")) {
    Fields f(root.at("wavepacket"), "wavepacket", errors);
    f.number("delta1", cfg.wavepacket.delta1);
    f.number("delta2", cfg.wavepacket.delta2);
    f.number("epsilon", cfg.wavepacket.epsilon);
    f.boolean("at_shift", cfg.detunings_at_shift);
    f.finish();
  }
  if (root.has("state")) cfg.state = read_state(root.at("state"), errors);
  if (root.has("grid")) {
    Fields f(root.at("grid"), "grid", errors);
    if (f.has("p")) cfg.p_axis = read_axis(f.at("p"), "grid.p", cfg.p_axis, errors);
    if (f.has("q")) cfg.q_axis = read_axis(f.at("q"), "grid.q", cfg.p_axis, errors);
    f.finish();
  }
  if (root.has("zoom")) {
    Fields f(root.at("zoom"), "zoom", errors);
    if (f.has("p")) cfg.zoom_p_axis = read_axis(f.at("p"), "zoom.p", AxisSpec{}, errors);
    if (f.has("q")) cfg.zoom_q_axis = read_axis(f.at("q"), "zoom.q", AxisSpec{}, errors);
    f.finish();
  }
  if (root.has("diagonal")) cfg.diagonal = read_axis(root.at("diagonal"), "diagonal", cfg.diagonal, errors);
  if (root.has("truncation")) {
    Fields f(root.at("truncation"), "truncation", errors);
    f.integer("fock", cfg.truncation.fock);
    f.integer("j_max", cfg.truncation.j_max);
    f.integer("n0_max", cfg.truncation.n0_max);
    f.integer("max_fock", cfg.max_fock);
    f.finish();
  }
  root.number("tolerance", cfg.tolerance);
  root.integer("threads", cfg.threads);
  if (root.has("resonances")) {
    Fields f(root.at("resonances"), "resonances", errors);
    f.integer("j_max", cfg.resonance_j_max);
    f.integer("s_max", cfg.resonance_s_max);
    f.finish();
  }
  if (root.has("fc_table")) {
    Fields f(root.at("fc_table"), "fc_table", errors);
    f.integer("max_index", cfg.fc_max_index);
    f.finish();
  }
  if (root.has("oracle")) {
    Fields f(root.at("oracle"), "oracle", errors);
    auto& o = cfg.oracle;
    f.integer("n_modes", o.n_modes);
    f.number("half_width", o.half_width);
    f.integer("n_b", o.n_b);
    f.integer("n0", o.n0);
    f.number("t_final", o.t_final);
    f.number("dt", o.dt);
    f.number("arrival_delay", o.arrival_delay);
    f.number("window_half_width", o.window_half_width);
    f.integer("window_points", o.window_points);
    f.number("min_band_fraction", o.min_band_fraction);
    f.number("norm_tolerance", o.norm_tolerance);
    f.finish();
  }
  root.string("output_dir", cfg.output_dir);
  if (root.has("assumptions")) {
    const auto& a = root.at("assumptions");
    if (a.is_array() && std::all_of(a.begin(), a.end(), [](const json& x) { return x.is_string(); }))
      cfg.assumptions = a.get<std::vector<std::string>>();
    else root.type_error("assumptions", "an array of strings");
  }
  root.finish();
  if (!errors.empty()) {
    // Report semantic problems of the fields that did parse as well.
    try {
      cfg.validate();
    } catch (const DomainError& e) {
      std::istringstream lines(e.what());
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) errors.push_back(line.substr(line.find_first_not_of(' ')));
    }
    throw_errors(errors);
  }
  cfg.validate();
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["preset"] = cfg.preset ? json(*cfg.preset) : json(nullptr);
  j["tasks"] = cfg.tasks;
  j["model"] = to_json(cfg.model);
  j["wavepacket"] = to_json(cfg.wavepacket);
  j["wavepacket"]["at_shift"] = cfg.detunings_at_shift;
  j["state"] = to_json(cfg.state);
  j["grid"] = {{"p", axis_json(cfg.p_axis)}, {"q", axis_json(cfg.q_axis.value_or(cfg.p_axis))}};
  if (cfg.zoom_p_axis) {
    j["zoom"] = {{"p", axis_json(*cfg.zoom_p_axis)},
                 {"q", axis_json(cfg.zoom_q_axis.value_or(*cfg.zoom_p_axis))}};
  }
  j["diagonal"] = axis_json(cfg.diagonal);
  j["truncation"] = to_json(cfg.truncation);
  j["truncation"]["max_fock"] = cfg.max_fock;
  j["tolerance"] = cfg.tolerance;
  j["threads"] = cfg.threads;
  j["resonances"] = {{"j_max", cfg.resonance_j_max}, {"s_max", cfg.resonance_s_max}};
  j["fc_table"] = {{"max_index", cfg.fc_max_index}};
  const auto& o = cfg.oracle;
  j["oracle"] = {{"n_modes", o.n_modes},
                 {"half_width", o.half_width},
                 {"n_b", o.n_b},
                 {"n0", o.n0},
                 {"t_final", o.t_final},
                 {"dt", o.dt},
                 {"arrival_delay", o.arrival_delay},
                 {"window_half_width", o.window_half_width},
                 {"window_points", o.window_points},
                 {"min_band_fraction", o.min_band_fraction},
                 {"norm_tolerance", o.norm_tolerance}};
  j["output_dir"] = cfg.output_dir;
  j["assumptions"] = cfg.assumptions;
  return j;
}

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids{"fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c",
                                            "fig4a", "fig4b", "fig4c", "fig5a", "fig5b", "fig5c"};
  return ids;
}

RunConfig preset_config(const std::string& id) {
  const auto& ids = preset_ids();
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw DomainError("unknown preset '" + id + "'");
  const int panel = id.back() - 'a';
  const char family = id[3];

  RunConfig cfg;
  cfg.preset = id;
  cfg.model.omega_m = 1.0;
  if (family == '2') {
    static constexpr double g1[] = {0.2, 0.2, 0.4};
    static constexpr double g2[] = {0.08, 0.01, 0.01};
    cfg.model.g1 = g1[panel];
    cfg.model.g2 = g2[panel];
    cfg.model.gamma_c = 0.1;
    cfg.wavepacket.epsilon = 0.01;
    cfg.detunings_at_shift = true;
    cfg.tasks = {"spectrum", "resonances"};
    cfg.p_axis = {-1.5, 1.5, 401};
    if (panel == 2) {
      // Zoom on the main peak around (-delta, -delta).
      const double d = delta_shift(cfg.model);
      cfg.zoom_p_axis = AxisSpec{-d - 0.15, -d + 0.15, 241};
    }
  } else {
    cfg.wavepacket = {0.0, 0.0, 2.0};
    cfg.model.g1 = 0.8;
    cfg.model.g2 = 0.05;
    cfg.model.gamma_c = 0.02;
    if (family == '3') {
      static constexpr double g2[] = {0.01, 0.05, 0.10};
      cfg.model.g2 = g2[panel];
      cfg.tasks = {"spectrum", "diagonal", "resonances"};
    } else if (family == '4') {
      static constexpr double g1[] = {0.01, 0.1, 0.5};
      cfg.model.g1 = g1[panel];
      cfg.tasks = {"diagonal", "resonances"};
    } else {
      static constexpr double gamma[] = {0.01, 0.1, 0.8};
      cfg.model.g1 = 0.5;
      cfg.model.g2 = 0.02;
      cfg.model.gamma_c = gamma[panel];
      cfg.tasks = {"diagonal", "resonances"};
    }
    cfg.p_axis = {-3.0, 3.0, 301};
    cfg.diagonal = {-3.0, 3.0, 1201};
    cfg.assumptions = {"input detunings Delta1 = Delta2 = 0 (not given in the caption)"};
    if (family != '3') cfg.assumptions.push_back("mechanical ground state (not restated in the caption)");
  }
  cfg.output_dir = "out/" + id;
  cfg.validate();
  return cfg;
}

}  // namespace optoscatter
