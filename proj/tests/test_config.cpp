#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "optoscatter/runner.hpp"

using namespace optoscatter;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("optoscatter_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("presets carry the caption parameters") {
  struct Row {
    const char* id;
    double g1, g2, gamma_c, epsilon;
  };
  const Row rows[] = {{"fig2a", 0.2, 0.08, 0.1, 0.01},  {"fig2b", 0.2, 0.01, 0.1, 0.01},
                      {"fig2c", 0.4, 0.01, 0.1, 0.01},  {"fig3a", 0.8, 0.01, 0.02, 2.0},
                      {"fig3b", 0.8, 0.05, 0.02, 2.0},  {"fig3c", 0.8, 0.10, 0.02, 2.0},
                      {"fig4a", 0.01, 0.05, 0.02, 2.0}, {"fig4b", 0.1, 0.05, 0.02, 2.0},
                      {"fig4c", 0.5, 0.05, 0.02, 2.0},  {"fig5a", 0.5, 0.02, 0.01, 2.0},
                      {"fig5b", 0.5, 0.02, 0.1, 2.0},   {"fig5c", 0.5, 0.02, 0.8, 2.0}};
  CHECK(preset_ids().size() == std::size(rows));
  for (const auto& r : rows) {
    CAPTURE(r.id);
    const auto cfg = preset_config(r.id);
    CHECK(cfg.model.g1 == r.g1);
    CHECK(cfg.model.g2 == r.g2);
    CHECK(cfg.model.gamma_c == r.gamma_c);
    CHECK(cfg.model.omega_m == 1.0);
    CHECK(cfg.wavepacket.epsilon == r.epsilon);
    CHECK(cfg.state.max_n0() == 0);
    const auto wp = cfg.resolved_wavepacket();
    if (r.epsilon < 1.0) {
      CHECK(cfg.detunings_at_shift);
      CHECK(wp.delta1 == doctest::Approx(-delta_shift(cfg.model)));
      CHECK(wp.delta2 == wp.delta1);
      CHECK(cfg.assumptions.empty());
    } else {
      CHECK(wp.delta1 == 0.0);
      CHECK(wp.delta2 == 0.0);
      CHECK_FALSE(cfg.assumptions.empty());
    }
  }
  CHECK(preset_config("fig2c").zoom_p_axis.has_value());
  CHECK_THROWS_AS(preset_config("fig9z"), DomainError);
}

TEST_CASE("config round trip") {
  for (const auto& id : preset_ids()) {
    CAPTURE(id);
    const auto cfg = preset_config(id);
    const auto doc = to_json(cfg);
    CHECK(to_json(config_from_json(doc)) == doc);
  }
}

TEST_CASE("config validation reports every problem") {
  json doc = to_json(preset_config("fig2b"));
  doc["wavepacket"]["epsilon"] = 0.0;
  doc["bogus"] = 1;
  doc["model"]["typo"] = true;
  const auto msg = error_of(doc);
  CHECK(msg.find("bogus: unknown field") != std::string::npos);
  CHECK(msg.find("model.typo: unknown field") != std::string::npos);
  CHECK(msg.find("epsilon") != std::string::npos);

  json neg = to_json(preset_config("fig2b"));
  neg["model"]["gamma_c"] = -0.1;
  CHECK(error_of(neg).find("gamma_c") != std::string::npos);

  json bad_g2 = to_json(preset_config("fig2b"));
  bad_g2["model"]["g2"] = -0.2;  // 1 + 4 g2 m <= 0
  CHECK_FALSE(error_of(bad_g2).empty());

  json types = to_json(preset_config("fig2b"));
  types["threads"] = "four";
  CHECK(error_of(types).find("threads: expected an integer") != std::string::npos);

  json task = to_json(preset_config("fig2b"));
  task["tasks"] = json::array({"spectrum", "plot"});
  CHECK(error_of(task).find("unknown task 'plot'") != std::string::npos);

  json state = to_json(preset_config("fig2b"));
  state["state"] = {{"kind", "mixed"}, {"probabilities", {0.5, 0.2}}};
  CHECK_FALSE(error_of(state).empty());
}

TEST_CASE("oracle horizon is checked only when the oracle runs") {
  auto cfg = preset_config("fig5a");  // 20 / gamma_c exceeds the default bath recurrence
  CHECK_NOTHROW(cfg.validate());
  cfg.tasks.push_back("oracle-compare");
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("runs are deterministic and self-describing") {
  auto cfg = preset_config("fig4b");
  cfg.tasks = {"diagonal", "resonances"};
  cfg.diagonal = {-1.5, 0.5, 81};
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  const auto files = run_config(cfg, a);
  run_config(cfg, b);
  CHECK(files == std::vector<std::string>{"fig4b_diagonal.csv", "fig4b_diagonal.json", "fig4b_resonances.json"});
  for (const auto& f : files) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }

  const auto csv = slurp(a / "fig4b_diagonal.csv");
  CHECK(csv.rfind("delta,S\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 82);

  const auto doc = read_json(a / "fig4b_diagonal.json");
  CHECK(doc["schema_version"] == kSchemaVersion);
  const auto& prov = doc["provenance"];
  CHECK(prov["config"]["model"]["g1"] == 0.1);
  CHECK(prov["truncation_check"]["converged"] == true);
  CHECK(prov["assumptions"].size() == 2);
  CHECK(prov["delta"].get<double>() == doctest::Approx(delta_shift(cfg.model)));

  const auto lines = read_json(a / "fig4b_resonances.json");
  CHECK(lines["lines"].is_array());
  CHECK(lines["lines"].size() > 0);
}

TEST_CASE("grid documents round trip") {
  auto cfg = preset_config("fig2a");
  cfg.tasks = {"spectrum"};
  cfg.p_axis = {-0.2, 0.2, 9};
  cfg.q_axis = AxisSpec{-0.1, 0.3, 7};
  const auto dir = scratch_dir("grid");
  run_config(cfg, dir);
  const auto grid = grid_from_document(read_json(dir / "fig2a_grid.json"));
  REQUIRE(grid.p_axis.size() == 9);
  REQUIRE(grid.q_axis.size() == 7);
  const ScatteringModel model(cfg.model, cfg.resolved_wavepacket(), cfg.truncation);
  CHECK(grid.at(3, 5) == model.spectrum_point(grid.p_axis[3], grid.q_axis[5], cfg.state));

  std::ifstream csv(dir / "fig2a_grid.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "dp,dq,S");
  CHECK(row.rfind(format_double(-0.2) + "," + format_double(-0.1) + ",", 0) == 0);
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("sweep manifest records failures without stopping") {
  auto base = preset_config("fig4b");
  base.tasks = {"resonances"};
  const auto dir = scratch_dir("sweep");
  const auto manifest = run_sweep(base, "g1", {0.1, 0.3}, dir);
  REQUIRE(manifest["runs"].size() == 2);
  CHECK(manifest["runs"][0]["status"] == "ok");
  CHECK(std::filesystem::exists(dir / "point_001" / "fig4b_resonances.json"));
  CHECK(read_json(dir / "manifest.json") == manifest);

  const auto failing = run_sweep(base, "gamma_c", {0.02, -1.0}, dir / "bad");
  CHECK(failing["runs"][0]["status"] == "ok");
  CHECK(failing["runs"][1]["status"] == "failed");
  CHECK(failing["runs"][1]["error_kind"] == "validation");
  CHECK_THROWS_AS(run_sweep(base, "omega_c", {1.0}, dir), DomainError);
}

TEST_CASE("truncation escalates and reports failure") {
  auto cfg = preset_config("fig3c");
  cfg.tasks = {"diagonal"};
  cfg.truncation = {1, 1, 0};
  cfg.max_fock = 64;
  const auto record = converge_truncation(cfg);
  CHECK(record.converged);
  CHECK(record.trunc.fock > 1);

  cfg.max_fock = 2;
  CHECK_THROWS_AS(converge_truncation(cfg), ConvergenceError);
}
