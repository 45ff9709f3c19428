#include <catch2/catch_amalgamated.hpp>

#include <lightmote/compare.hpp>
#include <lightmote/report_io.hpp>
#include <lightmote/scenario.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace lightmote;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  auto dir = fs::temp_directory_path() / "lightmote_scenario_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_scenario(const std::string& name, const std::string& body) {
  const auto path = test_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBasicScenario = R"({
  "duration_days": 2,
  "seed": 42,
  "channel_loss_p": 0.0,
  "nodes": [
    {"id": "desk", "app": "sense5", "preset": "center_office"},
    {"id": "hall", "app": "pir", "preset": "stairs"}
  ]
})";

}  // namespace

TEST_CASE("well-formed scenario loads and runs") {
  const auto path = write_scenario("basic.json", kBasicScenario);
  const auto sc = load_scenario(path.string());

  CHECK(sc.duration_days == 2);
  CHECK(sc.seed == 42);
  REQUIRE(sc.nodes.size() == 2);
  CHECK(sc.nodes[0].id == "desk");
  CHECK(sc.nodes[0].app == AppType::kSense5);
  CHECK(sc.nodes[0].light.t_s.size() == 2 * 1440);
  CHECK(sc.nodes[1].app == AppType::kPir);
  CHECK_FALSE(sc.nodes[1].events.t_s.empty());

  const auto report = run_scenario(sc);
  REQUIRE(report.nodes.size() == 2);
  CHECK(report.nodes[0].total_packets() > 0);
  CHECK(report.nodes[1].pir_total(PirOutcome::kDetected) > 0);
}

TEST_CASE("seed override reshapes generated traces") {
  const auto path = write_scenario("override.json", kBasicScenario);
  const auto a = load_scenario(path.string());
  const auto b = load_scenario(path.string(), 43);
  CHECK(b.seed == 43);
  CHECK(a.nodes[0].light.lux != b.nodes[0].light.lux);
}

TEST_CASE("node defaults and overrides are applied") {
  const auto path = write_scenario("knobs.json", R"({
    "duration_days": 1,
    "seed": 1,
    "calibration": {"leakage_uw": 10.0, "eta_buck": 1.5, "eta_bat": 0.75},
    "nodes": [
      {"id": "a", "app": "advertise", "preset": "stairs",
       "capacitance_f": 0.47, "start_voltage_v": 3.0, "panel_scale": 4.0,
       "pinned_qos": 7,
       "power": {"adv_100ms_uw": 650.0},
       "budget": {"one_sensor_mj": 3.5}}
    ]
  })");
  const auto sc = load_scenario(path.string());
  REQUIRE(sc.nodes.size() == 1);
  const auto& n = sc.nodes[0];
  CHECK(n.cap.capacitance_f == 0.47);
  CHECK(n.cap.voltage_v == 3.0);
  CHECK(n.cap.leakage_uw == 10.0);
  CHECK(n.conv.eta_buck == 1.5);
  CHECK(n.conv.eta_bat == 0.75);
  CHECK(n.panel.scale == 4.0);
  REQUIRE(n.pinned_qos.has_value());
  CHECK(*n.pinned_qos == 7);
  CHECK(n.power.adv_100ms_uw == 650.0);
  CHECK(n.budget.one_sensor_mj == 3.5);
}

TEST_CASE("scenario errors are collected, not thrown one by one") {
  const auto path = write_scenario("broken.json", R"({
    "duration_days": 0,
    "seed": 5,
    "nodes": [
      {"id": "x", "app": "teleport", "preset": "center_office"},
      {"id": "x", "app": "sense1", "preset": "atlantis"},
      {"id": "", "app": "sense1"}
    ]
  })");
  try {
    (void)load_scenario(path.string());
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("duration_days") != std::string::npos);
    CHECK(msg.find("unknown app \"teleport\"") != std::string::npos);
    CHECK(msg.find("duplicate node id \"x\"") != std::string::npos);
    CHECK(msg.find("atlantis") != std::string::npos);
    CHECK(msg.find("exactly one of \"preset\" or \"light_trace\"") != std::string::npos);
    CHECK(msg.find("\"id\" must be a non-empty string") != std::string::npos);
  }
}

TEST_CASE("missing trace files are reported by path") {
  const auto path = write_scenario("missing_trace.json", R"({
    "duration_days": 1,
    "seed": 1,
    "nodes": [{"id": "a", "app": "sense1", "light_trace": "does_not_exist.csv"}]
  })");
  CHECK_THROWS_WITH(load_scenario(path.string()),
                    Catch::Matchers::ContainsSubstring("does_not_exist.csv"));
}

TEST_CASE("trace paths resolve relative to the scenario file") {
  const auto dir = test_dir();
  {
    std::ofstream light(dir / "office.csv", std::ios::binary);
    light << "t_s,lux\n0,400\n";
    std::ofstream events(dir / "office_events.csv", std::ios::binary);
    events << "t_s\n100\n200\n";
  }
  const auto path = write_scenario("relative.json", R"({
    "duration_days": 1,
    "seed": 1,
    "nodes": [{"id": "a", "app": "pir",
               "light_trace": "office.csv", "event_trace": "office_events.csv"}]
  })");
  const auto sc = load_scenario(path.string());
  REQUIRE(sc.nodes.size() == 1);
  CHECK(sc.nodes[0].light.lux == std::vector<double>{400.0});
  CHECK(sc.nodes[0].events.t_s == std::vector<double>({100.0, 200.0}));
}

TEST_CASE("malformed JSON is a scenario error") {
  const auto path = write_scenario("garbage.json", "{not json");
  CHECK_THROWS_AS(load_scenario(path.string()), ScenarioError);
  CHECK_THROWS_AS(load_scenario((test_dir() / "absent.json").string()), ScenarioError);
}

TEST_CASE("qos table override must be well formed") {
  const auto path = write_scenario("badqos.json", R"({
    "duration_days": 1,
    "seed": 1,
    "nodes": [{"id": "a", "app": "sense1", "preset": "door",
               "qos_table": [[1, 2.1, 2.4, 600, 600, 5]]}]
  })");
  CHECK_THROWS_WITH(load_scenario(path.string()),
                    Catch::Matchers::ContainsSubstring("7 rows"));
}

TEST_CASE("comparison table covers all three systems") {
  const auto path = write_scenario("compare.json", R"({
    "duration_days": 2,
    "seed": 42,
    "nodes": [
      {"id": "s1", "app": "sense1", "preset": "center_office"},
      {"id": "s5", "app": "sense5", "preset": "center_office"},
      {"id": "mo", "app": "pir", "preset": "center_office"},
      {"id": "ad", "app": "advertise", "preset": "center_office"}
    ]
  })");
  const auto result = compare_scenario(load_scenario(path.string()));
  CHECK(result.battery.sense1_period_s == Catch::Approx(60.0));
  CHECK(result.battery.sense5_period_s == Catch::Approx(60.0));
  CHECK(result.battery.pir_detect_pct == Catch::Approx(100.0));
  CHECK(result.pure_harvest.sense1_period_s > 60.0);
  CHECK(result.adaptive.sense1_period_s > 0.0);

  const auto csv = serialize_compare_csv(result);
  CHECK(csv.find("battery") != std::string::npos);
  CHECK(csv.find("pure-harvest") != std::string::npos);
  CHECK(csv.find("adaptive") != std::string::npos);
  CHECK(csv.find("0.10 to 0.90") != std::string::npos);  // battery beacon band
}

#ifdef LIGHTMOTE_CLI_PATH

namespace {

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  const auto out_path = test_dir() / "cli_stdout.txt";
  const std::string cmd = std::string(LIGHTMOTE_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.stdout_text = read_file(out_path);
  return r;
}

}  // namespace

TEST_CASE("cli run writes the full report bundle") {
  const auto scenario = write_scenario("cli_run.json", kBasicScenario);
  const auto out_dir = test_dir() / "cli_out";
  fs::remove_all(out_dir);

  const auto res = run_cli("run --scenario " + scenario.string() + " --out " + out_dir.string());
  INFO(res.stdout_text);
  REQUIRE(res.exit_code == 0);
  CHECK(fs::exists(out_dir / "report.csv"));
  CHECK(fs::exists(out_dir / "packets.csv"));
  CHECK(fs::exists(out_dir / "summary.json"));

  const auto report = read_file(out_dir / "report.csv");
  CHECK(report.rfind("node_id,app,day,", 0) == 0);

  // same seed, byte-identical outputs
  const auto out_dir2 = test_dir() / "cli_out2";
  fs::remove_all(out_dir2);
  const auto res2 =
      run_cli("run --scenario " + scenario.string() + " --out " + out_dir2.string());
  REQUIRE(res2.exit_code == 0);
  CHECK(read_file(out_dir / "report.csv") == read_file(out_dir2 / "report.csv"));
  CHECK(read_file(out_dir / "packets.csv") == read_file(out_dir2 / "packets.csv"));
  CHECK(read_file(out_dir / "summary.json") == read_file(out_dir2 / "summary.json"));

  // a different seed changes the traces and thus the outputs
  const auto out_dir3 = test_dir() / "cli_out3";
  fs::remove_all(out_dir3);
  const auto res3 = run_cli("--seed 7 run --scenario " + scenario.string() + " --out " +
                            out_dir3.string());
  REQUIRE(res3.exit_code == 0);
  CHECK(read_file(out_dir / "packets.csv") != read_file(out_dir3 / "packets.csv"));
}

TEST_CASE("cli rejects bad invocations with exit code 2") {
  CHECK(run_cli("run --scenario /nonexistent.json --out /tmp/x").exit_code == 2);
  CHECK(run_cli("run --frobnicate").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);

  const auto bad = write_scenario("cli_bad.json", R"({"duration_days": 1})");
  const auto res = run_cli("run --scenario " + bad.string() + " --out /tmp/x");
  CHECK(res.exit_code == 2);
  CHECK(res.stdout_text.find("seed") != std::string::npos);
}

TEST_CASE("cli help exits cleanly") {
  const auto res = run_cli("--help");
  CHECK(res.exit_code == 0);
  CHECK(res.stdout_text.find("run") != std::string::npos);
  CHECK(res.stdout_text.find("calibrate") != std::string::npos);
  CHECK(res.stdout_text.find("compare") != std::string::npos);
}

TEST_CASE("cli calibrate is idempotent") {
  const auto out1 = test_dir() / "calib1.json";
  const auto out2 = test_dir() / "calib2.json";
  REQUIRE(run_cli("calibrate --out " + out1.string()).exit_code == 0);
  REQUIRE(run_cli("calibrate --out " + out2.string()).exit_code == 0);
  const auto body = read_file(out1);
  CHECK(body == read_file(out2));
  CHECK(body.find("leakage_uw") != std::string::npos);
  CHECK(body.find("eta_buck") != std::string::npos);

  const auto calib = load_calibration(out1.string());
  CHECK(calib.leakage_uw > 0.0);
  CHECK(calib.eta_buck > 0.0);
}

TEST_CASE("cli compare prints the summary table") {
  const auto scenario = write_scenario("cli_compare.json", R"({
    "duration_days": 2,
    "seed": 42,
    "nodes": [{"id": "s1", "app": "sense1", "preset": "center_office"}]
  })");
  const auto res = run_cli("compare --scenario " + scenario.string());
  INFO(res.stdout_text);
  REQUIRE(res.exit_code == 0);
  CHECK(res.stdout_text.find("system,sense1_period_s") != std::string::npos);
  CHECK(res.stdout_text.find("battery") != std::string::npos);
  CHECK(res.stdout_text.find("adaptive") != std::string::npos);
}

#endif  // LIGHTMOTE_CLI_PATH
