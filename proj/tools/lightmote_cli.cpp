// Command-line front end: scenario execution, constant calibration, and
// baseline comparison. Exit codes: 0 success, 2 input/validation problem,
// 3 runtime failure.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lightmote/lightmote.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

void print_node_digest(const lightmote::NodeReport& node) {
  std::printf("node %-24s app=%-9s packets=%-7ld downtime_s=%.0f", node.node_id.c_str(),
              lightmote::app_type_name(node.app).c_str(), node.total_packets(),
              node.total_downtime_s);
  const double period = node.mean_period_s();
  if (!std::isnan(period)) std::printf(" mean_period_s=%.2f", period);
  if (node.app == lightmote::AppType::kPir) {
    const double pct = node.pir_detection_pct();
    if (!std::isnan(pct)) std::printf(" pir_detect_pct=%.1f", pct);
  }
  if (node.app == lightmote::AppType::kAdvertise) {
    const double adv = node.adv_interval_mean_s();
    if (!std::isnan(adv)) std::printf(" adv_interval_s=%.2f", adv);
  }
  std::printf("\n");
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  const lightmote::Scenario sc = lightmote::load_scenario(scenario_path, seed);
  const lightmote::SimReport report = lightmote::run_scenario(sc);
  lightmote::write_report_files(report, out_dir);
  for (const auto& node : report.nodes) print_node_digest(node);
  std::printf("wrote %s/report.csv, packets.csv, summary.json (seed=%llu)\n", out_dir.c_str(),
              static_cast<unsigned long long>(report.seed));
  return 0;
}

int cmd_calibrate(const std::string& out_path) {
  const lightmote::Calibration c = lightmote::calibrate();
  lightmote::save_calibration(out_path, c);
  std::printf("leakage_uw  = %.12g  (dark lifetime fit: %.0f s)\n", c.leakage_uw,
              c.fit_dark_lifetime_s);
  std::printf("eta_buck    = %.12g  (cold-start fit: %.1f s)\n", c.eta_buck, c.fit_cold_start_s);
  std::printf("eta_bat     = %.12g\n", c.eta_bat);
  std::printf("held-out: five-sensor dark lifetime  %.2f h\n",
              c.predicted_five_sensor_dark_s / 3600.0);
  std::printf("held-out: advertising dark lifetime  %.2f h\n",
              c.predicted_advertising_dark_s / 3600.0);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_compare(const std::string& scenario_path, const std::string& out_path,
                std::optional<std::uint64_t> seed) {
  const lightmote::Scenario sc = lightmote::load_scenario(scenario_path, seed);
  const lightmote::CompareResult result = lightmote::compare_scenario(sc);
  const std::string csv = lightmote::serialize_compare_csv(result);
  std::fputs(csv.c_str(), stdout);
  if (!out_path.empty()) lightmote::write_text_file(out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lightmote: light-harvesting sensor node simulator"};
  app.require_subcommand(1);

  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = app.add_option("--seed", seed_value, "Override the scenario seed");

  std::string scenario_path;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "Simulate a scenario and write reports");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string calib_out;
  CLI::App* calibrate = app.add_subcommand("calibrate", "Fit model constants to their anchors");
  calibrate->add_option("--out", calib_out, "Calibration JSON output path")->required();

  std::string compare_scenario_path;
  std::string compare_out;
  CLI::App* compare = app.add_subcommand("compare", "Compare against battery and pure-harvest references");
  compare->add_option("--scenario", compare_scenario_path, "Scenario JSON file")->required();
  compare->add_option("--out", compare_out, "Optional CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  std::optional<std::uint64_t> seed;
  if (seed_opt->count() > 0) seed = seed_value;

  try {
    if (*run) return cmd_run(scenario_path, out_dir, seed);
    if (*calibrate) return cmd_calibrate(calib_out);
    if (*compare) return cmd_compare(compare_scenario_path, compare_out, seed);
  } catch (const lightmote::ScenarioError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitValidation;
  } catch (const lightmote::TraceError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
