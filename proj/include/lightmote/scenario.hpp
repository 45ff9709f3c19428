#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightmote/calibrate.hpp"
#include "lightmote/engine.hpp"
#include "lightmote/presets.hpp"

namespace lightmote {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  int duration_days = 1;
  std::uint64_t seed = 0;
  double channel_loss_p = 0.0;
  std::vector<NodeConfig> nodes;
};

namespace detail {

[[nodiscard]] inline std::optional<AppType> app_from_string(const std::string& s) {
  if (s == "sense1") return AppType::kSense1;
  if (s == "sense5") return AppType::kSense5;
  if (s == "pir") return AppType::kPir;
  if (s == "advertise") return AppType::kAdvertise;
  return std::nullopt;
}

// Collects every problem instead of stopping at the first, so one failed run
// reports the whole repair list.
class Violations {
 public:
  void add(const std::string& msg) { items_.push_back(msg); }
  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[noreturn]] void raise() const {
    std::ostringstream out;
    out << "scenario validation failed (" << items_.size() << " problem"
        << (items_.size() == 1 ? "" : "s") << "):";
    for (const std::string& m : items_) out << "\n  - " << m;
    throw ScenarioError(out.str());
  }

 private:
  std::vector<std::string> items_;
};

inline double get_number(const nlohmann::json& j, const std::string& key, double fallback,
                         const std::string& ctx, Violations& errs) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    errs.add(ctx + ": \"" + key + "\" must be a number");
    return fallback;
  }
  return j[key].get<double>();
}

inline void apply_power_overrides(const nlohmann::json& j, PowerTable& power,
                                  const std::string& ctx, Violations& errs) {
  const std::pair<const char*, double*> fields[] = {
      {"mcu_sleep_uw", &power.mcu_sleep_uw},         {"read_hum_uw", &power.read_hum_uw},
      {"read_temp_uw", &power.read_temp_uw},         {"read_bar_uw", &power.read_bar_uw},
      {"read_light_uw", &power.read_light_uw},       {"mcu_pir_sleep_uw", &power.mcu_pir_sleep_uw},
      {"pir_detection_uw", &power.pir_detection_uw}, {"adv_5s_uw", &power.adv_5s_uw},
      {"adv_2s_uw", &power.adv_2s_uw},               {"adv_1s_uw", &power.adv_1s_uw},
      {"adv_500ms_uw", &power.adv_500ms_uw},         {"adv_100ms_uw", &power.adv_100ms_uw}};
  for (const auto& [key, slot] : fields) *slot = get_number(j, key, *slot, ctx, errs);
  for (const auto& item : j.items())
    if (std::none_of(std::begin(fields), std::end(fields),
                     [&](const auto& f) { return item.key() == f.first; }))
      errs.add(ctx + ": unknown power field \"" + item.key() + "\"");
}

inline void apply_budget_overrides(const nlohmann::json& j, PacketBudget& budget,
                                   const std::string& ctx, Violations& errs) {
  const std::pair<const char*, double*> fields[] = {{"one_sensor_mj", &budget.one_sensor_mj},
                                                    {"two_sensor_mj", &budget.two_sensor_mj},
                                                    {"five_sensor_mj", &budget.five_sensor_mj},
                                                    {"pir_report_mj", &budget.pir_report_mj},
                                                    {"peh_single_mj", &budget.peh_single_mj}};
  for (const auto& [key, slot] : fields) *slot = get_number(j, key, *slot, ctx, errs);
  for (const auto& item : j.items())
    if (std::none_of(std::begin(fields), std::end(fields),
                     [&](const auto& f) { return item.key() == f.first; }))
      errs.add(ctx + ": unknown budget field \"" + item.key() + "\"");
}

inline void apply_qos_override(const nlohmann::json& j, QosTable& table, const std::string& ctx,
                               Violations& errs) {
  if (!j.is_array() || j.size() != 7) {
    errs.add(ctx + ": \"qos_table\" must be an array of 7 rows");
    return;
  }
  QosTable out;
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != 6 ||
        !std::all_of(row.begin(), row.end(), [](const auto& v) { return v.is_number(); })) {
      errs.add(ctx + ": qos_table row " + std::to_string(i + 1) +
               " must be [state, v_low, v_high, sensing_s, blanking_s, advertising_s]");
      return;
    }
    out.rows[i] = QosRow{row[0].get<int>(), row[1].get<double>(), row[2].get<double>(),
                         row[3].get<double>(), row[4].get<double>(), row[5].get<double>()};
  }
  try {
    out.validate();
  } catch (const std::exception& e) {
    errs.add(ctx + ": " + e.what());
    return;
  }
  table = out;
}

}  // namespace detail

// Parses and fully validates a scenario document. Preset traces are
// generated with the effective seed; referenced trace files are resolved
// relative to the scenario file. Every violation is reported in one throw.
[[nodiscard]] inline Scenario load_scenario(const std::string& path,
                                            std::optional<std::uint64_t> seed_override = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError("scenario file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("scenario file " + path + ": top level must be an object");

  detail::Violations errs;
  Scenario sc;

  const double days = detail::get_number(doc, "duration_days", 0.0, "scenario", errs);
  if (days < 1.0 || days != std::floor(days) || days > 10000.0)
    errs.add("scenario: \"duration_days\" must be an integer in [1, 10000]");
  else
    sc.duration_days = static_cast<int>(days);

  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned())
    errs.add("scenario: \"seed\" must be a non-negative integer");
  else
    sc.seed = doc["seed"].get<std::uint64_t>();
  if (seed_override) sc.seed = *seed_override;

  sc.channel_loss_p = detail::get_number(doc, "channel_loss_p", 0.0, "scenario", errs);
  if (sc.channel_loss_p < 0.0 || sc.channel_loss_p >= 1.0)
    errs.add("scenario: \"channel_loss_p\" must lie in [0, 1)");

  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  Calibration calib;
  if (doc.contains("calibration")) {
    const auto& c = doc["calibration"];
    if (c.is_string()) {
      try {
        calib = load_calibration((base / c.get<std::string>()).string());
      } catch (const std::exception& e) {
        errs.add(std::string("calibration: ") + e.what());
      }
    } else if (c.is_object()) {
      calib.leakage_uw = detail::get_number(c, "leakage_uw", calib.leakage_uw, "calibration", errs);
      calib.eta_buck = detail::get_number(c, "eta_buck", calib.eta_buck, "calibration", errs);
      calib.eta_bat = detail::get_number(c, "eta_bat", calib.eta_bat, "calibration", errs);
      if (calib.leakage_uw < 0.0) errs.add("calibration: \"leakage_uw\" must be >= 0");
      if (calib.eta_buck <= 0.0) errs.add("calibration: \"eta_buck\" must be > 0");
      if (calib.eta_bat <= 0.0 || calib.eta_bat > 1.0)
        errs.add("calibration: \"eta_bat\" must lie in (0, 1]");
    } else {
      errs.add("scenario: \"calibration\" must be a file path or an object");
    }
  }

  if (!doc.contains("nodes") || !doc["nodes"].is_array() || doc["nodes"].empty()) {
    errs.add("scenario: \"nodes\" must be a non-empty array");
    errs.raise();
  }

  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const auto& n = doc["nodes"][i];
    const std::string ctx = "node[" + std::to_string(i) + "]";
    if (!n.is_object()) {
      errs.add(ctx + ": must be an object");
      continue;
    }

    NodeConfig cfg;
    if (!n.contains("id") || !n["id"].is_string() || n["id"].get<std::string>().empty())
      errs.add(ctx + ": \"id\" must be a non-empty string");
    else {
      cfg.id = n["id"].get<std::string>();
      if (!seen_ids.insert(cfg.id).second) errs.add(ctx + ": duplicate node id \"" + cfg.id + "\"");
    }
    const std::string node_ctx = cfg.id.empty() ? ctx : ctx + " (" + cfg.id + ")";

    if (!n.contains("app") || !n["app"].is_string())
      errs.add(node_ctx + ": \"app\" must be one of sense1|sense5|pir|advertise");
    else if (auto app = detail::app_from_string(n["app"].get<std::string>()))
      cfg.app = *app;
    else
      errs.add(node_ctx + ": unknown app \"" + n["app"].get<std::string>() + "\"");

    if (n.contains("sensor")) {
      if (!n["sensor"].is_string())
        errs.add(node_ctx + ": \"sensor\" must be a string");
      else
        cfg.sensor = n["sensor"].get<std::string>();
    }

    cfg.cap.capacitance_f = detail::get_number(n, "capacitance_f", 1.0, node_ctx, errs);
    if (cfg.cap.capacitance_f <= 0.0) errs.add(node_ctx + ": \"capacitance_f\" must be > 0");
    cfg.cap.v_max = detail::get_number(n, "v_max", 3.6, node_ctx, errs);
    if (cfg.cap.v_max <= 0.0) errs.add(node_ctx + ": \"v_max\" must be > 0");
    cfg.cap.voltage_v = detail::get_number(n, "start_voltage_v", cfg.cap.v_max, node_ctx, errs);
    if (cfg.cap.voltage_v < 0.0 || cfg.cap.voltage_v > cfg.cap.v_max)
      errs.add(node_ctx + ": \"start_voltage_v\" must lie in [0, v_max]");
    cfg.panel.scale = detail::get_number(n, "panel_scale", 1.0, node_ctx, errs);
    if (cfg.panel.scale <= 0.0) errs.add(node_ctx + ": \"panel_scale\" must be > 0");

    cfg.cap.leakage_uw = calib.leakage_uw;
    cfg.conv.eta_buck = calib.eta_buck;
    cfg.conv.eta_bat = calib.eta_bat;

    if (n.contains("pinned_qos")) {
      if (!n["pinned_qos"].is_number_integer() || n["pinned_qos"].get<int>() < 1 ||
          n["pinned_qos"].get<int>() > 7)
        errs.add(node_ctx + ": \"pinned_qos\" must be an integer in [1, 7]");
      else
        cfg.pinned_qos = n["pinned_qos"].get<int>();
    }

    if (n.contains("power") && n["power"].is_object())
      detail::apply_power_overrides(n["power"], cfg.power, node_ctx, errs);
    else if (n.contains("power"))
      errs.add(node_ctx + ": \"power\" must be an object");
    if (n.contains("budget") && n["budget"].is_object())
      detail::apply_budget_overrides(n["budget"], cfg.budget, node_ctx, errs);
    else if (n.contains("budget"))
      errs.add(node_ctx + ": \"budget\" must be an object");
    if (n.contains("qos_table")) detail::apply_qos_override(n["qos_table"], cfg.qos, node_ctx, errs);

    try {
      cfg.power.validate();
      cfg.budget.validate();
    } catch (const std::exception& e) {
      errs.add(node_ctx + ": " + e.what());
    }

    const bool has_preset = n.contains("preset");
    const bool has_light = n.contains("light_trace");
    if (has_preset == has_light) {
      errs.add(node_ctx + ": exactly one of \"preset\" or \"light_trace\" is required");
    } else if (has_preset) {
      if (!n["preset"].is_string()) {
        errs.add(node_ctx + ": \"preset\" must be a string");
      } else {
        try {
          const LocationPreset preset = presets::by_name(n["preset"].get<std::string>());
          const int days_needed = sc.duration_days > 0 ? sc.duration_days : 1;
          cfg.light = generate_light(preset, days_needed, sc.seed);
          if (cfg.app == AppType::kPir) cfg.events = generate_events(preset, days_needed, sc.seed);
        } catch (const std::exception& e) {
          errs.add(node_ctx + ": " + e.what());
        }
      }
    } else {
      if (!n["light_trace"].is_string()) {
        errs.add(node_ctx + ": \"light_trace\" must be a path string");
      } else {
        const std::string lpath = (base / n["light_trace"].get<std::string>()).string();
        try {
          cfg.light = load_light_trace(lpath);
        } catch (const std::exception& e) {
          errs.add(node_ctx + ": " + e.what());
        }
      }
      if (n.contains("event_trace")) {
        if (!n["event_trace"].is_string()) {
          errs.add(node_ctx + ": \"event_trace\" must be a path string");
        } else {
          const std::string epath = (base / n["event_trace"].get<std::string>()).string();
          try {
            cfg.events = load_event_trace(epath);
          } catch (const std::exception& e) {
            errs.add(node_ctx + ": " + e.what());
          }
        }
      }
    }

    sc.nodes.push_back(std::move(cfg));
  }

  if (!errs.empty()) errs.raise();
  return sc;
}

[[nodiscard]] inline SimReport run_scenario(const Scenario& sc) {
  SimReport report;
  report.seed = sc.seed;
  report.duration_days = sc.duration_days;
  report.channel_loss_p = sc.channel_loss_p;
  report.nodes.reserve(sc.nodes.size());
  for (const NodeConfig& cfg : sc.nodes)
    report.nodes.push_back(run_node(cfg, sc.duration_days, sc.seed, sc.channel_loss_p));
  return report;
}

}  // namespace lightmote
