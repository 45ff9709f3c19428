#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "lightmote/engine.hpp"
#include "lightmote/trace.hpp"

namespace lightmote {

namespace detail {

inline void append_cell(std::string& out, double v) {
  if (std::isnan(v))
    out += "NA";
  else
    append_number(out, v);
}

[[nodiscard]] inline nlohmann::ordered_json json_number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace detail

// One row per node-day; "NA" marks metrics with an empty basis (no packets,
// or a metric that does not apply to the node's application).
[[nodiscard]] inline std::string serialize_report_csv(const SimReport& report) {
  std::string out =
      "node_id,app,day,packets,mean_period_s,downtime_s,pir_detected,pir_missed_blanked,"
      "pir_missed_dead,adv_interval_mean_s\n";
  for (const NodeReport& node : report.nodes) {
    for (std::size_t d = 0; d < node.days.size(); ++d) {
      const DayMetrics& day = node.days[d];
      out += node.node_id;
      out += ',';
      out += app_type_name(node.app);
      out += ',';
      out += std::to_string(d);
      out += ',';
      out += std::to_string(day.packets);
      out += ',';
      detail::append_cell(out, day.mean_period_s());
      out += ',';
      detail::append_number(out, day.downtime_s);
      out += ',';
      out += std::to_string(day.pir_detected);
      out += ',';
      out += std::to_string(day.pir_missed_blanked);
      out += ',';
      out += std::to_string(day.pir_missed_dead);
      out += ',';
      detail::append_cell(out,
                          node.app == AppType::kAdvertise ? day.adv_interval_mean_s()
                                                          : std::numeric_limits<double>::quiet_NaN());
      out += '\n';
    }
  }
  return out;
}

// Chronological packet log across all nodes; ties keep scenario node order.
[[nodiscard]] inline std::string serialize_packets_csv(const SimReport& report) {
  struct Entry {
    double t;
    std::size_t node;
    std::size_t idx;
  };
  std::vector<Entry> order;
  for (std::size_t n = 0; n < report.nodes.size(); ++n)
    for (std::size_t i = 0; i < report.nodes[n].packets.size(); ++i)
      order.push_back({report.nodes[n].packets[i].t_s, n, i});
  std::stable_sort(order.begin(), order.end(),
                   [](const Entry& a, const Entry& b) { return a.t < b.t; });

  std::string out = "t_s,node_id,qos_state,voltage_v\n";
  for (const Entry& e : order) {
    const PacketRecord& p = report.nodes[e.node].packets[e.idx];
    detail::append_number(out, p.t_s);
    out += ',';
    out += report.nodes[e.node].node_id;
    out += ',';
    out += std::to_string(p.qos_state);
    out += ',';
    detail::append_number(out, p.voltage_v);
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline nlohmann::ordered_json summary_json(const SimReport& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["duration_days"] = report.duration_days;
  j["channel_loss_p"] = report.channel_loss_p;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const NodeReport& node : report.nodes) {
    nlohmann::ordered_json n;
    n["id"] = node.node_id;
    n["app"] = app_type_name(node.app);
    n["packets"] = node.total_packets();
    n["dropped_packets"] = node.dropped_packets;
    n["mean_period_s"] = detail::json_number_or_null(node.mean_period_s());
    n["downtime_s"] = node.total_downtime_s;
    n["first_brownout_s"] = detail::json_number_or_null(node.first_brownout_s);
    n["pir"] = {{"detected", node.pir_total(PirOutcome::kDetected)},
                {"missed_blanked", node.pir_total(PirOutcome::kMissedBlanked)},
                {"missed_dead", node.pir_total(PirOutcome::kMissedDead)},
                {"detection_pct", detail::json_number_or_null(node.pir_detection_pct())}};
    n["advertising_interval_mean_s"] = detail::json_number_or_null(
        node.app == AppType::kAdvertise ? node.adv_interval_mean_s()
                                        : std::numeric_limits<double>::quiet_NaN());
    n["energy"] = {{"initial_j", node.initial_energy_j},
                   {"final_j", node.final_energy_j},
                   {"harvested_j", node.ledger.harvested_j},
                   {"consumed_j", node.ledger.consumed_j},
                   {"leaked_j", node.ledger.leaked_j},
                   {"clamped_j", node.ledger.clamped_j},
                   {"deficit_j", node.ledger.deficit_j},
                   {"ledger_residual_rel", node.ledger_residual_rel()}};
    j["nodes"].push_back(std::move(n));
  }
  return j;
}

[[nodiscard]] inline std::string serialize_summary_json(const SimReport& report) {
  return summary_json(report).dump(2) + "\n";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Emits report.csv, packets.csv, and summary.json into out_dir.
inline void write_report_files(const SimReport& report, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_text_file(dir / "report.csv", serialize_report_csv(report));
  write_text_file(dir / "packets.csv", serialize_packets_csv(report));
  write_text_file(dir / "summary.json", serialize_summary_json(report));
}

}  // namespace lightmote
