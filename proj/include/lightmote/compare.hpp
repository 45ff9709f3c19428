#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lightmote/engine.hpp"
#include "lightmote/scenario.hpp"
#include "lightmote/trace.hpp"

namespace lightmote {

// Advertising band required by BLE-based occupancy localization; the
// battery reference can serve any interval in it.
inline constexpr double kLocalizationAdvMinS = 0.1;
inline constexpr double kLocalizationAdvMaxS = 0.9;

// One comparison system's results, aggregated over the scenario's nodes by
// application kind. NaN means the scenario has no node of that kind (or the
// system cannot run it at all).
struct SystemMetrics {
  std::string system;
  double sense1_period_s = std::numeric_limits<double>::quiet_NaN();
  double sense5_period_s = std::numeric_limits<double>::quiet_NaN();
  double pir_detect_pct = std::numeric_limits<double>::quiet_NaN();
  double adv_interval_min_s = std::numeric_limits<double>::quiet_NaN();
  double adv_interval_max_s = std::numeric_limits<double>::quiet_NaN();
  bool sense1_ran_dry = false;  // node of this kind present but sent nothing
  bool sense5_ran_dry = false;
  double downtime_s = 0.0;
  std::string working;
};

struct CompareResult {
  SystemMetrics battery;
  SystemMetrics pure_harvest;
  SystemMetrics adaptive;
};

namespace detail {

struct KindAgg {
  double period_sum = 0.0;
  int period_n = 0;
  long pir_detected = 0;
  long pir_total = 0;
  double adv_min = std::numeric_limits<double>::infinity();
  double adv_max = -std::numeric_limits<double>::infinity();
  bool present = false;
  bool dry = false;

  void add_period(const NodeReport& rep) {
    present = true;
    if (rep.total_packets() == 0) {
      dry = true;
      return;
    }
    period_sum += rep.mean_period_s();
    ++period_n;
  }
};

}  // namespace detail

// Runs the adaptive system plus the battery and pure-harvest references over
// the same scenario and condenses each into one row of headline metrics.
[[nodiscard]] inline CompareResult compare_scenario(const Scenario& sc) {
  CompareResult out;
  out.battery.system = "battery";
  out.pure_harvest.system = "pure-harvest";
  out.adaptive.system = "adaptive";

  detail::KindAgg agg[3][4];  // [system][app kind]
  double adaptive_downtime = 0.0;
  bool pure_any_packets = false;
  bool pure_has_nodes = false;

  for (const NodeConfig& cfg : sc.nodes) {
    const int kind = static_cast<int>(cfg.app);

    const NodeReport battery = run_battery(cfg, sc.duration_days, /*period_s=*/60.0);
    switch (cfg.app) {
      case AppType::kSense1:
      case AppType::kSense5: agg[0][kind].add_period(battery); break;
      case AppType::kPir: {
        agg[0][kind].present = true;
        agg[0][kind].pir_detected += battery.pir_total(PirOutcome::kDetected);
        agg[0][kind].pir_total += battery.pir_total(PirOutcome::kDetected) +
                                  battery.pir_total(PirOutcome::kMissedBlanked) +
                                  battery.pir_total(PirOutcome::kMissedDead);
        break;
      }
      case AppType::kAdvertise:
        agg[0][kind].present = true;
        agg[0][kind].adv_min = std::min(agg[0][kind].adv_min, kLocalizationAdvMinS);
        agg[0][kind].adv_max = std::max(agg[0][kind].adv_max, kLocalizationAdvMaxS);
        break;
    }

    if (cfg.app != AppType::kAdvertise) {  // a fire-when-full node cannot hold a beacon schedule
      pure_has_nodes = true;
      const double buffer_mj = cfg.app == AppType::kSense1   ? cfg.budget.two_sensor_mj
                               : cfg.app == AppType::kSense5 ? cfg.budget.five_sensor_mj
                                                             : cfg.budget.pir_report_mj;
      const NodeReport pure = run_pure_harvest(cfg, sc.duration_days, buffer_mj);
      pure_any_packets = pure_any_packets || pure.total_packets() > 0;
      if (cfg.app == AppType::kPir) {
        agg[1][kind].present = true;
        agg[1][kind].pir_detected += pure.pir_total(PirOutcome::kDetected);
        agg[1][kind].pir_total += pure.pir_total(PirOutcome::kDetected) +
                                  pure.pir_total(PirOutcome::kMissedBlanked) +
                                  pure.pir_total(PirOutcome::kMissedDead);
      } else {
        agg[1][kind].add_period(pure);
      }
    }

    const NodeReport adaptive = run_node(cfg, sc.duration_days, sc.seed, sc.channel_loss_p);
    adaptive_downtime += adaptive.total_downtime_s;
    switch (cfg.app) {
      case AppType::kSense1:
      case AppType::kSense5: agg[2][kind].add_period(adaptive); break;
      case AppType::kPir: {
        agg[2][kind].present = true;
        agg[2][kind].pir_detected += adaptive.pir_total(PirOutcome::kDetected);
        agg[2][kind].pir_total += adaptive.pir_total(PirOutcome::kDetected) +
                                  adaptive.pir_total(PirOutcome::kMissedBlanked) +
                                  adaptive.pir_total(PirOutcome::kMissedDead);
        break;
      }
      case AppType::kAdvertise: {
        agg[2][kind].present = true;
        for (const DayMetrics& day : adaptive.days) {
          const double m = day.adv_interval_mean_s();
          if (!std::isnan(m)) {
            agg[2][kind].adv_min = std::min(agg[2][kind].adv_min, m);
            agg[2][kind].adv_max = std::max(agg[2][kind].adv_max, m);
          }
        }
        break;
      }
    }
  }

  SystemMetrics* rows[3] = {&out.battery, &out.pure_harvest, &out.adaptive};
  for (int s = 0; s < 3; ++s) {
    SystemMetrics& row = *rows[s];
    const auto& sense1 = agg[s][static_cast<int>(AppType::kSense1)];
    const auto& sense5 = agg[s][static_cast<int>(AppType::kSense5)];
    const auto& pir = agg[s][static_cast<int>(AppType::kPir)];
    const auto& adv = agg[s][static_cast<int>(AppType::kAdvertise)];
    if (sense1.period_n > 0) row.sense1_period_s = sense1.period_sum / sense1.period_n;
    row.sense1_ran_dry = sense1.present && sense1.period_n == 0;
    if (sense5.period_n > 0) row.sense5_period_s = sense5.period_sum / sense5.period_n;
    row.sense5_ran_dry = sense5.present && sense5.period_n == 0;
    if (pir.pir_total > 0) row.pir_detect_pct = 100.0 * pir.pir_detected / pir.pir_total;
    if (adv.present && std::isfinite(adv.adv_min)) {
      row.adv_interval_min_s = adv.adv_min;
      row.adv_interval_max_s = adv.adv_max;
    }
  }

  out.battery.working = "few months";
  out.pure_harvest.working =
      pure_has_nodes && !pure_any_packets ? "no packets" : "when light-on";
  out.adaptive.downtime_s = adaptive_downtime;
  out.adaptive.working = adaptive_downtime == 0.0 ? "perpetual" : "intermittent";
  return out;
}

namespace detail {

inline void append_compare_cell(std::string& out, double v, bool ran_dry) {
  if (ran_dry) {
    out += "no packets";
  } else if (std::isnan(v)) {
    out += "NA";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    out += buf;
  }
}

}  // namespace detail

[[nodiscard]] inline std::string serialize_compare_csv(const CompareResult& result) {
  std::string out = "system,sense1_period_s,sense5_period_s,pir_detect_pct,advertise_interval_s,working\n";
  for (const SystemMetrics* row : {&result.battery, &result.pure_harvest, &result.adaptive}) {
    out += row->system;
    out += ',';
    detail::append_compare_cell(out, row->sense1_period_s, row->sense1_ran_dry);
    out += ',';
    detail::append_compare_cell(out, row->sense5_period_s, row->sense5_ran_dry);
    out += ',';
    detail::append_compare_cell(out, row->pir_detect_pct, false);
    out += ',';
    if (std::isnan(row->adv_interval_min_s)) {
      out += "NA";
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f to %.2f", row->adv_interval_min_s,
                    row->adv_interval_max_s);
      out += buf;
    }
    out += ',';
    out += row->working;
    out += '\n';
  }
  return out;
}

}  // namespace lightmote
