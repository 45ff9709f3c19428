#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "lightmote/qos.hpp"

namespace lightmote {

// Application power models. Periodic sensing apps average their
// per-transaction energy over the wake period on top of the sleep floor;
// advertising draws continuously at an interval-dependent rate; the motion
// app idles at its own sleep floor and pays per detection report.

// Measured average draws (microwatts, 3 V rail).
struct PowerTable {
  double mcu_sleep_uw = 19.0;
  double read_hum_uw = 51.0;
  double read_temp_uw = 54.0;
  double read_bar_uw = 54.0;
  double read_light_uw = 47.0;
  double mcu_pir_sleep_uw = 22.0;
  double pir_detection_uw = 32.0;
  double adv_5s_uw = 69.0;
  double adv_2s_uw = 86.0;
  double adv_1s_uw = 106.0;
  double adv_500ms_uw = 171.0;
  double adv_100ms_uw = 648.0;

  // {interval_s, power_uw}, longest interval first.
  [[nodiscard]] std::array<std::pair<double, double>, 5> advertising_anchors() const {
    return {{{5.0, adv_5s_uw}, {2.0, adv_2s_uw}, {1.0, adv_1s_uw},
             {0.5, adv_500ms_uw}, {0.1, adv_100ms_uw}}};
  }

  void validate() const {
    const double all[] = {mcu_sleep_uw, read_hum_uw,     read_temp_uw, read_bar_uw,
                          read_light_uw, mcu_pir_sleep_uw, pir_detection_uw, adv_5s_uw,
                          adv_2s_uw,     adv_1s_uw,       adv_500ms_uw, adv_100ms_uw};
    for (double p : all)
      if (p <= 0.0) throw std::invalid_argument("PowerTable::validate: non-positive power");
    if (!(adv_5s_uw > mcu_sleep_uw))
      throw std::invalid_argument("PowerTable::validate: slowest advertising below sleep floor");
    if (!(pir_detection_uw >= mcu_pir_sleep_uw))
      throw std::invalid_argument("PowerTable::validate: detection below motion sleep floor");
    if (!(adv_5s_uw < adv_2s_uw && adv_2s_uw < adv_1s_uw && adv_1s_uw < adv_500ms_uw &&
          adv_500ms_uw < adv_100ms_uw))
      throw std::invalid_argument("PowerTable::validate: advertising power must rise with rate");
  }
};

// Per-transaction energy costs (millijoules).
struct PacketBudget {
  double one_sensor_mj = 3.20;
  double two_sensor_mj = 6.40;
  double five_sensor_mj = 8.0;
  double pir_report_mj = 5.12;
  double peh_single_mj = 1.56;

  void validate() const {
    const double all[] = {one_sensor_mj, two_sensor_mj, five_sensor_mj, pir_report_mj,
                          peh_single_mj};
    for (double e : all)
      if (e <= 0.0) throw std::invalid_argument("PacketBudget::validate: non-positive energy");
    if (!(one_sensor_mj < five_sensor_mj))
      throw std::invalid_argument("PacketBudget::validate: five-sensor packet cheaper than one");
  }
};

enum class AppType { kSense1, kSense5, kPir, kAdvertise };

[[nodiscard]] inline std::string app_type_name(AppType t) {
  switch (t) {
    case AppType::kSense1: return "sense1";
    case AppType::kSense5: return "sense5";
    case AppType::kPir: return "pir";
    case AppType::kAdvertise: return "advertise";
  }
  return "?";
}

// Piecewise-linear interpolation of the measured advertising draws, carried
// out in rate (1/interval) space so power scales with packets per second.
// Exact at the anchors; intervals outside the measured range clamp to the
// nearest anchor.
[[nodiscard]] inline double advertising_power_uw(const PowerTable& power, double interval_s) {
  if (interval_s <= 0.0) throw std::invalid_argument("advertising_power_uw: non-positive interval");
  const auto anchors = power.advertising_anchors();
  std::array<std::pair<double, double>, 5> by_rate{};  // ascending rate
  for (std::size_t i = 0; i < anchors.size(); ++i)
    by_rate[i] = {1.0 / anchors[i].first, anchors[i].second};

  const double rate = 1.0 / interval_s;
  if (rate <= by_rate.front().first) return by_rate.front().second;
  if (rate >= by_rate.back().first) return by_rate.back().second;
  for (std::size_t i = 0; i + 1 < by_rate.size(); ++i) {
    const auto [r0, p0] = by_rate[i];
    const auto [r1, p1] = by_rate[i + 1];
    if (rate < r1) return p0 + (p1 - p0) * (rate - r0) / (r1 - r0);
  }
  return by_rate.back().second;
}

// Average draw of an application while the node runs at `state`.
// PIR detection reports are impulse debits handled by the engine, not part
// of the average.
[[nodiscard]] inline double load_power_uw(AppType app, int state, const QosTable& table,
                                          const PowerTable& power, const PacketBudget& budget) {
  switch (app) {
    case AppType::kSense1:
      return power.mcu_sleep_uw + budget.one_sensor_mj * 1000.0 / table.sensing_period_s(state);
    case AppType::kSense5:
      return power.mcu_sleep_uw + budget.five_sensor_mj * 1000.0 / table.sensing_period_s(state);
    case AppType::kPir:
      return power.mcu_pir_sleep_uw;
    case AppType::kAdvertise:
      return advertising_power_uw(power, table.advertising_interval_s(state));
  }
  throw std::invalid_argument("load_power_uw: unknown app");
}

inline constexpr double kStatusEpochS = 600.0;  // controller epoch spacing for advertising nodes

// Next wake-up after `now_s`: the sensing period for periodic apps, the
// blanking window after a motion event, a fixed status epoch for advertisers.
[[nodiscard]] inline double wake_schedule_s(AppType app, int state, const QosTable& table,
                                            double now_s) {
  switch (app) {
    case AppType::kSense1:
    case AppType::kSense5: return now_s + table.sensing_period_s(state);
    case AppType::kPir: return now_s + table.pir_blanking_s(state);
    case AppType::kAdvertise: return now_s + kStatusEpochS;
  }
  throw std::invalid_argument("wake_schedule_s: unknown app");
}

enum class PirOutcome { kDetected, kMissedBlanked, kMissedDead };

[[nodiscard]] inline PirOutcome pir_capture(bool powered, bool armed) {
  if (!powered) return PirOutcome::kMissedDead;
  return armed ? PirOutcome::kDetected : PirOutcome::kMissedBlanked;
}

}  // namespace lightmote
