#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lightmote/apps.hpp"
#include "lightmote/energy.hpp"
#include "lightmote/power_manager.hpp"
#include "lightmote/presets.hpp"
#include "lightmote/qos.hpp"
#include "lightmote/rng.hpp"
#include "lightmote/trace.hpp"

namespace lightmote {

// Fixed-timestep (1 s) node simulation. Everything a node does is a pure
// function of its config, the traces, and the seed, so identical inputs give
// identical reports.

inline constexpr double kStepS = 1.0;
inline constexpr double kDayS = 86400.0;

struct NodeConfig {
  std::string id;
  AppType app = AppType::kSense1;
  std::string sensor;  // informational label for single-sensor nodes

  SuperCapacitor cap{1.0, 3.6, 3.6, kCalibratedLeakageUw};
  SolarPanel panel;
  ConverterConfig conv;
  PmConfig pm;
  QosTable qos = default_qos_table();
  PowerTable power;
  PacketBudget budget;
  std::optional<int> pinned_qos;  // bypasses the controller when set

  LightTrace light;
  EventTrace events;
};

struct PacketRecord {
  double t_s = 0.0;
  int qos_state = 0;
  double voltage_v = 0.0;
};

struct DayMetrics {
  long packets = 0;
  double downtime_s = 0.0;
  double alive_s = 0.0;
  double adv_interval_sum_s = 0.0;  // advertising-interval occupancy over alive seconds
  long pir_detected = 0;
  long pir_missed_blanked = 0;
  long pir_missed_dead = 0;

  [[nodiscard]] double mean_period_s() const {
    return packets > 0 ? kDayS / static_cast<double>(packets)
                       : std::numeric_limits<double>::quiet_NaN();
  }
  [[nodiscard]] double adv_interval_mean_s() const {
    return alive_s > 0.0 ? adv_interval_sum_s / alive_s
                         : std::numeric_limits<double>::quiet_NaN();
  }
};

struct NodeReport {
  std::string node_id;
  AppType app = AppType::kSense1;
  std::vector<DayMetrics> days;
  std::vector<PacketRecord> packets;
  long dropped_packets = 0;

  EnergyLedger ledger;
  double initial_energy_j = 0.0;
  double final_energy_j = 0.0;

  double first_brownout_s = std::numeric_limits<double>::quiet_NaN();
  double total_downtime_s = 0.0;

  [[nodiscard]] long total_packets() const { return static_cast<long>(packets.size()); }
  [[nodiscard]] double mean_period_s() const {
    return packets.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : days.size() * kDayS / static_cast<double>(packets.size());
  }
  [[nodiscard]] double adv_interval_mean_s() const {
    double sum = 0.0, alive = 0.0;
    for (const DayMetrics& d : days) {
      sum += d.adv_interval_sum_s;
      alive += d.alive_s;
    }
    return alive > 0.0 ? sum / alive : std::numeric_limits<double>::quiet_NaN();
  }
  [[nodiscard]] long pir_total(PirOutcome o) const {
    long n = 0;
    for (const DayMetrics& d : days)
      n += o == PirOutcome::kDetected        ? d.pir_detected
           : o == PirOutcome::kMissedBlanked ? d.pir_missed_blanked
                                             : d.pir_missed_dead;
    return n;
  }
  [[nodiscard]] double pir_detection_pct() const {
    const long total = pir_total(PirOutcome::kDetected) + pir_total(PirOutcome::kMissedBlanked) +
                       pir_total(PirOutcome::kMissedDead);
    return total > 0 ? 100.0 * static_cast<double>(pir_total(PirOutcome::kDetected)) /
                           static_cast<double>(total)
                     : std::numeric_limits<double>::quiet_NaN();
  }
  // Residual of the extended energy balance, relative to total turnover.
  [[nodiscard]] double ledger_residual_rel() const {
    const double delta = final_energy_j - initial_energy_j;
    const double explained = ledger.harvested_j - ledger.consumed_j - ledger.leaked_j -
                             ledger.clamped_j + ledger.deficit_j;
    const double turnover = std::max(
        {1e-12, ledger.harvested_j + ledger.consumed_j + ledger.leaked_j, std::abs(delta)});
    return std::abs(delta - explained) / turnover;
  }
};

struct SimReport {
  std::uint64_t seed = 0;
  int duration_days = 0;
  double channel_loss_p = 0.0;
  std::vector<NodeReport> nodes;
};

// Bernoulli channel; loss probability 0 keeps every packet.
[[nodiscard]] inline bool deliver(double channel_loss_p, std::mt19937_64& rng) {
  if (channel_loss_p <= 0.0) return true;
  return detail::uniform01(rng) >= channel_loss_p;
}

namespace detail {
constexpr std::uint32_t kChannelStream = 0xC4A9;
constexpr double kNeverS = std::numeric_limits<double>::infinity();
}  // namespace detail

[[nodiscard]] inline NodeReport run_node(const NodeConfig& cfg, int duration_days,
                                         std::uint64_t seed, double channel_loss_p) {
  if (duration_days <= 0) throw std::invalid_argument("run_node: non-positive duration");
  cfg.qos.validate();
  cfg.power.validate();
  cfg.budget.validate();
  cfg.light.validate();
  cfg.events.validate();

  NodeReport report;
  report.node_id = cfg.id;
  report.app = cfg.app;
  report.days.resize(static_cast<std::size_t>(duration_days));

  EnergyState st = initial_energy_state(cfg.cap, cfg.conv);
  report.initial_energy_j = st.energy_j;

  PmState pm;
  bool alive = st.mcu_powered;
  int qos = cfg.pinned_qos.value_or(1);
  double next_wake_s = alive ? 0.0 : detail::kNeverS;
  double blanked_until_s = 0.0;
  double impulse_j = 0.0;

  LightCursor light(cfg.light);
  std::size_t ev_idx = 0;
  auto channel = detail::make_stream(seed, detail::kChannelStream, cfg.id);

  const long duration_s = static_cast<long>(duration_days) * 86400;

  auto emit = [&](double t_s, DayMetrics& day) {
    if (!deliver(channel_loss_p, channel)) {
      ++report.dropped_packets;
      return;
    }
    report.packets.push_back(PacketRecord{t_s, qos, st.voltage_v});
    ++day.packets;
  };

  for (long t = 0; t < duration_s; ++t) {
    DayMetrics& day = report.days[static_cast<std::size_t>(t / 86400)];
    const double lux = light.lux_at(static_cast<double>(t));

    // Controller epoch / application wake-up.
    if (alive && static_cast<double>(t) >= next_wake_s) {
      if (!cfg.pinned_qos) {
        const bool at_vmax = st.voltage_v >= cfg.cap.v_max - cfg.pm.vmax_window_v;
        qos = next_qos(pm, cfg.pm, cfg.qos, st.voltage_v, lux, at_vmax);
      }
      if (cfg.app == AppType::kPir) {
        next_wake_s = detail::kNeverS;  // motion events drive further epochs
      } else {
        emit(static_cast<double>(t), day);
        next_wake_s = wake_schedule_s(cfg.app, qos, cfg.qos, static_cast<double>(t));
      }
    }

    // Motion events due this step.
    if (cfg.app == AppType::kPir) {
      while (ev_idx < cfg.events.t_s.size() && cfg.events.t_s[ev_idx] < static_cast<double>(t + 1)) {
        const double ev = cfg.events.t_s[ev_idx++];
        switch (pir_capture(alive, ev >= blanked_until_s)) {
          case PirOutcome::kDetected: {
            DayMetrics& ev_day = report.days[static_cast<std::size_t>(ev / kDayS)];
            ++ev_day.pir_detected;
            emit(ev, ev_day);
            impulse_j += cfg.budget.pir_report_mj * 1e-3;
            blanked_until_s = ev + cfg.qos.pir_blanking_s(qos);
            next_wake_s = blanked_until_s;  // controller epoch at re-arm
            break;
          }
          case PirOutcome::kMissedBlanked: ++day.pir_missed_blanked; break;
          case PirOutcome::kMissedDead: ++day.pir_missed_dead; break;
        }
      }
    }

    double p_load_uw = 0.0;
    if (alive) {
      p_load_uw = load_power_uw(cfg.app, qos, cfg.qos, cfg.power, cfg.budget);
      p_load_uw += impulse_j * 1e6 / kStepS;
      day.alive_s += kStepS;
      if (cfg.app == AppType::kAdvertise)
        day.adv_interval_sum_s += cfg.qos.advertising_interval_s(qos) * kStepS;
    } else {
      day.downtime_s += kStepS;
    }
    impulse_j = 0.0;

    const double p_harvest = harvest_power_uw(cfg.panel, lux);
    st = step_energy(st, cfg.cap, cfg.conv, p_harvest, p_load_uw, kStepS, &report.ledger);

    if (alive && !st.mcu_powered) {
      alive = false;
      if (std::isnan(report.first_brownout_s)) report.first_brownout_s = static_cast<double>(t + 1);
      pm.reset();
      next_wake_s = detail::kNeverS;
      blanked_until_s = 0.0;
      impulse_j = 0.0;
    } else if (!alive && st.mcu_powered) {
      alive = true;  // reboot: next step anchors the controller from the table
      next_wake_s = static_cast<double>(t + 1);
      if (cfg.pinned_qos) qos = *cfg.pinned_qos;
    }
  }

  report.final_energy_j = st.energy_j;
  for (const DayMetrics& d : report.days) report.total_downtime_s += d.downtime_s;
  return report;
}

// Reference systems the adaptive node is compared against.
struct BaselineKind {
  enum class Kind { kBattery, kPureHarvest } kind = Kind::kBattery;
  double period_s = 60.0;    // battery reporting period
  double buffer_mj = 6.40;   // pure-harvest per-packet storage
};

// Battery node: fixed-period reporting (or every motion event), no energy
// constraint. The draw is tallied in deficit_j (sourced outside the
// harvesting chain) so the extended balance still closes.
[[nodiscard]] inline NodeReport run_battery(const NodeConfig& cfg, int duration_days,
                                            double period_s) {
  if (duration_days <= 0 || period_s <= 0.0) throw std::invalid_argument("run_battery: bad args");
  NodeReport report;
  report.node_id = cfg.id;
  report.app = cfg.app;
  report.days.resize(static_cast<std::size_t>(duration_days));

  const double nominal_v = 3.0;
  const double duration_s = duration_days * kDayS;
  auto spend = [&report](double mj) {
    report.ledger.consumed_j += mj * 1e-3;
    report.ledger.deficit_j += mj * 1e-3;
  };

  if (cfg.app == AppType::kPir) {
    for (double ev : cfg.events.t_s) {
      if (ev >= duration_s) break;
      DayMetrics& day = report.days[static_cast<std::size_t>(ev / kDayS)];
      ++day.pir_detected;
      ++day.packets;
      report.packets.push_back(PacketRecord{ev, 0, nominal_v});
      spend(cfg.budget.pir_report_mj);
    }
  } else {
    const double per_packet_mj =
        cfg.app == AppType::kSense5 ? cfg.budget.five_sensor_mj : cfg.budget.one_sensor_mj;
    for (double t = 0.0; t < duration_s; t += period_s) {
      DayMetrics& day = report.days[static_cast<std::size_t>(t / kDayS)];
      ++day.packets;
      report.packets.push_back(PacketRecord{t, 0, nominal_v});
      spend(per_packet_mj);
    }
  }
  for (DayMetrics& d : report.days) d.alive_s = kDayS;
  return report;
}

// Harvest-and-fire node: a buffer sized for exactly one transaction, no
// standby draw; it works whenever light fills the buffer and is silent in
// the dark.
[[nodiscard]] inline NodeReport run_pure_harvest(const NodeConfig& cfg, int duration_days,
                                                 double buffer_mj) {
  if (duration_days <= 0 || buffer_mj <= 0.0)
    throw std::invalid_argument("run_pure_harvest: bad args");
  cfg.light.validate();

  NodeReport report;
  report.node_id = cfg.id;
  report.app = cfg.app;
  report.days.resize(static_cast<std::size_t>(duration_days));

  const double threshold_j = buffer_mj * 1e-3;
  double buffer_j = 0.0;
  LightCursor light(cfg.light);
  std::size_t ev_idx = 0;
  const long duration_s = static_cast<long>(duration_days) * 86400;

  for (long t = 0; t < duration_s; ++t) {
    DayMetrics& day = report.days[static_cast<std::size_t>(t / 86400)];
    const double in_j =
        harvest_power_uw(cfg.panel, light.lux_at(static_cast<double>(t))) * cfg.conv.eta_bat * 1e-6;
    buffer_j += in_j;
    report.ledger.harvested_j += in_j;

    if (cfg.app == AppType::kPir) {
      while (ev_idx < cfg.events.t_s.size() && cfg.events.t_s[ev_idx] < static_cast<double>(t + 1)) {
        const double ev = cfg.events.t_s[ev_idx++];
        DayMetrics& ev_day = report.days[static_cast<std::size_t>(ev / kDayS)];
        if (buffer_j >= threshold_j) {
          buffer_j -= threshold_j;
          report.ledger.consumed_j += threshold_j;
          ++ev_day.pir_detected;
          ++ev_day.packets;
          report.packets.push_back(PacketRecord{ev, 0, 0.0});
        } else {
          ++ev_day.pir_missed_dead;
        }
      }
    } else {
      while (buffer_j >= threshold_j) {
        buffer_j -= threshold_j;
        report.ledger.consumed_j += threshold_j;
        ++day.packets;
        report.packets.push_back(PacketRecord{static_cast<double>(t), 0, 0.0});
      }
    }
    day.alive_s += kStepS;
  }
  report.final_energy_j = buffer_j;
  return report;
}

[[nodiscard]] inline NodeReport run_baseline(const BaselineKind& kind, const NodeConfig& cfg,
                                             int duration_days) {
  return kind.kind == BaselineKind::Kind::kBattery
             ? run_battery(cfg, duration_days, kind.period_s)
             : run_pure_harvest(cfg, duration_days, kind.buffer_mj);
}

}  // namespace lightmote
