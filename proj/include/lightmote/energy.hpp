#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace lightmote {

// Storage and harvesting primitives.
// Units: volts, farads, joules, seconds; power in microwatts (1 uW*s = 1e-6 J).

// Defaults produced by the `lightmote calibrate` command (see calibrate.hpp).
// Leakage comes from the 31 h single-sensor dark-endurance anchor, buck
// efficiency from the 2.2 h cold-start charge anchor. eta_buck lands above 1
// because the panel model is linear in lux; it is a calibration artifact, not
// a physical efficiency.
inline constexpr double kCalibratedLeakageUw = 13.4045373535;
inline constexpr double kCalibratedEtaBuck = 1.64397888184;

struct SuperCapacitor {
  double capacitance_f = 1.0;
  double voltage_v = 0.0;
  double v_max = 3.6;
  double leakage_uw = kCalibratedLeakageUw;  // cap self-discharge + converter quiescent draw
};

// Linear panel model pinned to one measured anchor point. `scale` models
// panel area changes relative to the reference panel.
struct SolarPanel {
  double anchor_lux = 300.0;
  double anchor_power_uw = 71.0;
  double scale = 1.0;
};

struct ConverterConfig {
  double eta_buck = kCalibratedEtaBuck;  // harvesting efficiency below cold-start exit
  double eta_bat = 0.8;                  // harvesting efficiency once the main rail is up
  double v_power_good = 2.1;             // MCU on/off threshold
  double v_cold_start_exit = 2.1;        // buck -> bat efficiency switchover
};

struct EnergyState {
  double energy_j = 0.0;
  double voltage_v = 0.0;
  bool mcu_powered = false;
};

// Running totals for the extended energy balance:
//   dE_stored = harvested - consumed - leaked - clamped + deficit
// `clamped_j` is harvest discarded at the full-cap clamp, `deficit_j` is
// drain that could not be served once the cap hit zero.
struct EnergyLedger {
  double harvested_j = 0.0;
  double consumed_j = 0.0;
  double leaked_j = 0.0;
  double clamped_j = 0.0;
  double deficit_j = 0.0;
};

[[nodiscard]] inline double voltage_to_energy(double voltage_v, double capacitance_f) {
  if (voltage_v < 0.0) throw std::invalid_argument("voltage_to_energy: negative voltage");
  if (capacitance_f <= 0.0) throw std::invalid_argument("voltage_to_energy: non-positive capacitance");
  return 0.5 * capacitance_f * voltage_v * voltage_v;
}

[[nodiscard]] inline double energy_to_voltage(double energy_j, double capacitance_f) {
  if (energy_j < 0.0) throw std::invalid_argument("energy_to_voltage: negative energy");
  if (capacitance_f <= 0.0) throw std::invalid_argument("energy_to_voltage: non-positive capacitance");
  return std::sqrt(2.0 * energy_j / capacitance_f);
}

[[nodiscard]] inline double harvest_power_uw(const SolarPanel& panel, double lux) {
  if (lux < 0.0) throw std::invalid_argument("harvest_power_uw: negative lux");
  return panel.anchor_power_uw * (lux / panel.anchor_lux) * panel.scale;
}

[[nodiscard]] inline EnergyState initial_energy_state(const SuperCapacitor& cap,
                                                      const ConverterConfig& conv) {
  EnergyState st;
  st.energy_j = voltage_to_energy(cap.voltage_v, cap.capacitance_f);
  st.voltage_v = cap.voltage_v;
  st.mcu_powered = cap.voltage_v >= conv.v_power_good;
  return st;
}

// Forward-Euler step over dt_s. Harvest enters through the efficiency that
// matches the rail state at the start of the step; leakage applies always.
// p_load_uw must be zero while the MCU is unpowered (caller enforces).
[[nodiscard]] inline EnergyState step_energy(const EnergyState& st, const SuperCapacitor& cap,
                                             const ConverterConfig& conv, double p_harvest_uw,
                                             double p_load_uw, double dt_s,
                                             EnergyLedger* ledger = nullptr) {
  if (p_harvest_uw < 0.0 || p_load_uw < 0.0) throw std::invalid_argument("step_energy: negative power");
  if (dt_s <= 0.0) throw std::invalid_argument("step_energy: non-positive dt");

  const double eta = st.voltage_v < conv.v_cold_start_exit ? conv.eta_buck : conv.eta_bat;
  const double in_j = p_harvest_uw * eta * 1e-6 * dt_s;
  const double out_j = p_load_uw * 1e-6 * dt_s;
  const double leak_j = cap.leakage_uw * 1e-6 * dt_s;
  const double e_max = voltage_to_energy(cap.v_max, cap.capacitance_f);

  const double raw = st.energy_j + in_j - out_j - leak_j;
  const double clamped_j = std::max(0.0, raw - e_max);
  const double deficit_j = std::max(0.0, -raw);

  EnergyState next;
  next.energy_j = std::clamp(raw, 0.0, e_max);
  next.voltage_v = energy_to_voltage(next.energy_j, cap.capacitance_f);
  next.mcu_powered = next.voltage_v >= conv.v_power_good;

  if (ledger != nullptr) {
    ledger->harvested_j += in_j;
    ledger->consumed_j += out_j;
    ledger->leaked_j += leak_j;
    ledger->clamped_j += clamped_j;
    ledger->deficit_j += deficit_j;
  }
  return next;
}

// Closed-form zero-load charge time under constant lux, split at the
// efficiency switchover. Returns nullopt when net power is not positive in
// some segment (the target voltage is never reached).
[[nodiscard]] inline std::optional<double> charge_time_s(const SuperCapacitor& cap,
                                                         const ConverterConfig& conv,
                                                         const SolarPanel& panel, double lux,
                                                         double v_from, double v_to) {
  if (v_from < 0.0 || v_to < v_from) throw std::invalid_argument("charge_time_s: bad voltage range");
  if (v_to > cap.v_max) throw std::invalid_argument("charge_time_s: target above v_max");

  const double p_raw = harvest_power_uw(panel, lux);
  double total_s = 0.0;
  struct Segment { double lo, hi, eta; };
  const double v_switch = std::clamp(conv.v_cold_start_exit, v_from, v_to);
  const Segment segs[2] = {{v_from, v_switch, conv.eta_buck}, {v_switch, v_to, conv.eta_bat}};
  for (const auto& s : segs) {
    if (s.hi <= s.lo) continue;
    const double net_uw = p_raw * s.eta - cap.leakage_uw;
    if (net_uw <= 0.0) return std::nullopt;
    const double de_j = voltage_to_energy(s.hi, cap.capacitance_f) -
                        voltage_to_energy(s.lo, cap.capacitance_f);
    total_s += de_j / (net_uw * 1e-6);
  }
  return total_s;
}

}  // namespace lightmote
