#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace lightmote {

// Service-level lookup table: each state maps a storage-voltage band to the
// duty parameters of the node applications. Bands are half-open [v_low,
// v_high) except the top band, which includes v_max itself.

struct QosRow {
  int state = 0;
  double v_low = 0.0;
  double v_high = 0.0;
  double sensing_period_s = 0.0;
  double pir_blanking_s = 0.0;
  double advertising_interval_s = 0.0;
};

struct QosTable {
  std::array<QosRow, 7> rows{};  // ascending by state; rows[k].state == k + 1

  [[nodiscard]] const QosRow& row(int state) const {
    if (state < 1 || state > 7) throw std::invalid_argument("QosTable::row: state out of range");
    return rows[static_cast<std::size_t>(state - 1)];
  }
  [[nodiscard]] double sensing_period_s(int state) const { return row(state).sensing_period_s; }
  [[nodiscard]] double pir_blanking_s(int state) const { return row(state).pir_blanking_s; }
  [[nodiscard]] double advertising_interval_s(int state) const {
    return row(state).advertising_interval_s;
  }
  [[nodiscard]] double v_min() const { return rows.front().v_low; }
  [[nodiscard]] double v_max() const { return rows.back().v_high; }

  void validate() const;
};

[[nodiscard]] inline QosTable default_qos_table() {
  QosTable t;
  //                 state  v_low v_high sense   pir    adv
  t.rows = {QosRow{1, 2.1, 2.4, 600.0, 600.0, 5.0},
            QosRow{2, 2.4, 2.6, 300.0, 300.0, 2.0},
            QosRow{3, 2.6, 2.8, 240.0, 120.0, 0.9},
            QosRow{4, 2.8, 3.0, 120.0, 60.0, 0.64},
            QosRow{5, 3.0, 3.2, 60.0, 30.0, 0.4},
            QosRow{6, 3.2, 3.4, 40.0, 20.0, 0.2},
            QosRow{7, 3.4, 3.6, 20.0, 10.0, 0.1}};
  return t;
}

inline void QosTable::validate() const {
  std::string problems;
  auto complain = [&problems](const std::string& p) {
    problems += problems.empty() ? p : "; " + p;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const QosRow& r = rows[i];
    if (r.state != static_cast<int>(i) + 1) complain("states must run 1..7 in order");
    if (!(r.v_high > r.v_low)) complain("empty voltage band at state " + std::to_string(r.state));
    if (r.sensing_period_s <= 0.0 || r.pir_blanking_s <= 0.0 || r.advertising_interval_s <= 0.0)
      complain("non-positive period at state " + std::to_string(r.state));
    if (i > 0) {
      const QosRow& lo = rows[i - 1];
      if (r.v_low != lo.v_high) complain("voltage bands must tile contiguously");
      if (!(r.sensing_period_s < lo.sensing_period_s))
        complain("sensing period must strictly decrease with state");
      if (!(r.pir_blanking_s < lo.pir_blanking_s))
        complain("blanking must strictly decrease with state");
      if (!(r.advertising_interval_s < lo.advertising_interval_s))
        complain("advertising interval must strictly decrease with state");
    }
  }
  if (!problems.empty()) throw std::invalid_argument("QosTable::validate: " + problems);
}

// Maps a storage voltage to its band. Voltages below the bottom band signal a
// browned-out node; callers must have de-powered it already.
[[nodiscard]] inline int qos_from_voltage(const QosTable& table, double voltage_v) {
  constexpr double kEps = 1e-9;
  if (voltage_v < table.v_min() - kEps)
    throw std::domain_error("qos_from_voltage: voltage below operating range (brown-out)");
  if (voltage_v >= table.v_max() - kEps) return table.rows.back().state;  // top band is closed
  for (const QosRow& r : table.rows) {
    if (voltage_v >= r.v_low && voltage_v < r.v_high) return r.state;
  }
  return table.rows.front().state;  // voltage_v in [v_min - eps, v_min)
}

}  // namespace lightmote
