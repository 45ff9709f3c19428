#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "lightmote/qos.hpp"

namespace lightmote {

// Trend-based service-level controller. Each application wake-up ("epoch")
// pushes the newest light and voltage samples, classifies both trends over a
// short history window, and nudges the service state by +-1 per signal.

enum class Trend { kRising, kFalling, kFlat, kOff, kInsufficient };

// Fixed-capacity ring buffer of the most recent samples, oldest first.
class History5 {
 public:
  static constexpr std::size_t kCapacity = 5;

  void push(double v) {
    buf_[(head_ + count_) % kCapacity] = v;
    if (count_ < kCapacity) {
      ++count_;
    } else {
      head_ = (head_ + 1) % kCapacity;
    }
  }
  void clear() { head_ = 0; count_ = 0; }
  [[nodiscard]] std::size_t count() const { return count_; }
  [[nodiscard]] double at(std::size_t i) const { return buf_[(head_ + i) % kCapacity]; }
  [[nodiscard]] double newest() const { return at(count_ - 1); }

 private:
  std::array<double, kCapacity> buf_{};
  std::size_t head_ = 0;
  std::size_t count_ = 0;
};

// Least-squares slope per sample step; |slope| below max(flat_rel * |mean|,
// flat_abs) reads as Flat. A newest sample under zero_floor reads as Off
// (source absent) regardless of history length.
[[nodiscard]] inline Trend trend_of(const History5& hist, double zero_floor, double flat_rel,
                                    double flat_abs) {
  if (hist.count() >= 1 && hist.newest() < zero_floor) return Trend::kOff;
  if (hist.count() < 2) return Trend::kInsufficient;

  const std::size_t n = hist.count();
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += static_cast<double>(i);
    mean_y += hist.at(i);
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    num += dx * (hist.at(i) - mean_y);
    den += dx * dx;
  }
  const double slope = num / den;
  const double tol = std::max(flat_rel * std::abs(mean_y), flat_abs);
  if (std::abs(slope) < tol) return Trend::kFlat;
  return slope > 0.0 ? Trend::kRising : Trend::kFalling;
}

struct PmConfig {
  double light_zero_floor = 10.0;  // lux below this counts as lights-off
  double light_flat_rel = 0.01;
  double light_flat_abs = 1.0;   // lux per epoch
  double volt_flat_rel = 0.0;
  double volt_flat_abs = 0.005;  // volts per epoch
  double vmax_window_v = 0.02;   // "at v_max" when within this of the rail ceiling
};

struct PmState {
  History5 light_hist;
  History5 volt_hist;
  int current_qos = 0;  // 0 until the first epoch anchors from the table

  void reset() {
    light_hist.clear();
    volt_hist.clear();
    current_qos = 0;
  }
};

// One controller epoch. The base state comes from the table on the first
// epoch after (re)boot and whenever the cap sits at v_max; otherwise the
// previous output carries over and the two trend adjustments walk it up or
// down. A full cap always pushes up (charge is there to spend); otherwise a
// falling or stable voltage pushes down and a rising one up.
[[nodiscard]] inline int next_qos(PmState& pm, const PmConfig& cfg, const QosTable& table,
                                  double v_now, double lux_now, bool at_vmax) {
  pm.light_hist.push(lux_now);
  pm.volt_hist.push(v_now);

  const int base =
      (pm.current_qos == 0 || at_vmax) ? qos_from_voltage(table, v_now) : pm.current_qos;

  int adjust = 0;
  switch (trend_of(pm.light_hist, cfg.light_zero_floor, cfg.light_flat_rel, cfg.light_flat_abs)) {
    case Trend::kOff:
    case Trend::kFalling: adjust -= 1; break;
    case Trend::kRising: adjust += 1; break;
    case Trend::kFlat:
    case Trend::kInsufficient: break;
  }
  if (at_vmax) {
    adjust += 1;
  } else {
    switch (trend_of(pm.volt_hist, -1.0, cfg.volt_flat_rel, cfg.volt_flat_abs)) {
      case Trend::kFalling:
      case Trend::kFlat: adjust -= 1; break;
      case Trend::kRising: adjust += 1; break;
      case Trend::kOff:
      case Trend::kInsufficient: break;
    }
  }

  pm.current_qos = std::clamp(base + adjust, 1, 7);
  return pm.current_qos;
}

}  // namespace lightmote
