#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lightmote/rng.hpp"
#include "lightmote/trace.hpp"

namespace lightmote {

// Synthetic deployment-location models: a daily lighting schedule plus a
// motion-event rate profile. Generation is a pure function of
// (preset, days, seed), so traces are reproducible byte for byte.

struct LocationPreset {
  std::string name;
  double target_mean_lux = 0.0;  // declared daily mean the generator aims for
  double on_lux = 0.0;
  double off_lux = 0.0;
  int on_start_hour = 0;  // lit window [start, end) each day; 0..24 means constant
  int on_end_hour = 24;
  double jitter_frac = 0.0;        // multiplicative sample noise, uniform +-jitter
  double occupied_fraction = 1.0;  // lit share of each occupancy block
  double block_min_s = 0.0;        // occupancy block tiling, used when fraction < 1
  double block_max_s = 0.0;
  bool daylight_bell = false;  // bell-shaped daylight instead of a flat lit level
  double bell_peak_lux = 0.0;
  double bell_sigma_h = 0.0;
  double bell_center_h = 13.0;
  std::array<double, 24> events_per_hour{};
};

namespace presets {

namespace detail {
inline std::array<double, 24> hourly(double rate, int from_hour, int to_hour) {
  std::array<double, 24> r{};
  for (int h = from_hour; h < to_hour; ++h) r[static_cast<std::size_t>(h)] = rate;
  return r;
}
}  // namespace detail

// Hallway door: lit during business hours, sparse passers-by.
inline LocationPreset door() {
  LocationPreset p;
  p.name = "door";
  p.target_mean_lux = 121.0;
  p.on_lux = 240.0;
  p.off_lux = 2.0;
  p.on_start_hour = 8;
  p.on_end_hour = 20;
  p.jitter_frac = 0.2;
  p.events_per_hour = detail::hourly(2.0, 8, 20);
  return p;
}

// Desk in the middle of an open office.
inline LocationPreset center_office() {
  LocationPreset p;
  p.name = "center_office";
  p.target_mean_lux = 246.0;
  p.on_lux = 490.0;
  p.off_lux = 2.0;
  p.on_start_hour = 7;
  p.on_end_hour = 19;
  p.jitter_frac = 0.2;
  p.events_per_hour = detail::hourly(4.0, 8, 18);
  return p;
}

// Window sill: daylight bell far above interior lighting.
inline LocationPreset window() {
  LocationPreset p;
  p.name = "window";
  p.target_mean_lux = 7000.0;
  p.off_lux = 2.0;
  p.jitter_frac = 0.15;
  p.daylight_bell = true;
  p.bell_peak_lux = 16800.0;
  p.bell_sigma_h = 4.0;
  p.bell_center_h = 13.0;
  p.events_per_hour = detail::hourly(3.0, 8, 18);
  return p;
}

// Stairs access: safety lighting around the clock, heavy foot traffic.
inline LocationPreset stairs() {
  LocationPreset p;
  p.name = "stairs";
  p.target_mean_lux = 235.0;
  p.on_lux = 235.0;
  p.off_lux = 235.0;
  p.on_start_hour = 0;
  p.on_end_hour = 24;
  p.jitter_frac = 0.02;
  p.events_per_hour = detail::hourly(20.0, 0, 24);
  return p;
}

// Conference room: bright when occupied, dark between meetings.
inline LocationPreset conference_room() {
  LocationPreset p;
  p.name = "conference_room";
  p.target_mean_lux = 1084.0;
  p.on_lux = 2500.0;
  p.off_lux = 2.0;
  p.on_start_hour = 7;
  p.on_end_hour = 20;
  p.jitter_frac = 0.1;
  p.occupied_fraction = 0.8;
  p.block_min_s = 1800.0;
  p.block_max_s = 3600.0;
  p.events_per_hour = detail::hourly(3.0, 8, 20);
  return p;
}

inline LocationPreset by_name(const std::string& name) {
  if (name == "door") return door();
  if (name == "center_office") return center_office();
  if (name == "window") return window();
  if (name == "stairs") return stairs();
  if (name == "conference_room") return conference_room();
  throw std::invalid_argument("unknown location preset '" + name + "'");
}

}  // namespace presets

namespace detail {

constexpr std::uint32_t kOccupancyStream = 0xA11CE;
constexpr std::uint32_t kLightStream = 0x11647;
constexpr std::uint32_t kEventStream = 0xE7E27;

// Occupied sub-intervals of the lit window. Derived from its own RNG stream
// so the light and event generators see identical schedules.
inline std::vector<std::pair<double, double>> occupied_intervals(const LocationPreset& p, int days,
                                                                 std::uint64_t seed) {
  std::vector<std::pair<double, double>> out;
  auto rng = make_stream(seed, kOccupancyStream, p.name);
  for (int d = 0; d < days; ++d) {
    const double w0 = d * 86400.0 + p.on_start_hour * 3600.0;
    const double w1 = d * 86400.0 + p.on_end_hour * 3600.0;
    if (p.occupied_fraction >= 1.0) {
      out.emplace_back(w0, w1);
      continue;
    }
    double t = w0;
    while (t < w1) {
      const double len =
          std::min(w1 - t, p.block_min_s + (p.block_max_s - p.block_min_s) * uniform01(rng));
      out.emplace_back(t, t + len * p.occupied_fraction);
      t += len;
    }
  }
  return out;
}

class IntervalCursor {
 public:
  explicit IntervalCursor(const std::vector<std::pair<double, double>>& iv) : iv_(&iv) {}
  [[nodiscard]] bool contains(double t) {
    while (idx_ < iv_->size() && (*iv_)[idx_].second <= t) ++idx_;
    return idx_ < iv_->size() && t >= (*iv_)[idx_].first;
  }

 private:
  const std::vector<std::pair<double, double>>* iv_;
  std::size_t idx_ = 0;
};

}  // namespace detail

inline constexpr double kLightSampleStepS = 60.0;

[[nodiscard]] inline LightTrace generate_light(const LocationPreset& preset, int days,
                                               std::uint64_t seed) {
  if (days <= 0) throw std::invalid_argument("generate_light: non-positive day count");
  const auto occupied = detail::occupied_intervals(preset, days, seed);
  detail::IntervalCursor cursor(occupied);
  auto rng = detail::make_stream(seed, detail::kLightStream, preset.name);

  LightTrace trace;
  const double horizon = days * 86400.0;
  trace.t_s.reserve(static_cast<std::size_t>(horizon / kLightSampleStepS));
  trace.lux.reserve(trace.t_s.capacity());
  for (double t = 0.0; t < horizon; t += kLightSampleStepS) {
    double base;
    if (preset.daylight_bell) {
      const double h = std::fmod(t, 86400.0) / 3600.0;
      const double z = (h - preset.bell_center_h) / preset.bell_sigma_h;
      base = preset.off_lux + preset.bell_peak_lux * std::exp(-0.5 * z * z);
    } else {
      base = cursor.contains(t) ? preset.on_lux : preset.off_lux;
    }
    const double jitter = 1.0 + preset.jitter_frac * (2.0 * detail::uniform01(rng) - 1.0);
    trace.t_s.push_back(t);
    trace.lux.push_back(std::max(0.0, base * jitter));
  }
  trace.validate();
  return trace;
}

[[nodiscard]] inline EventTrace generate_events(const LocationPreset& preset, int days,
                                                std::uint64_t seed) {
  if (days <= 0) throw std::invalid_argument("generate_events: non-positive day count");
  const auto occupied = detail::occupied_intervals(preset, days, seed);
  detail::IntervalCursor cursor(occupied);
  auto rng = detail::make_stream(seed, detail::kEventStream, preset.name);

  EventTrace trace;
  for (int d = 0; d < days; ++d) {
    for (int h = 0; h < 24; ++h) {
      const double rate = preset.events_per_hour[static_cast<std::size_t>(h)];
      if (rate <= 0.0) continue;
      const double seg0 = d * 86400.0 + h * 3600.0;
      const double seg1 = seg0 + 3600.0;
      const double lambda = rate / 3600.0;
      double t = seg0;
      for (;;) {
        t += -std::log(1.0 - detail::uniform01(rng)) / lambda;
        if (t >= seg1) break;
        if (cursor.contains(t)) trace.t_s.push_back(t);
      }
    }
  }
  trace.validate();
  return trace;
}

}  // namespace lightmote
