#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lightmote/engine.hpp"

namespace lightmote {

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The two measured anchors the model constants are fitted to, plus the lux
// level of the charging bench.
struct CalibrationAnchors {
  double dark_lifetime_s = 31.0 * 3600.0;  // 1-sensor node, full cap, no light
  double cold_start_s = 2.2 * 3600.0;      // empty cap to power-good
  double cold_start_lux = 750.0;
  double eta_bat = 0.8;
};

struct Calibration {
  double leakage_uw = kCalibratedLeakageUw;
  double eta_buck = kCalibratedEtaBuck;
  double eta_bat = 0.8;

  // Predictions at the fitted constants, kept for inspection.
  double fit_dark_lifetime_s = 0.0;
  double fit_cold_start_s = 0.0;
  double predicted_five_sensor_dark_s = 0.0;
  double predicted_advertising_dark_s = 0.0;
};

namespace detail {

// Bisection for a continuous monotone (either direction) objective.
// rel_tol applies to the argument interval.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double target,
                     double rel_tol, const std::string& what) {
  double f_lo = f(lo) - target;
  double f_hi = f(hi) - target;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg << what << ": target " << target << " not bracketed on [" << lo << ", " << hi
        << "] (endpoint residuals " << f_lo << ", " << f_hi << ")";
    throw CalibrationError(msg.str());
  }
  for (int i = 0; i < 200 && (hi - lo) > rel_tol * 0.5 * (lo + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid) - target;
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Time from a full 1 F cap to brown-out with no light, for the given
// standing leakage. Infinity when the node outlives the probe window.
inline double dark_lifetime_s(AppType app, double leakage_uw, double eta_bat) {
  NodeConfig cfg;
  cfg.id = "calib-dark";
  cfg.app = app;
  cfg.cap = SuperCapacitor{1.0, 3.6, 3.6, leakage_uw};
  cfg.conv.eta_bat = eta_bat;
  cfg.light.t_s = {0.0};
  cfg.light.lux = {0.0};
  const NodeReport rep = run_node(cfg, 3, /*seed=*/0, /*channel_loss_p=*/0.0);
  return std::isnan(rep.first_brownout_s) ? std::numeric_limits<double>::infinity()
                                          : rep.first_brownout_s;
}

}  // namespace detail

// Fits the standing-leakage and cold-start efficiency constants to the two
// anchors. Leakage is fitted first (the dark run involves no harvesting),
// then eta_buck against the closed-form charge time. Pure: same anchors,
// same result.
[[nodiscard]] inline Calibration calibrate(const CalibrationAnchors& anchors = {}) {
  if (anchors.dark_lifetime_s <= 0.0 || anchors.cold_start_s <= 0.0 ||
      anchors.cold_start_lux <= 0.0)
    throw CalibrationError("calibrate: anchors must be positive");
  if (anchors.eta_bat <= 0.0 || anchors.eta_bat > 1.0)
    throw CalibrationError("calibrate: eta_bat must lie in (0, 1]");

  constexpr double kRelTol = 1e-3;
  Calibration out;
  out.eta_bat = anchors.eta_bat;

  // Lifetime falls as leakage rises, so the objective is monotone.
  out.leakage_uw = detail::bisect(
      [&](double l) { return detail::dark_lifetime_s(AppType::kSense1, l, anchors.eta_bat); },
      0.01, 50.0, anchors.dark_lifetime_s, kRelTol, "leakage fit");
  out.fit_dark_lifetime_s =
      detail::dark_lifetime_s(AppType::kSense1, out.leakage_uw, anchors.eta_bat);

  const SuperCapacitor cap{1.0, 0.0, 3.6, out.leakage_uw};
  const SolarPanel panel;
  auto cold_start_with = [&](double eta_buck) {
    ConverterConfig conv;
    conv.eta_buck = eta_buck;
    conv.eta_bat = anchors.eta_bat;
    const auto t = charge_time_s(cap, conv, panel, anchors.cold_start_lux, 0.0, conv.v_power_good);
    return t ? *t : std::numeric_limits<double>::infinity();
  };
  out.eta_buck = detail::bisect(cold_start_with, 0.05, 8.0, anchors.cold_start_s, kRelTol,
                                "cold-start efficiency fit");
  out.fit_cold_start_s = cold_start_with(out.eta_buck);

  out.predicted_five_sensor_dark_s =
      detail::dark_lifetime_s(AppType::kSense5, out.leakage_uw, anchors.eta_bat);
  out.predicted_advertising_dark_s =
      detail::dark_lifetime_s(AppType::kAdvertise, out.leakage_uw, anchors.eta_bat);
  return out;
}

[[nodiscard]] inline nlohmann::ordered_json calibration_to_json(const Calibration& c) {
  nlohmann::ordered_json j;
  j["leakage_uw"] = c.leakage_uw;
  j["eta_buck"] = c.eta_buck;
  j["eta_bat"] = c.eta_bat;
  j["fit"]["dark_lifetime_s"] = c.fit_dark_lifetime_s;
  j["fit"]["cold_start_s"] = c.fit_cold_start_s;
  j["predicted"]["five_sensor_dark_s"] = c.predicted_five_sensor_dark_s;
  j["predicted"]["advertising_dark_s"] = c.predicted_advertising_dark_s;
  return j;
}

[[nodiscard]] inline Calibration calibration_from_json(const nlohmann::json& j) {
  Calibration c;
  c.leakage_uw = j.at("leakage_uw").get<double>();
  c.eta_buck = j.at("eta_buck").get<double>();
  c.eta_bat = j.at("eta_bat").get<double>();
  if (c.leakage_uw < 0.0 || c.eta_buck <= 0.0 || c.eta_bat <= 0.0 || c.eta_bat > 1.0)
    throw CalibrationError("calibration document: values out of range");
  if (j.contains("fit")) {
    c.fit_dark_lifetime_s = j["fit"].value("dark_lifetime_s", 0.0);
    c.fit_cold_start_s = j["fit"].value("cold_start_s", 0.0);
  }
  if (j.contains("predicted")) {
    c.predicted_five_sensor_dark_s = j["predicted"].value("five_sensor_dark_s", 0.0);
    c.predicted_advertising_dark_s = j["predicted"].value("advertising_dark_s", 0.0);
  }
  return c;
}

inline void save_calibration(const std::string& path, const Calibration& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CalibrationError("cannot open for writing: " + path);
  out << calibration_to_json(c).dump(2) << '\n';
}

[[nodiscard]] inline Calibration load_calibration(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CalibrationError("cannot open calibration file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CalibrationError("calibration file " + path + ": " + e.what());
  }
  return calibration_from_json(j);
}

}  // namespace lightmote
