#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lightmote {

// Environment inputs: a zero-order-hold illuminance trace and a sorted list
// of motion-event timestamps.

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LightTrace {
  std::vector<double> t_s;   // strictly increasing, first sample at 0
  std::vector<double> lux;   // one value per timestamp, holds until the next

  void validate() const {
    if (t_s.size() != lux.size()) throw TraceError("light trace: column length mismatch");
    if (t_s.empty()) throw TraceError("light trace: empty");
    if (t_s.front() != 0.0) throw TraceError("light trace: first sample must be at t=0");
    for (std::size_t i = 0; i < t_s.size(); ++i) {
      if (lux[i] < 0.0) throw TraceError("light trace: negative lux at sample " + std::to_string(i));
      if (i > 0 && !(t_s[i] > t_s[i - 1]))
        throw TraceError("light trace: timestamps not strictly increasing at sample " +
                         std::to_string(i));
    }
  }

  // Step-function lookup; the last value extends indefinitely.
  [[nodiscard]] double lux_at(double t) const {
    auto it = std::upper_bound(t_s.begin(), t_s.end(), t);
    if (it == t_s.begin()) return lux.front();
    return lux[static_cast<std::size_t>(it - t_s.begin()) - 1];
  }

  // Pointwise rescale (used for what-if sweeps over brighter installs).
  [[nodiscard]] LightTrace scaled(double factor) const {
    LightTrace out = *this;
    for (double& v : out.lux) v *= factor;
    return out;
  }
};

// Sequential cursor over a LightTrace for the simulation hot loop.
class LightCursor {
 public:
  explicit LightCursor(const LightTrace& trace) : trace_(&trace) {}
  [[nodiscard]] double lux_at(double t) {
    while (idx_ + 1 < trace_->t_s.size() && trace_->t_s[idx_ + 1] <= t) ++idx_;
    return trace_->lux[idx_];
  }

 private:
  const LightTrace* trace_;
  std::size_t idx_ = 0;
};

struct EventTrace {
  std::vector<double> t_s;  // strictly increasing

  void validate() const {
    for (std::size_t i = 0; i < t_s.size(); ++i) {
      if (t_s[i] < 0.0) throw TraceError("event trace: negative timestamp");
      if (i > 0 && !(t_s[i] > t_s[i - 1]))
        throw TraceError("event trace: timestamps not strictly increasing at sample " +
                         std::to_string(i));
    }
  }
};

namespace detail {

inline std::vector<std::vector<double>> parse_csv(std::istream& in, const std::string& header,
                                                  std::size_t columns, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw TraceError(what + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw TraceError(what + ": expected header '" + header + "'");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw TraceError(what + ": bad number '" + field + "' on line " + std::to_string(line_no));
      }
    }
    if (row.size() != columns)
      throw TraceError(what + ": expected " + std::to_string(columns) + " fields on line " +
                       std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

[[nodiscard]] inline LightTrace load_light_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open light trace '" + path + "'");
  LightTrace trace;
  for (const auto& row : detail::parse_csv(in, "t_s,lux", 2, "light trace '" + path + "'")) {
    trace.t_s.push_back(row[0]);
    trace.lux.push_back(row[1]);
  }
  trace.validate();
  return trace;
}

[[nodiscard]] inline EventTrace load_event_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open event trace '" + path + "'");
  EventTrace trace;
  for (const auto& row : detail::parse_csv(in, "t_s", 1, "event trace '" + path + "'"))
    trace.t_s.push_back(row[0]);
  trace.validate();
  return trace;
}

namespace detail {
inline void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

// Shortest representation that parses back to the same double, so trace
// files round-trip losslessly.
inline void append_exact(std::string& out, double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}
}  // namespace detail

[[nodiscard]] inline std::string serialize_light_trace(const LightTrace& trace) {
  std::string out = "t_s,lux\n";
  for (std::size_t i = 0; i < trace.t_s.size(); ++i) {
    detail::append_exact(out, trace.t_s[i]);
    out += ',';
    detail::append_exact(out, trace.lux[i]);
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline std::string serialize_event_trace(const EventTrace& trace) {
  std::string out = "t_s\n";
  for (double t : trace.t_s) {
    detail::append_exact(out, t);
    out += '\n';
  }
  return out;
}

inline void save_trace(const std::string& path, const std::string& serialized) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot write trace '" + path + "'");
  out << serialized;
}

}  // namespace lightmote
