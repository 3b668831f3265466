#pragma once

// Dispatch of a ScanSpec to the matching sweep, and the metadata block that
// makes a table reproducible.

#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <string>
#include <vector>

#include "rydberg/array/array_model.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/harness/config.hpp"
#include "rydberg/obe/doppler.hpp"
#include "rydberg/scan_table.hpp"
#include "rydberg/signal/signal_chain.hpp"

namespace rydberg::harness {

inline constexpr const char* tool_name = "rydberg-simo";
inline constexpr const char* tool_version = "1.0.0";

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunInfo {
  std::string command = "run_scan";
  std::string timestamp;  // empty: current UTC time
};

/// Tool, command, timestamp and every config key, in that order.
inline void stamp(ScanTable& table, const Config& config, const RunInfo& info) {
  table.set_meta("tool", tool_name);
  table.set_meta("tool_version", tool_version);
  table.set_meta("command", info.command);
  table.set_meta("timestamp", info.timestamp.empty() ? utc_timestamp() : info.timestamp);
  for (const auto& [k, v] : config.entries()) table.set_meta(k, v);
}

inline const std::vector<std::string>& spectrum_columns() {
  static const std::vector<std::string> c = {"detuning_rad_s", "transmission"};
  return c;
}

inline const std::vector<std::string>& fam_sweep_columns() {
  static const std::vector<std::string> c = {"n_receivers", "f_am_hz", "snr_db", "snr_ratio", "capacity_bps"};
  return c;
}

namespace detail {

inline ScanTable spectrum_scan(const std::vector<double>& values, const Parameters& p) {
  const auto& c = p.chain;
  std::vector<obe::SpectrumPoint> points;
  try {
    points = obe::transmission_spectrum(c.scheme, values, p.spectrum_axis, c.geometry, c.cell, c.quad);
  } catch (const SweepPointError& e) {
    std::size_t row = 0;
    while (row + 1 < values.size() && values[row] != e.detuning()) ++row;
    std::throw_with_nested(ScanRowError(row, e.what()));
  }
  ScanTable t(spectrum_columns());
  for (const auto& pt : points) t.add_row({pt.detuning, pt.transmission});
  return t;
}

/// Long format: every f_AM point for N = 1 .. array size.
inline ScanTable fam_scan(const std::vector<double>& values, const Parameters& p) {
  array::ArrayResponse full;
  try {
    full = array::respond(p.array, p.chain);
  } catch (const Error& e) {
    std::throw_with_nested(ScanRowError(0, e.what()));
  }
  ScanTable t(fam_sweep_columns());
  std::size_t row = 0;
  for (std::size_t n = 1; n <= full.parts.size(); ++n) {
    const array::ArrayResponse part{full.array.prefix(n),
                                    {full.parts.begin(), full.parts.begin() + static_cast<long>(n)}};
    for (double f : values) {
      try {
        const double db = array::combined_snr_db(part, p.chain, f);
        const double ratio = array::snr_ratio_from_db(db, p.convention);
        t.add_row({static_cast<double>(n), f, db, ratio, array::capacity(f, ratio)});
      } catch (const Error& e) {
        std::throw_with_nested(ScanRowError(row, e.what()));
      }
      ++row;
    }
  }
  return t;
}

inline ScanTable receiver_scan(const std::vector<double>& values, const Parameters& p) {
  const std::size_t n_max = static_cast<std::size_t>(values.back());
  if (n_max > p.array.receivers.size())
    throw InvalidInput("scan asks for " + std::to_string(n_max) + " receivers, the array has " +
                       std::to_string(p.array.receivers.size()));
  ScanTable all;
  try {
    all = array::snr_vs_receiver_count(p.array.prefix(n_max), p.chain, p.convention);
  } catch (const Error& e) {
    std::throw_with_nested(ScanRowError(0, e.what()));
  }
  ScanTable t(all.columns());
  for (double n : values) t.add_row(all.rows()[static_cast<std::size_t>(n) - 1]);
  return t;
}

}  // namespace detail

/// Runs `spec` against `p`; rows are in sweep order.
inline ScanTable run_scan(const ScanSpec& spec, const Parameters& p) {
  const std::vector<double> values = spec.values();
  switch (spec.variable) {
    case SweptVariable::probe_power: return signal::snr_vs_probe_power(values, p.chain);
    case SweptVariable::f_am: return detail::fam_scan(values, p);
    case SweptVariable::detuning: return detail::spectrum_scan(values, p);
    case SweptVariable::n_receivers: return detail::receiver_scan(values, p);
  }
  throw InvalidInput("unknown swept variable");
}

/// The config's own scan, stamped with metadata.
inline ScanTable run_scan(const Config& config, const RunInfo& info = {}) {
  const Parameters p = config.parameters();
  ScanTable t = run_scan(p.scan, p);
  stamp(t, config, info);
  return t;
}

}  // namespace rydberg::harness
