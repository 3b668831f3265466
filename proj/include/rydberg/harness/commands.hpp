#pragma once

// One function per CLI subcommand.  Each returns the table the CLI writes
// and a short human-readable report.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "rydberg/array/array_model.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/harness/calibration.hpp"
#include "rydberg/harness/config.hpp"
#include "rydberg/harness/csv.hpp"
#include "rydberg/harness/run_scan.hpp"
#include "rydberg/scan_table.hpp"

namespace rydberg::harness {

struct CommandOutput {
  ScanTable table;
  std::string report;
};

namespace detail {

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

/// Uses the config's scan when it sweeps `v`, otherwise the given range.
inline Config with_scan(Config c, const char* v, const char* start, const char* stop, const char* steps,
                        const char* log = "false") {
  if (c.text("scan_variable") == v) return c;
  c.set("scan_variable", v);
  c.set("scan_start", start);
  c.set("scan_stop", stop);
  c.set("scan_steps", steps);
  c.set("scan_log", log);
  return c;
}

/// Rows of a long-format f_AM table, grouped by receiver count.
inline std::map<int, std::pair<std::vector<double>, std::vector<double>>> group_by_n(const ScanTable& t,
                                                                                     const char* y) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> out;
  const auto n = t.column("n_receivers");
  const auto f = t.column("f_am_hz");
  const auto v = t.column(y);
  for (std::size_t i = 0; i < n.size(); ++i) {
    auto& g = out[static_cast<int>(n[i])];
    g.first.push_back(f[i]);
    g.second.push_back(v[i]);
  }
  return out;
}

}  // namespace detail

/// Transmission spectrum; default sweep ±20 MHz along spectrum_axis.
inline CommandOutput cmd_spectrum(const Config& config, const RunInfo& info = {"spectrum", ""}) {
  const Config c = detail::with_scan(config, "detuning", "-20", "20", "201");
  return {run_scan(c, info), ""};
}

/// SNR versus probe power (scan_variable = probe_power) or f_AM for N = 1..size.
inline CommandOutput cmd_snr(const Config& config, const RunInfo& info = {"snr", ""}) {
  const std::string v = config.text("scan_variable");
  if (v != "probe_power" && v != "f_am")
    throw ConfigError("scan_variable", "snr sweeps probe_power or f_am");
  return {run_scan(config, info), ""};
}

inline const std::vector<std::string>& bandwidth_columns() {
  static const std::vector<std::string> c = {"n_receivers", "bandwidth_hz", "law_bandwidth_hz",
                                             "slope_db_per_hz", "snr_db_at_f_am"};
  return c;
}

/// Bandwidth of the combined array for N = 1..size, with the single-beam
/// slope fit and the scaling law built on it.
inline CommandOutput cmd_bandwidth(const Config& config, const RunInfo& info = {"bandwidth", ""}) {
  const Config c = detail::with_scan(config, "f_am", "10", "1500", "150");
  const Parameters p = c.parameters();
  const ScanTable sweep = run_scan(p.scan, p);
  const auto groups = detail::group_by_n(sweep, "snr_db");

  const auto& [f1, s1] = groups.at(1);
  array::ScalingFit fit = array::fit_slope(f1, s1, std::nullopt, p.chain.mod.f_am);
  fit.bw1 = array::find_bandwidth(f1, s1, p.bandwidth_threshold_db);

  ScanTable t(bandwidth_columns());
  for (const auto& [n, g] : groups) {
    const auto& [f, s] = g;
    const double bw = array::find_bandwidth(f, s, p.bandwidth_threshold_db);
    const auto fit_n = array::fit_slope(f, s, std::nullopt, p.chain.mod.f_am);
    t.add_row({static_cast<double>(n), bw, array::bw_scaling_law(n, fit), fit_n.m, fit_n.snr_db_1});
  }
  stamp(t, c, info);
  std::string report = "BW(1) = " + detail::fmt("%.1f", fit.bw1 / 1e3) + " kHz, slope " +
                       detail::fmt("%.4f", fit.m * 1e3) + " dB/kHz";
  for (std::size_t i = 1; i < t.size(); ++i)
    report += "; BW(" + detail::fmt("%.0f", t.rows()[i][0]) + ") = " + detail::fmt("%.1f", t.rows()[i][1] / 1e3) +
              " kHz (law " + detail::fmt("%.1f", t.rows()[i][2] / 1e3) + ")";
  return {t, report};
}

/// Capacity versus f_AM for N = 1..size, or versus N at fixed f_AM when the
/// config sweeps n_receivers.
inline CommandOutput cmd_capacity(const Config& config, const RunInfo& info = {"capacity", ""}) {
  if (config.text("scan_variable") == "n_receivers") return {run_scan(config, info), ""};
  const Config c = detail::with_scan(config, "f_am", "10", "1500", "150");
  ScanTable t = run_scan(c, info);
  std::string report;
  for (const auto& [n, g] : detail::group_by_n(t, "capacity_bps")) {
    const auto& [f, cap] = g;
    const std::size_t i = static_cast<std::size_t>(std::max_element(cap.begin(), cap.end()) - cap.begin());
    report += (report.empty() ? "" : "; ") + std::string("N=") + std::to_string(n) + ": max " +
              detail::fmt("%.3f", cap[i] / 1e6) + " Mbit/s at " + detail::fmt("%.0f", f[i] / 1e3) + " kHz";
  }
  return {t, report};
}

inline const std::vector<std::string>& noise_columns() {
  static const std::vector<std::string> c = {"probe_power_w", "noise_w",  "noise_no_aom_w",
                                             "signal_w",      "snr_db",   "snr_no_aom_db"};
  return c;
}

/// Noise floor and SNR versus probe power with and without the AOM term.
/// Uses the config's probe-power scan, else the calibration sweep.
inline ScanTable noise_table(const Config& config) {
  const Parameters p = config.parameters();
  const std::vector<double> powers =
      p.scan.variable == SweptVariable::probe_power ? p.scan.values() : p.calibration_powers;
  const ScanTable snr = signal::snr_vs_probe_power(powers, p.chain);
  signal::NoiseModel no_aom = p.chain.noise;
  no_aom.aom_coeff = 0.0;
  ScanTable t(noise_columns());
  for (std::size_t i = 0; i < snr.size(); ++i) {
    const double pw = snr.at(i, "probe_power_w");
    const double sig = snr.at(i, "signal_w");
    const double n0 = signal::noise_floor_power(pw, no_aom, p.chain.det);
    t.add_row({pw, snr.at(i, "noise_w"), n0, sig, snr.at(i, "snr_db"), signal::snr_db(sig, n0)});
  }
  return t;
}

inline const std::vector<std::string>& noise_keys() {
  static const std::vector<std::string> k = {"sa_floor", "det_floor", "shot_coeff", "aom_coeff"};
  return k;
}

inline Config apply_calibration(Config c, const CalibrationResult& r) {
  c.set("sa_floor", format_double(r.noise.sa_floor));
  c.set("det_floor", format_double(r.noise.det_floor));
  c.set("shot_coeff", format_double(r.noise.shot_coeff));
  c.set("aom_coeff", format_double(r.noise.aom_coeff));
  return c;
}

struct CalibrationMode {
  bool coupling = false;  // also fit probe_omega_ref_mhz
  bool corner = false;    // also fit dynamic_corner_khz
};

struct ConfigCalibration {
  Config config;                       // input with the fitted keys replaced
  CalibrationResult noise;             // residuals of the final config
  std::vector<std::string> keys;       // fitted keys, in fragment order
  std::vector<AnchorResidual> extra;   // coupling and bandwidth anchors
};

/// Fits the noise coefficients (and optionally the probe coupling and the
/// dynamic corner) to the config's anchors.  Every fitted value goes
/// through its config text, so the fragment reloads to the same run.
inline ConfigCalibration calibrate(const Config& config, CalibrationMode mode = {}) {
  ConfigCalibration out{config, {}, {}, {}};
  Config& c = out.config;
  if (mode.coupling) {
    const Parameters p = c.parameters();
    const CouplingCalibration cc = calibrate_probe_coupling(p.chain, p.anchors, p.calibration_powers);
    c.set("probe_omega_ref_mhz", format_double(cc.omega_ref / mhz(1.0)));
    out.keys.push_back("probe_omega_ref_mhz");
  }
  c = apply_calibration(c, calibrate_noise(c.parameters().chain, c.parameters().anchors,
                                           c.parameters().calibration_powers));
  if (mode.corner) {
    const Parameters p = c.parameters();
    const double corner = calibrate_dynamic_corner(p.chain, p.anchors.bandwidth_power, p.anchors.bandwidth,
                                                   p.bandwidth_threshold_db);
    c.set("dynamic_corner_khz", format_double(corner / two_pi / 1e3));
    out.keys.push_back("dynamic_corner_khz");
    // The SNR anchors sit at f_am; rescale the noise by the change of gain there.
    const double g_old = signal::dynamic_attenuation(p.chain.mod.f_am, p.chain.dynamic);
    const double g_new = signal::dynamic_attenuation(p.chain.mod.f_am, c.parameters().chain.dynamic);
    c = apply_calibration(c, {scaled(p.chain.noise, (g_new * g_new) / (g_old * g_old)), {}});
  }
  for (const auto& k : noise_keys()) out.keys.push_back(k);

  const Parameters p = c.parameters();
  const SignalCurve curve = SignalCurve::from_table(signal::snr_vs_probe_power(p.calibration_powers, p.chain));
  out.noise.noise = p.chain.noise;
  out.noise.residuals = detail::residuals(SnrModel(curve, p.chain.det), p.chain.noise, p.anchors);
  if (mode.coupling) {
    const double r = onset_floor_ratio(p.chain.noise, p.anchors.onset_power);
    out.extra.push_back({"onset_floor_ratio", p.anchors.onset_floor_ratio, r,
                         (r - p.anchors.onset_floor_ratio) / p.anchors.onset_floor_ratio});
  }
  if (mode.corner) {
    std::vector<double> f;
    for (double x = 1e3; x <= 3.0 * p.anchors.bandwidth; x += 1e3) f.push_back(x);
    const double bw = array::find_bandwidth(signal::snr_vs_fam(f, p.chain, p.anchors.bandwidth_power),
                                            p.bandwidth_threshold_db);
    out.extra.push_back({"bandwidth", p.anchors.bandwidth, bw, (bw - p.anchors.bandwidth) / p.anchors.bandwidth});
  }
  return out;
}

/// Config fragment holding a calibration, with residuals as comments.
inline std::string calibration_fragment(const ConfigCalibration& r) {
  std::string out;
  auto note = [&](const AnchorResidual& a) {
    out += "# anchor " + a.name + ": target " + format_double(a.target) + ", achieved " +
           format_double(a.achieved) + ", relative error " + format_double(a.relative_error) + "\n";
  };
  for (const auto& a : r.noise.residuals) note(a);
  for (const auto& a : r.extra) note(a);
  out += r.config.fragment(r.keys);
  return out;
}

struct NoiseOutput {
  CommandOutput output;
  std::string fragment;  // empty unless calibrated
};

inline NoiseOutput cmd_noise(const Config& config, bool run_calibration, CalibrationMode mode = {},
                             const RunInfo& info = {"noise", ""}) {
  NoiseOutput out;
  Config c = config;
  if (run_calibration) {
    const ConfigCalibration r = calibrate(config, mode);
    out.fragment = calibration_fragment(r);
    c = r.config;
    double worst = r.noise.worst_residual();
    for (const auto& e : r.extra) worst = std::max(worst, std::abs(e.relative_error));
    out.output.report = "calibrated, worst anchor error " + detail::fmt("%.2e", worst);
  }
  out.output.table = noise_table(c);
  stamp(out.output.table, c, info);
  return out;
}

inline const std::vector<std::string>& scaling_columns() {
  static const std::vector<std::string> c = {"n_receivers", "snr_db", "normalized_db", "optical_ratio",
                                             "law_ratio"};
  return c;
}

/// SNR relative to the single beam versus N, next to the factor-N line.
/// Input needs n_receivers and snr_db columns and an N = 1 row.
inline CommandOutput scaling_report(const ScanTable& input) {
  const auto n = input.column("n_receivers");
  const auto s = input.column("snr_db");
  const auto one = std::find(n.begin(), n.end(), 1.0);
  if (one == n.end()) throw InvalidInput("scaling input needs an n_receivers = 1 row");
  const double s1 = s[static_cast<std::size_t>(one - n.begin())];
  ScanTable t(scaling_columns());
  double worst = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double norm = s[i] - s1;
    const double ratio = std::pow(10.0, norm / 20.0);
    t.add_row({n[i], s[i], norm, ratio, n[i]});
    worst = std::max(worst, std::abs(ratio / n[i] - 1.0));
  }
  return {t, "largest relative departure from the factor-N line: " + detail::fmt("%.3f", worst)};
}

inline CommandOutput cmd_scaling(const Config& config, const RunInfo& info = {"scaling", ""}) {
  const Parameters p = config.parameters();
  CommandOutput out = scaling_report(array::snr_vs_receiver_count(p.array, p.chain, p.convention));
  stamp(out.table, config, info);
  return out;
}

inline CommandOutput cmd_scaling(const ScanTable& measured) {
  CommandOutput out = scaling_report(measured);
  for (const auto& [k, v] : measured.metadata()) out.table.set_meta(k, v);
  return out;
}

}  // namespace rydberg::harness
