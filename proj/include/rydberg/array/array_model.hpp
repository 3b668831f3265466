#pragma once

// Several probe beams (receiver volumes) read out on one photodetector, and
// the closed-form SIMO scaling laws they are compared against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rydberg/errors.hpp"
#include "rydberg/scan_table.hpp"
#include "rydberg/signal/signal_chain.hpp"
#include "rydberg/units.hpp"

namespace rydberg::array {

using signal::SignalChain;

struct ReceiverVolume {
  double probe_power = 25e-6;   // W
  double detuning_offset = 0.0; // rad/s, added to the probe detuning
  double efficiency = 1.0;      // EIT-contrast factor in (0, 1]
  int response_sign = 1;        // filled in from the transduction

  void validate() const {
    if (!(probe_power > 0.0) || !std::isfinite(probe_power)) throw InvalidInput("receiver probe power must be > 0");
    if (!std::isfinite(detuning_offset)) throw InvalidInput("receiver detuning offset must be finite");
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw InvalidInput("receiver efficiency must lie in (0, 1]");
    if (response_sign != 1 && response_sign != -1) throw InvalidInput("response sign must be +1 or -1");
  }
};

struct ArraySnapshot {
  std::vector<ReceiverVolume> receivers;
  double min_separation = mhz(3.0);   // rad/s between detuning offsets
  bool independent_detectors = false; // one detector per beam: no signed sum

  void validate() const {
    if (receivers.empty()) throw InvalidInput("array has no receivers");
    for (const auto& r : receivers) r.validate();
    if (!(min_separation >= 0.0)) throw InvalidInput("minimum separation must be >= 0");
    for (std::size_t i = 0; i < receivers.size(); ++i)
      for (std::size_t j = i + 1; j < receivers.size(); ++j)
        if (std::abs(receivers[i].detuning_offset - receivers[j].detuning_offset) < min_separation * (1.0 - 1e-12))
          throw InvalidInput("receivers " + std::to_string(i) + " and " + std::to_string(j) +
                             " are closer than the minimum detuning separation");
  }

  double total_power() const {
    double p = 0.0;
    for (const auto& r : receivers) p += r.probe_power;
    return p;
  }

  /// First n receivers.
  ArraySnapshot prefix(std::size_t n) const {
    if (n < 1 || n > receivers.size()) throw InvalidInput("prefix size out of range");
    ArraySnapshot out = *this;
    out.receivers.resize(n);
    return out;
  }
};

/// Quasi-static tone of one receiver.
struct ReceiverSignal {
  double delta_p1 = 0.0;  // W
  int sign = 1;
  double efficiency = 1.0;
};

/// Signed sum over receivers on a shared detector, or the plain sum of
/// magnitudes with independent detectors.
inline double combine(const std::vector<ReceiverSignal>& parts, bool independent_detectors = false) {
  if (parts.empty()) throw InvalidInput("nothing to combine");
  double total = 0.0;
  for (const auto& p : parts) {
    if (!(p.delta_p1 >= 0.0)) throw InvalidInput("tone amplitudes must be >= 0");
    total += (independent_detectors ? 1 : p.sign) * p.efficiency * p.delta_p1;
  }
  return total;
}

/// Transduces every receiver; the returned snapshot carries the derived
/// response signs.
struct ArrayResponse {
  ArraySnapshot array;
  std::vector<ReceiverSignal> parts;

  double amplitude() const { return combine(parts, array.independent_detectors); }
};

inline ArrayResponse respond(const ArraySnapshot& array, const SignalChain& chain) {
  array.validate();
  chain.validate();
  ArrayResponse out{array, {}};
  for (std::size_t i = 0; i < array.receivers.size(); ++i) {
    auto& r = out.array.receivers[i];
    const signal::Transduction t = signal::detected_fundamental(chain, r.probe_power, r.detuning_offset);
    r.response_sign = t.response_sign;
    out.parts.push_back({t.delta_p1, t.response_sign, r.efficiency});
  }
  return out;
}

/// Signed combined tone amplitude (W) at the photodetector.
inline double combined_signal_amplitude(const ArraySnapshot& array, const SignalChain& chain) {
  return respond(array, chain).amplitude();
}

/// SNR_dB of the combined tone at f_am, noise taken at the total optical power.
inline double combined_snr_db(const ArrayResponse& response, const SignalChain& chain, double f_am) {
  const double a = std::abs(response.amplitude()) * signal::dynamic_attenuation(f_am, chain.dynamic);
  const double sig = signal::electrical_signal_power(a, chain.det);
  const double noise = signal::noise_floor_power(response.array.total_power(), chain.noise, chain.det);
  return signal::snr_db(sig, noise);
}

inline double combined_snr_db(const ArraySnapshot& array, const SignalChain& chain) {
  return combined_snr_db(respond(array, chain), chain, chain.mod.f_am);
}

// ---- closed-form scaling laws ------------------------------------------

/// SNR_dB(N) = SNR_dB(1) + 20 log10 N.
inline double snr_scaling_law(double n, double snr_db_1) {
  if (!(n >= 1.0)) throw InvalidInput("receiver count must be >= 1");
  return snr_db_1 + 20.0 * std::log10(n);
}

struct ScalingFit {
  double m = 0.0;         // dB/Hz, negative for a falloff
  double bw1 = 0.0;       // Hz
  double snr_db_1 = 0.0;  // dB at the reference f_AM
  double intercept = 0.0; // dB, fitted line at f = 0
};

/// BW(N) = BW(1) + (20/|m|) log10 N.  m is stored with its sign (dB/Hz,
/// negative); only its magnitude enters.
inline double bw_scaling_law(double n, const ScalingFit& fit) {
  if (!(n >= 1.0)) throw InvalidInput("receiver count must be >= 1");
  if (!(fit.m < 0.0)) throw BadSlope("SNR slope must be negative for a bandwidth law");
  return fit.bw1 + 20.0 / std::abs(fit.m) * std::log10(n);
}

/// Shannon-Hartley, bits/s.
inline double capacity(double f_am, double snr_power_ratio) {
  if (!(snr_power_ratio >= 0.0)) throw InvalidInput("SNR ratio must be >= 0");
  if (!(f_am >= 0.0)) throw InvalidInput("f_am must be >= 0");
  return f_am * std::log2(1.0 + snr_power_ratio);
}

inline double capacity_of_n(double n, double snr_opt_1, double f_am) {
  if (!(n >= 1.0)) throw InvalidInput("receiver count must be >= 1");
  return capacity(f_am, n * snr_opt_1);
}

/// Ratio fed to the capacity formula.  `optical` reads SNR_dB as an optical
/// power ratio, 10^(dB/20); `electrical` uses 10^(dB/10).
enum class SnrConvention { optical, electrical };

inline double snr_ratio_from_db(double snr_db, SnrConvention c = SnrConvention::optical) {
  if (std::isinf(snr_db) && snr_db < 0.0) return 0.0;
  return std::pow(10.0, snr_db / (c == SnrConvention::optical ? 20.0 : 10.0));
}

// ---- curve analysis ------------------------------------------------------

namespace detail {
inline void check_curve(const std::vector<double>& f, const std::vector<double>& s) {
  if (f.empty() || f.size() != s.size()) throw InvalidInput("curve must be nonempty with matching columns");
  for (std::size_t i = 1; i < f.size(); ++i)
    if (!(f[i] > f[i - 1])) throw InvalidInput("curve must be sorted by strictly increasing f_am");
}
}  // namespace detail

/// First downward crossing of threshold_db, linearly interpolated.
inline double find_bandwidth(const std::vector<double>& f, const std::vector<double>& snr,
                             double threshold_db = 10.0) {
  detail::check_curve(f, snr);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    if (snr[i] >= threshold_db && snr[i + 1] < threshold_db) {
      if (std::isinf(snr[i + 1])) return f[i + 1];
      const double t = (snr[i] - threshold_db) / (snr[i] - snr[i + 1]);
      return f[i] + t * (f[i + 1] - f[i]);
    }
  }
  throw NoCrossing("SNR curve never falls through " + std::to_string(threshold_db) + " dB");
}

inline double find_bandwidth(const ScanTable& curve, double threshold_db = 10.0) {
  return find_bandwidth(curve.column("f_am_hz"), curve.column("snr_db"), threshold_db);
}

struct FitWindow {
  double lo;  // Hz
  double hi;  // Hz
};

/// Window from the point 3 dB below the curve maximum (first crossing after
/// it) to the 10 dB cutoff.
inline FitWindow default_fit_window(const std::vector<double>& f, const std::vector<double>& snr) {
  detail::check_curve(f, snr);
  const std::size_t peak = static_cast<std::size_t>(std::max_element(snr.begin(), snr.end()) - snr.begin());
  const double level = snr[peak] - 3.0;
  double lo = f[peak];
  for (std::size_t i = peak; i + 1 < f.size(); ++i)
    if (snr[i] >= level && snr[i + 1] < level) {
      lo = f[i] + (snr[i] - level) / (snr[i] - snr[i + 1]) * (f[i + 1] - f[i]);
      break;
    }
  return {lo, find_bandwidth(f, snr)};
}

/// Least-squares line SNR_dB = intercept + m f over the window.  bw1 is the
/// 10 dB cutoff (NaN if the curve has none) and snr_db_1 the curve value at
/// `reference_f` (default: lowest f in the curve).
inline ScalingFit fit_slope(const std::vector<double>& f, const std::vector<double>& snr,
                            std::optional<FitWindow> window = std::nullopt,
                            std::optional<double> reference_f = std::nullopt) {
  detail::check_curve(f, snr);
  const FitWindow w = window ? *window : default_fit_window(f, snr);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] >= w.lo && f[i] <= w.hi && std::isfinite(snr[i])) {
      xs.push_back(f[i]);
      ys.push_back(snr[i]);
    }
  if (xs.size() < 3)
    throw InsufficientPoints("slope fit needs >= 3 points in the window, found " + std::to_string(xs.size()));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ScalingFit fit;
  fit.m = sxy / sxx;
  fit.intercept = my - fit.m * mx;
  try {
    fit.bw1 = find_bandwidth(f, snr);
  } catch (const NoCrossing&) {
    fit.bw1 = std::numeric_limits<double>::quiet_NaN();
  }
  const double ref = reference_f ? *reference_f : f.front();
  fit.snr_db_1 = snr.front();
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (ref >= f[i] && ref <= f[i + 1]) {
      fit.snr_db_1 = snr[i] + (ref - f[i]) / (f[i + 1] - f[i]) * (snr[i + 1] - snr[i]);
      break;
    }
  return fit;
}

inline ScalingFit fit_slope(const ScanTable& curve, std::optional<FitWindow> window = std::nullopt,
                            std::optional<double> reference_f = std::nullopt) {
  return fit_slope(curve.column("f_am_hz"), curve.column("snr_db"), window, reference_f);
}

// ---- sweeps --------------------------------------------------------------

inline const std::vector<std::string>& capacity_columns() {
  static const std::vector<std::string> c = {"f_am_hz", "snr_db", "snr_ratio", "capacity_bps"};
  return c;
}

/// SNR and Shannon capacity of the combined array versus f_AM.
inline ScanTable capacity_curve(const ArrayResponse& response, const SignalChain& chain,
                                const std::vector<double>& f_am,
                                SnrConvention convention = SnrConvention::optical) {
  if (f_am.empty()) throw InvalidInput("f_am sweep is empty");
  ScanTable table(capacity_columns());
  for (double f : f_am) {
    const double db = combined_snr_db(response, chain, f);
    const double ratio = snr_ratio_from_db(db, convention);
    table.add_row({f, db, ratio, capacity(f, ratio)});
  }
  return table;
}

inline ScanTable capacity_curve(const ArraySnapshot& array, const SignalChain& chain,
                                const std::vector<double>& f_am,
                                SnrConvention convention = SnrConvention::optical) {
  return capacity_curve(respond(array, chain), chain, f_am, convention);
}

inline const std::vector<std::string>& receiver_count_columns() {
  static const std::vector<std::string> c = {"n_receivers", "total_power_w", "amplitude_w",
                                             "snr_db",      "snr_ratio",     "capacity_bps"};
  return c;
}

/// Combined SNR and capacity at chain.mod.f_am for the first n receivers,
/// n = 1 .. size.  Receivers are transduced once.
inline ScanTable snr_vs_receiver_count(const ArraySnapshot& array, const SignalChain& chain,
                                       SnrConvention convention = SnrConvention::optical) {
  const ArrayResponse full = respond(array, chain);
  ScanTable table(receiver_count_columns());
  for (std::size_t n = 1; n <= array.receivers.size(); ++n) {
    ArrayResponse part{full.array.prefix(n),
                       std::vector<ReceiverSignal>(full.parts.begin(), full.parts.begin() + n)};
    const double db = combined_snr_db(part, chain, chain.mod.f_am);
    const double ratio = snr_ratio_from_db(db, convention);
    table.add_row({static_cast<double>(n), part.array.total_power(), part.amplitude(), db, ratio,
                   capacity(chain.mod.f_am, ratio)});
  }
  return table;
}

}  // namespace rydberg::array
