#pragma once

// AM carrier -> probe transmission -> photocurrent -> spectrum-analyser tone
// and noise floor.

#include <cmath>
#include <exception>
#include <limits>
#include <vector>

#include "rydberg/errors.hpp"
#include "rydberg/obe/doppler.hpp"
#include "rydberg/parallel.hpp"
#include "rydberg/scan_table.hpp"
#include "rydberg/units.hpp"

namespace rydberg::signal {

using obe::BeamGeometry;
using obe::CellSpec;
using obe::LevelScheme;
using obe::QuadratureSpec;

struct ModulationSpec {
  double f_am = 200e3;               // Hz
  double depth = 0.5;                // modulation index
  double omega_rf_carrier = mhz(5);  // rad/s at the atoms
  int samples = 256;                 // per modulation period

  void validate() const {
    if (!(f_am > 0.0) || !std::isfinite(f_am)) throw InvalidInput("f_am must be > 0");
    if (!(depth >= 0.0 && depth <= 1.0)) throw InvalidInput("modulation depth must lie in [0, 1]");
    if (!(omega_rf_carrier >= 0.0) || !std::isfinite(omega_rf_carrier))
      throw InvalidInput("carrier Rabi frequency must be finite and >= 0");
    if (samples < 4) throw InvalidInput("need at least 4 samples per period");
  }
};

/// Probe Rabi frequency as a function of probe power, Omega_p ∝ sqrt(P).
/// Disabled (power_ref = 0) leaves the scheme's omega_p untouched.
struct ProbeCoupling {
  double omega_ref = 0.0;  // rad/s at power_ref
  double power_ref = 0.0;  // W

  bool enabled() const { return power_ref > 0.0; }
  double omega_p(double power) const { return omega_ref * std::sqrt(power / power_ref); }

  void validate() const {
    if (!(power_ref >= 0.0) || !(omega_ref >= 0.0)) throw InvalidInput("probe coupling must be >= 0");
    if (enabled() && !(omega_ref > 0.0)) throw InvalidInput("probe coupling needs omega_ref > 0");
  }
};

struct DetectorModel {
  double responsivity = 1.0;     // V/W
  double rbw = 3e3;              // Hz
  double load_conversion = 1.0;  // W/V^2

  void validate() const {
    if (!(responsivity > 0.0) || !(rbw > 0.0) || !(load_conversion > 0.0))
      throw InvalidInput("detector constants must be > 0");
  }
};

struct NoiseModel {
  double sa_floor = 1.0;    // W/Hz
  double det_floor = 0.0;   // W/Hz
  double shot_coeff = 0.0;  // W/Hz per W
  double aom_coeff = 0.0;   // W/Hz per W^2

  void validate() const {
    for (double c : {sa_floor, det_floor, shot_coeff, aom_coeff})
      if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidInput("noise coefficients must be finite and >= 0");
  }
};

/// Low-pass response of the medium to a change of the RF field.  The corner
/// is the EIT pumping rate; `order` identical poles are cascaded.
struct DynamicResponse {
  double omega_eit = mhz(8.0) * mhz(8.0) / (2.0 * mhz(6.07));  // rad/s
  int order = 1;

  static DynamicResponse from_rates(double omega_c, double gamma, int order = 1) {
    if (!(gamma > 0.0)) throw InvalidInput("EIT pumping rate needs a linewidth > 0");
    return {omega_c * omega_c / (2.0 * gamma), order};
  }

  double corner_hz() const { return omega_eit / two_pi; }

  void validate() const {
    if (!(omega_eit > 0.0) || !std::isfinite(omega_eit)) throw InvalidInput("corner frequency must be > 0");
    if (order < 1) throw InvalidInput("dynamic response order must be >= 1");
  }
};

/// exp(-OD * A) for the Doppler-averaged medium.
inline double transmission(const LevelScheme& scheme, const BeamGeometry& geometry, const CellSpec& cell,
                           const QuadratureSpec& quad) {
  return std::exp(-cell.od_resonant * obe::doppler_averaged_absorption(scheme, geometry, cell, quad));
}

/// Cosine/sine amplitudes of the f_AM component of samples taken uniformly
/// over one period, starting at the modulation maximum.
struct Fundamental {
  double in_phase = 0.0;
  double quadrature = 0.0;
  double magnitude() const { return std::hypot(in_phase, quadrature); }
};

inline Fundamental fundamental(const std::vector<double>& samples) {
  const std::size_t k = samples.size();
  if (k < 2) throw InvalidInput("need at least two samples");
  Fundamental out;
  for (std::size_t i = 0; i < k; ++i) {
    const double phase = two_pi * static_cast<double>(i) / static_cast<double>(k);
    out.in_phase += samples[i] * std::cos(phase);
    out.quadrature += samples[i] * std::sin(phase);
  }
  out.in_phase *= 2.0 / static_cast<double>(k);
  out.quadrature *= 2.0 / static_cast<double>(k);
  return out;
}

struct Transduction {
  double delta_p1 = 0.0;    // W, amplitude of the transmitted-power tone
  double in_phase = 0.0;    // W, signed cosine amplitude
  int response_sign = 1;    // sign of dT/dOmega_RF at the carrier
  double mean_power = 0.0;  // W, average transmitted power
};

/// Sign of dT/dOmega_RF at omega_rf, by central difference.
inline int response_sign(const LevelScheme& scheme, double omega_rf, const BeamGeometry& geometry,
                         const CellSpec& cell, const QuadratureSpec& quad) {
  const double h = omega_rf > 0.0 ? 1e-4 * omega_rf : mhz(1e-3);
  LevelScheme lo = scheme, hi = scheme;
  lo.omega_rf = std::max(0.0, omega_rf - h);
  hi.omega_rf = omega_rf + h;
  const double slope = transmission(hi, geometry, cell, quad) - transmission(lo, geometry, cell, quad);
  return slope < 0.0 ? -1 : 1;
}

/// Quasi-static transmitted power over one modulation period and its
/// f_AM component.  scheme.omega_rf is replaced by the modulated carrier.
inline Transduction transduce_fundamental(const LevelScheme& scheme, const ModulationSpec& mod,
                                          const BeamGeometry& geometry, const CellSpec& cell,
                                          const QuadratureSpec& quad, double probe_power) {
  mod.validate();
  if (!(probe_power > 0.0)) throw InvalidInput("probe power must be > 0");
  const int k = mod.samples;
  // Omega_RF(t) is even in t, so samples k and K-k coincide.
  const int unique = k / 2 + 1;
  const std::vector<double> t_unique = parallel_map<double>(unique, [&](std::size_t i) {
    LevelScheme s = scheme;
    s.omega_rf = mod.omega_rf_carrier * (1.0 + mod.depth * std::cos(two_pi * static_cast<double>(i) / k));
    return transmission(s, geometry, cell, quad);
  });
  std::vector<double> power(k);
  for (int i = 0; i < k; ++i) power[i] = probe_power * t_unique[std::min(i, k - i)];

  Transduction out;
  const Fundamental f = fundamental(power);
  out.delta_p1 = f.magnitude();
  out.in_phase = f.in_phase;
  for (double p : power) out.mean_power += p / k;
  out.response_sign = response_sign(scheme, mod.omega_rf_carrier, geometry, cell, quad);
  return out;
}

/// First-order (per pole) low-pass amplitude factor.
inline double dynamic_attenuation(double f_am, const DynamicResponse& resp) {
  if (!(f_am >= 0.0)) throw InvalidInput("f_am must be >= 0");
  resp.validate();
  const double x = f_am / resp.corner_hz();
  return std::pow(1.0 + x * x, -0.5 * resp.order);
}

/// RMS electrical power of the tone.
inline double electrical_signal_power(double delta_p1, const DetectorModel& det) {
  if (!(delta_p1 >= 0.0)) throw InvalidInput("delta_p1 must be >= 0");
  const double v = det.responsivity * delta_p1;
  return det.load_conversion * v * v / 2.0;
}

inline double noise_floor_power(double total_optical_power, const NoiseModel& noise, const DetectorModel& det) {
  if (!(total_optical_power >= 0.0)) throw InvalidInput("optical power must be >= 0");
  const double p = total_optical_power;
  return (noise.sa_floor + noise.det_floor + noise.shot_coeff * p + noise.aom_coeff * p * p) * det.rbw;
}

inline constexpr double no_signal_db = -std::numeric_limits<double>::infinity();

inline double snr_db(double signal_power, double noise_power) {
  if (!(noise_power > 0.0)) throw NonpositiveNoise("noise power must be > 0");
  if (!(signal_power >= 0.0)) throw InvalidInput("signal power must be >= 0");
  if (signal_power == 0.0) return no_signal_db;
  return 10.0 * std::log10(signal_power / noise_power);
}

/// Everything the single-receiver chain needs.
struct SignalChain {
  LevelScheme scheme;
  BeamGeometry geometry;
  CellSpec cell;
  QuadratureSpec quad;
  ModulationSpec mod;
  ProbeCoupling coupling;
  DynamicResponse dynamic;
  NoiseModel noise;
  DetectorModel det;

  /// Scheme with omega_p set from the probe power when a coupling is given.
  LevelScheme scheme_at(double probe_power, double detuning_offset = 0.0) const {
    LevelScheme s = scheme;
    if (coupling.enabled()) s.omega_p = coupling.omega_p(probe_power);
    s.delta_p += detuning_offset;
    return s;
  }

  void validate() const {
    scheme.validate();
    geometry.validate();
    cell.validate();
    quad.validate();
    mod.validate();
    coupling.validate();
    dynamic.validate();
    noise.validate();
    det.validate();
  }
};

/// Tone amplitude at f_AM after the medium's dynamic response; zero power
/// gives zero.
inline Transduction detected_fundamental(const SignalChain& chain, double probe_power,
                                         double detuning_offset = 0.0) {
  if (probe_power == 0.0) return {};
  return transduce_fundamental(chain.scheme_at(probe_power, detuning_offset), chain.mod, chain.geometry,
                               chain.cell, chain.quad, probe_power);
}

inline const std::vector<std::string>& snr_power_columns() {
  static const std::vector<std::string> c = {"probe_power_w", "omega_p_rad_s", "delta_p1_w",
                                             "signal_w",      "noise_w",       "snr_db"};
  return c;
}

/// SNR_dB at chain.mod.f_am versus probe power.
inline ScanTable snr_vs_probe_power(const std::vector<double>& powers, const SignalChain& chain) {
  if (powers.empty()) throw InvalidInput("probe power sweep is empty");
  chain.validate();
  for (double p : powers)
    if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("probe powers must be finite and >= 0");
  const double gain = dynamic_attenuation(chain.mod.f_am, chain.dynamic);
  ScanTable table(snr_power_columns());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const double p = powers[i];
    double dp1 = 0.0;
    try {
      dp1 = detected_fundamental(chain, p).delta_p1 * gain;
    } catch (const Error& e) {
      std::throw_with_nested(ScanRowError(i, e.what()));
    }
    const double sig = electrical_signal_power(dp1, chain.det);
    const double noise = noise_floor_power(p, chain.noise, chain.det);
    table.add_row({p, chain.scheme_at(p).omega_p, dp1, sig, noise, snr_db(sig, noise)});
  }
  return table;
}

inline const std::vector<std::string>& snr_fam_columns() {
  static const std::vector<std::string> c = {"f_am_hz", "delta_p1_w", "signal_w", "noise_w", "snr_db"};
  return c;
}

/// SNR_dB versus f_AM for one receiver; the quasi-static tone is computed
/// once and shaped by the dynamic response.
inline ScanTable snr_vs_fam(const std::vector<double>& f_am, const SignalChain& chain, double probe_power,
                            double detuning_offset = 0.0) {
  if (f_am.empty()) throw InvalidInput("f_am sweep is empty");
  chain.validate();
  const double dp1 = detected_fundamental(chain, probe_power, detuning_offset).delta_p1;
  const double noise = noise_floor_power(probe_power, chain.noise, chain.det);
  ScanTable table(snr_fam_columns());
  for (double f : f_am) {
    const double a = dp1 * dynamic_attenuation(f, chain.dynamic);
    const double sig = electrical_signal_power(a, chain.det);
    table.add_row({f, a, sig, noise, snr_db(sig, noise)});
  }
  return table;
}

}  // namespace rydberg::signal
