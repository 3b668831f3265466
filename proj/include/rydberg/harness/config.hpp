#pragma once

// Flat `key = value` configuration.  Each key carries its unit in its name,
// values are stored as parsed from user units and written back in shortest
// round-trip form, so a config echoed into CSV metadata reloads bit-exactly.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rydberg/array/array_model.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/harness/calibration.hpp"
#include "rydberg/harness/csv.hpp"
#include "rydberg/obe/doppler.hpp"
#include "rydberg/signal/signal_chain.hpp"
#include "rydberg/units.hpp"

namespace rydberg::harness {

enum class SweptVariable { probe_power, f_am, detuning, n_receivers };

inline SweptVariable parse_swept_variable(std::string_view s) {
  if (s == "probe_power") return SweptVariable::probe_power;
  if (s == "f_am") return SweptVariable::f_am;
  if (s == "detuning") return SweptVariable::detuning;
  if (s == "n_receivers") return SweptVariable::n_receivers;
  throw InvalidInput("swept variable must be probe_power, f_am, detuning or n_receivers");
}

inline const char* to_string(SweptVariable v) {
  switch (v) {
    case SweptVariable::probe_power: return "probe_power";
    case SweptVariable::f_am: return "f_am";
    case SweptVariable::detuning: return "detuning";
    case SweptVariable::n_receivers: return "n_receivers";
  }
  return "?";
}

/// One swept variable over [start, stop] in SI units (W, Hz, rad/s, count).
struct ScanSpec {
  SweptVariable variable = SweptVariable::f_am;
  double start = 10e3;
  double stop = 1e6;
  int steps = 100;
  bool log_spacing = false;

  void validate() const {
    if (steps < 2) throw InvalidInput("a scan needs at least 2 steps");
    if (!(start < stop) || !std::isfinite(start) || !std::isfinite(stop))
      throw InvalidInput("scan start must be below scan stop");
    if (log_spacing && !(start > 0.0)) throw InvalidInput("log-spaced scans need start > 0");
    if (variable == SweptVariable::n_receivers && (start < 1.0 || start != std::floor(start) ||
                                                   stop != std::floor(stop)))
      throw InvalidInput("receiver-count scans need integer bounds >= 1");
  }

  std::vector<double> values() const {
    validate();
    if (variable == SweptVariable::n_receivers) {
      std::vector<double> v;
      for (double n = start; n <= stop; n += 1.0) v.push_back(n);
      return v;
    }
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / (steps - 1);
      v[i] = log_spacing ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                         : start + t * (stop - start);
    }
    v.front() = start;
    v.back() = stop;
    return v;
  }
};

/// Everything a run needs, in SI units.
struct Parameters {
  signal::SignalChain chain;
  array::ArraySnapshot array;
  array::SnrConvention convention = array::SnrConvention::optical;
  double bandwidth_threshold_db = 10.0;
  obe::SweepAxis spectrum_axis = obe::SweepAxis::probe;
  ScanSpec scan;
  CalibrationAnchors anchors;
  std::vector<double> calibration_powers;  // W
};

using ConfigValue = std::variant<double, long long, bool, std::string, std::vector<double>>;

struct KeySpec {
  std::string name;
  ConfigValue fallback;  // also fixes the type
  std::string doc;
  std::function<void(const ConfigValue&)> check;  // throws InvalidInput
  std::function<void(Parameters&, const ConfigValue&)> apply;
};

namespace detail {

inline double real(const ConfigValue& v) { return std::get<double>(v); }
inline long long integer(const ConfigValue& v) { return std::get<long long>(v); }

inline std::function<void(const ConfigValue&)> any_real() {
  return [](const ConfigValue& v) {
    if (!std::isfinite(real(v))) throw InvalidInput("must be finite");
  };
}
inline std::function<void(const ConfigValue&)> nonnegative() {
  return [](const ConfigValue& v) {
    if (!(real(v) >= 0.0) || !std::isfinite(real(v))) throw InvalidInput("must be finite and >= 0");
  };
}
inline std::function<void(const ConfigValue&)> positive() {
  return [](const ConfigValue& v) {
    if (!(real(v) > 0.0) || !std::isfinite(real(v))) throw InvalidInput("must be finite and > 0");
  };
}
inline std::function<void(const ConfigValue&)> at_least(long long lo) {
  return [lo](const ConfigValue& v) {
    if (integer(v) < lo) throw InvalidInput("must be >= " + std::to_string(lo));
  };
}
inline std::function<void(const ConfigValue&)> within(double lo, double hi, bool hi_open = false) {
  return [=](const ConfigValue& v) {
    const double x = real(v);
    if (!(x >= lo) || (hi_open ? !(x < hi) : !(x <= hi)))
      throw InvalidInput("must lie in [" + format_double(lo) + ", " + format_double(hi) + (hi_open ? ")" : "]"));
  };
}
inline std::function<void(const ConfigValue&)> one_of(std::vector<std::string> choices) {
  return [choices](const ConfigValue& v) {
    const auto& s = std::get<std::string>(v);
    if (std::find(choices.begin(), choices.end(), s) == choices.end()) {
      std::string all;
      for (const auto& c : choices) all += (all.empty() ? "" : ", ") + c;
      throw InvalidInput("must be one of: " + all);
    }
  };
}
inline std::function<void(const ConfigValue&)> list_of(std::function<bool(double)> ok, std::string what) {
  return [ok, what](const ConfigValue& v) {
    for (double x : std::get<std::vector<double>>(v))
      if (!ok(x)) throw InvalidInput("every entry must be " + what);
  };
}
inline std::function<void(const ConfigValue&)> none() {
  return [](const ConfigValue&) {};
}

inline std::string trim_copy(std::string_view s) { return std::string(trim(s)); }

inline ConfigValue parse_value(const ConfigValue& like, const std::string& raw) {
  const std::string text = trim_copy(raw);
  if (std::holds_alternative<double>(like)) {
    double x = 0.0;
    if (!parse_double(text, x)) throw InvalidInput("'" + text + "' is not a number");
    return x;
  }
  if (std::holds_alternative<long long>(like)) {
    long long x = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), x);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size())
      throw InvalidInput("'" + text + "' is not an integer");
    return x;
  }
  if (std::holds_alternative<bool>(like)) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw InvalidInput("'" + text + "' is not a boolean");
  }
  if (std::holds_alternative<std::string>(like)) return text;
  std::vector<double> out;
  if (text.empty()) return out;
  std::string_view rest = text;
  for (;;) {
    const std::size_t comma = rest.find(',');
    double x = 0.0;
    if (!parse_double(rest.substr(0, comma), x))
      throw InvalidInput("'" + std::string(rest.substr(0, comma)) + "' is not a number");
    out.push_back(x);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

inline std::string format_value(const ConfigValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::string out;
  for (double x : std::get<std::vector<double>>(v)) out += (out.empty() ? "" : ", ") + format_double(x);
  return out;
}

using List = std::vector<double>;

// Keys whose meaning depends on other keys are applied in Config::parameters.
inline void deferred(Parameters&, const ConfigValue&) {}

inline std::vector<KeySpec> build_schema() {
  using P = Parameters;
  using V = ConfigValue;
  std::vector<KeySpec> s;
  auto add = [&](std::string name, V fallback, std::string doc, std::function<void(const V&)> check,
                 std::function<void(P&, const V&)> apply) {
    s.push_back({std::move(name), std::move(fallback), std::move(doc), std::move(check), std::move(apply)});
  };

  // Level scheme (Rabi frequencies and rates as 2π × value).
  add("omega_p_mhz", 0.1, "probe Rabi frequency / 2π when no probe coupling is set", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.omega_p = mhz(real(v)); });
  add("omega_c_mhz", 8.0, "coupling Rabi frequency / 2π", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.omega_c = mhz(real(v)); });
  add("omega_rf_mhz", 0.0, "RF Rabi frequency / 2π for static spectra", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.omega_rf = mhz(real(v)); });
  add("delta_p_mhz", 0.0, "probe detuning / 2π", any_real(),
      [](P& p, const V& v) { p.chain.scheme.delta_p = mhz(real(v)); });
  add("delta_c_mhz", 0.0, "coupling detuning / 2π", any_real(),
      [](P& p, const V& v) { p.chain.scheme.delta_c = mhz(real(v)); });
  add("delta_rf_mhz", 0.0, "RF detuning / 2π", any_real(),
      [](P& p, const V& v) { p.chain.scheme.delta_rf = mhz(real(v)); });
  add("gamma2_mhz", 6.07, "5P3/2 decay rate / 2π", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.gamma2 = mhz(real(v)); });
  add("gamma3_khz", 10.0, "nD5/2 decay rate / 2π", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.gamma3 = khz(real(v)); });
  add("gamma4_khz", 10.0, "n'F decay rate / 2π", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.gamma4 = khz(real(v)); });
  add("gamma_transit_khz", 100.0, "transit dephasing rate / 2π", nonnegative(),
      [](P& p, const V& v) { p.chain.scheme.gamma_transit = khz(real(v)); });

  // Beams and cell.
  add("lambda_p_nm", 780.241, "probe wavelength", positive(),
      [](P& p, const V& v) { p.chain.geometry.lambda_p = real(v) * 1e-9; });
  add("lambda_c_nm", 480.0, "coupling wavelength", positive(),
      [](P& p, const V& v) { p.chain.geometry.lambda_c = real(v) * 1e-9; });
  add("theta_deg", 2.0, "angle between probe and coupling beams", within(0.0, 90.0, true),
      [](P& p, const V& v) { p.chain.geometry.theta_deg = real(v); });
  add("waist_p_um", 70.0, "probe waist", positive(),
      [](P& p, const V& v) { p.chain.geometry.waist_p = real(v) * 1e-6; });
  add("waist_c_um", 60.0, "coupling waist", positive(),
      [](P& p, const V& v) { p.chain.geometry.waist_c = real(v) * 1e-6; });
  add("cell_length_mm", 75.0, "vapour cell length", positive(),
      [](P& p, const V& v) { p.chain.cell.length = real(v) * 1e-3; });
  add("temperature_k", 358.15, "vapour temperature", positive(),
      [](P& p, const V& v) { p.chain.cell.temperature = real(v); });
  add("density_m3", 1e18, "atomic density", positive(),
      [](P& p, const V& v) { p.chain.cell.density = real(v); });
  add("od_resonant", 5.0, "Doppler-broadened weak-probe optical depth on resonance", positive(),
      [](P& p, const V& v) { p.chain.cell.od_resonant = real(v); });

  // Velocity quadrature.
  add("n_longitudinal", 64LL, "longitudinal velocity nodes", at_least(1),
      [](P& p, const V& v) { p.chain.quad.n_longitudinal = static_cast<int>(integer(v)); });
  add("n_transverse", 32LL, "transverse velocity nodes (theta > 0)", at_least(1),
      [](P& p, const V& v) { p.chain.quad.n_transverse = static_cast<int>(integer(v)); });
  add("sigma_cut", 4.0, "velocity cut-off in thermal speeds", positive(),
      [](P& p, const V& v) { p.chain.quad.sigma_cut = real(v); });

  // Modulation and the probe-power mapping.
  add("f_am_khz", 200.0, "AM frequency for fixed-frequency runs", positive(),
      [](P& p, const V& v) { p.chain.mod.f_am = real(v) * 1e3; });
  add("mod_depth", 0.5, "AM modulation index", within(0.0, 1.0),
      [](P& p, const V& v) { p.chain.mod.depth = real(v); });
  add("carrier_rabi_mhz", 5.0, "RF carrier Rabi frequency / 2π at the atoms", nonnegative(),
      [](P& p, const V& v) { p.chain.mod.omega_rf_carrier = mhz(real(v)); });
  add("mod_samples", 256LL, "samples per modulation period", at_least(4),
      [](P& p, const V& v) { p.chain.mod.samples = static_cast<int>(integer(v)); });
  add("probe_omega_ref_mhz", 0.0, "probe Rabi frequency / 2π at probe_power_ref_uw", nonnegative(),
      [](P& p, const V& v) { p.chain.coupling.omega_ref = mhz(real(v)); });
  add("probe_power_ref_uw", 0.0, "reference probe power; 0 keeps omega_p_mhz fixed", nonnegative(),
      [](P& p, const V& v) { p.chain.coupling.power_ref = real(v) * 1e-6; });

  // Medium response.
  add("dynamic_corner_khz", 0.0, "low-pass corner; 0 uses Ωc²/(2Γ2)", nonnegative(), deferred);
  add("dynamic_order", 1LL, "number of cascaded poles", at_least(1),
      [](P& p, const V& v) { p.chain.dynamic.order = static_cast<int>(integer(v)); });

  // Noise and detector.
  add("sa_floor", 1.0, "analyser floor PSD", nonnegative(),
      [](P& p, const V& v) { p.chain.noise.sa_floor = real(v); });
  add("det_floor", 0.0, "detector floor PSD", nonnegative(),
      [](P& p, const V& v) { p.chain.noise.det_floor = real(v); });
  add("shot_coeff", 0.0, "PSD per W of optical power", nonnegative(),
      [](P& p, const V& v) { p.chain.noise.shot_coeff = real(v); });
  add("aom_coeff", 0.0, "PSD per W² of optical power", nonnegative(),
      [](P& p, const V& v) { p.chain.noise.aom_coeff = real(v); });
  add("responsivity", 1.0, "photodetector V/W", positive(),
      [](P& p, const V& v) { p.chain.det.responsivity = real(v); });
  add("rbw_hz", 3000.0, "analyser resolution bandwidth", positive(),
      [](P& p, const V& v) { p.chain.det.rbw = real(v); });
  add("load_conversion", 1.0, "W per V²", positive(),
      [](P& p, const V& v) { p.chain.det.load_conversion = real(v); });

  // Array.
  add("receiver_power_uw", V(List{25.0}), "probe power per receiver", list_of([](double x) { return x > 0.0; }, "> 0"),
      deferred);
  add("receiver_offset_mhz", V(List{0.0}), "probe detuning offset / 2π per receiver",
      list_of([](double x) { return std::isfinite(x); }, "finite"), deferred);
  add("receiver_efficiency", V(List{}), "EIT-contrast factor per receiver; empty means all 1",
      list_of([](double x) { return x > 0.0 && x <= 1.0; }, "in (0, 1]"), deferred);
  add("min_separation_mhz", 3.0, "minimum detuning separation / 2π", nonnegative(),
      [](P& p, const V& v) { p.array.min_separation = mhz(real(v)); });
  add("independent_detectors", false, "one detector per beam (magnitudes add)", none(),
      [](P& p, const V& v) { p.array.independent_detectors = std::get<bool>(v); });

  // Analysis.
  add("snr_convention", V(std::string("optical")), "optical: 10^(dB/20); electrical: 10^(dB/10)",
      one_of({"optical", "electrical"}), [](P& p, const V& v) {
        p.convention = std::get<std::string>(v) == "optical" ? array::SnrConvention::optical
                                                             : array::SnrConvention::electrical;
      });
  add("bandwidth_threshold_db", 10.0, "SNR level defining the bandwidth", any_real(),
      [](P& p, const V& v) { p.bandwidth_threshold_db = real(v); });
  add("spectrum_axis", V(std::string("probe")), "detuning swept by spectra", one_of({"probe", "coupling"}),
      [](P& p, const V& v) { p.spectrum_axis = obe::parse_sweep_axis(std::get<std::string>(v)); });

  // Scan (units: µW, kHz, MHz or count, by variable).
  add("scan_variable", V(std::string("f_am")), "probe_power, f_am, detuning or n_receivers",
      one_of({"probe_power", "f_am", "detuning", "n_receivers"}),
      [](P& p, const V& v) { p.scan.variable = parse_swept_variable(std::get<std::string>(v)); });
  add("scan_start", 10.0, "first value (µW, kHz, MHz or count)", any_real(), deferred);
  add("scan_stop", 1000.0, "last value (µW, kHz, MHz or count)", any_real(), deferred);
  add("scan_steps", 100LL, "number of points", at_least(2),
      [](P& p, const V& v) { p.scan.steps = static_cast<int>(integer(v)); });
  add("scan_log", false, "logarithmic spacing", none(),
      [](P& p, const V& v) { p.scan.log_spacing = std::get<bool>(v); });

  // Noise calibration.
  add("anchor_onset_uw", 50.0, "power where the AOM term equals the linear term", positive(),
      [](P& p, const V& v) { p.anchors.onset_power = real(v) * 1e-6; });
  add("anchor_peak_uw", 150.0, "probe power of the SNR maximum", positive(),
      [](P& p, const V& v) { p.anchors.peak_power = real(v) * 1e-6; });
  add("anchor_ceiling_db", 32.0, "maximum SNR without the AOM term", any_real(),
      [](P& p, const V& v) { p.anchors.ceiling_db = real(v); });
  add("anchor_det_offset_db", 1.5, "detector floor above analyser floor", positive(),
      [](P& p, const V& v) { p.anchors.det_offset_db = real(v); });
  add("anchor_shot_crossover_uw", 0.0, "power where the linear term equals the floors; 0 disables",
      nonnegative(), [](P& p, const V& v) { p.anchors.shot_crossover_power = real(v) * 1e-6; });
  add("anchor_onset_floor_ratio", 1.0, "AOM term over the floors at the onset (coupling fit)", positive(),
      [](P& p, const V& v) { p.anchors.onset_floor_ratio = real(v); });
  add("anchor_bandwidth_khz", 380.0, "single-receiver bandwidth (corner fit)", positive(),
      [](P& p, const V& v) { p.anchors.bandwidth = real(v) * 1e3; });
  add("anchor_bandwidth_power_uw", 150.0, "probe power of that receiver", positive(),
      [](P& p, const V& v) { p.anchors.bandwidth_power = real(v) * 1e-6; });
  add("calibration_power_min_uw", 10.0, "lowest power of the calibration sweep", positive(), deferred);
  add("calibration_power_max_uw", 400.0, "highest power of the calibration sweep", positive(), deferred);
  add("calibration_steps", 16LL, "log-spaced points in the calibration sweep", at_least(3), deferred);
  return s;
}

}  // namespace detail

inline const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> s = detail::build_schema();
  return s;
}

inline const KeySpec& key_spec(const std::string& key) {
  for (const auto& k : config_schema())
    if (k.name == key) return k;
  throw ConfigError(key, "unknown key");
}

class Config {
 public:
  Config() {
    for (const auto& k : config_schema()) values_.emplace(k.name, k.fallback);
  }

  /// Parses and checks `text` for `key`.
  void set(const std::string& key, const std::string& text) {
    const KeySpec& spec = key_spec(key);
    try {
      ConfigValue v = detail::parse_value(spec.fallback, text);
      spec.check(v);
      values_[key] = std::move(v);
    } catch (const InvalidInput& e) {
      throw ConfigError(key, e.what());
    }
  }

  /// `key=value` as given on a command line.
  void set_override(const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, "override must look like key=value");
    set(detail::trim_copy(assignment.substr(0, eq)), assignment.substr(eq + 1));
  }

  const ConfigValue& get(const std::string& key) const {
    key_spec(key);
    return values_.at(key);
  }
  double real(const std::string& key) const { return std::get<double>(get(key)); }
  long long integer(const std::string& key) const { return std::get<long long>(get(key)); }
  std::string text(const std::string& key) const { return detail::format_value(get(key)); }

  /// Every key in schema order with its canonical text.
  std::vector<std::pair<std::string, std::string>> entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : config_schema()) out.emplace_back(k.name, text(k.name));
    return out;
  }

  /// `key = value` lines for the given keys; readable by from_string.
  std::string fragment(const std::vector<std::string>& keys) const {
    std::string out;
    for (const auto& k : keys) out += k + " = " + text(k) + "\n";
    return out;
  }

  static Config from_stream(std::istream& in, const std::string& source = "config") {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError("(syntax)", source + ": " + e.message() + " at line " + std::to_string(e.line()));
    }
    Config c;
    for (const auto& [key, node] : tree) {
      if (!node.empty()) throw ConfigError(key, "sections are not supported");
      c.set(key, node.data());
    }
    return c;
  }

  static Config from_string(const std::string& text) {
    std::istringstream s(text);
    return from_stream(s);
  }

  static Config from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("(file)", "cannot open '" + path + "'");
    return from_stream(f, path);
  }

  /// Rebuilds a config from the metadata of a table written by run_scan;
  /// keys that are not config keys are ignored.
  static Config from_metadata(const ScanTable::Metadata& meta) {
    Config c;
    for (const auto& [k, v] : meta)
      if (std::any_of(config_schema().begin(), config_schema().end(),
                      [&](const KeySpec& s) { return s.name == k; }))
        c.set(k, v);
    return c;
  }

  Parameters parameters() const {
    Parameters p;
    for (const auto& k : config_schema()) k.apply(p, values_.at(k.name));

    const double corner = real("dynamic_corner_khz");
    p.chain.dynamic.omega_eit = corner > 0.0
                                    ? two_pi * corner * 1e3
                                    : signal::DynamicResponse::from_rates(p.chain.scheme.omega_c,
                                                                          p.chain.scheme.gamma2)
                                          .omega_eit;

    const auto& powers = std::get<std::vector<double>>(get("receiver_power_uw"));
    const auto& offsets = std::get<std::vector<double>>(get("receiver_offset_mhz"));
    const auto& eff = std::get<std::vector<double>>(get("receiver_efficiency"));
    if (powers.empty()) throw ConfigError("receiver_power_uw", "need at least one receiver");
    if (offsets.size() != powers.size())
      throw ConfigError("receiver_offset_mhz", "needs one entry per receiver_power_uw entry");
    if (!eff.empty() && eff.size() != powers.size())
      throw ConfigError("receiver_efficiency", "needs one entry per receiver or none");
    for (std::size_t i = 0; i < powers.size(); ++i) {
      array::ReceiverVolume r;
      r.probe_power = powers[i] * 1e-6;
      r.detuning_offset = mhz(offsets[i]);
      r.efficiency = eff.empty() ? 1.0 : eff[i];
      p.array.receivers.push_back(r);
    }

    const double unit = [&] {
      switch (p.scan.variable) {
        case SweptVariable::probe_power: return 1e-6;
        case SweptVariable::f_am: return 1e3;
        case SweptVariable::detuning: return mhz(1.0);
        case SweptVariable::n_receivers: return 1.0;
      }
      return 1.0;
    }();
    p.scan.start = real("scan_start") * unit;
    p.scan.stop = real("scan_stop") * unit;

    const double lo = real("calibration_power_min_uw") * 1e-6;
    const double hi = real("calibration_power_max_uw") * 1e-6;
    if (!(lo < hi)) throw ConfigError("calibration_power_max_uw", "must exceed calibration_power_min_uw");
    p.calibration_powers =
        ScanSpec{SweptVariable::probe_power, lo, hi, static_cast<int>(integer("calibration_steps")), true}
            .values();

    try {
      p.chain.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError("(parameters)", e.what());
    }
    try {
      p.array.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError("receiver_offset_mhz", e.what());
    }
    try {
      p.scan.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError("scan_start", e.what());
    }
    return p;
  }

  friend bool operator==(const Config&, const Config&) = default;

 private:
  std::map<std::string, ConfigValue> values_;
};

}  // namespace rydberg::harness
