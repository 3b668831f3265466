#pragma once

// Noise-model calibration against shape anchors: where the AOM term takes
// over, where SNR(P) peaks, how high a shot-limited SNR gets, and the
// detector/analyser floor offset.

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>
#include <unsupported/Eigen/Splines>

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rydberg/errors.hpp"
#include "rydberg/scan_table.hpp"
#include "rydberg/signal/signal_chain.hpp"

namespace rydberg::harness {

using signal::DetectorModel;
using signal::NoiseModel;

struct CalibrationAnchors {
  double onset_power = 50e-6;          // W, linear and quadratic terms equal
  double peak_power = 150e-6;          // W, SNR(P) maximum
  double ceiling_db = 32.0;            // dB, max SNR with aom_coeff = 0
  double det_offset_db = 1.5;          // dB, (sa + det) / sa
  double shot_crossover_power = 0.0;   // W, linear term equals the floors; <= 0 disables
  // Used only when the probe coupling and the dynamic corner are fitted too.
  double onset_floor_ratio = 1.0;      // AOM term over the floors at onset_power
  double bandwidth = 380e3;            // Hz, single-receiver cutoff
  double bandwidth_power = 150e-6;     // W, probe power of that receiver

  void validate() const {
    if (!(onset_power > 0.0) || !(peak_power > 0.0)) throw InvalidInput("anchor powers must be > 0");
    if (!(det_offset_db > 0.0)) throw InvalidInput("detector offset anchor must be > 0 dB");
    if (!std::isfinite(ceiling_db)) throw InvalidInput("ceiling anchor must be finite");
    if (!(onset_floor_ratio > 0.0) || !(bandwidth > 0.0) || !(bandwidth_power > 0.0))
      throw InvalidInput("onset ratio and bandwidth anchors must be > 0");
  }
};

/// Electrical tone power at the calibration f_AM versus probe power.
struct SignalCurve {
  std::vector<double> power;   // W, strictly increasing, > 0
  std::vector<double> signal;  // W, > 0

  void validate() const {
    if (power.size() < 3 || power.size() != signal.size())
      throw InvalidInput("signal curve needs >= 3 matching points");
    for (std::size_t i = 0; i < power.size(); ++i) {
      if (!(power[i] > 0.0) || !(signal[i] > 0.0)) throw InvalidInput("signal curve values must be > 0");
      if (i && !(power[i] > power[i - 1])) throw InvalidInput("signal curve powers must increase");
    }
  }

  /// From a snr_vs_probe_power table; zero-power or zero-signal rows dropped.
  static SignalCurve from_table(const ScanTable& t) {
    SignalCurve c;
    const auto p = t.column("probe_power_w");
    const auto s = t.column("signal_w");
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0.0 && s[i] > 0.0) {
        c.power.push_back(p[i]);
        c.signal.push_back(s[i]);
      }
    c.validate();
    return c;
  }
};

/// Smooth SNR(P) built from a cubic spline of ln(signal) in ln(P).
class SnrModel {
 public:
  SnrModel(const SignalCurve& curve, const DetectorModel& det) : det_(det) {
    curve.validate();
    const Eigen::Index n = static_cast<Eigen::Index>(curve.power.size());
    x0_ = std::log(curve.power.front());
    span_ = std::log(curve.power.back()) - x0_;
    Eigen::RowVectorXd u(n);
    Eigen::Matrix<double, 1, Eigen::Dynamic> y(1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = (std::log(curve.power[static_cast<std::size_t>(i)]) - x0_) / span_;
      y(0, i) = std::log(curve.signal[static_cast<std::size_t>(i)]);
    }
    u(n - 1) = 1.0;
    const int degree = std::min<int>(3, static_cast<int>(n) - 1);
    spline_ = Eigen::SplineFitting<Spline>::Interpolate(y, degree, u);
    grid_ = curve.power;
  }

  double log_signal(double x) const { return spline_(to_u(x))(0); }
  double dlog_signal(double x) const { return spline_.derivatives(to_u(x), 1)(0, 1) / span_; }

  static double noise_density(double p, const NoiseModel& n) {
    return n.sa_floor + n.det_floor + n.shot_coeff * p + n.aom_coeff * p * p;
  }

  double snr_db(double p, const NoiseModel& n) const {
    const double x = std::log(p);
    return 10.0 * (log_signal(x) - std::log(noise_density(p, n) * det_.rbw)) / std::log(10.0);
  }

  struct Peak {
    double power;
    double snr_db;
  };

  /// Maximum of SNR(P) over the curve's power range: the grid argmax refined
  /// by solving d ln SNR / d ln P = 0 in the neighbouring intervals.
  Peak peak(const NoiseModel& n) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid_.size(); ++i)
      if (snr_db(grid_[i], n) > snr_db(grid_[best], n)) best = i;
    auto slope = [&](double x) {
      const double p = std::exp(x);
      const double nd = noise_density(p, n);
      return dlog_signal(x) - (n.shot_coeff * p + 2.0 * n.aom_coeff * p * p) / nd;
    };
    Peak out{grid_[best], snr_db(grid_[best], n)};
    const std::size_t lo = best == 0 ? 0 : best - 1;
    const std::size_t hi = std::min(best + 1, grid_.size() - 1);
    for (std::size_t i = lo; i < hi; ++i) {
      const double a = std::log(grid_[i]), b = std::log(grid_[i + 1]);
      const double fa = slope(a), fb = slope(b);
      if (!(fa > 0.0 && fb < 0.0)) continue;
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(slope, a, b, fa, fb,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      const double x = 0.5 * (r.first + r.second);
      const double p = std::exp(x);
      const double s = snr_db(p, n);
      if (s > out.snr_db) out = {p, s};
    }
    return out;
  }

 private:
  using Spline = Eigen::Spline<double, 1>;
  double to_u(double x) const { return std::clamp((x - x0_) / span_, 0.0, 1.0); }

  DetectorModel det_;
  double x0_ = 0.0;
  double span_ = 1.0;
  Spline spline_;
  std::vector<double> grid_;
};

/// Anchor values implied by a given noise model.
struct AnchorValues {
  double onset_power;
  double peak_power;
  double ceiling_db;
  double det_offset_db;
  double shot_crossover_power;
};

inline AnchorValues anchor_values(const SnrModel& model, const NoiseModel& n) {
  AnchorValues v{};
  v.onset_power = n.aom_coeff > 0.0 ? n.shot_coeff / n.aom_coeff : INFINITY;
  v.peak_power = model.peak(n).power;
  NoiseModel shot_only = n;
  shot_only.aom_coeff = 0.0;
  v.ceiling_db = model.peak(shot_only).snr_db;
  v.det_offset_db = 10.0 * std::log10((n.sa_floor + n.det_floor) / n.sa_floor);
  v.shot_crossover_power = n.shot_coeff > 0.0 ? (n.sa_floor + n.det_floor) / n.shot_coeff : INFINITY;
  return v;
}

/// Anchors reproduced exactly by `n`; for round-trip checks.
inline CalibrationAnchors anchors_from_model(const SignalCurve& curve, const NoiseModel& n,
                                             const DetectorModel& det, bool with_crossover = false) {
  const SnrModel model(curve, det);
  const AnchorValues v = anchor_values(model, n);
  CalibrationAnchors a;
  a.onset_power = v.onset_power;
  a.peak_power = v.peak_power;
  a.ceiling_db = v.ceiling_db;
  a.det_offset_db = v.det_offset_db;
  a.shot_crossover_power = with_crossover ? v.shot_crossover_power : 0.0;
  return a;
}

struct AnchorResidual {
  std::string name;
  double target;
  double achieved;
  double relative_error;
};

struct CalibrationResult {
  NoiseModel noise;
  std::vector<AnchorResidual> residuals;

  double worst_residual() const {
    double w = 0.0;
    for (const auto& r : residuals) w = std::max(w, std::abs(r.relative_error));
    return w;
  }
};

inline constexpr double calibration_divergence_limit = 0.5;

namespace detail {

inline NoiseModel noise_from_logs(const Eigen::VectorXd& x) {
  return {std::exp(x(0)), std::exp(x(1)), std::exp(x(2)), std::exp(x(3))};
}

inline std::vector<AnchorResidual> residuals(const SnrModel& model, const NoiseModel& n,
                                             const CalibrationAnchors& a) {
  const AnchorValues v = anchor_values(model, n);
  auto rel = [](double got, double want) { return (got - want) / want; };
  std::vector<AnchorResidual> out = {
      {"onset_power", a.onset_power, v.onset_power, rel(v.onset_power, a.onset_power)},
      {"peak_power", a.peak_power, v.peak_power, rel(v.peak_power, a.peak_power)},
      {"ceiling_db", a.ceiling_db, v.ceiling_db, rel(v.ceiling_db, a.ceiling_db)},
      {"det_offset_db", a.det_offset_db, v.det_offset_db, rel(v.det_offset_db, a.det_offset_db)},
  };
  if (a.shot_crossover_power > 0.0)
    out.push_back({"shot_crossover_power", a.shot_crossover_power, v.shot_crossover_power,
                   rel(v.shot_crossover_power, a.shot_crossover_power)});
  return out;
}

struct AnchorFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const SnrModel* model;
  const CalibrationAnchors* anchors;
  int n_values;

  int inputs() const { return 4; }
  int values() const { return n_values; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const auto r = residuals(*model, noise_from_logs(x), *anchors);
    for (int i = 0; i < n_values; ++i) {
      const double e = r[static_cast<std::size_t>(i)].relative_error;
      f(i) = std::isfinite(e) ? e : 1e6;
    }
    return 0;
  }
};

}  // namespace detail

/// Least-squares fit of the four noise coefficients (in log space) to the
/// anchors' relative errors.  The starting point solves the onset, ceiling
/// and detector anchors exactly with the linear term equal to the floors at
/// the onset power.
inline CalibrationResult calibrate_noise(const SignalCurve& curve, const CalibrationAnchors& anchors,
                                         const DetectorModel& det) {
  anchors.validate();
  det.validate();
  const SnrModel model(curve, det);

  const double det_ratio = std::pow(10.0, anchors.det_offset_db / 10.0) - 1.0;
  NoiseModel start{1.0, det_ratio, 0.0, 0.0};
  const double floors = start.sa_floor + start.det_floor;
  start.shot_coeff = anchors.shot_crossover_power > 0.0 ? floors / anchors.shot_crossover_power
                                                        : floors / anchors.onset_power;
  start.aom_coeff = start.shot_coeff / anchors.onset_power;
  {
    NoiseModel shot_only = start;
    shot_only.aom_coeff = 0.0;
    const double scale = std::pow(10.0, (model.peak(shot_only).snr_db - anchors.ceiling_db) / 10.0);
    start.sa_floor *= scale;
    start.det_floor *= scale;
    start.shot_coeff *= scale;
    start.aom_coeff *= scale;
  }

  Eigen::VectorXd x(4);
  x << std::log(start.sa_floor), std::log(start.det_floor), std::log(start.shot_coeff),
      std::log(start.aom_coeff);
  detail::AnchorFunctor functor{&model, &anchors, anchors.shot_crossover_power > 0.0 ? 5 : 4};
  Eigen::NumericalDiff<detail::AnchorFunctor> numeric(functor, 1e-7);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<detail::AnchorFunctor>> lm(numeric);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 4000;
  lm.minimize(x);

  CalibrationResult result;
  result.noise = detail::noise_from_logs(x);
  result.residuals = detail::residuals(model, result.noise, anchors);
  if (result.worst_residual() > calibration_divergence_limit || !std::isfinite(result.worst_residual())) {
    std::string msg = "calibration residual above 50%:";
    for (const auto& r : result.residuals)
      msg += " " + r.name + "=" + std::to_string(r.relative_error);
    throw CalibrationDiverged(msg);
  }
  return result;
}

inline double onset_floor_ratio(const NoiseModel& n, double onset_power) {
  return n.aom_coeff * onset_power * onset_power / (n.sa_floor + n.det_floor);
}

/// Noise fit against the chain's own SNR-versus-power curve.
inline CalibrationResult calibrate_noise(const signal::SignalChain& chain, const CalibrationAnchors& anchors,
                                         const std::vector<double>& powers) {
  const ScanTable snr = signal::snr_vs_probe_power(powers, chain);
  return calibrate_noise(SignalCurve::from_table(snr), anchors, chain.det);
}

/// All noise coefficients times k: SNR shifts by -10 log10 k everywhere.
inline NoiseModel scaled(NoiseModel n, double k) {
  n.sa_floor *= k;
  n.det_floor *= k;
  n.shot_coeff *= k;
  n.aom_coeff *= k;
  return n;
}

struct CouplingCalibration {
  double omega_ref = 0.0;  // rad/s at chain.coupling.power_ref
  CalibrationResult noise;
  double floor_ratio = 0.0;
};

/// Probe Rabi frequency at chain.coupling.power_ref such that the fitted
/// AOM term equals onset_floor_ratio times the floors at the onset power.
/// Starts from chain.coupling.omega_ref and brackets in 3% steps.
inline CouplingCalibration calibrate_probe_coupling(signal::SignalChain chain, const CalibrationAnchors& anchors,
                                                    const std::vector<double>& powers) {
  anchors.validate();
  if (!chain.coupling.enabled() || !(chain.coupling.omega_ref > 0.0))
    throw InvalidInput("coupling calibration needs a starting probe_omega_ref and probe_power_ref");
  auto fit = [&](double omega_ref) {
    chain.coupling.omega_ref = omega_ref;
    CouplingCalibration c{omega_ref, calibrate_noise(chain, anchors, powers), 0.0};
    c.floor_ratio = onset_floor_ratio(c.noise.noise, anchors.onset_power);
    return c;
  };
  auto error = [&](const CouplingCalibration& c) { return std::log(c.floor_ratio / anchors.onset_floor_ratio); };

  double a = chain.coupling.omega_ref;
  CouplingCalibration ca = fit(a);
  double fa = error(ca);
  if (fa == 0.0) return ca;
  // The ratio falls as omega_ref rises.
  const double step = fa > 0.0 ? 1.03 : 1.0 / 1.03;
  double b = a;
  double fb = fa;
  for (int i = 0; i < 40 && (fb > 0.0) == (fa > 0.0); ++i) {
    a = b;
    fa = fb;
    b *= step;
    fb = error(fit(b));
  }
  if ((fb > 0.0) == (fa > 0.0)) throw CalibrationDiverged("no probe coupling meets the onset floor ratio");
  std::uintmax_t iters = 40;
  const auto root = boost::math::tools::toms748_solve(
      [&](double w) { return error(fit(w)); }, std::min(a, b), std::max(a, b), a < b ? fa : fb, a < b ? fb : fa,
      boost::math::tools::eps_tolerance<double>(30), iters);
  return fit(0.5 * (root.first + root.second));
}

/// Low-pass corner (rad/s) giving a single receiver at `power` its
/// threshold crossing at `bandwidth`, with the SNR at chain.mod.f_am held
/// at its current value (the noise anchors live there).  Keeps the order.
inline double calibrate_dynamic_corner(const signal::SignalChain& chain, double power, double bandwidth,
                                       double threshold_db) {
  chain.validate();
  const double dp1 = signal::detected_fundamental(chain, power).delta_p1;
  const double noise = signal::noise_floor_power(power, chain.noise, chain.det);
  const double at_f_am = signal::snr_db(
      signal::electrical_signal_power(dp1 * signal::dynamic_attenuation(chain.mod.f_am, chain.dynamic), chain.det),
      noise);
  auto excess = [&](double corner_hz) {
    signal::DynamicResponse d = chain.dynamic;
    d.omega_eit = two_pi * corner_hz;
    const double drop = signal::dynamic_attenuation(bandwidth, d) / signal::dynamic_attenuation(chain.mod.f_am, d);
    return at_f_am + 20.0 * std::log10(drop) - threshold_db;
  };
  auto excess_log = [&](double x) { return excess(std::exp(x)); };
  const double lo = std::log(1.0), hi = std::log(1e9);
  if (!(excess_log(lo) < 0.0 && excess_log(hi) > 0.0))
    throw CalibrationDiverged("no corner frequency reaches the bandwidth anchor");
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(excess_log, lo, hi,
                                                      boost::math::tools::eps_tolerance<double>(52), iters);
  return two_pi * std::exp(0.5 * (root.first + root.second));
}

}  // namespace rydberg::harness
