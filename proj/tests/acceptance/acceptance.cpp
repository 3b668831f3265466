// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rydberg/array/array_model.hpp"
#include "rydberg/harness/calibration.hpp"
#include "rydberg/harness/commands.hpp"
#include "rydberg/harness/config.hpp"
#include "rydberg/harness/csv.hpp"
#include "rydberg/obe/doppler.hpp"
#include "rydberg/obe/level_scheme.hpp"
#include "rydberg/signal/signal_chain.hpp"
#include "support/cli.hpp"
#include "support/oracle.hpp"

namespace {

using namespace rydberg;
using namespace rydberg::array;
using namespace rydberg::harness;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Parameters simo() { return Config::from_file(cli::simo_config()).parameters(); }

std::vector<double> linear_grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0; lo + i * step <= hi * (1.0 + 1e-12); ++i) out.push_back(lo + i * step);
  return out;
}

/// N copies of one receiver's tone, in phase.
ArrayResponse replicate(const ArrayResponse& one, std::size_t n) {
  ArrayResponse out = one;
  out.array.min_separation = 0.0;
  out.array.receivers.assign(n, one.array.receivers.front());
  out.parts.assign(n, one.parts.front());
  return out;
}

// ---- 1 -------------------------------------------------------------------

Outcome scaling_laws() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> n_dist(1.0, 64.0), db(-20.0, 60.0), slope(-2e-4, -1e-6),
      bw(1e4, 1e6), f(1.0, 1e7), ratio(0.0, 1e4);
  double worst = 0.0;
  auto rel = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1e-300));
  };
  for (int i = 0; i < 20000; ++i) {
    const double n = i % 2 ? std::floor(n_dist(rng)) : n_dist(rng);
    const double s1 = db(rng);
    rel(snr_scaling_law(n, s1), s1 + 10.0 * std::log10(n * n));
    ScalingFit fit;
    fit.m = slope(rng);
    fit.bw1 = bw(rng);
    rel(bw_scaling_law(n, fit), fit.bw1 + 20.0 * std::log(n) / (std::log(10.0) * -fit.m));
    const double fa = f(rng), s = ratio(rng);
    rel(capacity(fa, s), fa * std::log1p(s) / std::log(2.0));
    rel(capacity_of_n(n, s, fa), fa * std::log1p(n * s) / std::log(2.0));
  }
  return {worst <= 1e-12, "worst relative error " + fmt("%.1e", worst) + " over 20000 draws"};
}

// ---- 2 -------------------------------------------------------------------

Outcome simo_emergence() {
  Parameters p = simo();
  p.chain.noise.shot_coeff = 0.0;
  p.chain.noise.aom_coeff = 0.0;
  const ArrayResponse one = respond(p.array.prefix(1), p.chain);
  const double f0 = p.chain.mod.f_am;
  const double s1 = combined_snr_db(one, p.chain, f0);
  double worst_db = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const double gain = combined_snr_db(replicate(one, n), p.chain, f0) - s1;
    worst_db = std::max(worst_db, std::abs(gain - 20.0 * std::log10(static_cast<double>(n))));
  }

  // Single-receiver SNR inferred from the simulated N = 3 point.
  double worst_cap = 0.0;
  for (double f : linear_grid(20e3, 600e3, 20e3)) {
    const double s3 = combined_snr_db(replicate(one, 3), p.chain, f);
    const double snr_opt_1 = snr_ratio_from_db(s3 - 20.0 * std::log10(3.0), p.convention);
    for (std::size_t n = 1; n <= 4; ++n) {
      const double sim = capacity(f, snr_ratio_from_db(combined_snr_db(replicate(one, n), p.chain, f), p.convention));
      const double law = capacity_of_n(static_cast<double>(n), snr_opt_1, f);
      worst_cap = std::max(worst_cap, std::abs(sim / law - 1.0));
    }
  }

  // The distinct-offset array from the calibrated configuration, for reference.
  const ScanTable counts = snr_vs_receiver_count(simo().array, simo().chain, p.convention);
  const auto s = counts.column("snr_db");
  return {worst_db <= 0.5 && worst_cap <= 0.10,
          "identical beams: worst |gain - 20 log N| " + fmt("%.2e", worst_db) + " dB, worst capacity ratio error " +
              fmt("%.2e", worst_cap) + "; offset array N=2 gain " + fmt("%+.2f", s[1] - s[0]) + " dB"};
}

// ---- 3 -------------------------------------------------------------------

Outcome solver_correctness() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double g = mhz(6.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    oracle::LadderInput in;
    obe::Ladder<4> l;
    for (int k = 0; k < 3; ++k) {
      const double mag = g * (0.3 + 1.7 * u(rng));
      const double phase = two_pi * u(rng);
      l.rabi[k] = in.rabi[k] = std::polar(mag, phase);
      l.detuning[k] = in.detuning[k] = g * (3.0 * u(rng) - 1.5);
      l.decay[k] = in.decay[k] = g * (0.25 + 0.75 * u(rng));
    }
    l.dephasing = in.dephasing = g * 0.3 * u(rng);
    const auto a = obe::steady_state(l);
    const auto b = oracle::propagate_to_steady_state(in);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }

  // Invariants over wide, log-uniform physical ranges.
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
  double trace = 0.0, herm = 0.0, min_eig = 0.0;
  for (int i = 0; i < 1000; ++i) {
    obe::LevelScheme s;
    s.omega_p = log_uniform(khz(1), mhz(50));
    s.omega_c = log_uniform(khz(10), mhz(50));
    s.omega_rf = u(rng) < 0.2 ? 0.0 : log_uniform(khz(10), mhz(100));
    s.delta_p = mhz(40.0 * u(rng) - 20.0);
    s.delta_c = mhz(40.0 * u(rng) - 20.0);
    s.delta_rf = mhz(20.0 * u(rng) - 10.0);
    s.gamma2 = log_uniform(mhz(1), mhz(20));
    s.gamma3 = log_uniform(khz(1), mhz(1));
    s.gamma4 = log_uniform(khz(1), mhz(1));
    s.gamma_transit = log_uniform(khz(1), mhz(1));
    const obe::DensityMatrix rho = obe::steady_state(s);
    trace = std::max(trace, rho.trace_error());
    herm = std::max(herm, rho.hermiticity_error());
    min_eig = std::min(min_eig, rho.min_eigenvalue());
  }
  const bool ok = worst <= 1e-6 && trace <= 1e-10 && herm <= 1e-12 && min_eig >= -1e-10;
  return {ok, "worst |rho - oracle| " + fmt("%.1e", worst) + "; over 1000 draws trace err " + fmt("%.1e", trace) +
                  ", hermiticity err " + fmt("%.1e", herm) + ", min eigenvalue " + fmt("%.1e", min_eig)};
}

// ---- 4 -------------------------------------------------------------------

Outcome spectroscopic_limits() {
  obe::LevelScheme two;
  two.omega_p = khz(1);
  two.omega_c = 0.0;
  const double a_two = obe::absorption_coefficient(two);

  obe::LevelScheme eit = two;
  eit.omega_c = mhz(8);
  const double g12 = 0.5 * eit.gamma2 + eit.gamma_transit;
  const double g13 = 0.5 * eit.gamma3 + eit.gamma_transit;
  double worst_eit = 0.0;
  for (double d : linear_grid(-15.0, 15.0, 0.25)) {
    eit.delta_p = mhz(d);
    worst_eit = std::max(worst_eit, std::abs(obe::absorption_coefficient(eit) -
                                             oracle::eit_absorption(eit.delta_p, eit.omega_c, g12, g13)));
  }
  eit.delta_p = 0.0;
  const double a_eit = obe::absorption_coefficient(eit);

  // Strong RF: the transparency splits into two windows.
  obe::LevelScheme at = eit;
  at.omega_rf = mhz(40);
  std::vector<double> d = linear_grid(-40.0, 40.0, 0.02), a;
  for (double x : d) {
    at.delta_p = mhz(x);
    a.push_back(obe::absorption_coefficient(at));
  }
  std::vector<double> minima;
  for (std::size_t i = 1; i + 1 < a.size(); ++i)
    if (a[i] < a[i - 1] && a[i] <= a[i + 1]) minima.push_back(d[i]);
  double split = NAN;
  if (minima.size() == 2) split = minima[1] - minima[0];
  const double split_ratio = split / 40.0;

  const bool ok = std::abs(a_two - 1.0) <= 1e-6 && worst_eit <= 1e-6 && a_eit < 0.05 &&
                  std::abs(split_ratio - 1.0) <= 0.10;
  return {ok, "two-level A " + fmt("%.9f", a_two) + "; EIT vs closed form " + fmt("%.1e", worst_eit) +
                  ", A(0) with coupling " + fmt("%.4f", a_eit) + "; AT windows " +
                  std::to_string(minima.size()) + ", separation / Omega_RF " + fmt("%.3f", split_ratio)};
}

// ---- 5 -------------------------------------------------------------------

double eit_fwhm_mhz(double theta_deg) {
  obe::BeamGeometry geo;
  geo.theta_deg = theta_deg;
  const obe::CellSpec cell;
  const obe::QuadratureSpec quad;
  auto dip = [&](double d_mhz) {
    obe::LevelScheme on, off;
    on.delta_p = off.delta_p = mhz(d_mhz);
    off.omega_c = 0.0;
    return obe::doppler_averaged_absorption(off, geo, cell, quad) -
           obe::doppler_averaged_absorption(on, geo, cell, quad);
  };
  const double half = 0.5 * dip(0.0);
  auto edge = [&](double dir) {
    const auto f = [&](double x) { return dip(dir * x) - half; };
    double a = 0.0, b = 0.25;
    while (f(b) > 0.0) {
      a = b;
      b += 0.25;
    }
    std::uintmax_t iters = 100;
    const auto r = boost::math::tools::toms748_solve(f, a, b, boost::math::tools::eps_tolerance<double>(40), iters);
    return 0.5 * (r.first + r.second);
  };
  return edge(1.0) + edge(-1.0);
}

Outcome angled_doppler() {
  const double w0 = eit_fwhm_mhz(0.0);
  const double w2 = eit_fwhm_mhz(2.0);
  const double ratio = w2 / w0;
  return {std::abs(ratio - 2.0) <= 0.5, "EIT FWHM " + fmt("%.3f", w0) + " MHz at 0 deg, " + fmt("%.3f", w2) +
                                            " MHz at 2 deg, ratio " + fmt("%.3f", ratio)};
}

// ---- 6 -------------------------------------------------------------------

Outcome noise_shapes() {
  const Parameters p = simo();
  const SignalCurve curve = SignalCurve::from_table(signal::snr_vs_probe_power(p.calibration_powers, p.chain));
  const SnrModel model(curve, p.chain.det);
  const auto peak = model.peak(p.chain.noise);
  signal::NoiseModel shot_only = p.chain.noise;
  shot_only.aom_coeff = 0.0;
  const double ceiling = model.peak(shot_only).snr_db;

  // Power-dependent part of the floor, per doubling.
  auto excess = [&](double w) {
    return signal::noise_floor_power(w, p.chain.noise, p.chain.det) -
           signal::noise_floor_power(0.0, p.chain.noise, p.chain.det);
  };
  auto excess_slope = [&](double w) { return 10.0 * std::log10(excess(2.0 * w) / excess(w)); };
  auto total_slope = [&](double w) {
    return 10.0 * std::log10(signal::noise_floor_power(2.0 * w, p.chain.noise, p.chain.det) /
                             signal::noise_floor_power(w, p.chain.noise, p.chain.det));
  };
  const double onset = 50e-6;
  const double lo = excess_slope(onset / 16.0), hi = excess_slope(onset * 16.0);
  // Where the excess slope is midway (in ratio) between 3 and 6 dB.
  const auto mid = [&](double x) { return excess_slope(std::exp(x)) - 10.0 * std::log10(2.0 * std::sqrt(2.0)); };
  std::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(mid, std::log(onset / 100.0), std::log(onset * 100.0),
                                                   boost::math::tools::eps_tolerance<double>(40), iters);
  const double transition = std::exp(0.5 * (r.first + r.second));

  const bool ok = peak.power >= 100e-6 && peak.power <= 200e-6 && std::abs(ceiling - 32.0) <= 2.0 &&
                  std::abs(lo - 3.0) <= 0.5 && std::abs(hi - 6.0) <= 0.5 && transition >= 25e-6 &&
                  transition <= 100e-6;
  return {ok, "SNR peak " + fmt("%.1f", peak.power * 1e6) + " uW (" + fmt("%.2f", peak.snr_db) +
                  " dB); no-AOM max " + fmt("%.2f", ceiling) + " dB; excess-noise slope " + fmt("%.2f", lo) +
                  " dB/doubling at 3 uW, " + fmt("%.2f", hi) + " at 800 uW, midpoint " +
                  fmt("%.1f", transition * 1e6) + " uW; total-noise slope " + fmt("%.2f", total_slope(onset)) +
                  " dB at 50 uW"};
}

// ---- 7 -------------------------------------------------------------------

Outcome bandwidth_pipeline() {
  const Parameters p = simo();
  const std::vector<double> f = linear_grid(1e3, 1500e3, 1e3);
  std::string detail = "BW(1)";
  bool ok = true;
  for (double w : {100e-6, 150e-6, 200e-6}) {
    const double bw = find_bandwidth(signal::snr_vs_fam(f, p.chain, w), p.bandwidth_threshold_db);
    ok = ok && std::abs(bw / 380e3 - 1.0) <= 0.15;
    detail += " " + fmt("%.1f", bw / 1e3) + " kHz @" + fmt("%.0f", w * 1e6) + " uW;";
  }

  // Straight-line curves: the law is exact.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> slope(-2e-4, -2e-5), icpt(20.0, 50.0);
  double worst_lin = 0.0;
  for (int t = 0; t < 200; ++t) {
    const double m = slope(rng), c = icpt(rng);
    const std::vector<double> g = linear_grid(0.0, (c + 30.0) / -m, (c + 30.0) / -m / 400.0);
    std::vector<double> s1;
    for (double x : g) s1.push_back(c + m * x);
    const ScalingFit fit = fit_slope(g, s1, FitWindow{g.front(), g.back()});
    for (double n = 2.0; n <= 8.0; n += 1.0) {
      std::vector<double> sn;
      for (double v : s1) sn.push_back(v + 20.0 * std::log10(n));
      const double want = 20.0 / std::abs(m) * std::log10(n);
      const double got = find_bandwidth(g, sn) - find_bandwidth(g, s1);
      worst_lin = std::max({worst_lin, std::abs(got / want - 1.0), std::abs(bw_scaling_law(n, fit) - fit.bw1 - want) / want});
    }
  }
  ok = ok && worst_lin <= 1e-9;

  // Simulated curves: N in-phase copies of the calibrated 25 uW receiver,
  // floor-limited noise so the SNR gain is exactly 20 log N.
  Parameters q = p;
  q.chain.noise.shot_coeff = 0.0;
  q.chain.noise.aom_coeff = 0.0;
  const ArrayResponse one = respond(q.array.prefix(1), q.chain);
  std::vector<double> s1;
  for (double x : f) s1.push_back(combined_snr_db(one, q.chain, x));
  const ScalingFit fit = fit_slope(f, s1, std::nullopt, q.chain.mod.f_am);
  double worst_sim = 0.0;
  std::string per_n;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<double> sn;
    for (double x : f) sn.push_back(combined_snr_db(replicate(one, n), q.chain, x));
    const double got = find_bandwidth(f, sn) - fit.bw1;
    const double want = bw_scaling_law(static_cast<double>(n), fit) - fit.bw1;
    worst_sim = std::max(worst_sim, std::abs(got / want - 1.0));
    per_n += " N=" + std::to_string(n) + " " + fmt("%+.3f", got / want - 1.0);
  }
  ok = ok && worst_sim <= 0.10;
  return {ok, detail + " linear-curve law error " + fmt("%.1e", worst_lin) +
                  "; simulated-curve increment error vs law (slope " + fmt("%.4f", fit.m * 1e3) + " dB/kHz):" + per_n};
}

// ---- 8 -------------------------------------------------------------------

Outcome out_of_phase() {
  Parameters p = simo();
  bool ok = true;

  // Equal and opposite tones.
  ArrayResponse pair = replicate(respond(p.array.prefix(1), p.chain), 2);
  pair.parts[1].sign = -pair.parts[0].sign;
  const double amp = pair.amplitude();
  const double db = combined_snr_db(pair, p.chain, p.chain.mod.f_am);
  ok = ok && amp == 0.0 && db == signal::no_signal_db;

  // Mixed signs on random magnitudes.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> mag(1e-9, 1e-6);
  int wrong = 0;
  for (int t = 0; t < 1000; ++t) {
    const double a = mag(rng), b = mag(rng);
    const double c = combine({{a, 1, 1.0}, {b, -1, 1.0}});
    const int larger = a > b ? 1 : -1;
    if (std::abs(std::abs(c) - std::abs(a - b)) > 1e-15 * std::max(a, b) || (c > 0 ? 1 : -1) != larger) ++wrong;
  }
  ok = ok && wrong == 0;

  // Physical example: collinear beams where the inner offsets respond with
  // the opposite sign to the outer ones.
  p.chain.geometry.theta_deg = 0.0;
  const ArrayResponse r = respond(p.array, p.chain);
  std::size_t plus = r.parts.size(), minus = r.parts.size();
  for (std::size_t i = 0; i < r.parts.size(); ++i) (r.parts[i].sign > 0 ? plus : minus) = i;
  std::string phys = "no opposite-sign pair";
  if (plus < r.parts.size() && minus < r.parts.size()) {
    const auto& a = r.parts[plus];
    const auto& b = r.parts[minus];
    const double c = combine({a, b});
    const double bigger = std::max(a.delta_p1, b.delta_p1);
    const int expect = a.delta_p1 > b.delta_p1 ? 1 : -1;
    const bool dominated = std::abs(std::abs(c) - std::abs(a.delta_p1 - b.delta_p1)) <= 1e-12 * bigger &&
                           (c > 0 ? 1 : -1) == expect;
    ok = ok && dominated;
    phys = "collinear offsets " + fmt("%+.1f", to_mhz(p.array.receivers[plus].detuning_offset)) + " / " +
           fmt("%+.1f", to_mhz(p.array.receivers[minus].detuning_offset)) + " MHz combine to " +
           fmt("%.3f", std::abs(c) / bigger) + " of the larger tone";
  } else {
    ok = false;
  }
  return {ok, "equal/opposite amplitude " + fmt("%g", amp) + " (SNR " + fmt("%g", db) + " dB); " +
                  std::to_string(wrong) + "/1000 mixed-sign mismatches; " + phys};
}

// ---- 9 -------------------------------------------------------------------

Outcome capacity_shape() {
  const Parameters p = simo();
  const std::vector<double> f = linear_grid(5e3, 1500e3, 5e3);
  const ArrayResponse full = respond(p.array, p.chain);
  bool shape = true;
  double prev_arg = 0.0, worst_lin = 0.0, c4 = 0.0;
  std::string maxima;
  for (std::size_t n = 1; n <= full.parts.size(); ++n) {
    const ArrayResponse part{full.array.prefix(n), {full.parts.begin(), full.parts.begin() + static_cast<long>(n)}};
    const auto c = capacity_curve(part, p.chain, f, p.convention).column("capacity_bps");
    // Low-f_AM linearity: C / f nearly constant up to 20 kHz.
    for (std::size_t i = 1; f[i] <= 20e3; ++i) worst_lin = std::max(worst_lin, std::abs(c[i] / f[i] / (c[0] / f[0]) - 1.0));
    int peaks = 0;
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
      if (c[i] > c[i - 1] && c[i] >= c[i + 1]) ++peaks;
    const std::size_t arg = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
    shape = shape && peaks == 1 && arg > 0 && arg + 1 < c.size() && f[arg] >= prev_arg;
    prev_arg = f[arg];
    c4 = c[arg];
    maxima += " N=" + std::to_string(n) + ": " + fmt("%.3f", c[arg] / 1e6) + " Mbit/s @" + fmt("%.0f", f[arg] / 1e3) + " kHz;";
  }
  shape = shape && worst_lin <= 0.02;
  const bool level = std::abs(c4 / 1.3e6 - 1.0) <= 0.30;
  return {shape && level, std::string(shape ? "shape ok" : "shape FAILED") + " (low-f deviation from linear " +
                              fmt("%.4f", worst_lin) + ");" + maxima + " N=4 level " +
                              (level ? "within" : "OUTSIDE") + " 1.3 Mbit/s +-30%"};
}

// ---- 10 ------------------------------------------------------------------

Outcome determinism_io() {
  const std::string args = "capacity --config " + cli::simo_config() + " --pin-timestamp 2000-01-01T00:00:00Z";
  const auto t0 = std::chrono::steady_clock::now();
  const cli::Result a = cli::run(args, "ac10a");
  const double sweep_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const cli::Result b = cli::run(args, "ac10b");
  const bool identical = a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() && a.out == b.out;

  const ScanTable t = from_csv(a.out);
  const bool table_trip = to_csv(t) == a.out && from_csv(to_csv(t)) == t;
  const bool meta_trip = Config::from_metadata(t.metadata()) == Config::from_file(cli::simo_config());

  // Noise calibration written as a fragment and loaded back.
  const Config base = Config::from_file(cli::simo_config());
  const ConfigCalibration cal = calibrate(base);
  const std::string fragment = calibration_fragment(cal);
  Config reloaded = base;
  const Config parsed = Config::from_string(fragment);
  for (const auto& k : cal.keys) reloaded.set(k, parsed.text(k));
  const auto n1 = cal.config.parameters().chain.noise, n2 = reloaded.parameters().chain.noise;
  const bool cal_trip = reloaded == cal.config && n1.sa_floor == n2.sa_floor && n1.det_floor == n2.det_floor &&
                        n1.shot_coeff == n2.shot_coeff && n1.aom_coeff == n2.aom_coeff;

  const bool ok = identical && table_trip && meta_trip && cal_trip && sweep_s < 60.0;
  return {ok, std::string("pinned CSV ") + (identical ? "byte-identical" : "DIFFERS") + " (" +
                  std::to_string(a.out.size()) + " bytes); table round-trip " + (table_trip ? "exact" : "NOT exact") +
                  "; metadata->config " + (meta_trip ? "exact" : "NOT exact") + "; calibration fragment " +
                  (cal_trip ? "exact" : "NOT exact") + "; end-to-end capacity sweep " + fmt("%.1f", sweep_s) + " s"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "scaling-law exactness", 1.0, scaling_laws},
      {2, "SIMO emergence", 10.0, simo_emergence},
      {3, "solver correctness", 60.0, solver_correctness},
      {4, "spectroscopic limits", 30.0, spectroscopic_limits},
      {5, "angled-Doppler broadening", 120.0, angled_doppler},
      {6, "noise-budget shapes", 30.0, noise_shapes},
      {7, "bandwidth pipeline", 60.0, bandwidth_pipeline},
      {8, "out-of-phase combining", 10.0, out_of_phase},
      {9, "capacity curve shape", 60.0, capacity_shape},
      {10, "determinism and I/O", 60.0, determinism_io},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("AC%-2d %s  %s [%.2f s / %.0f s%s]: %s\n", c.id, pass ? "PASS" : "FAIL", c.title, s, c.budget_s,
                in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
