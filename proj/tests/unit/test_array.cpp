#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rydberg/array/array_model.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/units.hpp"

namespace {

using namespace rydberg;
using namespace rydberg::array;

SignalChain fast_chain() {
  SignalChain c;
  c.geometry.theta_deg = 0.0;
  c.quad = {24, 1, 4.0};
  c.mod.samples = 16;
  c.coupling = {mhz(4), 100e-6};
  c.noise = {1e-20, 1e-20, 0.0, 0.0};
  return c;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

TEST(ScalingLaws, MatchClosedFormsOnRandomInputs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> n_dist(1.0, 32.0), db(-10.0, 50.0), ratio(0.0, 1e3), f(1e3, 1e7);
  for (int i = 0; i < 2000; ++i) {
    const double n = n_dist(rng), s1 = db(rng), s = ratio(rng), fa = f(rng);
    EXPECT_NEAR(snr_scaling_law(n, s1), s1 + 10.0 * std::log10(n * n), 1e-12 * std::abs(s1) + 1e-12);
    ScalingFit fit;
    fit.m = -1e-4 * (1.0 + n);
    fit.bw1 = 3e5;
    EXPECT_NEAR(bw_scaling_law(n, fit), 3e5 + std::log(n) * 20.0 / (std::log(10.0) * -fit.m), 1e-12 * 3e5);
    EXPECT_NEAR(capacity(fa, s), fa * std::log1p(s) / std::log(2.0), 1e-12 * fa * 20);
    EXPECT_NEAR(capacity_of_n(n, s, fa), capacity(fa, n * s), 1e-12 * fa * 20);
  }
}

TEST(ScalingLaws, OneDecadeAddsTwentyOverSlope) {
  ScalingFit fit;
  fit.m = -0.1e-3;
  fit.bw1 = 2e5;
  EXPECT_NEAR(bw_scaling_law(10.0, fit) - bw_scaling_law(1.0, fit), 20.0 / 0.1e-3, 1e-6);
  EXPECT_DOUBLE_EQ(snr_scaling_law(2.0, 0.0), 20.0 * std::log10(2.0));
}

TEST(ScalingLaws, RejectBadArguments) {
  EXPECT_THROW(snr_scaling_law(0.5, 0.0), InvalidInput);
  ScalingFit flat;
  flat.m = 0.0;
  EXPECT_THROW(bw_scaling_law(2.0, flat), BadSlope);
  EXPECT_THROW(capacity(1e3, -1.0), InvalidInput);
  EXPECT_THROW(capacity(-1.0, 1.0), InvalidInput);
  EXPECT_THROW(capacity_of_n(0.0, 1.0, 1e3), InvalidInput);
}

TEST(ScalingLaws, SnrConventions) {
  EXPECT_DOUBLE_EQ(snr_ratio_from_db(20.0, SnrConvention::optical), 10.0);
  EXPECT_DOUBLE_EQ(snr_ratio_from_db(20.0, SnrConvention::electrical), 100.0);
  EXPECT_EQ(snr_ratio_from_db(-INFINITY), 0.0);
}

TEST(Combine, EqualAndOppositeTonesCancel) {
  EXPECT_EQ(combine({{1e-7, 1, 1.0}, {1e-7, -1, 1.0}}), 0.0);
  EXPECT_DOUBLE_EQ(combine({{1e-7, 1, 1.0}, {1e-7, -1, 1.0}}, true), 2e-7);
}

TEST(Combine, MixedSignsFollowTheLargerTone) {
  EXPECT_DOUBLE_EQ(combine({{3.0, 1, 1.0}, {1.0, -1, 1.0}}), 2.0);
  EXPECT_DOUBLE_EQ(combine({{1.0, 1, 1.0}, {3.0, -1, 1.0}}), -2.0);
  EXPECT_DOUBLE_EQ(combine({{2.0, 1, 0.5}, {4.0, 1, 0.25}}), 2.0);
  EXPECT_THROW(combine({}), InvalidInput);
  EXPECT_THROW(combine({{-1.0, 1, 1.0}}), InvalidInput);
}

TEST(Combine, CancelledArrayHasNoSignal) {
  const SignalChain c = fast_chain();
  ArrayResponse r;
  r.array.receivers = {ReceiverVolume{25e-6, 0.0, 1.0, 1}, ReceiverVolume{25e-6, mhz(3), 1.0, -1}};
  r.parts = {{1e-8, 1, 1.0}, {1e-8, -1, 1.0}};
  EXPECT_EQ(combined_snr_db(r, c, 200e3), signal::no_signal_db);
}

TEST(ArraySnapshot, ValidatesReceivers) {
  ArraySnapshot a;
  EXPECT_THROW(a.validate(), InvalidInput);
  a.receivers = {ReceiverVolume{25e-6, 0.0}, ReceiverVolume{25e-6, mhz(2)}};
  EXPECT_THROW(a.validate(), InvalidInput);
  a.receivers[1].detuning_offset = mhz(3);
  EXPECT_NO_THROW(a.validate());
  a.receivers[1].efficiency = 1.5;
  EXPECT_THROW(a.validate(), InvalidInput);
  a.receivers[1].efficiency = 1.0;
  EXPECT_DOUBLE_EQ(a.total_power(), 50e-6);
  EXPECT_EQ(a.prefix(1).receivers.size(), 1u);
  EXPECT_THROW(a.prefix(3), InvalidInput);
}

TEST(ArrayResponse, NoiseIsTakenAtTotalPower) {
  SignalChain c = fast_chain();
  c.noise = {1e-20, 0.0, 1e-15, 0.0};
  ArraySnapshot a;
  a.min_separation = 0.0;
  a.receivers.assign(2, ReceiverVolume{40e-6, 0.0});
  const ArrayResponse r = respond(a, c);
  const ArrayResponse one{a.prefix(1), {r.parts.front()}};
  const double gain = combined_snr_db(r, c, 200e3) - combined_snr_db(one, c, 200e3);
  const double noise_ratio = signal::noise_floor_power(80e-6, c.noise, c.det) /
                             signal::noise_floor_power(40e-6, c.noise, c.det);
  EXPECT_NEAR(gain, 20.0 * std::log10(2.0) - 10.0 * std::log10(noise_ratio), 1e-9);
}

TEST(ArrayResponse, FloorLimitedIdenticalBeamsGainTwentyLogN) {
  const SignalChain c = fast_chain();
  ArraySnapshot a;
  a.min_separation = 0.0;
  a.receivers.assign(4, ReceiverVolume{30e-6, mhz(1)});
  const ScanTable t = snr_vs_receiver_count(a, c);
  ASSERT_EQ(t.size(), 4u);
  for (std::size_t n = 1; n <= 4; ++n)
    EXPECT_NEAR(t.at(n - 1, "snr_db") - t.at(0, "snr_db"), 20.0 * std::log10(double(n)), 1e-9);
  EXPECT_NEAR(t.at(0, "snr_db"), combined_snr_db(a.prefix(1), c), 1e-12);
}

TEST(CurveAnalysis, BandwidthOfALine) {
  const auto f = grid(0.0, 1e6, 101);
  std::vector<double> s;
  for (double x : f) s.push_back(40.0 - 1e-4 * x);
  EXPECT_NEAR(find_bandwidth(f, s), 3e5, 1e-6);
  EXPECT_NEAR(find_bandwidth(f, s, 20.0), 2e5, 1e-6);
  EXPECT_THROW(find_bandwidth(f, s, 100.0), NoCrossing);
  EXPECT_THROW(find_bandwidth({1.0, 1.0}, {20.0, 0.0}), InvalidInput);
}

TEST(CurveAnalysis, ShiftedLineFollowsTheBandwidthLaw) {
  const auto f = grid(0.0, 2e6, 401);
  std::vector<double> s1;
  for (double x : f) s1.push_back(35.0 - 0.08e-3 * x);
  const ScalingFit fit = fit_slope(f, s1);
  EXPECT_NEAR(fit.m, -0.08e-3, 1e-15);
  EXPECT_NEAR(fit.intercept, 35.0, 1e-9);
  for (double n : {2.0, 3.0, 4.0, 10.0}) {
    std::vector<double> sn;
    for (double v : s1) sn.push_back(v + 20.0 * std::log10(n));
    EXPECT_NEAR(find_bandwidth(f, sn), bw_scaling_law(n, fit), 1e-6) << n;
  }
}

TEST(CurveAnalysis, DefaultWindowRunsFromThreeDecibelsDownToTheCutoff) {
  const auto f = grid(0.0, 1e6, 1001);
  std::vector<double> s;
  for (double x : f) s.push_back(x < 1e5 ? 30.0 : 30.0 - 1e-4 * (x - 1e5));
  const FitWindow w = default_fit_window(f, s);
  EXPECT_NEAR(w.lo, 1.3e5, 1e-6);
  EXPECT_NEAR(w.hi, 3e5, 1e-6);
  const ScalingFit fit = fit_slope(f, s, std::nullopt, 5e4);
  EXPECT_NEAR(fit.m, -1e-4, 1e-12);
  EXPECT_DOUBLE_EQ(fit.snr_db_1, 30.0);
  EXPECT_NEAR(fit.bw1, 3e5, 1e-6);
}

TEST(CurveAnalysis, SlopeFitNeedsThreePoints) {
  const std::vector<double> f = {0.0, 1e5, 2e5, 3e5};
  const std::vector<double> s = {30.0, 20.0, 10.0, 0.0};
  EXPECT_THROW(fit_slope(f, s, FitWindow{0.5e5, 1.5e5}), InsufficientPoints);
  EXPECT_NO_THROW(fit_slope(f, s, FitWindow{0.0, 2e5}));
}

TEST(Sweeps, CapacityCurveUsesShannonHartley) {
  const SignalChain c = fast_chain();
  ArraySnapshot a;
  a.receivers = {ReceiverVolume{60e-6, 0.0}};
  const ScanTable t = capacity_curve(a, c, {50e3, 200e3}, SnrConvention::electrical);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_DOUBLE_EQ(t.at(i, "snr_ratio"), std::pow(10.0, t.at(i, "snr_db") / 10.0));
    EXPECT_DOUBLE_EQ(t.at(i, "capacity_bps"), capacity(t.at(i, "f_am_hz"), t.at(i, "snr_ratio")));
  }
  EXPECT_THROW(capacity_curve(a, c, {}), InvalidInput);
}

}  // namespace
