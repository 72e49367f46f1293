#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "support/scenarios.hpp"
#include "uqst/error.hpp"
#include "uqst/execution.hpp"
#include "uqst/sim/optics.hpp"
#include "uqst/tomo/dft.hpp"
#include "uqst/tomo/trace.hpp"

using namespace uqst;
using namespace uqst::sim;
using uqst::oracle::direct_dft;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double max_abs_except(const std::vector<Complex> &k, std::initializer_list<std::size_t> skip) {
  double m = 0.0;
  for (std::size_t p = 0; p < k.size(); ++p)
    if (std::find(skip.begin(), skip.end(), p) == skip.end())
      m = std::max(m, std::abs(k[p]));
  return m;
}

} // namespace

TEST(Detector, RejectsInvalidGeometryAndStorage) {
  DetectorConfig d;
  EXPECT_NO_THROW(validate(d));

  auto odd = d;
  odd.n_pixels_x = 601;
  EXPECT_THROW(validate(odd), Error);

  auto qe = d;
  qe.quantum_efficiency = 1.5;
  try {
    validate(qe);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
    EXPECT_NE(std::string(e.what()).find("quantum_efficiency"), std::string::npos);
  }

  auto wide = d;
  wide.full_well = 70000; // beyond u16 storage
  EXPECT_THROW(validate(wide), Error);
}

TEST(Detector, ReadNoiseForSnrSolvesVarianceRatio) {
  const double mu = 4900.0;
  const double sigma = read_noise_for_snr_db(mu, 15.0);
  const double s2 = sigma * sigma + 1.0 / 12.0;
  EXPECT_NEAR(10.0 * std::log10((mu + s2) / s2), 15.0, 1e-9);
}

TEST(LoField, FlatFieldNormalisation) {
  auto d = oracle::ideal_detector(600);
  auto s = oracle::vacuum_only(600.0);
  const Field lo = build_lo_field(s, d);
  ASSERT_EQ(lo.size(), 600u);
  for (const auto &e : lo)
    EXPECT_NEAR(std::norm(e), 1.0, 1e-12);
  const auto k = direct_dft(std::span<const Complex>(lo));
  EXPECT_GT(std::abs(k[0]), 1.0);
  EXPECT_LT(max_abs_except(k, {0}), 1e-10);
}

TEST(LoField, BandOccupiesExactlyMinusMToM) {
  auto d = oracle::ideal_detector(64, 1);
  auto s = oracle::vacuum_only(6400.0);
  s.lo_mode_halfwidth = 2;
  const Field lo = build_lo_field(s, d);
  const auto k = direct_dft(std::span<const Complex>(lo));
  const double a = std::sqrt(6400.0 / 5.0);
  for (std::size_t p : {0u, 1u, 2u, 62u, 63u})
    EXPECT_NEAR(std::abs(k[p]), a, 1e-9) << p;
  EXPECT_LT(max_abs_except(k, {0, 1, 2, 62, 63}), 1e-9);

  double power = 0.0;
  for (const auto &e : lo)
    power += std::norm(e);
  EXPECT_NEAR(power, 6400.0, 1e-9);
}

TEST(LoField, RejectsBandOverlappingSignal) {
  auto d = oracle::ideal_detector(64, 1);
  auto s = oracle::vacuum_only(6400.0);
  s.lo_mode_halfwidth = 16;
  EXPECT_THROW(build_lo_field(s, d), Error);
}

TEST(LoField, GaussianEffectiveBandwidthMatchesDirectDft) {
  auto d = oracle::ideal_detector(600);
  auto s = oracle::vacuum_only(3e7);
  s.lo_envelope = GaussianEnvelope{600 * 20e-6 / 4.0};
  const Field lo = build_lo_field(s, d);

  // oracle: 99% energy bandwidth from a long-double direct DFT
  const auto k = direct_dft(std::span<const Complex>(lo));
  double total = 0.0;
  for (const auto &c : k)
    total += std::norm(c);
  double inside = std::norm(k[0]);
  int m = 0;
  while (inside < 0.99 * total) {
    ++m;
    inside += std::norm(k[m]) + std::norm(k[600 - m]);
  }
  EXPECT_EQ(effective_lo_halfwidth(lo), m);
  EXPECT_EQ(m, 1);
}

TEST(SignalField, EmptyModesGiveZeroField) {
  auto d = oracle::ideal_detector(600);
  auto s = oracle::vacuum_only();
  for (const auto &e : build_signal_field(s, d, SignalModulation{}))
    EXPECT_EQ(e, Complex{});
}

TEST(SignalField, SingleModeHasOneDftCoefficient) {
  auto d = oracle::ideal_detector(600);
  auto s = oracle::single_mode(197, {std::sqrt(7.2), 0.0});
  const Field f = build_signal_field(s, d, SignalModulation{});
  const auto k = direct_dft(std::span<const Complex>(f));
  EXPECT_NEAR(k[197].real(), std::sqrt(7.2), 1e-12);
  EXPECT_NEAR(k[197].imag(), 0.0, 1e-12);
  EXPECT_LT(max_abs_except(k, {197}), 1e-12);
}

TEST(SignalField, UniformDitherPhasesAreUniform) {
  auto d = oracle::ideal_detector(64, 1);
  auto s = oracle::single_mode(20, {2.0, 0.0}, 1e6, 64);
  s.phase_dither = UniformRandomDither{};
  const std::size_t shots = 8000;
  std::vector<double> phases(shots);
  for (std::uint32_t i = 0; i < shots; ++i) {
    Engine rng = make_engine(99, 1, i, Stream::signal);
    const Field f = build_signal_field(s, d, i, rng);
    // project onto mode 20 to recover the applied global phase
    double ph = std::arg(oracle::direct_coefficient(std::span<const Complex>(f), 20));
    phases[i] = ph < 0 ? ph + two_pi : ph;
  }
  EXPECT_LT(oracle::ks_uniform(phases, 0.0, two_pi), oracle::ks_critical_1pct(shots));
}

TEST(SignalField, SinusoidalDitherFollowsWaveform) {
  OpticalScenario s;
  s.phase_dither = SinusoidalDither{0.7, 40.0};
  Engine rng(1);
  for (std::uint32_t shot : {0u, 7u, 10u, 33u}) {
    const auto mod = draw_signal_modulation(s, shot, rng);
    EXPECT_DOUBLE_EQ(mod.phase, 0.7 * std::sin(two_pi * shot / 40.0));
    EXPECT_EQ(mod.gain, 1.0);
  }
}

TEST(SignalField, RejectsInvalidModeSets) {
  auto d = oracle::ideal_detector(600);
  auto base = oracle::single_mode(197, {1.0, 0.0});

  auto dup = base;
  dup.signal_modes.push_back({197, {0.5, 0.0}});
  EXPECT_THROW(validate(dup, d), Error);

  auto bright = base;
  bright.signal_modes[0].amplitude = {std::sqrt(3e7 / 50.0), 0.0};
  EXPECT_THROW(validate(bright, d), Error);

  auto low = base;
  low.lo_mode_halfwidth = 100;
  EXPECT_THROW(validate(low, d), Error);

  auto high = oracle::single_mode(300, {1.0, 0.0});
  EXPECT_THROW(validate(high, d), Error);

  auto tilted = base;
  tilted.tilt_angle = 20e-3;
  EXPECT_THROW(validate(tilted, d), Error);
}

TEST(ExpectedCounts, BlockedSignalIsLoIntensity) {
  auto d = oracle::ideal_detector(600);
  d.quantum_efficiency = 0.8;
  auto s = oracle::vacuum_only(3e7);
  const Field lo = build_lo_field(s, d);
  const Field zero(600, Complex{});
  const auto e = expected_counts(lo, zero, d);
  for (std::size_t j = 0; j < 600; ++j)
    EXPECT_EQ(e[j], 0.8 * std::norm(lo[j]));
}

TEST(ExpectedCounts, EnergyBookkeeping) {
  auto d = oracle::ideal_detector(600);
  auto s = oracle::vacuum_only(3e7);
  s.lo_mode_halfwidth = 3;
  const Field lo = build_lo_field(s, d);
  const auto e = expected_counts(lo, Field(600, Complex{}), d);
  long double sum = 0.0L;
  for (double v : e)
    sum += v;
  EXPECT_LT(std::abs(static_cast<double>(sum) - 3e7) / 3e7, 1e-12);
}

TEST(ExpectedCounts, EqualAmplitudeFringesHaveUnitVisibility) {
  auto d = oracle::ideal_detector(600);
  const double per_pixel = 50.0;
  // signal as bright as the LO is outside the weak-signal limit, so build the
  // fields directly
  const Field lo(600, Complex{std::sqrt(per_pixel), 0.0});
  const Field sig = plane_wave_mode(60, 600);
  Field scaled(600);
  for (std::size_t j = 0; j < 600; ++j)
    scaled[j] = sig[j] * std::sqrt(per_pixel * 600);
  const auto e = expected_counts(lo, scaled, d);
  const auto [lo_it, hi_it] = std::minmax_element(e.begin(), e.end());
  EXPECT_NEAR((*hi_it - *lo_it) / (*hi_it + *lo_it), 1.0, 1e-9);
  // period N/p pixels: samples 10 apart are identical
  for (std::size_t j = 0; j + 10 < 600; ++j)
    EXPECT_NEAR(e[j], e[j + 10], 1e-9);

  const auto k = direct_dft(std::span<const double>(e));
  std::size_t peak = 1;
  for (std::size_t p = 1; p < 300; ++p)
    if (std::abs(k[p]) > std::abs(k[peak]))
      peak = p;
  EXPECT_EQ(peak, 60u);
}

TEST(ExpectedCounts, TiltOfTwelvePointEightMradPeaksAt197) {
  auto d = oracle::ideal_detector(600);
  EXPECT_NEAR(tilt_mode_index(12.8e-3, 600, 20e-6, 780e-9),
              600 * 20e-6 * std::sin(12.8e-3) / 780e-9, 1e-12);
  const int p = static_cast<int>(std::lround(tilt_mode_index(12.8e-3, 600, 20e-6, 780e-9)));
  EXPECT_EQ(p, 197);

  OpticalScenario s = oracle::vacuum_only(3e7);
  s.signal_modes = {{p, {3.0, 0.0}}};
  const auto e = shot_expected_counts(s, d, FrameKind::signal, 1, 0);
  const auto k = direct_dft(std::span<const double>(e));
  std::size_t peak = 1;
  for (std::size_t q = 1; q < 300; ++q)
    if (std::abs(k[q]) > std::abs(k[peak]))
      peak = q;
  EXPECT_EQ(peak, 197u);
}

TEST(ExpectedCounts, CrossTermIsLocal) {
  auto d = oracle::ideal_detector(600);
  auto s = oracle::single_mode(197, {2.0, 1.0});
  const auto e = shot_expected_counts(s, d, FrameKind::signal, 1, 0);
  const auto k = direct_dft(std::span<const double>(e));
  const double scale = std::abs(k[0]);
  for (std::size_t p = 0; p < 600; ++p) {
    if (p == 0 || p == 197 || p == 403)
      continue;
    EXPECT_LT(std::abs(k[p]) / scale, 1e-9) << p;
  }
  EXPECT_GT(std::abs(k[197]) / scale, 1e-6);
}

TEST(DetectFrame, ZeroExpectationGivesZeroFrame) {
  auto d = oracle::ideal_detector(16, 4);
  Engine rng(3);
  const Frame f = detect_frame(std::vector<double>(16, 0.0), d, rng);
  EXPECT_EQ(f.counts, std::vector<std::uint16_t>(64, 0));
  EXPECT_EQ(f.saturated_pixels, 0u);
}

TEST(DetectFrame, PoissonMeanEqualsVariance) {
  auto d = oracle::ideal_detector(1000, 100); // 10^5 pixels
  Engine rng(11);
  const Frame f = detect_frame(std::vector<double>(1000, 100.0 * 100), d, rng);
  std::vector<double> v(f.counts.begin(), f.counts.end());
  const double m = oracle::plain_mean(v);
  EXPECT_NEAR(m, 100.0, 0.2);
  EXPECT_NEAR(oracle::plain_variance(v) / m, 1.0, 0.02);
}

TEST(DetectFrame, ClampsAtFullWell) {
  auto d = oracle::ideal_detector(8, 2);
  Engine rng(5);
  const Frame f = detect_frame(std::vector<double>(8, 2e6), d, rng);
  for (auto c : f.counts)
    EXPECT_EQ(c, 65535);
  EXPECT_EQ(f.saturated_pixels, 16u);
}

TEST(DetectFrame, OffsetAndReadNoise) {
  auto d = oracle::ideal_detector(500, 20);
  d.adc_offset = 500;
  d.read_noise_rms = 5.0;
  Engine rng(8);
  const Frame f = detect_frame(std::vector<double>(500, 0.0), d, rng);
  std::vector<double> v(f.counts.begin(), f.counts.end());
  EXPECT_NEAR(oracle::plain_mean(v), 500.0, 0.1);
  // rounding adds 1/12
  EXPECT_NEAR(oracle::plain_variance(v), 25.0 + 1.0 / 12.0, 1.0);
}

TEST(Sequence, SameSeedIsBitIdentical) {
  auto d = oracle::ideal_detector(64, 2);
  auto s = oracle::single_mode(20, {2.0, 0.5}, 1e5, 64);
  s.phase_dither = UniformRandomDither{};
  s.lo_jitter_rms = 0.01;
  const auto a = run_exposure_sequence(s, d, 50, FrameKind::signal, 42);
  const auto b = run_exposure_sequence(s, d, 50, FrameKind::signal, 42);
  EXPECT_EQ(a, b);
  const auto c = run_exposure_sequence(s, d, 50, FrameKind::signal, 43);
  EXPECT_NE(a.frames, c.frames);
}

TEST(Sequence, IndependentOfThreadsAndOrder) {
  auto d = oracle::ideal_detector(64, 2);
  d.read_noise_rms = 3.0;
  d.full_well = 60000;
  d.adc_offset = 100;
  auto s = oracle::single_mode(20, {2.0, 0.5}, 1e5, 64);
  s.signal_jitter_rms = 0.1;
  const auto serial = run_exposure_sequence(s, d, 64, FrameKind::signal, 7, Execution::serial);
  const int before = set_thread_count(1);
  const auto one = run_exposure_sequence(s, d, 64, FrameKind::signal, 7);
  set_thread_count(8);
  const auto eight = run_exposure_sequence(s, d, 64, FrameKind::signal, 7);
  set_thread_count(before);
  EXPECT_EQ(serial, one);
  EXPECT_EQ(serial, eight);
  // any single shot regenerates on its own
  EXPECT_EQ(synthesize_shot(s, d, FrameKind::signal, 7, 37), serial.frames[37]);
}

TEST(Sequence, KindsDropFields) {
  auto d = oracle::ideal_detector(64, 2);
  d.full_well = 60000;
  d.adc_offset = 10;
  auto s = oracle::single_mode(20, {2.0, 0.0}, 1e5, 64);
  const auto dark = run_exposure_sequence(s, d, 3, FrameKind::dark, 1);
  for (const auto &f : dark.frames)
    for (auto c : f.counts)
      EXPECT_EQ(c, 10);
  EXPECT_FALSE(dark.scenario.has_value());

  const auto vac = shot_expected_counts(s, d, FrameKind::vacuum, 1, 0);
  auto blocked = s;
  blocked.signal_modes.clear();
  EXPECT_EQ(vac, shot_expected_counts(blocked, d, FrameKind::signal, 1, 0));
}

TEST(Sequence, VacuumSignalModesLookLikeEmptyModes) {
  auto d = oracle::ideal_detector(128, 1);
  auto s = oracle::single_mode(40, {3.0, 0.0}, 1e6, 128);
  const std::size_t shots = 600;
  const auto vac = run_exposure_sequence(s, d, shots, FrameKind::vacuum, 5);
  std::vector<double> at_signal, at_empty;
  for (const auto &f : vac.frames) {
    const auto k = tomo::dft_modes(tomo::reduce_roi(f, {0, 0, 128, 1})).k;
    at_signal.push_back(std::abs(k[40]));
    at_empty.push_back(std::abs(k[50]));
  }
  EXPECT_LT(oracle::ks_two_sample(at_signal, at_empty), oracle::ks_critical_1pct(shots, shots));

  // sanity: the same test does see the signal when it is present
  const auto lit = run_exposure_sequence(s, d, shots, FrameKind::signal, 5);
  std::vector<double> lit_signal;
  for (const auto &f : lit.frames)
    lit_signal.push_back(std::abs(tomo::dft_modes(tomo::reduce_roi(f, {0, 0, 128, 1})).k[40]));
  EXPECT_GT(oracle::ks_two_sample(lit_signal, at_empty), oracle::ks_critical_1pct(shots, shots));
}

TEST(Sequence, LoJitterDoublesInIntensity) {
  auto d = oracle::ideal_detector(100, 1);
  auto s = oracle::vacuum_only(5e6);
  s.lo_jitter_rms = 0.01;
  const std::size_t shots = 4000;
  const auto set = run_exposure_sequence(s, d, shots, FrameKind::vacuum, 21);
  std::vector<double> totals;
  for (const auto &f : set.frames) {
    double t = 0;
    for (auto c : f.counts)
      t += c;
    totals.push_back(t);
  }
  const double rel = std::sqrt(oracle::plain_variance(totals)) / oracle::plain_mean(totals);
  // |1+e|^2 ~ 1+2e, plus a small Poisson term
  const double oracle = std::sqrt(4 * 1e-4 + 1.0 / 5e6);
  EXPECT_NEAR(rel / oracle, 1.0, 0.06);
}

TEST(Frames, KindNamesRoundTrip) {
  for (auto k : {FrameKind::signal, FrameKind::vacuum, FrameKind::dark})
    EXPECT_EQ(frame_kind_from_string(to_string(k)), k);
  EXPECT_THROW(frame_kind_from_string("bright"), Error);
}

TEST(Frames, SetValidationChecksShapeAndIndices) {
  auto d = oracle::ideal_detector(8, 2);
  auto s = oracle::vacuum_only(1e4);
  auto set = run_exposure_sequence(s, d, 3, FrameKind::vacuum, 1);
  EXPECT_NO_THROW(validate(set));
  auto gap = set;
  gap.frames[2].shot_index = 5;
  EXPECT_THROW(validate(gap), Error);
  auto shape = set;
  shape.frames[1].width = 4;
  shape.frames[1].counts.resize(8);
  EXPECT_THROW(validate(shape), Error);
}
