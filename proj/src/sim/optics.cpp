#include "uqst/sim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "uqst/error.hpp"

namespace uqst::sim {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// exp(-i 2 pi m / N) for m = 0..N-1
std::vector<Complex> twiddles(std::size_t n) {
  std::vector<Complex> w(n);
  for (std::size_t m = 0; m < n; ++m)
    w[m] = std::polar(1.0, -two_pi * static_cast<double>(m) / static_cast<double>(n));
  return w;
}

std::size_t wrap(long long p, std::size_t n) {
  const auto nn = static_cast<long long>(n);
  return static_cast<std::size_t>(((p % nn) + nn) % nn);
}

// adds a * u_p(x_j) to `field`
void add_mode(Field &field, const std::vector<Complex> &w, long long p, Complex a) {
  const std::size_t n = field.size();
  const Complex scaled = a / std::sqrt(static_cast<double>(n));
  const std::size_t step = wrap(p, n);
  std::size_t phase = 0;
  for (std::size_t j = 0; j < n; ++j) {
    field[j] += scaled * w[phase];
    phase += step;
    if (phase >= n)
      phase -= n;
  }
}

std::uint64_t kind_tag(FrameKind kind) { return static_cast<std::uint64_t>(kind) + 1; }

} // namespace

Field plane_wave_mode(int p, std::size_t n_pixels) {
  Field f(n_pixels, Complex{});
  add_mode(f, twiddles(n_pixels), p, Complex{1.0, 0.0});
  return f;
}

Field build_lo_field(const OpticalScenario &s, const DetectorConfig &d) {
  const std::size_t n = d.n_pixels_x;
  const int m = s.lo_mode_halfwidth;
  if (m < 0 || 4 * static_cast<std::size_t>(m) >= n)
    throw Error(ErrorCategory::config, "lo_mode_halfwidth must satisfy 0 <= M < N/4");
  if (!(s.lo_photons_per_shot > 0.0))
    throw Error(ErrorCategory::config, "lo_photons_per_shot must be > 0");

  Field field(n, Complex{});
  if (const auto *g = std::get_if<GaussianEnvelope>(&s.lo_envelope)) {
    const double centre = 0.5 * static_cast<double>(n - 1) * d.pixel_pitch;
    double power = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double r = (static_cast<double>(j) * d.pixel_pitch - centre) / g->waist;
      field[j] = std::exp(-r * r);
      power += std::norm(field[j]);
    }
    const double scale = std::sqrt(s.lo_photons_per_shot / power);
    for (auto &e : field)
      e *= scale;
    return field;
  }

  // equal-amplitude, zero-phase modes -M..M; the basis is orthonormal so the
  // total power is (2M+1)|a|^2
  const auto w = twiddles(n);
  const double a = std::sqrt(s.lo_photons_per_shot / (2.0 * m + 1.0));
  for (int k = -m; k <= m; ++k)
    add_mode(field, w, k, Complex{a, 0.0});
  return field;
}

int effective_lo_halfwidth(std::span<const Complex> field, double energy_fraction) {
  const std::size_t n = field.size();
  // positive-exponent unitary DFT, direct: N is small and this is not a hot path
  std::vector<double> power(n, 0.0);
  double total = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j)
      acc += field[j] * std::polar(1.0, two_pi * static_cast<double>((p * j) % n) /
                                            static_cast<double>(n));
    power[p] = std::norm(acc) / static_cast<double>(n);
    total += power[p];
  }
  double inside = power[0];
  int m = 0;
  while (inside < energy_fraction * total && 2 * static_cast<std::size_t>(m + 1) < n) {
    ++m;
    inside += power[static_cast<std::size_t>(m)] + power[n - static_cast<std::size_t>(m)];
  }
  return m;
}

SignalModulation draw_signal_modulation(const OpticalScenario &s, std::uint32_t shot_index,
                                        Engine &rng) {
  SignalModulation mod;
  if (std::holds_alternative<UniformRandomDither>(s.phase_dither)) {
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    mod.phase = phase(rng);
  } else if (const auto *sd = std::get_if<SinusoidalDither>(&s.phase_dither)) {
    mod.phase = sd->depth * std::sin(two_pi * shot_index / sd->period);
  }
  if (s.signal_jitter_rms > 0.0) {
    std::normal_distribution<double> eps(0.0, s.signal_jitter_rms);
    mod.gain += eps(rng);
  }
  return mod;
}

Field build_signal_field(const OpticalScenario &s, const DetectorConfig &d,
                         const SignalModulation &modulation) {
  validate(s, d);
  Field field(d.n_pixels_x, Complex{});
  const auto w = twiddles(d.n_pixels_x);
  const Complex g = std::polar(modulation.gain, modulation.phase);
  for (const auto &m : s.signal_modes)
    add_mode(field, w, m.index, g * m.amplitude);
  return field;
}

Field build_signal_field(const OpticalScenario &s, const DetectorConfig &d,
                         std::uint32_t shot_index, Engine &rng) {
  const SignalModulation mod = draw_signal_modulation(s, shot_index, rng);
  return build_signal_field(s, d, mod);
}

std::vector<double> expected_counts(std::span<const Complex> lo, std::span<const Complex> signal,
                                    const DetectorConfig &detector) {
  if (lo.size() != signal.size())
    throw Error(ErrorCategory::range, "LO and signal fields differ in length");
  std::vector<double> out(lo.size());
  for (std::size_t j = 0; j < lo.size(); ++j)
    out[j] = detector.quantum_efficiency * std::norm(lo[j] + signal[j]);
  return out;
}

Frame detect_frame(std::span<const double> expected, const DetectorConfig &d, Engine &rng) {
  Frame f;
  f.width = expected.size();
  f.height = d.n_rows;
  f.counts.resize(f.width * f.height);

  const double rows = static_cast<double>(d.n_rows);
  const double max_count = d.max_count();
  std::poisson_distribution<long long> poisson;
  std::normal_distribution<double> read(0.0, d.read_noise_rms > 0.0 ? d.read_noise_rms : 1.0);

  for (std::size_t r = 0; r < d.n_rows; ++r) {
    for (std::size_t c = 0; c < f.width; ++c) {
      const double mean = std::max(expected[c], 0.0) / rows + d.dark_rate;
      double value = 0.0;
      if (mean > 0.0)
        value = static_cast<double>(poisson(rng, decltype(poisson)::param_type(mean)));
      if (d.read_noise_rms > 0.0)
        value += read(rng);
      value = std::nearbyint(value + d.adc_offset);
      if (value >= max_count) {
        value = max_count;
        ++f.saturated_pixels;
      }
      value = std::max(value, 0.0);
      f.counts[r * f.width + c] = static_cast<std::uint16_t>(value);
    }
  }
  return f;
}

ShotSynthesizer::ShotSynthesizer(const OpticalScenario &s, const DetectorConfig &d, FrameKind k,
                                 std::uint64_t seed)
    : scenario_(s), detector_(d), kind_(k), master_seed_(seed) {
  validate(d);
  validate(s, d);
  lo_ = build_lo_field(s, d);
  w_ = twiddles(d.n_pixels_x);
}

std::vector<double> ShotSynthesizer::expected(std::uint32_t shot) const {
  const std::size_t n = detector_.n_pixels_x;
  if (kind_ == FrameKind::dark)
    return std::vector<double>(n, 0.0);

  double lo_gain = 1.0;
  if (scenario_.lo_jitter_rms > 0.0) {
    Engine rng = make_engine(master_seed_, kind_tag(kind_), shot, Stream::lo);
    std::normal_distribution<double> eps(0.0, scenario_.lo_jitter_rms);
    lo_gain += eps(rng);
  }
  Field lo_shot(lo_);
  for (auto &e : lo_shot)
    e *= lo_gain;

  Field sig(n, Complex{});
  if (kind_ == FrameKind::signal && !scenario_.signal_modes.empty()) {
    Engine rng = make_engine(master_seed_, kind_tag(kind_), shot, Stream::signal);
    const SignalModulation mod = draw_signal_modulation(scenario_, shot, rng);
    const Complex g = std::polar(mod.gain, mod.phase);
    for (const auto &m : scenario_.signal_modes)
      add_mode(sig, w_, m.index, g * m.amplitude);
  }
  return expected_counts(lo_shot, sig, detector_);
}

Frame ShotSynthesizer::frame(std::uint32_t shot) const {
  const std::vector<double> e = expected(shot);
  Engine rng = make_engine(master_seed_, kind_tag(kind_), shot, Stream::pixels);
  Frame f = detect_frame(e, detector_, rng);
  f.shot_index = shot;
  f.kind = kind_;
  return f;
}

std::vector<double> shot_expected_counts(const OpticalScenario &scenario,
                                         const DetectorConfig &detector, FrameKind kind,
                                         std::uint64_t master_seed, std::uint32_t shot_index) {
  return ShotSynthesizer(scenario, detector, kind, master_seed).expected(shot_index);
}

Frame synthesize_shot(const OpticalScenario &scenario, const DetectorConfig &detector,
                      FrameKind kind, std::uint64_t master_seed, std::uint32_t shot_index) {
  return ShotSynthesizer(scenario, detector, kind, master_seed).frame(shot_index);
}

FrameSet run_exposure_sequence(const OpticalScenario &scenario, const DetectorConfig &detector,
                               std::size_t n_shots, FrameKind kind, std::uint64_t master_seed,
                               Execution exec) {
  if (n_shots < 1)
    throw Error(ErrorCategory::config, "n_shots must be >= 1");
  const ShotSynthesizer ctx(scenario, detector, kind, master_seed);

  FrameSet set;
  set.detector = detector;
  if (kind != FrameKind::dark)
    set.scenario = scenario;
  set.master_seed = master_seed;
  set.kind = kind;
  set.frames.resize(n_shots);

  const auto n = static_cast<long long>(n_shots);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i)
      set.frames[static_cast<std::size_t>(i)] = ctx.frame(static_cast<std::uint32_t>(i));
  } else {
    for (long long i = 0; i < n; ++i)
      set.frames[static_cast<std::size_t>(i)] = ctx.frame(static_cast<std::uint32_t>(i));
  }
  return set;
}

} // namespace uqst::sim
