#include "uqst/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "uqst/error.hpp"

namespace uqst::sim {

namespace {

[[noreturn]] void fail(const std::string &msg) { throw Error(ErrorCategory::config, msg); }

} // namespace

double tilt_mode_index(double theta, std::size_t n_pixels, double pixel_pitch,
                       double wavelength) {
  return static_cast<double>(n_pixels) * pixel_pitch * std::sin(theta) / wavelength;
}

double mode_angle(int p, std::size_t n_pixels, double pixel_pitch, double wavelength) {
  return p * wavelength / (static_cast<double>(n_pixels) * pixel_pitch);
}

int central_signal_mode(const OpticalScenario &scenario) {
  int best = -1;
  double best_power = -1.0;
  for (const auto &m : scenario.signal_modes) {
    const double power = std::norm(m.amplitude);
    if (power > best_power) {
      best_power = power;
      best = m.index;
    }
  }
  return best;
}

void validate(const OpticalScenario &s, const DetectorConfig &d) {
  const auto n = static_cast<int>(d.n_pixels_x);
  if (!(s.wavelength > 0.0) || !std::isfinite(s.wavelength))
    fail("wavelength must be positive");
  if (!(s.lo_photons_per_shot > 0.0) || !std::isfinite(s.lo_photons_per_shot))
    fail("lo_photons_per_shot must be > 0");
  if (s.lo_mode_halfwidth < 0)
    fail("lo_mode_halfwidth must be >= 0");
  if (4 * s.lo_mode_halfwidth >= n)
    fail("lo_mode_halfwidth " + std::to_string(s.lo_mode_halfwidth) +
         " >= N/4: the LO band would overlap the signal band");
  if (!(s.lo_jitter_rms >= 0.0))
    fail("lo_jitter_rms must be >= 0");
  if (!(s.signal_jitter_rms >= 0.0))
    fail("signal_jitter_rms must be >= 0");
  if (const auto *g = std::get_if<GaussianEnvelope>(&s.lo_envelope); g && !(g->waist > 0.0))
    fail("gaussian LO waist must be > 0");
  if (const auto *sd = std::get_if<SinusoidalDither>(&s.phase_dither); sd && !(sd->period > 0.0))
    fail("sinusoidal dither period must be > 0");

  std::set<int> seen;
  const double weak_limit = s.lo_photons_per_shot / 100.0;
  for (const auto &m : s.signal_modes) {
    if (m.index <= 2 * s.lo_mode_halfwidth || 2 * m.index >= n)
      fail("signal mode " + std::to_string(m.index) + " outside (2M, N/2) = (" +
           std::to_string(2 * s.lo_mode_halfwidth) + ", " + std::to_string(n / 2) + ")");
    if (!seen.insert(m.index).second)
      fail("signal mode " + std::to_string(m.index) + " listed twice");
    if (!std::isfinite(m.amplitude.real()) || !std::isfinite(m.amplitude.imag()))
      fail("signal mode " + std::to_string(m.index) + " has a non-finite amplitude");
    if (std::norm(m.amplitude) > weak_limit)
      fail("signal mode " + std::to_string(m.index) +
           " violates the weak-signal limit |alpha|^2 <= lo_photons_per_shot/100");
  }

  if (!s.signal_modes.empty()) {
    const auto [lo, hi] = std::minmax_element(
        s.signal_modes.begin(), s.signal_modes.end(),
        [](const SignalMode &a, const SignalMode &b) { return a.index < b.index; });
    const double span = hi->index - lo->index;
    const double tilt_p = tilt_mode_index(s.tilt_angle, d.n_pixels_x, d.pixel_pitch, s.wavelength);
    const int centre = central_signal_mode(s);
    if (std::abs(tilt_p - centre) > 1.0 + span / 2.0)
      fail("tilt_angle places the signal at mode " + std::to_string(tilt_p) +
           " but the central signal mode is " + std::to_string(centre));
  }
}

std::vector<SignalMode> smooth_mode_profile(int center, int count, double peak_photons,
                                            double phase_curvature) {
  std::vector<SignalMode> modes;
  if (count <= 0)
    return modes;
  const int first = center - (count - 1) / 2;
  const double width = count / 4.0;
  for (int i = 0; i < count; ++i) {
    const int p = first + i;
    const double offset = p - center;
    const double n = peak_photons * std::exp(-0.5 * (offset / width) * (offset / width));
    const double phase = phase_curvature * offset * offset;
    modes.push_back({p, std::polar(std::sqrt(n), phase)});
  }
  return modes;
}

} // namespace uqst::sim
