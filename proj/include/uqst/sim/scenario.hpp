#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "uqst/sim/detector.hpp"

namespace uqst::sim {

using Complex = std::complex<double>;

struct UniformEnvelope {
  bool operator==(const UniformEnvelope &) const = default;
};

struct GaussianEnvelope {
  double waist = 0.0; ///< 1/e field radius, m
  bool operator==(const GaussianEnvelope &) const = default;
};

using LoEnvelope = std::variant<UniformEnvelope, GaussianEnvelope>;

struct NoDither {
  bool operator==(const NoDither &) const = default;
};

/// Global signal phase drawn uniformly from [0, 2pi) every shot.
struct UniformRandomDither {
  bool operator==(const UniformRandomDither &) const = default;
};

/// phi(shot) = depth * sin(2 pi shot / period)
struct SinusoidalDither {
  double depth = 0.0;  ///< rad
  double period = 1.0; ///< shots
  bool operator==(const SinusoidalDither &) const = default;
};

using PhaseDither = std::variant<NoDither, UniformRandomDither, SinusoidalDither>;

/// One occupied plane-wave mode of the signal, |amplitude|^2 = mean photons.
struct SignalMode {
  int index = 0;
  Complex amplitude{};
  bool operator==(const SignalMode &) const = default;
};

struct OpticalScenario {
  double wavelength = 780e-9;           ///< m
  double lo_photons_per_shot = 3.0e7;   ///< incident LO photons on the ROI
  int lo_mode_halfwidth = 0;            ///< M: LO occupies modes -M..M
  LoEnvelope lo_envelope = UniformEnvelope{};
  double lo_jitter_rms = 0.0;           ///< fractional LO amplitude noise per shot
  double tilt_angle = 0.0;              ///< rad, signal direction relative to LO
  std::vector<SignalMode> signal_modes;
  PhaseDither phase_dither = NoDither{};
  double signal_jitter_rms = 0.0;       ///< shared fractional signal amplitude noise per shot

  bool operator==(const OpticalScenario &) const = default;
};

/// Continuous mode index N*dx*sin(theta)/lambda of a plane wave at `theta`.
double tilt_mode_index(double theta, std::size_t n_pixels, double pixel_pitch,
                       double wavelength);

/// theta_p = p*lambda/(N*dx), the propagation angle of mode p.
double mode_angle(int p, std::size_t n_pixels, double pixel_pitch, double wavelength);

/// The mode carrying the most signal power, or -1 without signal.
int central_signal_mode(const OpticalScenario &scenario);

/// Throws Error(config) on any violated invariant, including those that
/// depend on the detector (mode bounds, weak-signal limit, tilt).
void validate(const OpticalScenario &scenario, const DetectorConfig &detector);

/// `count` contiguous modes centred on `center` with a Gaussian photon-number
/// profile (peak `peak_photons`, rms width count/4 modes) and a quadratic
/// phase, standing in for a slightly diverging signal beam.
std::vector<SignalMode> smooth_mode_profile(int center, int count, double peak_photons,
                                            double phase_curvature = 0.05);

} // namespace uqst::sim
