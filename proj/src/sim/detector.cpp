#include "uqst/sim/detector.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "uqst/error.hpp"

namespace uqst::sim {

namespace {

[[noreturn]] void fail(const std::string &msg) { throw Error(ErrorCategory::config, msg); }

} // namespace

void validate(const DetectorConfig &d) {
  if (d.n_pixels_x < 2 || d.n_pixels_x % 2 != 0)
    fail("n_pixels_x must be even and >= 2, got " + std::to_string(d.n_pixels_x));
  if (d.n_rows < 1)
    fail("n_rows must be >= 1");
  if (!(d.pixel_pitch > 0.0) || !std::isfinite(d.pixel_pitch))
    fail("pixel_pitch must be positive");
  if (!(d.quantum_efficiency > 0.0 && d.quantum_efficiency <= 1.0))
    fail("quantum_efficiency must lie in (0, 1], got " + std::to_string(d.quantum_efficiency));
  if (!(d.read_noise_rms >= 0.0) || !std::isfinite(d.read_noise_rms))
    fail("read_noise_rms must be >= 0");
  if (!(d.dark_rate >= 0.0) || !std::isfinite(d.dark_rate))
    fail("dark_rate must be >= 0");
  if (!(d.full_well > 0.0) || !std::isfinite(d.full_well))
    fail("full_well must be > 0");
  if (!(d.adc_offset >= 0.0) || !std::isfinite(d.adc_offset))
    fail("adc_offset must be >= 0");
  // frames are stored as u16
  if (d.max_count() > std::numeric_limits<std::uint16_t>::max())
    fail("full_well + adc_offset exceeds the 16-bit storage range (65535)");
}

double read_noise_for_snr_db(double mean_pixel_electrons, double snr_db) {
  const double ratio = std::pow(10.0, snr_db / 10.0);
  if (!(ratio > 1.0) || !(mean_pixel_electrons > 0.0))
    throw Error(ErrorCategory::config, "read_noise_for_snr_db needs snr_db > 0 and a lit level > 0");
  const double dark_variance = mean_pixel_electrons / (ratio - 1.0);
  const double sigma2 = dark_variance - 1.0 / 12.0;
  if (sigma2 <= 0.0)
    throw Error(ErrorCategory::config, "requested SNR is unreachable: rounding noise alone exceeds it");
  return std::sqrt(sigma2);
}

} // namespace uqst::sim
