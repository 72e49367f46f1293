#pragma once

#include <cstddef>
#include <cstdint>

namespace uqst::sim {

/// Region of the CCD used for analysis. Photon units throughout: one count
/// is one photoelectron before the ADC offset.
struct DetectorConfig {
  std::size_t n_pixels_x = 600;    ///< N, pixels across the ROI (even)
  std::size_t n_rows = 10;         ///< rows summed vertically
  double pixel_pitch = 20e-6;      ///< m
  double quantum_efficiency = 0.98;
  double read_noise_rms = 0.0;     ///< electrons
  double dark_rate = 0.0;          ///< electrons per pixel per exposure
  double full_well = 60000.0;      ///< electrons
  double adc_offset = 0.0;         ///< counts

  /// Largest value a digitized pixel can take.
  double max_count() const noexcept { return full_well + adc_offset; }

  bool operator==(const DetectorConfig &) const = default;
};

/// Throws Error(config) naming the first violated invariant.
void validate(const DetectorConfig &detector);

/// Read-noise sigma (electrons) that puts the lit/dark per-pixel variance
/// ratio at `snr_db` for a mean lit level of `mean_pixel_electrons`.
/// Accounts for the 1/12 count^2 added by rounding to integers.
double read_noise_for_snr_db(double mean_pixel_electrons, double snr_db);

} // namespace uqst::sim
