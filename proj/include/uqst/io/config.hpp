#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "uqst/sim/detector.hpp"
#include "uqst/sim/scenario.hpp"
#include "uqst/tomo/quadrature.hpp"
#include "uqst/tomo/trace.hpp"

namespace uqst::io {

/// [run] section of a configuration.
struct RunSettings {
  std::size_t shots = 8000;
  std::size_t vacuum_shots = 500;
  std::optional<tomo::Roi> roi; ///< full detector when absent
  tomo::ModeRange mode_range{180, 215};
  std::uint64_t seed = 0;
  std::string output_dir = ".";

  bool operator==(const RunSettings &) const = default;
};

/// A parsed configuration file. Frame files embed one of these; dark sets
/// carry no scenario.
struct ConfigDocument {
  sim::DetectorConfig detector;
  std::optional<sim::OpticalScenario> scenario;
  std::optional<RunSettings> run;

  bool operator==(const ConfigDocument &) const = default;
};

/// Fully specified run: detector, optics and run settings.
struct RunConfig {
  sim::DetectorConfig detector;
  sim::OpticalScenario scenario;
  RunSettings run;

  /// ROI, defaulting to the whole detector.
  tomo::Roi roi() const;
  ConfigDocument document() const { return {detector, scenario, run}; }

  bool operator==(const RunConfig &) const = default;
};

inline constexpr std::size_t max_shots = 10'000'000;

/// Parses the sectioned key = value grammar:
///
///   # comment
///   [detector]   n_pixels_x n_rows pixel_pitch quantum_efficiency
///                read_noise_rms dark_rate full_well adc_offset
///   [scenario]   wavelength lo_photons_per_shot lo_mode_halfwidth
///                lo_envelope = uniform | gaussian(<waist m>)
///                lo_jitter_rms tilt_angle signal_jitter_rms
///                signal_modes = <p> <re> <im> [; <p> <re> <im> ...]
///                phase_dither = none | uniform_random | sinusoidal(<depth rad>, <period shots>)
///   [run]        shots vacuum_shots seed output_dir
///                roi = <x0> <y0> <width> <height>
///                mode_range = <p_min> <p_max>
///
/// Numbers are plain SI literals (20e-6 for 20 um). Every error names its line.
ConfigDocument parse_config_document(std::string_view text);

/// Parses and requires all three sections, then validates every invariant.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string &path);

/// Canonical text; doubles are written with 17 significant digits so parsing
/// the output reproduces the same values.
std::string serialize_config(const ConfigDocument &doc);
inline std::string serialize_config(const RunConfig &config) {
  return serialize_config(config.document());
}

/// Checks run-level invariants (shot bounds, ROI inside the detector, mode
/// range) on top of the detector and scenario checks.
void validate(const RunConfig &config);

/// Reference measurement: one coherent mode at
/// p = 197 with 7.2 photons, 600 x 10 ROI, 20 um pixels, 780 nm, QE 0.98 and
/// read noise set for a 15 dB lit/dark variance ratio.
RunConfig reference_config();

} // namespace uqst::io
