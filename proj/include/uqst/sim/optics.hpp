#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uqst/execution.hpp"
#include "uqst/rng.hpp"
#include "uqst/sim/detector.hpp"
#include "uqst/sim/frame.hpp"
#include "uqst/sim/scenario.hpp"

namespace uqst::sim {

using Field = std::vector<Complex>;

/// Detector-grid plane-wave basis: u_p(x_j) = exp(-i 2 pi p j / N) / sqrt(N).
/// The positive-exponent unitary DFT used by reconstruction maps u_p to a unit
/// coefficient at index p.
Field plane_wave_mode(int p, std::size_t n_pixels);

/// LO field at pixel centres, normalised so sum_j |E_j|^2 = lo_photons_per_shot.
/// Uniform envelope: equal-amplitude modes -M..M (a flat field for M = 0).
/// Gaussian envelope: the sampled Gaussian, centred on the ROI.
Field build_lo_field(const OpticalScenario &scenario, const DetectorConfig &detector);

/// Smallest M such that modes -M..M hold `energy_fraction` of the field power.
int effective_lo_halfwidth(std::span<const Complex> field, double energy_fraction = 0.99);

/// Per-shot modulation applied to every signal mode.
struct SignalModulation {
  double phase = 0.0; ///< rad, from phase_dither
  double gain = 1.0;  ///< 1 + eps, from signal_jitter_rms
};

/// Draws the shot's modulation from `rng` (the shot's signal stream).
SignalModulation draw_signal_modulation(const OpticalScenario &scenario,
                                        std::uint32_t shot_index, Engine &rng);

/// sum_p alpha_p u_p(x_j) with the shot's global phase and gain applied.
Field build_signal_field(const OpticalScenario &scenario, const DetectorConfig &detector,
                         std::uint32_t shot_index, Engine &rng);

/// Same field for an explicit modulation (no randomness).
Field build_signal_field(const OpticalScenario &scenario, const DetectorConfig &detector,
                         const SignalModulation &modulation);

/// QE * |E_lo + E_sig|^2 per column, in photoelectrons.
std::vector<double> expected_counts(std::span<const Complex> lo, std::span<const Complex> signal,
                                    const DetectorConfig &detector);

/// Digitizes one exposure. Column expectations are split evenly over the rows;
/// each pixel gets Poisson(mean + dark) + Gaussian read noise + offset, then is
/// rounded and clamped to [0, full_well + adc_offset].
Frame detect_frame(std::span<const double> expected, const DetectorConfig &detector,
                   Engine &rng);

/// Per-sequence constants (validated configs, LO field, twiddles) shared
/// read-only by every shot. All member functions are pure and thread-safe.
class ShotSynthesizer {
public:
  ShotSynthesizer(const OpticalScenario &scenario, const DetectorConfig &detector,
                  FrameKind kind, std::uint64_t master_seed);

  /// Noise-free column expectation including LO jitter and signal modulation.
  std::vector<double> expected(std::uint32_t shot) const;
  Frame frame(std::uint32_t shot) const;

  const DetectorConfig &detector() const noexcept { return detector_; }
  FrameKind kind() const noexcept { return kind_; }

private:
  OpticalScenario scenario_;
  DetectorConfig detector_;
  FrameKind kind_;
  std::uint64_t master_seed_;
  Field lo_;
  std::vector<Complex> w_;
};

/// Noise-free column expectation for one shot of a sequence, including the
/// shot's LO jitter and signal modulation.
std::vector<double> shot_expected_counts(const OpticalScenario &scenario,
                                         const DetectorConfig &detector, FrameKind kind,
                                         std::uint64_t master_seed, std::uint32_t shot_index);

/// Frame for one shot of a sequence. Pure in its arguments.
Frame synthesize_shot(const OpticalScenario &scenario, const DetectorConfig &detector,
                      FrameKind kind, std::uint64_t master_seed, std::uint32_t shot_index);

/// Generates shots 0..n_shots-1. Vacuum keeps the LO and drops the signal;
/// dark drops both. Output is bit-identical for either execution policy and any
/// thread count.
FrameSet run_exposure_sequence(const OpticalScenario &scenario, const DetectorConfig &detector,
                               std::size_t n_shots, FrameKind kind, std::uint64_t master_seed,
                               Execution exec = Execution::parallel);

} // namespace uqst::sim
