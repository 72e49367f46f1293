#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "uqst/execution.hpp"
#include "uqst/tomo/calibration.hpp"
#include "uqst/tomo/dft.hpp"
#include "uqst/tomo/trace.hpp"

namespace uqst::tomo {

/// Inclusive range of plane-wave mode indices.
struct ModeRange {
  int p_min = 0;
  int p_max = 0;

  int size() const noexcept { return p_max - p_min + 1; }
  bool contains(int p) const noexcept { return p >= p_min && p <= p_max; }
  bool operator==(const ModeRange &) const = default;
};

enum class NtScaling {
  per_shot,      ///< n_t of each shot (follows LO power jitter)
  ensemble_mean, ///< mean n_t over the accepted shots
};

struct ExtractOptions {
  NtScaling scaling = NtScaling::per_shot;
  int lo_halfwidth = 0;                 ///< M, for the p_min > 2M check
  double max_saturated_fraction = 0.01; ///< shots above this are dropped
};

/// Heterodyne quadrature pair from a vacuum-subtracted, un-normalized Fourier
/// coefficient (sum_j exp(+i 2 pi p j/N) n_j): (x, y) = sqrt(2/n_t) (Re, Im).
std::pair<double, double> heterodyne_quadrature(Complex delta_k, double n_t);

/// Per-shot, per-mode (x_p, y_p). Row-major, one row per accepted shot.
struct QuadratureSamples {
  std::size_t n_shots = 0;
  ModeRange modes;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::uint32_t> shot_indices;
  std::size_t n_excluded = 0;
  std::size_t trace_length = 0;         ///< N
  std::size_t calibration_exposures = 0;

  int mode_index_offset() const noexcept { return modes.p_min; }
  std::size_t column(int p) const;
  double x_at(std::size_t shot, int p) const { return x[shot * modes.size() + column(p)]; }
  double y_at(std::size_t shot, int p) const { return y[shot * modes.size() + column(p)]; }
  std::vector<double> x_of(int p) const;
  std::vector<double> y_of(int p) const;
};

/// Subtracts the vacuum mean, rescales by the LO amplitude, and drops dead or
/// saturated shots (counted in n_excluded).
QuadratureSamples extract_quadratures(std::span<const ReducedTrace> traces,
                                      const VacuumCalibration &cal, const ModeRange &range,
                                      const ExtractOptions &options = {},
                                      Execution exec = Execution::parallel);

} // namespace uqst::tomo
