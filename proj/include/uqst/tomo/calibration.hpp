#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uqst/execution.hpp"
#include "uqst/tomo/dft.hpp"
#include "uqst/tomo/trace.hpp"

namespace uqst::tomo {

/// Mean Fourier coefficients of signal-blocked exposures. Subtracting it
/// removes residual LO spatial structure from the signal modes.
struct VacuumCalibration {
  std::vector<Complex> mean_k;
  std::size_t n_exposures = 0;
  double mean_n_t = 0.0;

  bool operator==(const VacuumCalibration &) const = default;
};

/// Default number of signal-blocked exposures.
inline constexpr std::size_t default_vacuum_exposures = 500;

VacuumCalibration vacuum_average(std::span<const ReducedTrace> vacuum_traces,
                                 Execution exec = Execution::parallel);

} // namespace uqst::tomo
