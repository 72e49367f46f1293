#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uqst/sim/frame.hpp"

namespace uqst::tomo {

/// Pixel rectangle of a frame: columns [x0, x0+width), rows [y0, y0+height).
struct Roi {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;

  bool operator==(const Roi &) const = default;
};

/// One shot collapsed to a line: column sums over the ROI rows with the ADC
/// offset removed. Values may be slightly negative in unlit columns because
/// read noise is zero-mean after the offset subtraction.
struct ReducedTrace {
  std::vector<double> values;
  std::uint32_t shot_index = 0;
  double n_t = 0.0;                ///< total counts, sum of values
  double saturated_fraction = 0.0; ///< fraction of clamped pixels in the frame
};

/// Column sums over the ROI; `adc_offset` is subtracted from every pixel.
ReducedTrace reduce_roi(const sim::Frame &frame, const Roi &roi, double adc_offset = 0.0);

/// Trace from real-valued column totals, e.g. noise-free expectations.
ReducedTrace make_trace(std::vector<double> values, std::uint32_t shot_index = 0);

} // namespace uqst::tomo
