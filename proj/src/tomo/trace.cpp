#include "uqst/tomo/trace.hpp"

#include <numeric>
#include <string>

#include "uqst/error.hpp"

namespace uqst::tomo {

ReducedTrace reduce_roi(const sim::Frame &frame, const Roi &roi, double adc_offset) {
  if (roi.width == 0 || roi.height == 0 || roi.x0 + roi.width > frame.width ||
      roi.y0 + roi.height > frame.height)
    throw Error(ErrorCategory::range,
                "ROI (" + std::to_string(roi.x0) + ", " + std::to_string(roi.y0) + ", " +
                    std::to_string(roi.width) + "x" + std::to_string(roi.height) +
                    ") exceeds the " + std::to_string(frame.width) + "x" +
                    std::to_string(frame.height) + " frame");

  ReducedTrace t;
  t.shot_index = frame.shot_index;
  t.values.assign(roi.width, 0.0);
  for (std::size_t r = roi.y0; r < roi.y0 + roi.height; ++r)
    for (std::size_t c = 0; c < roi.width; ++c)
      t.values[c] += static_cast<double>(frame.at(r, roi.x0 + c)) - adc_offset;
  t.n_t = std::accumulate(t.values.begin(), t.values.end(), 0.0);
  if (!frame.counts.empty())
    t.saturated_fraction =
        static_cast<double>(frame.saturated_pixels) / static_cast<double>(frame.counts.size());
  return t;
}

ReducedTrace make_trace(std::vector<double> values, std::uint32_t shot_index) {
  ReducedTrace t;
  t.n_t = std::accumulate(values.begin(), values.end(), 0.0);
  t.values = std::move(values);
  t.shot_index = shot_index;
  return t;
}

} // namespace uqst::tomo
