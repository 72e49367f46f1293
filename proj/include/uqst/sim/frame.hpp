#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "uqst/sim/detector.hpp"
#include "uqst/sim/scenario.hpp"

namespace uqst::sim {

enum class FrameKind : std::uint8_t { signal = 0, vacuum = 1, dark = 2 };

const char *to_string(FrameKind kind) noexcept;
FrameKind frame_kind_from_string(const char *name);

/// One gated exposure, counts stored row-major (n_rows x width).
struct Frame {
  std::vector<std::uint16_t> counts;
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t shot_index = 0;
  FrameKind kind = FrameKind::signal;
  std::size_t saturated_pixels = 0;

  std::uint16_t at(std::size_t row, std::size_t col) const { return counts[row * width + col]; }

  bool operator==(const Frame &) const = default;
};

struct FrameSet {
  std::vector<Frame> frames;
  DetectorConfig detector;
  std::optional<OpticalScenario> scenario; ///< absent for dark sets
  std::uint64_t master_seed = 0;
  FrameKind kind = FrameKind::signal;

  bool operator==(const FrameSet &) const = default;
};

/// Checks shared dimensions and contiguous shot indices from 0.
void validate(const FrameSet &set);

} // namespace uqst::sim
