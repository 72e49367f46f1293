#include "uqst/sim/frame.hpp"

#include <cstring>
#include <string>

#include "uqst/error.hpp"

namespace uqst::sim {

const char *to_string(FrameKind kind) noexcept {
  switch (kind) {
  case FrameKind::signal: return "signal";
  case FrameKind::vacuum: return "vacuum";
  case FrameKind::dark: return "dark";
  }
  return "unknown";
}

FrameKind frame_kind_from_string(const char *name) {
  for (auto k : {FrameKind::signal, FrameKind::vacuum, FrameKind::dark})
    if (std::strcmp(name, to_string(k)) == 0)
      return k;
  throw Error(ErrorCategory::config, std::string("unknown frame kind '") + name + "'");
}

void validate(const FrameSet &set) {
  for (std::size_t i = 0; i < set.frames.size(); ++i) {
    const Frame &f = set.frames[i];
    const Frame &first = set.frames.front();
    if (f.width != first.width || f.height != first.height)
      throw Error(ErrorCategory::format, "frame " + std::to_string(i) + " has different dimensions");
    if (f.counts.size() != f.width * f.height)
      throw Error(ErrorCategory::format, "frame " + std::to_string(i) + " has a short count buffer");
    if (f.shot_index != i)
      throw Error(ErrorCategory::format, "shot indices must be contiguous from 0");
  }
}

} // namespace uqst::sim
