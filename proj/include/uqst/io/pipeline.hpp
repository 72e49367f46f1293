#pragma once

#include <cstdint>
#include <vector>

#include "uqst/execution.hpp"
#include "uqst/sim/frame.hpp"
#include "uqst/sim/optics.hpp"
#include "uqst/tomo/trace.hpp"

namespace uqst::io {

/// Synthesizes and reduces shots without keeping frames in memory. Identical
/// to reduce_roi over run_exposure_sequence's frames.
std::vector<tomo::ReducedTrace> simulate_traces(const sim::OpticalScenario &scenario,
                                                const sim::DetectorConfig &detector,
                                                std::size_t n_shots, sim::FrameKind kind,
                                                std::uint64_t master_seed, const tomo::Roi &roi,
                                                Execution exec = Execution::parallel);

std::vector<tomo::ReducedTrace> reduce_frameset(const sim::FrameSet &set, const tomo::Roi &roi,
                                                Execution exec = Execution::parallel);

tomo::Roi full_roi(const sim::DetectorConfig &detector);

} // namespace uqst::io
