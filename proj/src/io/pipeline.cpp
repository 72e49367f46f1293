#include "uqst/io/pipeline.hpp"

namespace uqst::io {

tomo::Roi full_roi(const sim::DetectorConfig &detector) {
  return {0, 0, detector.n_pixels_x, detector.n_rows};
}

std::vector<tomo::ReducedTrace> simulate_traces(const sim::OpticalScenario &scenario,
                                                const sim::DetectorConfig &detector,
                                                std::size_t n_shots, sim::FrameKind kind,
                                                std::uint64_t master_seed, const tomo::Roi &roi,
                                                Execution exec) {
  const sim::ShotSynthesizer synth(scenario, detector, kind, master_seed);
  // probe the ROI once so bad geometry throws outside the parallel region
  (void)tomo::reduce_roi(synth.frame(0), roi, detector.adc_offset);

  std::vector<tomo::ReducedTrace> traces(n_shots);
  const auto n = static_cast<long long>(n_shots);
  auto one = [&](long long i) {
    const auto shot = static_cast<std::uint32_t>(i);
    traces[static_cast<std::size_t>(i)] =
        tomo::reduce_roi(synth.frame(shot), roi, detector.adc_offset);
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i)
      one(i);
  } else {
    for (long long i = 0; i < n; ++i)
      one(i);
  }
  return traces;
}

std::vector<tomo::ReducedTrace> reduce_frameset(const sim::FrameSet &set, const tomo::Roi &roi,
                                                Execution exec) {
  std::vector<tomo::ReducedTrace> traces(set.frames.size());
  if (!set.frames.empty())
    (void)tomo::reduce_roi(set.frames.front(), roi, set.detector.adc_offset);
  const auto n = static_cast<long long>(set.frames.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i)
      traces[static_cast<std::size_t>(i)] =
          tomo::reduce_roi(set.frames[static_cast<std::size_t>(i)], roi, set.detector.adc_offset);
  } else {
    for (long long i = 0; i < n; ++i)
      traces[static_cast<std::size_t>(i)] =
          tomo::reduce_roi(set.frames[static_cast<std::size_t>(i)], roi, set.detector.adc_offset);
  }
  return traces;
}

} // namespace uqst::io
