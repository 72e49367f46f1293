// Serial reference path vs OpenMP path for the shot-parallel kernels.
// Argument 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "uqst/io/config.hpp"
#include "uqst/io/pipeline.hpp"
#include "uqst/sim/optics.hpp"
#include "uqst/tomo/calibration.hpp"
#include "uqst/tomo/dft.hpp"
#include "uqst/tomo/qgrid.hpp"
#include "uqst/tomo/quadrature.hpp"

using namespace uqst;

namespace {

Execution policy(const benchmark::State &state) {
  return state.range(0) ? Execution::parallel : Execution::serial;
}

const io::RunConfig &config() {
  static const io::RunConfig c = io::reference_config();
  return c;
}

const std::vector<tomo::ReducedTrace> &traces() {
  static const auto t = io::simulate_traces(config().scenario, config().detector, 400,
                                            sim::FrameKind::signal, 1, config().roi());
  return t;
}

void BM_SynthesizeFrames(benchmark::State &state) {
  const auto &c = config();
  for (auto _ : state) {
    auto set = sim::run_exposure_sequence(c.scenario, c.detector, 32, sim::FrameKind::signal, 1,
                                          policy(state));
    benchmark::DoNotOptimize(set.frames.data());
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_SynthesizeFrames)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DftBatch(benchmark::State &state) {
  traces(); // build the fixture outside the timed loop
  for (auto _ : state) {
    auto modes = tomo::dft_modes(traces(), policy(state));
    benchmark::DoNotOptimize(modes.data());
  }
  state.SetItemsProcessed(state.iterations() * traces().size());
}
BENCHMARK(BM_DftBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ExtractQuadratures(benchmark::State &state) {
  const auto cal = tomo::vacuum_average(traces());
  for (auto _ : state) {
    auto q = tomo::extract_quadratures(traces(), cal, config().run.mode_range, {}, policy(state));
    benchmark::DoNotOptimize(q.x.data());
  }
  state.SetItemsProcessed(state.iterations() * traces().size());
}
BENCHMARK(BM_ExtractQuadratures)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Kde(benchmark::State &state) {
  const auto cal = tomo::vacuum_average(traces());
  const auto q = tomo::extract_quadratures(traces(), cal, {197, 197});
  tomo::KdeOptions opt;
  opt.grid = 64;
  for (auto _ : state) {
    auto g = tomo::q_kde(q, 197, opt, policy(state));
    benchmark::DoNotOptimize(g.density.data());
  }
}
BENCHMARK(BM_Kde)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
