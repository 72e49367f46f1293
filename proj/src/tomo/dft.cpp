#include "uqst/tomo/dft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "uqst/error.hpp"

namespace uqst::tomo {

namespace {

// FFTW planning is not thread-safe; execution on fresh arrays is. Plans are
// created once per length under a lock and reused through the new-array API.
class PlanCache {
public:
  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end())
      return it->second;
    std::vector<double> in(n);
    std::vector<fftw_complex> out(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan)
      throw Error(ErrorCategory::numeric, "FFTW could not plan a transform");
    plans_.emplace(n, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto &[n, plan] : plans_)
      fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache &plan_cache() {
  static PlanCache cache;
  return cache;
}

} // namespace

ModeAmplitudes dft_modes(std::span<const double> values, std::uint32_t shot_index) {
  const std::size_t n = values.size();
  if (n < 2)
    throw Error(ErrorCategory::range, "DFT needs at least two samples");

  fftw_plan plan = plan_cache().get(n);
  std::vector<double> in(values.begin(), values.end());
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_execute_dft_r2c(plan, in.data(), out.data());

  // FFTW uses exp(-i...); the positive exponent is its conjugate for real input.
  ModeAmplitudes m;
  m.shot_index = shot_index;
  m.k.resize(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t p = 0; p <= n / 2; ++p)
    m.k[p] = Complex(out[p][0] * scale, -out[p][1] * scale);
  for (std::size_t p = n / 2 + 1; p < n; ++p)
    m.k[p] = std::conj(m.k[n - p]);
  // p = 0 and p = N/2 are real for real input
  m.k[0].imag(0.0);
  if (n % 2 == 0)
    m.k[n / 2].imag(0.0);
  return m;
}

ModeAmplitudes dft_modes(const ReducedTrace &trace) {
  return dft_modes(trace.values, trace.shot_index);
}

std::vector<ModeAmplitudes> dft_modes(std::span<const ReducedTrace> traces, Execution exec) {
  std::vector<ModeAmplitudes> out(traces.size());
  if (!traces.empty())
    plan_cache().get(traces.front().values.size());
  const auto n = static_cast<long long>(traces.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = dft_modes(traces[static_cast<std::size_t>(i)]);
  } else {
    for (long long i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = dft_modes(traces[static_cast<std::size_t>(i)]);
  }
  return out;
}

} // namespace uqst::tomo
