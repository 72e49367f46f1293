#include "uqst/tomo/calibration.hpp"

#include <string>

#include "uqst/error.hpp"
#include "uqst/tomo/statistics.hpp"

namespace uqst::tomo {

VacuumCalibration vacuum_average(std::span<const ReducedTrace> traces, Execution exec) {
  if (traces.empty())
    throw Error(ErrorCategory::numeric, "vacuum calibration needs at least one exposure");
  const std::size_t n = traces.front().values.size();
  for (const auto &t : traces)
    if (t.values.size() != n)
      throw Error(ErrorCategory::range, "vacuum traces differ in length (shot " +
                                            std::to_string(t.shot_index) + ")");

  const auto modes = dft_modes(traces, exec);

  // Deviations from the first shot, summed in fixed shot order: independent of
  // the execution policy, and exact when every exposure is the same.
  const auto &ref = modes.front().k;
  const double ref_n_t = traces.front().n_t;
  std::vector<CompensatedSum> re(n), im(n);
  CompensatedSum n_t;
  for (std::size_t s = 1; s < modes.size(); ++s) {
    for (std::size_t p = 0; p < n; ++p) {
      re[p].add(modes[s].k[p].real() - ref[p].real());
      im[p].add(modes[s].k[p].imag() - ref[p].imag());
    }
    n_t.add(traces[s].n_t - ref_n_t);
  }

  VacuumCalibration cal;
  cal.n_exposures = traces.size();
  const double count = static_cast<double>(traces.size());
  cal.mean_k.resize(n);
  for (std::size_t p = 0; p < n; ++p)
    cal.mean_k[p] = ref[p] + Complex(re[p].value() / count, im[p].value() / count);
  cal.mean_n_t = ref_n_t + n_t.value() / count;
  return cal;
}

} // namespace uqst::tomo
