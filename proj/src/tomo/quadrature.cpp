#include "uqst/tomo/quadrature.hpp"

#include <cmath>
#include <string>

#include "uqst/error.hpp"
#include "uqst/tomo/statistics.hpp"

namespace uqst::tomo {

std::pair<double, double> heterodyne_quadrature(Complex delta_k, double n_t) {
  if (!(n_t > 0.0))
    throw Error(ErrorCategory::numeric, "n_t must be positive to scale quadratures");
  const double scale = std::sqrt(2.0 / n_t);
  return {scale * delta_k.real(), scale * delta_k.imag()};
}

std::size_t QuadratureSamples::column(int p) const {
  if (!modes.contains(p))
    throw Error(ErrorCategory::range, "mode " + std::to_string(p) + " not in extracted range [" +
                                          std::to_string(modes.p_min) + ", " +
                                          std::to_string(modes.p_max) + "]");
  return static_cast<std::size_t>(p - modes.p_min);
}

std::vector<double> QuadratureSamples::x_of(int p) const {
  const std::size_t c = column(p);
  std::vector<double> v(n_shots);
  for (std::size_t s = 0; s < n_shots; ++s)
    v[s] = x[s * modes.size() + c];
  return v;
}

std::vector<double> QuadratureSamples::y_of(int p) const {
  const std::size_t c = column(p);
  std::vector<double> v(n_shots);
  for (std::size_t s = 0; s < n_shots; ++s)
    v[s] = y[s * modes.size() + c];
  return v;
}

QuadratureSamples extract_quadratures(std::span<const ReducedTrace> traces,
                                      const VacuumCalibration &cal, const ModeRange &range,
                                      const ExtractOptions &options, Execution exec) {
  if (traces.empty())
    throw Error(ErrorCategory::numeric, "no traces to extract quadratures from");
  const std::size_t n = traces.front().values.size();
  if (cal.mean_k.size() != n)
    throw Error(ErrorCategory::range, "calibration length " + std::to_string(cal.mean_k.size()) +
                                          " does not match trace length " + std::to_string(n));
  if (range.p_min <= 2 * options.lo_halfwidth || range.p_min < 1 || range.p_max < range.p_min ||
      2 * static_cast<std::size_t>(range.p_max) >= n)
    throw Error(ErrorCategory::range,
                "mode range [" + std::to_string(range.p_min) + ", " + std::to_string(range.p_max) +
                    "] must satisfy 2M < p_min <= p_max < N/2 (M = " +
                    std::to_string(options.lo_halfwidth) + ", N = " + std::to_string(n) + ")");

  std::vector<std::size_t> accepted;
  accepted.reserve(traces.size());
  CompensatedSum n_t_sum;
  for (std::size_t s = 0; s < traces.size(); ++s) {
    if (traces[s].values.size() != n)
      throw Error(ErrorCategory::range, "traces differ in length");
    if (traces[s].n_t > 0.0 && traces[s].saturated_fraction <= options.max_saturated_fraction) {
      accepted.push_back(s);
      n_t_sum.add(traces[s].n_t);
    }
  }

  QuadratureSamples out;
  out.modes = range;
  out.n_shots = accepted.size();
  out.n_excluded = traces.size() - accepted.size();
  out.trace_length = n;
  out.calibration_exposures = cal.n_exposures;
  out.shot_indices.resize(accepted.size());
  const std::size_t width = static_cast<std::size_t>(range.size());
  out.x.resize(accepted.size() * width);
  out.y.resize(accepted.size() * width);
  if (accepted.empty())
    return out;

  const double ensemble_n_t = n_t_sum.value() / static_cast<double>(accepted.size());
  // scaling formula applies to the plain (un-normalized) transform
  const double root_n = std::sqrt(static_cast<double>(n));

  auto one_shot = [&](std::size_t row) {
    const ReducedTrace &t = traces[accepted[row]];
    const ModeAmplitudes m = dft_modes(t);
    const double n_t = options.scaling == NtScaling::per_shot ? t.n_t : ensemble_n_t;
    out.shot_indices[row] = t.shot_index;
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t p = static_cast<std::size_t>(range.p_min) + c;
      const auto [xv, yv] = heterodyne_quadrature(root_n * (m.k[p] - cal.mean_k[p]), n_t);
      out.x[row * width + c] = xv;
      out.y[row * width + c] = yv;
    }
  };

  const auto rows = static_cast<long long>(accepted.size());
  if (exec == Execution::parallel) {
    dft_modes(std::span<const ReducedTrace>(traces.data(), 1), Execution::serial); // warm plan
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < rows; ++r)
      one_shot(static_cast<std::size_t>(r));
  } else {
    for (long long r = 0; r < rows; ++r)
      one_shot(static_cast<std::size_t>(r));
  }
  return out;
}

} // namespace uqst::tomo
