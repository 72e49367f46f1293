#include "uqst/tomo/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uqst/error.hpp"
#include "uqst/sim/scenario.hpp"

namespace uqst::tomo {

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    carry_ += (sum_ - t) + v;
  else
    carry_ += (v - t) + sum_;
  sum_ = t;
}

double mean(std::span<const double> v) {
  if (v.empty())
    throw Error(ErrorCategory::numeric, "mean of an empty sample");
  CompensatedSum s;
  for (double x : v)
    s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2)
    throw Error(ErrorCategory::numeric, "variance needs at least two values");
  const double m = mean(v);
  CompensatedSum s;
  for (double x : v)
    s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(v.size() - 1);
}

ModeStats mode_stats(const QuadratureSamples &samples, int p, double pixel_pitch,
                     double wavelength) {
  if (samples.n_shots < 2)
    throw Error(ErrorCategory::numeric, "mode statistics need at least two shots, have " +
                                            std::to_string(samples.n_shots));
  const std::vector<double> xs = samples.x_of(p);
  const std::vector<double> ys = samples.y_of(p);
  std::vector<double> u(xs.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    u[i] = 0.5 * (xs[i] * xs[i] + ys[i] * ys[i]);

  ModeStats st;
  st.p = p;
  st.n_shots = samples.n_shots;
  st.theta_p = sim::mode_angle(p, samples.trace_length, pixel_pitch, wavelength);
  st.mean_x = mean(xs);
  st.mean_y = mean(ys);
  st.var_x = sample_variance(xs);
  st.var_y = sample_variance(ys);

  const double mean_u = mean(u);
  const double var_u = sample_variance(u);
  st.mean_n = mean_u - 1.0; // one unit of heterodyne vacuum noise
  if (st.mean_n < 0.0) {
    st.mean_n = 0.0;
    st.mean_n_clamped = true;
  }
  const double dn2 = var_u - st.mean_n - 1.0;
  if (dn2 < 0.0)
    st.delta_n_clamped = true;
  st.delta_n = std::sqrt(std::max(dn2, 0.0));

  double se2 = var_u / static_cast<double>(samples.n_shots);
  if (samples.calibration_exposures > 0)
    se2 += (st.mean_x * st.mean_x + st.mean_y * st.mean_y) /
           static_cast<double>(samples.calibration_exposures);
  st.mean_n_stderr = std::sqrt(se2);
  return st;
}

std::vector<ModeStats> mode_spectrum(const QuadratureSamples &samples, const ModeRange &range,
                                     double pixel_pitch, double wavelength) {
  if (range.p_max < range.p_min)
    throw Error(ErrorCategory::range, "empty mode range");
  std::vector<ModeStats> out;
  out.reserve(static_cast<std::size_t>(range.size()));
  for (int p = range.p_min; p <= range.p_max; ++p)
    out.push_back(mode_stats(samples, p, pixel_pitch, wavelength));
  return out;
}

std::vector<double> axis_values(const QuadratureSamples &samples, const AxisSpec &axis) {
  return axis.q == Quadrature::x ? samples.x_of(axis.p) : samples.y_of(axis.p);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCategory::range, "correlation inputs differ in length");
  if (a.size() < 2)
    throw Error(ErrorCategory::numeric, "correlation needs at least two shots");
  const double ma = mean(a), mb = mean(b);
  CompensatedSum sab, saa, sbb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab.add(da * db);
    saa.add(da * da);
    sbb.add(db * db);
  }
  if (saa.value() <= 0.0 || sbb.value() <= 0.0)
    throw Error(ErrorCategory::numeric, "correlation undefined for a zero-variance axis");
  const double r = sab.value() / std::sqrt(saa.value() * sbb.value());
  return std::clamp(r, -1.0, 1.0);
}

double quadrature_correlation(const QuadratureSamples &samples, const AxisSpec &a,
                              const AxisSpec &b) {
  return pearson(axis_values(samples, a), axis_values(samples, b));
}

namespace {

double mean_column_variance(std::span<const ReducedTrace> traces, const char *what) {
  if (traces.size() < 2)
    throw Error(ErrorCategory::numeric, std::string("need at least two ") + what + " traces");
  const std::size_t n = traces.front().values.size();
  CompensatedSum total;
  std::vector<double> column(traces.size());
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t s = 0; s < traces.size(); ++s) {
      if (traces[s].values.size() != n)
        throw Error(ErrorCategory::range, "traces differ in length");
      column[s] = traces[s].values[c];
    }
    total.add(sample_variance(column));
  }
  return total.value() / static_cast<double>(n);
}

} // namespace

double readout_noise_snr(std::span<const ReducedTrace> lit, std::span<const ReducedTrace> dark) {
  const double lit_var = mean_column_variance(lit, "illuminated");
  const double dark_var = mean_column_variance(dark, "dark");
  if (!(dark_var > 0.0))
    throw Error(ErrorCategory::numeric,
                "dark frames have zero variance; the SNR is undefined without read noise");
  return 10.0 * std::log10(lit_var / dark_var);
}

std::vector<double> coefficient_variance(std::span<const ModeAmplitudes> modes) {
  if (modes.size() < 2)
    throw Error(ErrorCategory::numeric, "coefficient variance needs at least two shots");
  const std::size_t n = modes.front().k.size();
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    CompensatedSum re, im;
    for (const auto &m : modes) {
      re.add(m.k[p].real());
      im.add(m.k[p].imag());
    }
    const Complex mu(re.value() / modes.size(), im.value() / modes.size());
    CompensatedSum s;
    for (const auto &m : modes)
      s.add(std::norm(m.k[p] - mu));
    out[p] = s.value() / static_cast<double>(modes.size() - 1);
  }
  return out;
}

} // namespace uqst::tomo
