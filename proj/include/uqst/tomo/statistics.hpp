#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uqst/tomo/dft.hpp"
#include "uqst/tomo/quadrature.hpp"
#include "uqst/tomo/trace.hpp"

namespace uqst::tomo {

/// Neumaier-compensated running sum; makes means insensitive to summation order.
class CompensatedSum {
public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

double mean(std::span<const double> v);
/// Unbiased (n-1) sample variance.
double sample_variance(std::span<const double> v);

struct ModeStats {
  int p = 0;
  double theta_p = 0.0; ///< rad
  double mean_n = 0.0;
  double delta_n = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  /// Standard error of mean_n, including the vacuum-calibration uncertainty.
  double mean_n_stderr = 0.0;
  bool mean_n_clamped = false;
  bool delta_n_clamped = false;
  std::size_t n_shots = 0;
};

/// With u = (x^2 + y^2)/2: <n> = mean(u) - 1, Delta n = sqrt(var(u) - <n> - 1),
/// both clamped at zero; theta_p = p lambda / (N dx).
ModeStats mode_stats(const QuadratureSamples &samples, int p, double pixel_pitch,
                     double wavelength);

std::vector<ModeStats> mode_spectrum(const QuadratureSamples &samples, const ModeRange &range,
                                     double pixel_pitch, double wavelength);

enum class Quadrature { x, y };

struct AxisSpec {
  int p = 0;
  Quadrature q = Quadrature::x;
  bool operator==(const AxisSpec &) const = default;
};

std::vector<double> axis_values(const QuadratureSamples &samples, const AxisSpec &axis);

double pearson(std::span<const double> a, std::span<const double> b);
double quadrature_correlation(const QuadratureSamples &samples, const AxisSpec &a,
                              const AxisSpec &b);

/// 10 log10 of the column-averaged shot-to-shot variance ratio, lit over dark.
double readout_noise_snr(std::span<const ReducedTrace> lit, std::span<const ReducedTrace> dark);

/// Shot-to-shot variance of every DFT coefficient, E|k_p - <k_p>|^2 (n-1 norm).
std::vector<double> coefficient_variance(std::span<const ModeAmplitudes> modes);

} // namespace uqst::tomo
