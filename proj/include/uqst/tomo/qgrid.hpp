#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uqst/execution.hpp"
#include "uqst/tomo/quadrature.hpp"
#include "uqst/tomo/statistics.hpp"

namespace uqst::tomo {

enum class GridKind { histogram, kde };
enum class Estimator { histogram, kde };

/// Density over a quadrature plane, stored row-major with one row per y
/// coordinate: density[iy * nx() + ix].
/// Histogram: x_edges/y_edges are bin edges (nx+1 values), density holds counts.
/// KDE: x_edges/y_edges are grid-point coordinates (nx values), density is
/// normalised so its Riemann sum is 1.
struct QGrid {
  std::vector<double> density;
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  GridKind kind = GridKind::histogram;
  std::string x_label;
  std::string y_label;

  std::size_t nx() const noexcept {
    return kind == GridKind::histogram ? x_edges.size() - 1 : x_edges.size();
  }
  std::size_t ny() const noexcept {
    return kind == GridKind::histogram ? y_edges.size() - 1 : y_edges.size();
  }
  double at(std::size_t ix, std::size_t iy) const { return density[iy * nx() + ix]; }
  double x_center(std::size_t ix) const;
  double y_center(std::size_t iy) const;
};

inline constexpr std::size_t default_histogram_bins = 30;
inline constexpr std::size_t default_kde_grid = 128;

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct HistogramOptions {
  std::size_t bins = default_histogram_bins;
  std::optional<AxisRange> x_range; ///< auto when empty
  std::optional<AxisRange> y_range;
};

struct KdeOptions {
  std::size_t grid = default_kde_grid;
  /// Per-axis kernel widths; Scott's rule when empty.
  std::optional<std::pair<double, double>> bandwidth;
};

/// Scott's rule for d-dimensional data: sigma * n^(-1/(d+4)).
double scott_bandwidth(std::span<const double> values, int dimensions = 2);

/// Auto range: data [min, max] widened by 5% of the span on each side; a
/// zero-span axis gets +/-3 units around its value.
AxisRange auto_range(std::span<const double> values);

QGrid histogram2d(std::span<const double> xs, std::span<const double> ys,
                  const HistogramOptions &options = {});

QGrid kde2d(std::span<const double> xs, std::span<const double> ys,
            const KdeOptions &options = {}, Execution exec = Execution::parallel);

/// Normalised Gaussian product-kernel density at a single point.
double kde_evaluate(std::span<const double> xs, std::span<const double> ys, double hx,
                    double hy, double px, double py);

QGrid q_histogram(const QuadratureSamples &samples, int p, const HistogramOptions &options = {});
QGrid q_kde(const QuadratureSamples &samples, int p, const KdeOptions &options = {},
            Execution exec = Execution::parallel);

QGrid joint_q(const QuadratureSamples &samples, const AxisSpec &a, const AxisSpec &b,
              Estimator estimator, const HistogramOptions &hist = {}, const KdeOptions &kde = {},
              Execution exec = Execution::parallel);

std::string axis_label(const AxisSpec &axis);

/// Coordinates of the largest density value.
std::pair<double, double> grid_argmax(const QGrid &grid);

/// Sum of density times cell area (histograms: sum of counts).
double grid_mass(const QGrid &grid);

struct GridMoments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov_xy = 0.0;
  /// Orientation of the major principal axis, rad in (-pi/2, pi/2].
  double major_axis_angle = 0.0;
  /// Major over minor principal standard deviation.
  double elongation = 1.0;
};

/// Density-weighted moments over the grid cell centres.
GridMoments grid_moments(const QGrid &grid);

} // namespace uqst::tomo
