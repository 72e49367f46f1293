#include "uqst/tomo/qgrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uqst/error.hpp"

namespace uqst::tomo {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = 0.5 * (lo + hi);
    return v;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + step * static_cast<double>(i);
  return v;
}

double cell_width(const std::vector<double> &edges) {
  return edges.size() < 2 ? 1.0 : edges[1] - edges[0];
}

} // namespace

double QGrid::x_center(std::size_t ix) const {
  return kind == GridKind::histogram ? 0.5 * (x_edges[ix] + x_edges[ix + 1]) : x_edges[ix];
}

double QGrid::y_center(std::size_t iy) const {
  return kind == GridKind::histogram ? 0.5 * (y_edges[iy] + y_edges[iy + 1]) : y_edges[iy];
}

double scott_bandwidth(std::span<const double> values, int dimensions) {
  const double sigma = std::sqrt(sample_variance(values));
  return sigma * std::pow(static_cast<double>(values.size()), -1.0 / (dimensions + 4.0));
}

AxisRange auto_range(std::span<const double> values) {
  if (values.empty())
    throw Error(ErrorCategory::numeric, "cannot range an empty sample");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  if (span == 0.0)
    return {*lo - 3.0, *hi + 3.0};
  return {*lo - 0.05 * span, *hi + 0.05 * span};
}

QGrid histogram2d(std::span<const double> xs, std::span<const double> ys,
                  const HistogramOptions &options) {
  if (xs.size() != ys.size())
    throw Error(ErrorCategory::range, "histogram axes differ in length");
  if (xs.empty())
    throw Error(ErrorCategory::numeric, "histogram needs at least one sample");
  if (options.bins < 1)
    throw Error(ErrorCategory::config, "histogram needs at least one bin");

  const AxisRange rx = options.x_range.value_or(auto_range(xs));
  const AxisRange ry = options.y_range.value_or(auto_range(ys));
  if (!(rx.hi > rx.lo) || !(ry.hi > ry.lo))
    throw Error(ErrorCategory::config, "histogram range must have hi > lo");

  const std::size_t b = options.bins;
  QGrid g;
  g.kind = GridKind::histogram;
  g.x_edges = linspace(rx.lo, rx.hi, b + 1);
  g.y_edges = linspace(ry.lo, ry.hi, b + 1);
  g.density.assign(b * b, 0.0);

  const double wx = (rx.hi - rx.lo) / static_cast<double>(b);
  const double wy = (ry.hi - ry.lo) / static_cast<double>(b);
  auto bin_of = [b](double v, double lo, double hi, double w) -> long long {
    if (v < lo || v > hi)
      return -1;
    auto i = static_cast<long long>(std::floor((v - lo) / w));
    return std::min(i, static_cast<long long>(b) - 1); // right edge is inclusive
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const long long ix = bin_of(xs[i], rx.lo, rx.hi, wx);
    const long long iy = bin_of(ys[i], ry.lo, ry.hi, wy);
    if (ix >= 0 && iy >= 0)
      g.density[static_cast<std::size_t>(iy) * b + static_cast<std::size_t>(ix)] += 1.0;
  }
  return g;
}

QGrid kde2d(std::span<const double> xs, std::span<const double> ys, const KdeOptions &options,
            Execution exec) {
  if (xs.size() != ys.size())
    throw Error(ErrorCategory::range, "KDE axes differ in length");
  if (xs.size() < 3)
    throw Error(ErrorCategory::numeric, "KDE needs at least three samples");
  if (options.grid < 2)
    throw Error(ErrorCategory::config, "KDE grid needs at least two points per axis");

  double hx = 0.0, hy = 0.0;
  if (options.bandwidth) {
    std::tie(hx, hy) = *options.bandwidth;
  } else {
    hx = scott_bandwidth(xs);
    hy = scott_bandwidth(ys);
  }
  if (!(hx > 0.0) || !(hy > 0.0))
    throw Error(ErrorCategory::numeric,
                "zero variance along a KDE axis; use the histogram estimator for degenerate data");

  const std::size_t n = xs.size();
  const std::size_t grid = options.grid;
  const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
  const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());

  QGrid g;
  g.kind = GridKind::kde;
  g.x_edges = linspace(*xlo - 3.0 * hx, *xhi + 3.0 * hx, grid);
  g.y_edges = linspace(*ylo - 3.0 * hy, *yhi + 3.0 * hy, grid);
  g.density.assign(grid * grid, 0.0);

  // separable kernel: per-sample weight tables along each axis
  std::vector<double> wx(n * grid), wy(n * grid);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < grid; ++k) {
      const double dx = (g.x_edges[k] - xs[i]) / hx;
      const double dy = (g.y_edges[k] - ys[i]) / hy;
      wx[i * grid + k] = std::exp(-0.5 * dx * dx) * inv_sqrt_2pi / hx;
      wy[i * grid + k] = std::exp(-0.5 * dy * dy) * inv_sqrt_2pi / hy;
    }
  }

  auto fill_row = [&](std::size_t iy) {
    double *row = g.density.data() + iy * grid;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = wy[i * grid + iy];
      if (a == 0.0)
        continue;
      const double *b = wx.data() + i * grid;
      for (std::size_t ix = 0; ix < grid; ++ix)
        row[ix] += a * b[ix];
    }
  };

  const auto rows = static_cast<long long>(grid);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long long iy = 0; iy < rows; ++iy)
      fill_row(static_cast<std::size_t>(iy));
  } else {
    for (long long iy = 0; iy < rows; ++iy)
      fill_row(static_cast<std::size_t>(iy));
  }

  CompensatedSum mass;
  for (double v : g.density)
    mass.add(v);
  const double norm = mass.value() * cell_width(g.x_edges) * cell_width(g.y_edges);
  for (double &v : g.density)
    v /= norm;
  return g;
}

double kde_evaluate(std::span<const double> xs, std::span<const double> ys, double hx,
                    double hy, double px, double py) {
  if (xs.empty() || xs.size() != ys.size())
    throw Error(ErrorCategory::numeric, "KDE evaluation needs matching, non-empty axes");
  CompensatedSum s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = (px - xs[i]) / hx;
    const double dy = (py - ys[i]) / hy;
    s.add(std::exp(-0.5 * (dx * dx + dy * dy)));
  }
  return s.value() / (2.0 * std::numbers::pi * hx * hy * static_cast<double>(xs.size()));
}

std::string axis_label(const AxisSpec &axis) {
  return (axis.q == Quadrature::x ? "x_" : "y_") + std::to_string(axis.p);
}

QGrid q_histogram(const QuadratureSamples &samples, int p, const HistogramOptions &options) {
  return joint_q(samples, {p, Quadrature::x}, {p, Quadrature::y}, Estimator::histogram, options);
}

QGrid q_kde(const QuadratureSamples &samples, int p, const KdeOptions &options, Execution exec) {
  return joint_q(samples, {p, Quadrature::x}, {p, Quadrature::y}, Estimator::kde, {}, options,
                 exec);
}

QGrid joint_q(const QuadratureSamples &samples, const AxisSpec &a, const AxisSpec &b,
              Estimator estimator, const HistogramOptions &hist, const KdeOptions &kde,
              Execution exec) {
  if (a == b)
    throw Error(ErrorCategory::config, "joint Q-function axes must differ (both are " +
                                           axis_label(a) + ")");
  const std::vector<double> xs = axis_values(samples, a);
  const std::vector<double> ys = axis_values(samples, b);
  QGrid g = estimator == Estimator::histogram ? histogram2d(xs, ys, hist)
                                              : kde2d(xs, ys, kde, exec);
  g.x_label = axis_label(a);
  g.y_label = axis_label(b);
  return g;
}

std::pair<double, double> grid_argmax(const QGrid &grid) {
  const auto it = std::max_element(grid.density.begin(), grid.density.end());
  const auto idx = static_cast<std::size_t>(it - grid.density.begin());
  return {grid.x_center(idx % grid.nx()), grid.y_center(idx / grid.nx())};
}

double grid_mass(const QGrid &grid) {
  CompensatedSum s;
  for (double v : grid.density)
    s.add(v);
  if (grid.kind == GridKind::histogram)
    return s.value();
  return s.value() * cell_width(grid.x_edges) * cell_width(grid.y_edges);
}

GridMoments grid_moments(const QGrid &grid) {
  CompensatedSum w, sx, sy;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double d = grid.at(ix, iy);
      w.add(d);
      sx.add(d * grid.x_center(ix));
      sy.add(d * grid.y_center(iy));
    }
  if (!(w.value() > 0.0))
    throw Error(ErrorCategory::numeric, "grid has no mass");

  GridMoments m;
  m.mean_x = sx.value() / w.value();
  m.mean_y = sy.value() / w.value();
  CompensatedSum vxx, vyy, vxy;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double d = grid.at(ix, iy);
      const double dx = grid.x_center(ix) - m.mean_x;
      const double dy = grid.y_center(iy) - m.mean_y;
      vxx.add(d * dx * dx);
      vyy.add(d * dy * dy);
      vxy.add(d * dx * dy);
    }
  m.var_x = vxx.value() / w.value();
  m.var_y = vyy.value() / w.value();
  m.cov_xy = vxy.value() / w.value();

  const double half_diff = 0.5 * (m.var_x - m.var_y);
  const double radius = std::sqrt(half_diff * half_diff + m.cov_xy * m.cov_xy);
  const double centre = 0.5 * (m.var_x + m.var_y);
  const double major = centre + radius;
  const double minor = centre - radius;
  m.major_axis_angle = 0.5 * std::atan2(2.0 * m.cov_xy, m.var_x - m.var_y);
  m.elongation = minor > 0.0 ? std::sqrt(major / minor) : INFINITY;
  return m;
}

} // namespace uqst::tomo
