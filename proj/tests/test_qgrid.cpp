#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "uqst/error.hpp"
#include "uqst/tomo/qgrid.hpp"

using namespace uqst;
using namespace uqst::tomo;

namespace {

/// Bivariate normal samples in a one-mode QuadratureSamples at p = 5.
QuadratureSamples gaussian_samples(std::size_t n, double mx, double my, double sx, double sy,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gx(mx, sx), gy(my, sy);
  QuadratureSamples q;
  q.modes = {5, 5};
  q.n_shots = n;
  q.trace_length = 600;
  for (std::size_t i = 0; i < n; ++i) {
    q.x.push_back(gx(rng));
    q.y.push_back(gy(rng));
  }
  return q;
}

} // namespace

TEST(Histogram, SingleSample) {
  const std::vector<double> x{1.5}, y{-0.5};
  const auto g = histogram2d(x, y);
  EXPECT_EQ(g.nx(), default_histogram_bins);
  EXPECT_EQ(g.ny(), 30u);
  EXPECT_EQ(grid_mass(g), 1.0);
  // degenerate axes get +/-3 padding around the value
  EXPECT_DOUBLE_EQ(g.x_edges.front(), -1.5);
  EXPECT_DOUBLE_EQ(g.x_edges.back(), 4.5);
  EXPECT_DOUBLE_EQ(g.y_edges.front(), -3.5);
  int occupied = 0;
  for (double d : g.density)
    occupied += d > 0;
  EXPECT_EQ(occupied, 1);
}

TEST(Histogram, MassEqualsSampleCountAndEdgesInclusive) {
  const auto q = gaussian_samples(5000, 0.3, -0.2, 1.0, 1.0, 1);
  const auto g = q_histogram(q, 5);
  EXPECT_EQ(grid_mass(g), 5000.0);
  for (double d : g.density)
    EXPECT_GE(d, 0.0);
  // auto range: min/max widened by 5% of the span
  const auto [lo, hi] = std::minmax_element(q.x.begin(), q.x.end());
  EXPECT_DOUBLE_EQ(g.x_edges.front(), *lo - 0.05 * (*hi - *lo));
  EXPECT_DOUBLE_EQ(g.x_edges.back(), *hi + 0.05 * (*hi - *lo));

  HistogramOptions tight;
  tight.bins = 4;
  tight.x_range = AxisRange{0.0, 1.0};
  tight.y_range = AxisRange{0.0, 1.0};
  const std::vector<double> xs{0.0, 1.0, 0.5, 2.0}, ys{0.0, 1.0, 0.5, 0.5};
  const auto t = histogram2d(xs, ys, tight);
  EXPECT_EQ(grid_mass(t), 3.0); // the 2.0 sample is outside
  EXPECT_EQ(t.at(0, 0), 1.0);
  EXPECT_EQ(t.at(3, 3), 1.0); // right edge is inclusive
}

TEST(Histogram, CentroidNearTruth) {
  const auto q = gaussian_samples(8000, 2.0, -1.0, 1.0, 1.0, 2);
  const auto m = grid_moments(q_histogram(q, 5));
  const double se = 1.0 / std::sqrt(8000.0);
  // binning shifts the centroid by at most half a bin
  const double half_bin = 0.5 * (q_histogram(q, 5).x_edges[1] - q_histogram(q, 5).x_edges[0]);
  EXPECT_LT(std::abs(m.mean_x - 2.0), 2 * se + half_bin);
  EXPECT_LT(std::abs(m.mean_y + 1.0), 2 * se + half_bin);
}

TEST(Kde, ScottBandwidth) {
  // sample standardised to unit variance: h = 4096^(-1/6) = 1/4
  auto q = gaussian_samples(4096, 0.0, 0.0, 1.0, 1.0, 3);
  const double m = oracle::plain_mean(q.x);
  const double s = std::sqrt(oracle::plain_variance(q.x));
  for (double &v : q.x)
    v = (v - m) / s;
  EXPECT_NEAR(scott_bandwidth(q.x), std::pow(4096.0, -1.0 / 6.0), 1e-12);
  EXPECT_NEAR(scott_bandwidth(q.x), 0.25, 1e-12);
}

TEST(Kde, IntegratesToOneAndMatchesDirectSum) {
  const auto q = gaussian_samples(500, 1.0, -1.0, 1.2, 0.8, 4);
  KdeOptions opt;
  opt.grid = 64;
  const auto g = q_kde(q, 5, opt);
  ASSERT_EQ(g.nx(), 64u);
  EXPECT_NEAR(grid_mass(g), 1.0, 1e-3);

  // oracle: the kernel sum written out, with the same Scott bandwidths
  const double hx = std::sqrt(oracle::plain_variance(q.x)) * std::pow(500.0, -1.0 / 6.0);
  const double hy = std::sqrt(oracle::plain_variance(q.y)) * std::pow(500.0, -1.0 / 6.0);
  EXPECT_NEAR(g.x_edges.front(), *std::min_element(q.x.begin(), q.x.end()) - 3 * hx, 1e-12);
  for (std::size_t iy : {10u, 32u, 50u})
    for (std::size_t ix : {5u, 31u, 60u}) {
      double s = 0.0;
      for (std::size_t i = 0; i < 500; ++i) {
        const double dx = (g.x_edges[ix] - q.x[i]) / hx, dy = (g.y_edges[iy] - q.y[i]) / hy;
        s += std::exp(-0.5 * (dx * dx + dy * dy));
      }
      const double expect = s / (2 * std::numbers::pi * hx * hy * 500);
      EXPECT_NEAR(g.at(ix, iy), expect, 2e-3 * expect + 1e-9) << ix << "," << iy;
      EXPECT_NEAR(kde_evaluate(q.x, q.y, hx, hy, g.x_edges[ix], g.y_edges[iy]), expect,
                  1e-12 * expect + 1e-15);
    }
}

TEST(Kde, VacuumWidthIsOnePlusBandwidthSquared) {
  const auto q = gaussian_samples(4000, 0.0, 0.0, 1.0, 1.0, 5);
  const auto g = q_kde(q, 5);
  const auto m = grid_moments(g);
  const double hx = scott_bandwidth(q.x), hy = scott_bandwidth(q.y);
  EXPECT_NEAR(m.var_x, oracle::plain_variance(q.x) + hx * hx, 0.01);
  EXPECT_NEAR(m.var_y, oracle::plain_variance(q.y) + hy * hy, 0.01);
  EXPECT_NEAR(m.var_x, 1.0 + hx * hx, 0.06);
  EXPECT_LT(std::hypot(m.mean_x, m.mean_y), 4.0 / std::sqrt(4000.0));
}

TEST(Kde, ZeroVarianceDirectsToHistogram) {
  const std::vector<double> x(10, 1.0), y{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  try {
    kde2d(x, y);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.category(), ErrorCategory::numeric);
    EXPECT_NE(std::string(e.what()).find("histogram"), std::string::npos);
  }
  EXPECT_THROW(kde2d(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST(Kde, PolicyIndependent) {
  const auto q = gaussian_samples(2000, 0.5, 0.5, 1.0, 2.0, 6);
  const auto a = q_kde(q, 5, {}, Execution::serial);
  const auto b = q_kde(q, 5, {}, Execution::parallel);
  EXPECT_EQ(a.density, b.density);
}

TEST(Kde, ArgmaxAgreesWithHistogramMode) {
  const auto q = gaussian_samples(8000, 2.4, 1.1, 1.0, 1.0, 7);
  const auto h = q_histogram(q, 5);
  const auto k = q_kde(q, 5);
  const auto [hx, hy] = grid_argmax(h);
  const auto [kx, ky] = grid_argmax(k);
  const double bw_x = h.x_edges[1] - h.x_edges[0];
  const double bw_y = h.y_edges[1] - h.y_edges[0];
  EXPECT_LE(std::abs(hx - kx), bw_x);
  EXPECT_LE(std::abs(hy - ky), bw_y);
}

TEST(JointQ, SameModeAxesReproduceSingleModeGrid) {
  const auto q = gaussian_samples(1000, 0.0, 1.0, 1.0, 1.0, 8);
  const auto a = joint_q(q, {5, Quadrature::x}, {5, Quadrature::y}, Estimator::histogram);
  const auto b = q_histogram(q, 5);
  EXPECT_EQ(a.density, b.density);
  EXPECT_EQ(a.x_edges, b.x_edges);
  EXPECT_EQ(a.x_label, "x_5");
  EXPECT_EQ(a.y_label, "y_5");
  const auto c = joint_q(q, {5, Quadrature::x}, {5, Quadrature::y}, Estimator::kde);
  EXPECT_EQ(c.density, q_kde(q, 5).density);
  EXPECT_THROW(joint_q(q, {5, Quadrature::x}, {5, Quadrature::x}, Estimator::histogram), Error);
}

TEST(JointQ, CorrelatedAxesAreElongatedAlongTheDiagonal) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  QuadratureSamples q;
  q.modes = {197, 198};
  q.n_shots = 8000;
  q.trace_length = 600;
  for (std::size_t i = 0; i < q.n_shots; ++i) {
    const double common = 1.5 * g(rng);
    q.x.push_back(common + g(rng));
    q.x.push_back(common + g(rng));
    q.y.push_back(g(rng));
    q.y.push_back(g(rng));
  }
  const auto grid = joint_q(q, {197, Quadrature::x}, {198, Quadrature::x}, Estimator::kde);
  EXPECT_EQ(grid.x_label, "x_197");
  EXPECT_EQ(grid.y_label, "x_198");
  const auto m = grid_moments(grid);
  EXPECT_NEAR(m.major_axis_angle, std::numbers::pi / 4, 0.05);
  EXPECT_GT(m.elongation, 1.5);
}

TEST(GridMoments, AngleConvention) {
  QGrid g;
  g.kind = GridKind::kde;
  g.x_edges = {-1, 0, 1};
  g.y_edges = {-1, 0, 1};
  // mass on the anti-diagonal
  g.density = {0, 0, 1, 0, 1, 0, 1, 0, 0};
  const auto m = grid_moments(g);
  EXPECT_NEAR(m.major_axis_angle, -std::numbers::pi / 4, 1e-12);
  EXPECT_TRUE(std::isinf(m.elongation));
}
