#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace uqst::oracle {

using Complex = std::complex<double>;

/// Positive-exponent unitary DFT by direct summation, in long double.
inline std::vector<Complex> direct_dft(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<Complex> out(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t p = 0; p < n; ++p) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double a = two_pi * static_cast<long double>((p * j) % n) / n;
      re += v[j] * std::cos(a);
      im += v[j] * std::sin(a);
    }
    const long double s = 1.0L / std::sqrt(static_cast<long double>(n));
    out[p] = Complex(static_cast<double>(re * s), static_cast<double>(im * s));
  }
  return out;
}

/// Same transform applied to a complex field.
inline std::vector<Complex> direct_dft(std::span<const Complex> v) {
  const std::size_t n = v.size();
  std::vector<Complex> out(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (std::size_t p = 0; p < n; ++p) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const long double a = two_pi * static_cast<long double>((p * j) % n) / n;
      const long double c = std::cos(a), s = std::sin(a);
      re += v[j].real() * c - v[j].imag() * s;
      im += v[j].real() * s + v[j].imag() * c;
    }
    const long double s = 1.0L / std::sqrt(static_cast<long double>(n));
    out[p] = Complex(static_cast<double>(re * s), static_cast<double>(im * s));
  }
  return out;
}

/// Single coefficient p of the same transform.
inline Complex direct_coefficient(std::span<const Complex> v, std::size_t p) {
  const std::size_t n = v.size();
  Complex acc{};
  for (std::size_t j = 0; j < n; ++j)
    acc += v[j] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((p * j) % n) / n);
  return acc / std::sqrt(static_cast<double>(n));
}

inline double plain_mean(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v)
    s += x;
  return static_cast<double>(s / v.size());
}

inline double plain_variance(std::span<const double> v) {
  const double m = plain_mean(v);
  long double s = 0.0L;
  for (double x : v)
    s += (x - m) * (x - m);
  return static_cast<double>(s / (v.size() - 1));
}

/// One-sample Kolmogorov-Smirnov statistic against U[lo, hi).
inline double ks_uniform(std::vector<double> v, double lo, double hi) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = (v[i] - lo) / (hi - lo);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v)
      ++i;
    while (j < b.size() && b[j] <= v)
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Asymptotic KS critical value c(alpha) * sqrt((n+m)/(n m)); c = 1.628 at 1%.
inline double ks_critical_1pct(std::size_t n, std::size_t m = 0) {
  const double scale = m == 0 ? 1.0 / std::sqrt(static_cast<double>(n))
                              : std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
  return 1.628 * scale;
}

/// Pearson chi-square of counts against a uniform expectation.
inline double chi_square_uniform(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts)
    total += c;
  const double e = total / counts.size();
  double chi2 = 0.0;
  for (double c : counts)
    chi2 += (c - e) * (c - e) / e;
  return chi2;
}

/// Angle histogram of atan2(y, x) into `bins` equal sectors.
inline std::vector<double> angle_histogram(std::span<const double> x, std::span<const double> y,
                                           std::size_t bins) {
  std::vector<double> h(bins, 0.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = std::atan2(y[i], x[i]);
    if (a < 0)
      a += two_pi;
    auto b = static_cast<std::size_t>(a / two_pi * bins);
    h[std::min(b, bins - 1)] += 1.0;
  }
  return h;
}

/// Upper 1% points of chi-square for the degrees of freedom used in tests.
inline double chi_square_crit_1pct(int dof) {
  switch (dof) {
  case 7: return 18.475;
  case 11: return 24.725;
  case 15: return 30.578;
  case 19: return 36.191;
  }
  return NAN;
}

} // namespace uqst::oracle
