// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "weather.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "error.hpp"

namespace deweather {

GammaParams::GammaParams(double shape, double scale)
    : shape_(shape), scale_(scale) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(ErrorCode::invalid_argument,
                "gamma shape must be finite and > 0, got " +
                    std::to_string(shape));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorCode::invalid_argument,
                "gamma scale must be finite and > 0, got " +
                    std::to_string(scale));
  }
}

std::uint64_t RangeHistogram::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) {
    sum += c;
  }
  return sum;
}

double RangeHistogram::density(std::size_t bin) const {
  const std::uint64_t n = total();
  if (n == 0 || bin >= counts.size()) {
    return 0.0;
  }
  return static_cast<double>(counts[bin]) /
         (static_cast<double>(n) * bin_width);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::invalid_argument,
                "log_gamma requires finite x > 0");
  }
  // Lanczos, g = 7, 9 coefficients.
  static constexpr double kCoeff[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the series argument away from small x.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double series = kCoeff[0];
  for (int i = 1; i < 9; ++i) {
    series += kCoeff[i] / (z + static_cast<double>(i));
  }
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(series);
}

double gamma_pdf(const GammaParams& params, double r) {
  if (!std::isfinite(r)) {
    throw Error(ErrorCode::invalid_argument, "gamma_pdf requires finite r");
  }
  if (r < 0.0) {
    return 0.0;
  }
  const double k = params.shape();
  const double theta = params.scale();
  if (r == 0.0) {
    if (k > 1.0) return 0.0;
    if (k == 1.0) return 1.0 / theta;
    return std::numeric_limits<double>::infinity();
  }
  const double log_pdf =
      (k - 1.0) * std::log(r) - r / theta - log_gamma(k) - k * std::log(theta);
  return std::exp(log_pdf);
}

RangeHistogram build_histogram(const Ranges& ranges, double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw Error(ErrorCode::invalid_argument,
                "histogram bin width must be finite and > 0");
  }
  RangeHistogram hist;
  hist.bin_width = bin_width;
  for (double r : ranges) {
    const std::size_t bin = static_cast<std::size_t>(std::floor(r / bin_width));
    if (bin >= hist.counts.size()) {
      hist.counts.resize(bin + 1, 0);
    }
    ++hist.counts[bin];
  }
  return hist;
}

GammaParams fit_gamma_mom(const Ranges& ranges) {
  const std::size_t n = ranges.size();
  if (n < 2) {
    throw Error(ErrorCode::fit, "gamma fit needs at least 2 range samples, got " +
                                    std::to_string(n));
  }
  double mean = 0.0;
  for (double r : ranges) {
    mean += r;
  }
  mean /= static_cast<double>(n);
  double variance = 0.0;
  for (double r : ranges) {
    const double d = r - mean;
    variance += d * d;
  }
  variance /= static_cast<double>(n);  // population convention
  if (!(variance > 0.0) || !(mean > 0.0)) {
    throw Error(ErrorCode::fit,
                "gamma fit needs positive mean and nonzero variance (mean=" +
                    std::to_string(mean) + ", var=" + std::to_string(variance) +
                    ")");
  }
  return GammaParams(mean * mean / variance, variance / mean);
}

double alpha_weight(const GammaParams& params, Severity severity, double r) {
  if (!(severity.rho >= 0.0) || !std::isfinite(severity.rho)) {
    throw Error(ErrorCode::invalid_argument,
                "severity rho must be finite and >= 0");
  }
  const double x = severity.rho * gamma_pdf(params, r);
  // 1 - 1/(1+x) instead of x/(x+1): stays exact at x = 0 and handles the
  // x = +inf limit (k < 1 density at r = 0) without producing NaN.
  return 1.0 - 1.0 / (1.0 + x);
}

PointCloud sample_weather_points(const GammaParams& params, std::size_t count,
                                 double intensity_ceiling, std::uint64_t seed) {
  if (!(intensity_ceiling >= 0.0) || !std::isfinite(intensity_ceiling)) {
    throw Error(ErrorCode::invalid_argument,
                "intensity ceiling must be finite and >= 0");
  }
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> range_dist(params.shape(), params.scale());
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> elevation(-std::numbers::pi / 6.0,
                                                   std::numbers::pi / 6.0);
  std::uniform_real_distribution<double> intensity(0.0, intensity_ceiling);

  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = range_dist(rng);
    const double az = azimuth(rng);
    const double el = elevation(rng);
    const double raw = intensity_ceiling > 0.0 ? intensity(rng) : 0.0;
    Point p{};
    p.x = static_cast<float>(r * std::cos(el) * std::cos(az));
    p.y = static_cast<float>(r * std::cos(el) * std::sin(az));
    p.z = static_cast<float>(r * std::sin(el));
    p.intensity = static_cast<float>(raw);
    points.push_back(p);
  }
  return PointCloud(std::move(points));
}

}  // namespace deweather
