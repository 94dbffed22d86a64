// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations. Everything here is deliberately
// brute-force and independent of the library's query/filter code paths: the
// oracles recompute results from first principles so the fast paths can be
// checked against them.

#ifndef DEWEATHER_TESTS_ORACLES_HPP_
#define DEWEATHER_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "types.hpp"

namespace deweather::oracle {

inline double sq_dist(const Point& a, const Point& b) {
  const double dx = static_cast<double>(a.x) - static_cast<double>(b.x);
  const double dy = static_cast<double>(a.y) - static_cast<double>(b.y);
  const double dz = static_cast<double>(a.z) - static_cast<double>(b.z);
  return dx * dx + dy * dy + dz * dz;
}

// O(N^2) mean distance to the k nearest neighbors, ties by lower index.
inline std::vector<double> mean_knn(const PointCloud& cloud, int k) {
  const std::size_t n = cloud.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> dists;
    dists.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        dists.emplace_back(sq_dist(cloud[i], cloud[j]), j);
      }
    }
    std::sort(dists.begin(), dists.end());
    double sum = 0.0;
    for (int m = 0; m < k; ++m) {
      sum += std::sqrt(dists[static_cast<std::size_t>(m)].first);
    }
    out[i] = sum / static_cast<double>(k);
  }
  return out;
}

// O(N) closed-ball neighbor count.
inline std::size_t radius_count(const PointCloud& cloud, std::size_t i,
                                double radius) {
  const double r2 = radius * radius;
  std::size_t count = 0;
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    if (j != i && sq_dist(cloud[i], cloud[j]) <= r2) {
      ++count;
    }
  }
  return count;
}

struct Confusion {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Per-point confusion enumeration (removed = positive prediction).
inline Confusion confusion(const FilterMask& mask, const LabelSet& labels) {
  Confusion c;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool removed = !mask.kept(i);
    const bool positive = labels.positive(i);
    if (removed && positive) ++c.tp;
    else if (removed) ++c.fp;
    else if (positive) ++c.fn;
    else ++c.tn;
  }
  return c;
}

// Uniform random cloud in a cube, seeded.
inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n,
                               double extent = 10.0,
                               double max_intensity = 100.0) {
  std::uniform_real_distribution<double> coord(-extent, extent);
  std::uniform_real_distribution<double> intensity(0.0, max_intensity);
  std::vector<Point> pts(n);
  for (Point& p : pts) {
    p.x = static_cast<float>(coord(rng));
    p.y = static_cast<float>(coord(rng));
    p.z = static_cast<float>(coord(rng));
    p.intensity = static_cast<float>(intensity(rng));
  }
  return PointCloud(std::move(pts));
}

// Recursive adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const std::function<double(double, double, double, double, double, double,
                             double, int)>
      step = [&](double x0, double x1, double fx0, double fx1, double fxm,
                 double acc, double eps, int d) -> double {
    const double xm = 0.5 * (x0 + x1);
    const double lm = 0.5 * (x0 + xm);
    const double rm = 0.5 * (xm + x1);
    const double flm = f(lm), frm = f(rm);
    const double left = (xm - x0) / 6.0 * (fx0 + 4.0 * flm + fxm);
    const double right = (x1 - xm) / 6.0 * (fxm + 4.0 * frm + fx1);
    if (d <= 0 || std::abs(left + right - acc) <= 15.0 * eps) {
      return left + right + (left + right - acc) / 15.0;
    }
    return step(x0, xm, fx0, fxm, flm, left, eps / 2.0, d - 1) +
           step(xm, x1, fxm, fx1, frm, right, eps / 2.0, d - 1);
  };
  return step(a, b, fa, fb, fm, whole, tol, depth);
}

// Golden-section maximizer for a unimodal function on [a, b].
inline double golden_argmax(const std::function<double(double)>& f, double a,
                            double b, double tol = 1e-9) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace deweather::oracle

#endif  // DEWEATHER_TESTS_ORACLES_HPP_
