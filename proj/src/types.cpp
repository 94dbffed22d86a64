// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "types.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "error.hpp"

namespace deweather {

PointCloud::PointCloud(std::vector<Point> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
        !std::isfinite(p.intensity)) {
      throw Error(ErrorCode::validation,
                  "non-finite coordinate or intensity at point index " +
                      std::to_string(i));
    }
    if (p.intensity < 0.0f) {
      throw Error(ErrorCode::validation,
                  "negative intensity at point index " + std::to_string(i));
    }
  }
}

FilterMask::FilterMask(std::vector<std::uint8_t> keep) : keep_(std::move(keep)) {
  for (std::size_t i = 0; i < keep_.size(); ++i) {
    if (keep_[i] > 1) {
      throw Error(ErrorCode::validation,
                  "mask byte at index " + std::to_string(i) +
                      " is not 0 or 1");
    }
    kept_count_ += keep_[i];
  }
}

LabelSet::LabelSet(std::vector<std::uint32_t> labels,
                   std::unordered_set<std::uint32_t> positive_classes)
    : labels_(std::move(labels)),
      positive_classes_(std::move(positive_classes)) {}

std::vector<double> normalize_intensity(const PointCloud& cloud) {
  std::vector<double> out(cloud.size(), 0.0);
  double max_intensity = 0.0;
  for (const Point& p : cloud.points()) {
    max_intensity = std::max(max_intensity, static_cast<double>(p.intensity));
  }
  if (max_intensity <= 0.0) {
    return out;  // degenerate scan: all points treated as maximally weather-like
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out[i] = static_cast<double>(cloud[i].intensity) / max_intensity;
  }
  return out;
}

Ranges compute_ranges(const PointCloud& cloud) {
  Ranges r(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud[i];
    const double x = p.x;
    const double y = p.y;
    const double z = p.z;
    r[i] = std::sqrt(x * x + y * y + z * z);
  }
  return r;
}

}  // namespace deweather
