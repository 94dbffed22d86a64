// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// Core domain types: points, clouds, masks, labels. Everything is immutable
// after construction and index-aligned: index i in a mask, label set or
// derived vector always refers to cloud[i].

#ifndef DEWEATHER_TYPES_HPP_
#define DEWEATHER_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <unordered_set>
#include <vector>

namespace deweather {

// One LiDAR return. Layout matches the KITTI binary record (4 x float32,
// little endian), so scans can be moved to/from disk without conversion.
struct Point {
  float x;
  float y;
  float z;
  float intensity;  // raw reflectance as recorded, >= 0
};

static_assert(sizeof(Point) == 16 && std::is_trivially_copyable_v<Point>,
              "Point must match the 16-byte wire record");

// Sensor-centric ranges, meters; r[i] = |cloud[i]|.
using Ranges = std::vector<double>;

// Ordered, index-addressable point collection. The constructor enforces the
// ingestion invariants (finite coordinates and intensity, intensity >= 0);
// a cloud that exists is a valid cloud.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point> points);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }

 private:
  std::vector<Point> points_;
};

// Per-point keep/remove verdict, aligned to the source cloud. Stored as one
// byte per point (1 = inlier/kept, 0 = outlier/removed), which is also the
// sidecar file format.
class FilterMask {
 public:
  FilterMask() = default;
  explicit FilterMask(std::vector<std::uint8_t> keep);

  std::size_t size() const noexcept { return keep_.size(); }
  bool kept(std::size_t i) const { return keep_[i] != 0; }
  std::size_t kept_count() const noexcept { return kept_count_; }
  std::size_t removed_count() const noexcept { return keep_.size() - kept_count_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return keep_; }

 private:
  std::vector<std::uint8_t> keep_;
  std::size_t kept_count_ = 0;
};

// Per-point semantic class ids plus the set of ids that count as weather
// returns (the positive class for evaluation).
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::vector<std::uint32_t> labels,
           std::unordered_set<std::uint32_t> positive_classes);

  std::size_t size() const noexcept { return labels_.size(); }
  std::uint32_t label(std::size_t i) const { return labels_[i]; }
  bool positive(std::size_t i) const {
    return positive_classes_.count(labels_[i]) != 0;
  }
  const std::vector<std::uint32_t>& labels() const noexcept { return labels_; }
  const std::unordered_set<std::uint32_t>& positive_classes() const noexcept {
    return positive_classes_;
  }

 private:
  std::vector<std::uint32_t> labels_;
  std::unordered_set<std::uint32_t> positive_classes_;
};

// Intensities scaled by the per-scan maximum, in [0, 1]. A scan whose maximum
// intensity is zero normalizes to all zeros; an empty cloud yields an empty
// vector.
std::vector<double> normalize_intensity(const PointCloud& cloud);

// Euclidean range of every point from the sensor origin.
Ranges compute_ranges(const PointCloud& cloud);

}  // namespace deweather

#endif  // DEWEATHER_TYPES_HPP_
