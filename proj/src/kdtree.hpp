// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// Immutable 3-D KD-tree over a point cloud. Supports the two neighborhood
// queries the filter suite needs: mean distance to the k nearest neighbors
// (query point excluded) and neighbor count within a closed ball. Results are
// exact: they agree with brute force over the source cloud, with kNN ties
// broken toward the lower point index.

#ifndef DEWEATHER_KDTREE_HPP_
#define DEWEATHER_KDTREE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "types.hpp"

namespace deweather {

class SpatialIndex {
 public:
  explicit SpatialIndex(const PointCloud& cloud);

  std::size_t size() const noexcept { return coords_.size(); }

  // Mean Euclidean distance from every point to its k_min nearest neighbors.
  // Requires 1 <= k_min <= N-1; anything else is a configuration error (no
  // silent clamping).
  std::vector<double> mean_knn_distance(int k_min) const;

  // Number of points j != i with |p_j - p_i| <= radius (closed ball).
  std::size_t radius_count(std::size_t i, double radius) const;

 private:
  struct Node {
    std::int32_t axis = -1;       // split axis; -1 marks a leaf
    std::uint32_t point = 0;      // point index stored at this node
    std::int32_t left = -1;       // child node ids, -1 if absent
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t* first, std::uint32_t* last, int depth);

  std::vector<std::array<double, 3>> coords_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace deweather

#endif  // DEWEATHER_KDTREE_HPP_
