// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "error.hpp"

namespace deweather {
namespace {

inline double sq_dist(const std::array<double, 3>& a,
                      const std::array<double, 3>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// Candidate neighbor ordered by (squared distance, point index). The heap
// keeps the k best; on equal distance the lower index wins a slot.
struct Candidate {
  double d2;
  std::uint32_t index;

  bool operator<(const Candidate& o) const {
    return d2 < o.d2 || (d2 == o.d2 && index < o.index);
  }
};

// Fixed-capacity max-heap over Candidate.
class BoundedHeap {
 public:
  explicit BoundedHeap(std::size_t k) : k_(k) { items_.reserve(k); }

  bool full() const { return items_.size() == k_; }
  const Candidate& worst() const { return items_.front(); }

  void offer(const Candidate& c) {
    if (!full()) {
      items_.push_back(c);
      std::push_heap(items_.begin(), items_.end());
    } else if (c < items_.front()) {
      std::pop_heap(items_.begin(), items_.end());
      items_.back() = c;
      std::push_heap(items_.begin(), items_.end());
    }
  }

  std::vector<Candidate>& items() { return items_; }

 private:
  std::size_t k_;
  std::vector<Candidate> items_;
};

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) {
  coords_.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point& p = cloud[i];
    coords_[i] = {static_cast<double>(p.x), static_cast<double>(p.y),
                  static_cast<double>(p.z)};
  }
  if (coords_.empty()) {
    return;
  }
  nodes_.reserve(coords_.size());
  std::vector<std::uint32_t> order(coords_.size());
  std::iota(order.begin(), order.end(), 0u);
  root_ = build(order.data(), order.data() + order.size(), 0);
}

std::int32_t SpatialIndex::build(std::uint32_t* first, std::uint32_t* last,
                                 int depth) {
  if (first >= last) {
    return -1;
  }
  const int axis = depth % 3;
  std::uint32_t* mid = first + (last - first) / 2;
  std::nth_element(first, mid, last, [&](std::uint32_t a, std::uint32_t b) {
    return coords_[a][axis] < coords_[b][axis] ||
           (coords_[a][axis] == coords_[b][axis] && a < b);
  });

  const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{axis, *mid, -1, -1});
  const std::int32_t left = build(first, mid, depth + 1);
  const std::int32_t right = build(mid + 1, last, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<double> SpatialIndex::mean_knn_distance(int k_min) const {
  const std::size_t n = coords_.size();
  if (k_min < 1 || static_cast<std::size_t>(k_min) >= n) {
    throw Error(ErrorCode::config,
                "k_min=" + std::to_string(k_min) +
                    " is out of range for a cloud of N=" + std::to_string(n) +
                    " points (need 1 <= k_min <= N-1)");
  }

  std::vector<double> means(n, 0.0);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t qi = 0; qi < static_cast<std::int64_t>(n); ++qi) {
    const std::size_t query = static_cast<std::size_t>(qi);
    const std::array<double, 3>& q = coords_[query];
    BoundedHeap heap(static_cast<std::size_t>(k_min));

    // Iterative depth-first search with near-side-first ordering.
    std::vector<std::int32_t> stack;
    stack.push_back(root_);
    while (!stack.empty()) {
      const std::int32_t id = stack.back();
      stack.pop_back();
      if (id < 0) {
        continue;
      }
      const Node& node = nodes_[static_cast<std::size_t>(id)];
      if (node.point != query) {
        heap.offer(Candidate{sq_dist(q, coords_[node.point]), node.point});
      }
      const double diff = q[node.axis] - coords_[node.point][node.axis];
      const std::int32_t near = diff < 0.0 ? node.left : node.right;
      const std::int32_t far = diff < 0.0 ? node.right : node.left;
      // The far side can only improve the result while the heap is not full
      // or the splitting plane is at most the current worst distance.
      if (!heap.full() || diff * diff <= heap.worst().d2) {
        stack.push_back(far);
      }
      stack.push_back(near);
    }

    std::vector<Candidate>& found = heap.items();
    std::sort(found.begin(), found.end());
    double sum = 0.0;
    for (const Candidate& c : found) {
      sum += std::sqrt(c.d2);
    }
    means[query] = sum / static_cast<double>(k_min);
  }
  return means;
}

std::size_t SpatialIndex::radius_count(std::size_t i, double radius) const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::invalid_argument,
                "radius must be positive and finite");
  }
  if (i >= coords_.size()) {
    throw Error(ErrorCode::invalid_argument,
                "point index " + std::to_string(i) + " out of range");
  }
  const std::array<double, 3>& q = coords_[i];
  const double r2 = radius * radius;
  std::size_t count = 0;

  std::vector<std::int32_t> stack;
  stack.push_back(root_);
  while (!stack.empty()) {
    const std::int32_t id = stack.back();
    stack.pop_back();
    if (id < 0) {
      continue;
    }
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.point != i && sq_dist(q, coords_[node.point]) <= r2) {
      ++count;
    }
    const double diff = q[node.axis] - coords_[node.point][node.axis];
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    // Closed ball: a plane exactly at distance `radius` can still hold hits.
    if (diff * diff <= r2) {
      stack.push_back(far);
    }
    stack.push_back(near);
  }
  return count;
}

}  // namespace deweather
