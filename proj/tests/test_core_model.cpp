// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "error.hpp"
#include "oracles.hpp"
#include "types.hpp"

using namespace deweather;

namespace {

PointCloud cloud_from_intensities(const std::vector<float>& intensities) {
  std::vector<Point> pts;
  for (float v : intensities) {
    pts.push_back(Point{0.0f, 0.0f, 0.0f, v});
  }
  return PointCloud(std::move(pts));
}

}  // namespace

TEST_CASE("normalize_intensity divides by the per-scan maximum") {
  const auto out = normalize_intensity(cloud_from_intensities({10, 20, 40}));
  REQUIRE(out.size() == 3);
  CHECK(out[0] == 0.25);
  CHECK(out[1] == 0.5);
  CHECK(out[2] == 1.0);
}

TEST_CASE("normalize_intensity single point is its own maximum") {
  const auto out = normalize_intensity(cloud_from_intensities({7}));
  REQUIRE(out.size() == 1);
  CHECK(out[0] == 1.0);
}

TEST_CASE("normalize_intensity all-zero scan maps to zeros") {
  const auto out = normalize_intensity(cloud_from_intensities({0, 0, 0}));
  CHECK(out == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("normalize_intensity empty cloud") {
  CHECK(normalize_intensity(PointCloud()).empty());
}

TEST_CASE("normalize_intensity is invariant under uniform scaling") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> raw(0.0, 255.0);
  for (double scale : {0.25, 3.7, 1000.0}) {
    std::vector<float> a, b;
    for (int i = 0; i < 200; ++i) {
      const double v = raw(rng);
      a.push_back(static_cast<float>(v));
      b.push_back(static_cast<float>(v * scale));
    }
    const auto na = normalize_intensity(cloud_from_intensities(a));
    const auto nb = normalize_intensity(cloud_from_intensities(b));
    for (std::size_t i = 0; i < na.size(); ++i) {
      CHECK(nb[i] == doctest::Approx(na[i]).epsilon(1e-6));
    }
  }
}

TEST_CASE("compute_ranges basic values") {
  std::vector<Point> pts = {{0, 0, 0, 1}, {3, 4, 0, 1}, {1, 1, 1, 1}};
  const Ranges r = compute_ranges(PointCloud(std::move(pts)));
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 5.0);
  CHECK(r[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("compute_ranges is rotation invariant") {
  std::mt19937_64 rng(7);
  const PointCloud cloud = oracle::random_cloud(rng, 300);
  const Ranges before = compute_ranges(cloud);

  // Random rotation about z then x.
  std::uniform_real_distribution<double> angle(0.0, 6.28);
  const double a = angle(rng), b = angle(rng);
  std::vector<Point> rotated;
  for (const Point& p : cloud.points()) {
    const double x1 = std::cos(a) * p.x - std::sin(a) * p.y;
    const double y1 = std::sin(a) * p.x + std::cos(a) * p.y;
    const double z1 = p.z;
    Point q{};
    q.x = static_cast<float>(x1);
    q.y = static_cast<float>(std::cos(b) * y1 - std::sin(b) * z1);
    q.z = static_cast<float>(std::sin(b) * y1 + std::cos(b) * z1);
    q.intensity = p.intensity;
    rotated.push_back(q);
  }
  const Ranges after = compute_ranges(PointCloud(std::move(rotated)));
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-6));
  }
}

TEST_CASE("cloud construction rejects non-finite and negative data") {
  const float nan = std::numeric_limits<float>::quiet_NaN();
  const float inf = std::numeric_limits<float>::infinity();

  CHECK_THROWS_WITH_AS(PointCloud({{0, 0, 0, 1}, {nan, 0, 0, 1}}),
                       doctest::Contains("index 1"), Error);
  CHECK_THROWS_AS(PointCloud({{0, inf, 0, 1}}), Error);
  CHECK_THROWS_AS(PointCloud({{0, 0, 0, nan}}), Error);
  CHECK_THROWS_AS(PointCloud({{0, 0, 0, -1.0f}}), Error);
  try {
    PointCloud({{1, 2, 3, -5.0f}});
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
}

TEST_CASE("filter mask counts and byte validation") {
  const FilterMask mask(std::vector<std::uint8_t>{1, 0, 1, 1});
  CHECK(mask.size() == 4);
  CHECK(mask.kept_count() == 3);
  CHECK(mask.removed_count() == 1);
  CHECK(mask.kept(0));
  CHECK_FALSE(mask.kept(1));
  CHECK_THROWS_AS(FilterMask(std::vector<std::uint8_t>{1, 2}), Error);
}

TEST_CASE("label set positivity") {
  const LabelSet labels({110, 0, 40, 110}, {110});
  CHECK(labels.size() == 4);
  CHECK(labels.positive(0));
  CHECK_FALSE(labels.positive(1));
  CHECK_FALSE(labels.positive(2));
  CHECK(labels.positive(3));
}
