// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "error.hpp"

namespace deweather {
namespace {

struct Xyz {
  double x, y, z;
};

// All scene surfaces are sampled on scan-like grids whose spacings carry a
// common density factor u: u = 1 yields roughly 9600 points, and counts
// scale as 1/u^2, so the factor for a requested budget comes from one probe
// generation. Regular spacing (not random thinning) is what gives the scene
// its LiDAR-like neighborhood statistics.
double arc_spacing(double r, double u) {
  return std::clamp(0.02 * r, 0.06, 0.13) * u;
}

std::vector<Xyz> ground_rings(double u) {
  std::vector<Xyz> pts;
  const double sensor_height = 1.6;
  for (double r = 2.0; r <= 6.0; r += 0.13 * u) {
    const double spacing = arc_spacing(r, u);
    const int n_az =
        std::max(8, static_cast<int>(2.0 * std::numbers::pi * r / spacing));
    for (int a = 0; a < n_az; ++a) {
      const double az = 2.0 * std::numbers::pi * a / n_az;
      pts.push_back({r * std::cos(az), r * std::sin(az), -sensor_height});
    }
  }
  return pts;
}

std::vector<Xyz> wall(double u) {
  std::vector<Xyz> pts;
  for (double x = -2.5; x <= 2.5; x += 0.12 * u) {
    for (double z = -1.5; z <= 1.3; z += 0.12 * u) {
      pts.push_back({x, 8.0, z});
    }
  }
  return pts;
}

std::vector<Xyz> posts(double u) {
  std::vector<Xyz> pts;
  const double centers[][2] = {{3.5, 1.5}, {4.5, -2.5}, {-5.0, 2.0}, {6.5, 4.0}};
  const int n_az = std::max(4, static_cast<int>(14.0 / u));
  for (const auto& c : centers) {
    for (int a = 0; a < n_az; ++a) {
      const double az = 2.0 * std::numbers::pi * a / n_az;
      for (double z = -1.6; z <= 0.9; z += 0.1 * u) {
        pts.push_back({c[0] + 0.12 * std::cos(az), c[1] + 0.12 * std::sin(az),
                       z});
      }
    }
  }
  return pts;
}

std::vector<Xyz> scene_surface(double u) {
  std::vector<Xyz> surface = ground_rings(u);
  std::vector<Xyz> more = wall(u);
  surface.insert(surface.end(), more.begin(), more.end());
  more = posts(u);
  surface.insert(surface.end(), more.begin(), more.end());
  return surface;
}

}  // namespace

SynthScene synth_scene(const SynthConfig& cfg) {
  if (!(cfg.weather_fraction >= 0.0) || !(cfg.weather_fraction < 1.0)) {
    throw Error(ErrorCode::config, "weather_fraction must be in [0, 1)");
  }
  if (!(cfg.surface_weather_share >= 0.0) ||
      !(cfg.surface_weather_share <= 1.0)) {
    throw Error(ErrorCode::config, "surface_weather_share must be in [0, 1]");
  }
  if (cfg.total_points < 16) {
    throw Error(ErrorCode::config, "total_points must be at least 16");
  }
  std::mt19937_64 rng(cfg.seed);

  const double scene_budget =
      static_cast<double>(cfg.total_points) * (1.0 - cfg.weather_fraction);
  const double probe_count = static_cast<double>(scene_surface(1.0).size());
  const double u = std::clamp(std::sqrt(probe_count / scene_budget), 0.25, 8.0);
  const std::vector<Xyz> surface = scene_surface(u);

  const std::size_t n_scene = surface.size();
  const std::size_t n_weather = static_cast<std::size_t>(std::llround(
      static_cast<double>(n_scene) * cfg.weather_fraction /
      (1.0 - cfg.weather_fraction)));
  std::size_t n_surface_weather = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_weather) * cfg.surface_weather_share));
  n_surface_weather = std::min(n_surface_weather, n_weather);
  const std::size_t n_free_weather = n_weather - n_surface_weather;

  std::uniform_real_distribution<double> jitter(-0.005, 0.005);
  std::uniform_real_distribution<double> scene_intensity(
      cfg.scene_intensity_lo, cfg.scene_intensity_hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Point> points;
  std::vector<std::uint32_t> labels;
  points.reserve(n_scene + n_weather);
  labels.reserve(n_scene + n_weather);

  for (const Xyz& s : surface) {
    Point p{};
    p.x = static_cast<float>(s.x + jitter(rng));
    p.y = static_cast<float>(s.y + jitter(rng));
    p.z = static_cast<float>(s.z + jitter(rng));
    p.intensity = static_cast<float>(scene_intensity(rng));
    points.push_back(p);
    labels.push_back(0);
  }

  // Free-floating weather: ranges i.i.d. Gamma, dim intensities.
  const PointCloud airborne = sample_weather_points(
      cfg.weather, n_free_weather, cfg.weather_intensity_hi,
      cfg.seed ^ 0x9e3779b97f4a7c15ull);
  for (const Point& p : airborne.points()) {
    points.push_back(p);
    labels.push_back(cfg.weather_label);
  }

  // Surface-adjacent weather: dim returns hovering just off real structure,
  // indistinguishable from it by neighborhood statistics alone.
  std::uniform_real_distribution<double> offset_len(0.05, 0.20);
  std::uniform_real_distribution<double> weather_intensity(
      0.0, cfg.weather_intensity_hi);
  for (std::size_t i = 0; i < n_surface_weather; ++i) {
    const Xyz& host = surface[static_cast<std::size_t>(
        static_cast<double>(surface.size()) * unit(rng))];
    const double len = offset_len(rng);
    const double az = 2.0 * std::numbers::pi * unit(rng);
    const double el = std::acos(2.0 * unit(rng) - 1.0);
    Point p{};
    p.x = static_cast<float>(host.x + len * std::sin(el) * std::cos(az));
    p.y = static_cast<float>(host.y + len * std::sin(el) * std::sin(az));
    p.z = static_cast<float>(host.z + len * std::cos(el));
    p.intensity = static_cast<float>(weather_intensity(rng));
    points.push_back(p);
    labels.push_back(cfg.weather_label);
  }

  // Interleave scene and weather deterministically.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Point> shuffled_points(points.size());
  std::vector<std::uint32_t> shuffled_labels(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    shuffled_points[i] = points[order[i]];
    shuffled_labels[i] = labels[order[i]];
  }

  SynthScene scene;
  scene.cloud = PointCloud(std::move(shuffled_points));
  scene.labels = std::move(shuffled_labels);
  return scene;
}

}  // namespace deweather
