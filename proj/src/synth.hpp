// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded synthetic scenes for fixtures and benchmarks: structured geometry
// (ground rings, a wall, posts) sampled on LiDAR-like grids with
// near-dense/far-sparse spacing, plus low-intensity weather returns. A
// configurable share of the weather points is placed adjacent to scene
// surfaces, where geometry alone cannot separate them from real returns.

#ifndef DEWEATHER_SYNTH_HPP_
#define DEWEATHER_SYNTH_HPP_

#include <cstdint>
#include <vector>

#include "types.hpp"
#include "weather.hpp"

namespace deweather {

struct SynthConfig {
  std::size_t total_points = 12000;
  double weather_fraction = 0.2;       // weather / total
  double surface_weather_share = 0.12; // share of weather placed on surfaces
  GammaParams weather = GammaParams::defaults();
  std::uint32_t weather_label = 110;
  std::uint64_t seed = 1;

  // Raw intensity bands: scene returns are bright, weather returns dim,
  // with a thin overlap so intensity alone cannot separate them either.
  double scene_intensity_lo = 30.0;
  double scene_intensity_hi = 100.0;
  double weather_intensity_hi = 35.0;
};

struct SynthScene {
  PointCloud cloud;
  std::vector<std::uint32_t> labels;  // weather_label for weather points, 0 else
};

SynthScene synth_scene(const SynthConfig& cfg);

}  // namespace deweather

#endif  // DEWEATHER_SYNTH_HPP_
