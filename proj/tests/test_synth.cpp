// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "error.hpp"
#include "synth.hpp"
#include "types.hpp"

using namespace deweather;

TEST_CASE("synthetic scenes are deterministic per seed") {
  SynthConfig cfg;
  cfg.total_points = 3000;
  cfg.seed = 123;
  const SynthScene a = synth_scene(cfg);
  const SynthScene b = synth_scene(cfg);
  REQUIRE(a.cloud.size() == b.cloud.size());
  for (std::size_t i = 0; i < a.cloud.size(); ++i) {
    CHECK(a.cloud[i].x == b.cloud[i].x);
    CHECK(a.cloud[i].intensity == b.cloud[i].intensity);
  }
  CHECK(a.labels == b.labels);

  cfg.seed = 124;
  const SynthScene c = synth_scene(cfg);
  bool identical = a.cloud.size() == c.cloud.size();
  if (identical) {
    for (std::size_t i = 0; i < a.cloud.size(); ++i) {
      if (a.cloud[i].x != c.cloud[i].x) {
        identical = false;
        break;
      }
    }
  }
  CHECK_FALSE(identical);
}

TEST_CASE("labels mark exactly the weather points, at the requested share") {
  SynthConfig cfg;
  cfg.total_points = 10000;
  cfg.weather_fraction = 0.2;
  cfg.seed = 9;
  const SynthScene scene = synth_scene(cfg);
  REQUIRE(scene.labels.size() == scene.cloud.size());

  std::size_t weather = 0;
  for (std::uint32_t l : scene.labels) {
    CHECK((l == 0 || l == cfg.weather_label));
    weather += l == cfg.weather_label;
  }
  const double frac =
      static_cast<double>(weather) / static_cast<double>(scene.labels.size());
  CHECK(std::abs(frac - 0.2) < 0.01);

  // Weather points are dim, scene points bright, with the documented bands.
  for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
    if (scene.labels[i] == cfg.weather_label) {
      CHECK(scene.cloud[i].intensity <= cfg.weather_intensity_hi);
    } else {
      CHECK(scene.cloud[i].intensity >= cfg.scene_intensity_lo);
    }
  }
}

TEST_CASE("free weather ranges follow the configured gamma distribution") {
  SynthConfig cfg;
  cfg.total_points = 40000;
  cfg.weather_fraction = 0.5;
  cfg.surface_weather_share = 0.0;  // all weather airborne
  cfg.seed = 31;
  const SynthScene scene = synth_scene(cfg);
  const Ranges r = compute_ranges(scene.cloud);

  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (scene.labels[i] == cfg.weather_label) {
      sum += r[i];
      ++n;
    }
  }
  REQUIRE(n > 1000);
  const double mean = sum / static_cast<double>(n);
  CHECK(std::abs(mean - 2.15 * 2.38) / (2.15 * 2.38) < 0.03);
}

TEST_CASE("synth configuration validation") {
  SynthConfig cfg;
  cfg.weather_fraction = 1.0;
  CHECK_THROWS_AS(synth_scene(cfg), Error);
  cfg.weather_fraction = 0.2;
  cfg.surface_weather_share = 1.5;
  CHECK_THROWS_AS(synth_scene(cfg), Error);
  cfg.surface_weather_share = 0.1;
  cfg.total_points = 4;
  CHECK_THROWS_AS(synth_scene(cfg), Error);
}
