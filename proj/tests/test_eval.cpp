// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "error.hpp"
#include "eval.hpp"
#include "filters.hpp"
#include "oracles.hpp"
#include "types.hpp"

using namespace deweather;

namespace {

FilterMask mask_of(std::vector<std::uint8_t> keep) {
  return FilterMask(std::move(keep));
}

}  // namespace

TEST_CASE("perfect filter scores 1/1") {
  // Positives removed, negatives kept.
  const LabelSet labels({110, 0, 110, 0}, {110});
  const EvalReport r = evaluate(mask_of({0, 1, 0, 1}), labels);
  CHECK(r.tp == 2);
  CHECK(r.fp == 0);
  CHECK(r.tn == 2);
  CHECK(r.fn == 0);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
}

TEST_CASE("mixed removal matches direct counting") {
  // removed = 9 positive + 1 negative; kept = 5 positive + 85 negative.
  std::vector<std::uint32_t> labels;
  std::vector<std::uint8_t> keep;
  for (int i = 0; i < 9; ++i) { labels.push_back(110); keep.push_back(0); }
  for (int i = 0; i < 1; ++i) { labels.push_back(0); keep.push_back(0); }
  for (int i = 0; i < 5; ++i) { labels.push_back(110); keep.push_back(1); }
  for (int i = 0; i < 85; ++i) { labels.push_back(0); keep.push_back(1); }

  const EvalReport r =
      evaluate(mask_of(std::move(keep)), LabelSet(std::move(labels), {110}));
  CHECK(r.tp == 9);
  CHECK(r.fp == 1);
  CHECK(r.tn == 85);
  CHECK(r.fn == 5);
  CHECK(*r.precision == 0.9);
  CHECK(*r.recall == doctest::Approx(9.0 / 14.0).epsilon(1e-12));
}

TEST_CASE("degenerate masks") {
  const LabelSet labels({110, 0, 110}, {110});

  SUBCASE("nothing removed: precision undefined, recall zero") {
    const EvalReport r = evaluate(mask_of({1, 1, 1}), labels);
    CHECK(r.tp == 0);
    CHECK(r.fp == 0);
    CHECK(r.fn == 2);
    CHECK_FALSE(r.precision.has_value());
    CHECK(r.recall == 0.0);
  }

  SUBCASE("everything removed: recall one, precision = positive share") {
    const EvalReport r = evaluate(mask_of({0, 0, 0}), labels);
    CHECK(r.recall == 1.0);
    CHECK(*r.precision == doctest::Approx(2.0 / 3.0));
  }

  SUBCASE("no positive labels in the scan: recall undefined") {
    const LabelSet clean({0, 1, 0}, {110});
    const EvalReport r = evaluate(mask_of({1, 0, 1}), clean);
    CHECK_FALSE(r.recall.has_value());
    CHECK(*r.precision == 0.0);
  }
}

TEST_CASE("evaluate alignment and configuration errors") {
  const LabelSet labels({110, 0}, {110});
  CHECK_THROWS_AS(evaluate(mask_of({1, 1, 1}), labels), Error);
  try {
    evaluate(mask_of({1}), labels);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::alignment);
  }
  CHECK_THROWS_AS(evaluate(mask_of({1, 1}), LabelSet({1, 2}, {})), Error);
}

TEST_CASE("counts match brute-force enumeration on random pairs") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng() % 2000;
    std::vector<std::uint8_t> keep(n);
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      keep[i] = rng() % 2;
      labels[i] = rng() % 4;
    }
    const FilterMask mask(std::move(keep));
    const LabelSet label_set(std::move(labels), {1, 3});
    const EvalReport r = evaluate(mask, label_set);
    const oracle::Confusion c = oracle::confusion(mask, label_set);
    CHECK(r.tp == c.tp);
    CHECK(r.fp == c.fp);
    CHECK(r.tn == c.tn);
    CHECK(r.fn == c.fn);
    CHECK(r.tp + r.fp + r.tn + r.fn == n);
  }
}

TEST_CASE("complementing the positive classes flips tp/fp and tn/fn") {
  std::mt19937_64 rng(59);
  const std::size_t n = 500;
  std::vector<std::uint8_t> keep(n);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    keep[i] = rng() % 2;
    labels[i] = rng() % 3;  // classes 0, 1, 2
  }
  const FilterMask mask(std::move(keep));
  const EvalReport a = evaluate(mask, LabelSet(labels, {1}));
  const EvalReport b = evaluate(mask, LabelSet(labels, {0, 2}));
  CHECK(a.tp == b.fp);
  CHECK(a.fp == b.tp);
  CHECK(a.tn == b.fn);
  CHECK(a.fn == b.tn);
}

TEST_CASE("sweep enumeration, ranking, and errors") {
  std::mt19937_64 rng(61);
  const PointCloud cloud = oracle::random_cloud(rng, 200);
  std::vector<std::uint32_t> labels(cloud.size());
  for (auto& l : labels) {
    l = rng() % 5 == 0 ? 110u : 0u;
  }
  const LabelSet label_set(std::move(labels), {110});
  const FilterContext ctx(cloud);
  const FilterRegistry registry;

  SUBCASE("single-cell grid equals a direct evaluate") {
    ParamGrid grid;
    grid.axes.push_back({"s", {"1.1"}});
    const auto entries = sweep(ctx, label_set, "idsor", grid, {}, registry);
    REQUIRE(entries.size() == 1);
    const FilterMask mask = registry.run(ctx, "idsor", {{"s", "1.1"}});
    const EvalReport direct = evaluate(mask, label_set);
    CHECK(entries[0].report.tp == direct.tp);
    CHECK(entries[0].report.fp == direct.fp);
    CHECK(entries[0].config ==
          std::vector<std::pair<std::string, std::string>>{{"s", "1.1"}});
  }

  SUBCASE("cartesian order in declared parameter order, stable under ties") {
    // Axes that do not affect the verdict: every cell reports identically,
    // so the stable sort preserves the enumeration order.
    ParamGrid grid;
    grid.axes.push_back({"gamma_k", {"2.15", "2.16"}});
    grid.axes.push_back({"gamma_theta", {"2.38", "2.39"}});
    const auto entries = sweep(ctx, label_set, "idsor", grid,
                               {{"rho", "0"}}, registry);
    REQUIRE(entries.size() == 4);
    const std::vector<std::vector<std::string>> expected = {
        {"2.15", "2.38"}, {"2.15", "2.39"}, {"2.16", "2.38"}, {"2.16", "2.39"}};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(entries[i].config[0].second == expected[i][0]);
      CHECK(entries[i].config[1].second == expected[i][1]);
    }
  }

  SUBCASE("entries are ranked by recall then precision") {
    ParamGrid grid;
    grid.axes.push_back({"s_g", {"2.0", "0.2", "1.0"}});
    const auto entries = sweep(ctx, label_set, "sor", grid, {}, registry);
    REQUIRE(entries.size() == 3);
    const auto rank = [](const std::optional<double>& v) {
      return v.value_or(-1.0);
    };
    for (std::size_t i = 1; i < entries.size(); ++i) {
      const bool ordered =
          rank(entries[i - 1].report.recall) > rank(entries[i].report.recall) ||
          (rank(entries[i - 1].report.recall) ==
               rank(entries[i].report.recall) &&
           rank(entries[i - 1].report.precision) >=
               rank(entries[i].report.precision));
      CHECK(ordered);
    }
  }

  SUBCASE("unknown filter and empty grid are rejected") {
    ParamGrid grid;
    grid.axes.push_back({"s", {"1.0"}});
    CHECK_THROWS_WITH_AS(sweep(ctx, label_set, "nope", grid, {}, registry),
                         doctest::Contains("registered"), Error);
    CHECK_THROWS_AS(sweep(ctx, label_set, "sor", ParamGrid{}, {}, registry),
                    Error);
  }
}
