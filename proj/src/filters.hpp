// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// The filter suite. Every filter maps (cloud, config) -> FilterMask without
// reordering points: mask[i] answers "is cloud[i] an inlier". All keep
// decisions use strict inequality (d < T). Comparative runs on one scan share
// a FilterContext so the KD-tree and per-point statistics are computed once.

#ifndef DEWEATHER_FILTERS_HPP_
#define DEWEATHER_FILTERS_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kdtree.hpp"
#include "types.hpp"
#include "weather.hpp"

namespace deweather {

// Precomputed per-scan quantities shared by all filters: spatial index,
// ranges, normalized intensities, and mean-kNN distances memoized per k.
// Holds a reference to the cloud; the cloud must outlive the context.
class FilterContext {
 public:
  explicit FilterContext(const PointCloud& cloud);

  const PointCloud& cloud() const noexcept { return cloud_; }
  const SpatialIndex& index() const noexcept { return index_; }
  const Ranges& ranges() const noexcept { return ranges_; }
  const std::vector<double>& intensity_norm() const noexcept {
    return intensity_norm_;
  }
  const std::vector<double>& mean_knn(int k_min) const;

 private:
  const PointCloud& cloud_;
  SpatialIndex index_;
  Ranges ranges_;
  std::vector<double> intensity_norm_;
  mutable std::mutex knn_mutex_;
  mutable std::map<int, std::vector<double>> knn_cache_;
};

struct SorConfig {
  int k_min = 5;
  double s_g = 1.0;
};

struct DsorConfig {
  SorConfig base;
  double s_d = 0.05;  // 1/m; threshold is neutral at r = 1/s_d
};

struct DrorConfig {
  double beta = 3.0;
  double azimuth_res = 0.0034906585039886593;  // 0.2 degrees
  double min_radius = 0.04;                    // m
  int min_neighbors = 3;
};

// IDSOR knobs without the range PDF; the DROR-prior variant supplies the PDF
// from data, the plain filter pairs this with explicit GammaParams.
struct IdsorTuning {
  int k_min = 5;
  double s_g = 1.0;
  Severity severity;  // rho
  double s = 1.0;
};

struct IdsorConfig {
  IdsorTuning tuning;
  GammaParams params = GammaParams::defaults();
};

// Experimental distance/intensity-interval baseline; requires manually tuned
// per-interval weights (there are no defaults).
struct DdiorConfig {
  SorConfig base;
  double s_d = 0.05;
  double interval_width = 10.0;              // m per weight bucket
  std::vector<double> interval_weights;      // must be configured explicitly
  double intensity_gain = 1.0;
};

// T_g = mean + s_g * population-stddev of the per-point mean kNN distances.
double global_threshold(const std::vector<double>& mean_dists, double s_g);

// Per-point IDSOR threshold rule: s * T_g * (1 - alpha * (1 - i_norm)).
// Weakly increasing in i_norm, so raising a point's intensity can never turn
// a kept point into a removed one.
double idsor_threshold(double t_g, double s, double alpha,
                       double intensity_norm);

FilterMask sor_filter(const FilterContext& ctx, const SorConfig& cfg);
FilterMask dsor_filter(const FilterContext& ctx, const DsorConfig& cfg);
FilterMask dror_filter(const FilterContext& ctx, const DrorConfig& cfg);
FilterMask idsor_filter(const FilterContext& ctx, const IdsorConfig& cfg);
FilterMask ddior_filter(const FilterContext& ctx, const DdiorConfig& cfg);

struct DrorPriorResult {
  FilterMask mask;
  GammaParams fitted = GammaParams::defaults();
  bool fallback = false;  // fit failed, defaults used instead
};

// DROR as a coarse weather selector: fit the Gamma range PDF to the points
// DROR removes, then run IDSOR on the original cloud with the fitted PDF.
// Falls back to the default parameters when the removed set cannot be fitted.
DrorPriorResult dror_prior_idsor(const FilterContext& ctx,
                                 const DrorConfig& dror_cfg,
                                 const IdsorTuning& tuning);

// Ordered key=value pairs as they arrive from the CLI; later entries win.
using KvParams = std::vector<std::pair<std::string, std::string>>;

// Name-addressable dispatch for the CLI and sweeps. Filters declare their
// parameter schema; unknown names and unknown keys are rejected with the
// known alternatives in the message.
class FilterRegistry {
 public:
  explicit FilterRegistry(bool experimental = false);

  const std::vector<std::string>& names() const noexcept { return names_; }
  bool contains(const std::string& name) const;

  // Runs the named filter with defaults overridden by params. When the filter
  // has something to report beyond the mask (the DROR-prior fit), it is
  // appended to *notes.
  FilterMask run(const FilterContext& ctx, const std::string& name,
                 const KvParams& params, std::string* notes = nullptr) const;

  // "key=default ..." summary of a filter's accepted parameters.
  std::string parameter_summary(const std::string& name) const;

 private:
  struct Entry;
  const Entry& find(const std::string& name) const;

  std::vector<std::string> names_;
  std::vector<std::shared_ptr<const Entry>> entries_;
};

}  // namespace deweather

#endif  // DEWEATHER_FILTERS_HPP_
