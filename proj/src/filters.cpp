// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "filters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "error.hpp"

namespace deweather {

FilterContext::FilterContext(const PointCloud& cloud)
    : cloud_(cloud),
      index_(cloud),
      ranges_(compute_ranges(cloud)),
      intensity_norm_(normalize_intensity(cloud)) {}

const std::vector<double>& FilterContext::mean_knn(int k_min) const {
  std::lock_guard<std::mutex> lock(knn_mutex_);
  auto it = knn_cache_.find(k_min);
  if (it == knn_cache_.end()) {
    it = knn_cache_.emplace(k_min, index_.mean_knn_distance(k_min)).first;
  }
  return it->second;
}

double global_threshold(const std::vector<double>& mean_dists, double s_g) {
  if (mean_dists.empty()) {
    throw Error(ErrorCode::invalid_argument,
                "global threshold needs at least one mean distance");
  }
  if (!std::isfinite(s_g)) {
    throw Error(ErrorCode::config, "s_g must be finite");
  }
  const double n = static_cast<double>(mean_dists.size());
  double mean = 0.0;
  for (double d : mean_dists) {
    mean += d;
  }
  mean /= n;
  double variance = 0.0;
  for (double d : mean_dists) {
    const double diff = d - mean;
    variance += diff * diff;
  }
  variance /= n;  // population convention
  return mean + s_g * std::sqrt(variance);
}

double idsor_threshold(double t_g, double s, double alpha,
                       double intensity_norm) {
  return s * t_g * (1.0 - alpha * (1.0 - intensity_norm));
}

namespace {

void check_sor_config(const SorConfig& cfg, std::size_t n) {
  if (cfg.k_min < 1) {
    throw Error(ErrorCode::config,
                "k_min must be >= 1, got " + std::to_string(cfg.k_min));
  }
  if (static_cast<std::size_t>(cfg.k_min) >= n) {
    throw Error(ErrorCode::config,
                "k_min=" + std::to_string(cfg.k_min) +
                    " requires more points than the cloud's N=" +
                    std::to_string(n));
  }
  if (!std::isfinite(cfg.s_g)) {
    throw Error(ErrorCode::config, "s_g must be finite");
  }
}

FilterMask mask_from(std::vector<std::uint8_t> keep) {
  return FilterMask(std::move(keep));
}

}  // namespace

FilterMask sor_filter(const FilterContext& ctx, const SorConfig& cfg) {
  check_sor_config(cfg, ctx.cloud().size());
  const std::vector<double>& mean_dists = ctx.mean_knn(cfg.k_min);
  const double t_g = global_threshold(mean_dists, cfg.s_g);
  std::vector<std::uint8_t> keep(mean_dists.size(), 0);
  for (std::size_t i = 0; i < mean_dists.size(); ++i) {
    keep[i] = mean_dists[i] < t_g ? 1 : 0;
  }
  return mask_from(std::move(keep));
}

FilterMask dsor_filter(const FilterContext& ctx, const DsorConfig& cfg) {
  check_sor_config(cfg.base, ctx.cloud().size());
  if (!(cfg.s_d > 0.0) || !std::isfinite(cfg.s_d)) {
    throw Error(ErrorCode::config, "s_d must be finite and > 0");
  }
  const std::vector<double>& mean_dists = ctx.mean_knn(cfg.base.k_min);
  const double t_g = global_threshold(mean_dists, cfg.base.s_g);
  const Ranges& r = ctx.ranges();
  std::vector<std::uint8_t> keep(mean_dists.size(), 0);
  for (std::size_t i = 0; i < mean_dists.size(); ++i) {
    // A point at the sensor origin gets threshold 0 and is always removed.
    keep[i] = mean_dists[i] < t_g * cfg.s_d * r[i] ? 1 : 0;
  }
  return mask_from(std::move(keep));
}

FilterMask dror_filter(const FilterContext& ctx, const DrorConfig& cfg) {
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) {
    throw Error(ErrorCode::config, "beta must be finite and > 0");
  }
  if (!(cfg.azimuth_res > 0.0) || !std::isfinite(cfg.azimuth_res)) {
    throw Error(ErrorCode::config, "azimuth_res must be finite and > 0");
  }
  if (!(cfg.min_radius > 0.0) || !std::isfinite(cfg.min_radius)) {
    throw Error(ErrorCode::config, "min_radius must be finite and > 0");
  }
  if (cfg.min_neighbors < 1) {
    throw Error(ErrorCode::config, "min_neighbors must be >= 1");
  }
  const Ranges& r = ctx.ranges();
  const std::size_t n = ctx.cloud().size();
  std::vector<std::uint8_t> keep(n, 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const double search_radius =
        std::max(cfg.min_radius, cfg.beta * r[i] * cfg.azimuth_res);
    const std::size_t neighbors =
        ctx.index().radius_count(static_cast<std::size_t>(i), search_radius);
    keep[i] = neighbors >= static_cast<std::size_t>(cfg.min_neighbors) ? 1 : 0;
  }
  return mask_from(std::move(keep));
}

FilterMask idsor_filter(const FilterContext& ctx, const IdsorConfig& cfg) {
  check_sor_config(SorConfig{cfg.tuning.k_min, cfg.tuning.s_g},
                   ctx.cloud().size());
  if (!(cfg.tuning.s > 0.0) || !std::isfinite(cfg.tuning.s)) {
    throw Error(ErrorCode::config, "s must be finite and > 0");
  }
  if (!(cfg.tuning.severity.rho >= 0.0) ||
      !std::isfinite(cfg.tuning.severity.rho)) {
    throw Error(ErrorCode::config, "rho must be finite and >= 0");
  }
  const std::vector<double>& mean_dists = ctx.mean_knn(cfg.tuning.k_min);
  const double t_g = global_threshold(mean_dists, cfg.tuning.s_g);
  const Ranges& r = ctx.ranges();
  const std::vector<double>& i_norm = ctx.intensity_norm();
  std::vector<std::uint8_t> keep(mean_dists.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(mean_dists.size());
       ++i) {
    const double alpha = alpha_weight(cfg.params, cfg.tuning.severity, r[i]);
    const double t_i =
        idsor_threshold(t_g, cfg.tuning.s, alpha, i_norm[i]);
    keep[i] = mean_dists[i] < t_i ? 1 : 0;
  }
  return mask_from(std::move(keep));
}

FilterMask ddior_filter(const FilterContext& ctx, const DdiorConfig& cfg) {
  check_sor_config(cfg.base, ctx.cloud().size());
  if (cfg.interval_weights.empty()) {
    throw Error(ErrorCode::config,
                "ddior requires per-distance-interval weights; set "
                "weights=w0:w1:... (none are provided by default)");
  }
  for (double w : cfg.interval_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::config,
                  "ddior interval weights must be finite and > 0");
    }
  }
  if (!(cfg.s_d > 0.0) || !std::isfinite(cfg.s_d)) {
    throw Error(ErrorCode::config, "s_d must be finite and > 0");
  }
  if (!(cfg.interval_width > 0.0) || !std::isfinite(cfg.interval_width)) {
    throw Error(ErrorCode::config, "interval_width must be finite and > 0");
  }
  if (!(cfg.intensity_gain >= 0.0) || !std::isfinite(cfg.intensity_gain)) {
    throw Error(ErrorCode::config, "intensity_gain must be finite and >= 0");
  }
  const std::vector<double>& mean_dists = ctx.mean_knn(cfg.base.k_min);
  const double t_g = global_threshold(mean_dists, cfg.base.s_g);
  const Ranges& r = ctx.ranges();
  const std::vector<double>& i_norm = ctx.intensity_norm();
  std::vector<std::uint8_t> keep(mean_dists.size(), 0);
  for (std::size_t i = 0; i < mean_dists.size(); ++i) {
    const std::size_t interval = std::min(
        static_cast<std::size_t>(std::floor(r[i] / cfg.interval_width)),
        cfg.interval_weights.size() - 1);
    const double t_i = t_g * cfg.interval_weights[interval] * cfg.s_d * r[i] *
                       (1.0 + cfg.intensity_gain * i_norm[i]);
    keep[i] = mean_dists[i] < t_i ? 1 : 0;
  }
  return mask_from(std::move(keep));
}

DrorPriorResult dror_prior_idsor(const FilterContext& ctx,
                                 const DrorConfig& dror_cfg,
                                 const IdsorTuning& tuning) {
  const FilterMask coarse = dror_filter(ctx, dror_cfg);
  Ranges removed_ranges;
  removed_ranges.reserve(coarse.removed_count());
  const Ranges& r = ctx.ranges();
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (!coarse.kept(i)) {
      removed_ranges.push_back(r[i]);
    }
  }

  DrorPriorResult result;
  try {
    result.fitted = fit_gamma_mom(removed_ranges);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::fit) {
      throw;
    }
    result.fitted = GammaParams::defaults();
    result.fallback = true;
  }
  result.mask = idsor_filter(ctx, IdsorConfig{tuning, result.fitted});
  return result;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace {

using ValueMap = std::map<std::string, std::string>;

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::config, "invalid numeric value '" + value +
                                       "' for parameter '" + key + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::config, "invalid integer value '" + value +
                                       "' for parameter '" + key + "'");
  }
  return out;
}

std::vector<double> parse_weights(const std::string& key,
                                  const std::string& value) {
  std::vector<double> weights;
  if (value.empty()) {
    return weights;
  }
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ':')) {
    weights.push_back(parse_double(key, item));
  }
  return weights;
}

}  // namespace

struct FilterRegistry::Entry {
  std::string name;
  // Ordered (key, default) schema; the empty default for ddior weights means
  // "must be configured".
  std::vector<std::pair<std::string, std::string>> schema;
  std::function<FilterMask(const FilterContext&, const ValueMap&,
                           std::string*)>
      run;
};

FilterRegistry::FilterRegistry(bool experimental) {
  auto add = [this](Entry entry) {
    names_.push_back(entry.name);
    entries_.push_back(std::make_shared<const Entry>(std::move(entry)));
  };

  add(Entry{
      "sor",
      {{"k_min", "5"}, {"s_g", "1.0"}},
      [](const FilterContext& ctx, const ValueMap& v, std::string*) {
        SorConfig cfg;
        cfg.k_min = parse_int("k_min", v.at("k_min"));
        cfg.s_g = parse_double("s_g", v.at("s_g"));
        return sor_filter(ctx, cfg);
      }});

  add(Entry{
      "dsor",
      {{"k_min", "5"}, {"s_g", "1.0"}, {"s_d", "0.05"}},
      [](const FilterContext& ctx, const ValueMap& v, std::string*) {
        DsorConfig cfg;
        cfg.base.k_min = parse_int("k_min", v.at("k_min"));
        cfg.base.s_g = parse_double("s_g", v.at("s_g"));
        cfg.s_d = parse_double("s_d", v.at("s_d"));
        return dsor_filter(ctx, cfg);
      }});

  add(Entry{
      "dror",
      {{"beta", "3.0"},
       {"azimuth_res", "0.0034906585039886593"},
       {"min_radius", "0.04"},
       {"min_neighbors", "3"}},
      [](const FilterContext& ctx, const ValueMap& v, std::string*) {
        DrorConfig cfg;
        cfg.beta = parse_double("beta", v.at("beta"));
        cfg.azimuth_res = parse_double("azimuth_res", v.at("azimuth_res"));
        cfg.min_radius = parse_double("min_radius", v.at("min_radius"));
        cfg.min_neighbors = parse_int("min_neighbors", v.at("min_neighbors"));
        return dror_filter(ctx, cfg);
      }});

  add(Entry{
      "idsor",
      {{"k_min", "5"},
       {"s_g", "1.0"},
       {"rho", "5.0"},
       {"s", "1.0"},
       {"gamma_k", "2.15"},
       {"gamma_theta", "2.38"}},
      [](const FilterContext& ctx, const ValueMap& v, std::string*) {
        IdsorTuning tuning;
        tuning.k_min = parse_int("k_min", v.at("k_min"));
        tuning.s_g = parse_double("s_g", v.at("s_g"));
        tuning.severity.rho = parse_double("rho", v.at("rho"));
        tuning.s = parse_double("s", v.at("s"));
        const GammaParams params(parse_double("gamma_k", v.at("gamma_k")),
                                 parse_double("gamma_theta", v.at("gamma_theta")));
        return idsor_filter(ctx, IdsorConfig{tuning, params});
      }});

  add(Entry{
      "idsor-dror-prior",
      {{"k_min", "5"},
       {"s_g", "1.0"},
       {"rho", "5.0"},
       {"s", "1.0"},
       {"beta", "3.0"},
       {"azimuth_res", "0.0034906585039886593"},
       {"min_radius", "0.04"},
       {"min_neighbors", "3"}},
      [](const FilterContext& ctx, const ValueMap& v, std::string* notes) {
        IdsorTuning tuning;
        tuning.k_min = parse_int("k_min", v.at("k_min"));
        tuning.s_g = parse_double("s_g", v.at("s_g"));
        tuning.severity.rho = parse_double("rho", v.at("rho"));
        tuning.s = parse_double("s", v.at("s"));
        DrorConfig dror_cfg;
        dror_cfg.beta = parse_double("beta", v.at("beta"));
        dror_cfg.azimuth_res = parse_double("azimuth_res", v.at("azimuth_res"));
        dror_cfg.min_radius = parse_double("min_radius", v.at("min_radius"));
        dror_cfg.min_neighbors =
            parse_int("min_neighbors", v.at("min_neighbors"));
        DrorPriorResult result = dror_prior_idsor(ctx, dror_cfg, tuning);
        if (notes != nullptr) {
          std::ostringstream os;
          if (result.fallback) {
            os << "warning: DROR removed too few points to fit a range PDF; "
                  "using default gamma parameters ";
          } else {
            os << "fitted gamma parameters ";
          }
          os << "k=" << result.fitted.shape()
             << " theta=" << result.fitted.scale();
          *notes = os.str();
        }
        return std::move(result.mask);
      }});

  if (experimental) {
    add(Entry{
        "ddior",
        {{"k_min", "5"},
         {"s_g", "1.0"},
         {"s_d", "0.05"},
         {"interval_width", "10.0"},
         {"weights", ""},
         {"intensity_gain", "1.0"}},
        [](const FilterContext& ctx, const ValueMap& v, std::string*) {
          DdiorConfig cfg;
          cfg.base.k_min = parse_int("k_min", v.at("k_min"));
          cfg.base.s_g = parse_double("s_g", v.at("s_g"));
          cfg.s_d = parse_double("s_d", v.at("s_d"));
          cfg.interval_width =
              parse_double("interval_width", v.at("interval_width"));
          cfg.interval_weights = parse_weights("weights", v.at("weights"));
          cfg.intensity_gain =
              parse_double("intensity_gain", v.at("intensity_gain"));
          return ddior_filter(ctx, cfg);
        }});
  }
}

bool FilterRegistry::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const FilterRegistry::Entry& FilterRegistry::find(
    const std::string& name) const {
  for (const auto& entry : entries_) {
    if (entry->name == name) {
      return *entry;
    }
  }
  std::string known;
  for (const std::string& n : names_) {
    known += known.empty() ? n : ", " + n;
  }
  throw Error(ErrorCode::unknown_filter,
              "unknown filter '" + name + "' (registered: " + known + ")");
}

FilterMask FilterRegistry::run(const FilterContext& ctx,
                               const std::string& name, const KvParams& params,
                               std::string* notes) const {
  const Entry& entry = find(name);
  ValueMap values;
  for (const auto& [key, def] : entry.schema) {
    values[key] = def;
  }
  for (const auto& [key, value] : params) {
    if (values.find(key) == values.end()) {
      std::string known;
      for (const auto& [k, d] : entry.schema) {
        known += known.empty() ? k : ", " + k;
      }
      throw Error(ErrorCode::unknown_key,
                  "unknown parameter '" + key + "' for filter '" + name +
                      "' (accepted: " + known + ")");
    }
    values[key] = value;
  }
  return entry.run(ctx, values, notes);
}

std::string FilterRegistry::parameter_summary(const std::string& name) const {
  const Entry& entry = find(name);
  std::string out;
  for (const auto& [key, def] : entry.schema) {
    if (!out.empty()) {
      out += " ";
    }
    out += key + "=" + (def.empty() ? "<required>" : def);
  }
  return out;
}

}  // namespace deweather
