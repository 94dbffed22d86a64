// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// extern "C" surface of the shared library. Exceptions from the core are
// caught at this boundary and translated into status codes plus a
// thread-local message.

#include "deweather/deweather.h"

#include <cstring>
#include <limits>
#include <sstream>
#include <string>

#include "error.hpp"
#include "eval.hpp"
#include "filters.hpp"
#include "kitti_io.hpp"
#include "synth.hpp"
#include "types.hpp"
#include "weather.hpp"

namespace {

thread_local std::string g_last_error;
thread_local std::string g_filter_notes;

dw_status set_error(deweather::ErrorCode code, const std::string& message) {
  g_last_error = message;
  switch (code) {
    case deweather::ErrorCode::invalid_argument:
      return DW_E_INVALID_ARGUMENT;
    case deweather::ErrorCode::format:
      return DW_E_FORMAT;
    case deweather::ErrorCode::validation:
      return DW_E_VALIDATION;
    case deweather::ErrorCode::alignment:
      return DW_E_ALIGNMENT;
    case deweather::ErrorCode::config:
      return DW_E_CONFIG;
    case deweather::ErrorCode::fit:
      return DW_E_FIT;
    case deweather::ErrorCode::io:
      return DW_E_IO;
    case deweather::ErrorCode::unknown_filter:
      return DW_E_UNKNOWN_FILTER;
    case deweather::ErrorCode::unknown_key:
      return DW_E_UNKNOWN_KEY;
  }
  return DW_E_INVALID_ARGUMENT;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
dw_status guarded(Fn&& fn) {
  try {
    fn();
    return DW_OK;
  } catch (const deweather::Error& e) {
    return set_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return set_error(deweather::ErrorCode::invalid_argument, e.what());
  }
}

dw_status require(bool ok, const char* message) {
  if (ok) {
    return DW_OK;
  }
  return set_error(deweather::ErrorCode::invalid_argument, message);
}

deweather::KvParams parse_kv_list(const char* const* params, size_t nkv) {
  deweather::KvParams kv;
  for (size_t i = 0; i < nkv; ++i) {
    const std::string item = params[i] != nullptr ? params[i] : "";
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw deweather::Error(deweather::ErrorCode::config,
                             "expected key=value, got '" + item + "'");
    }
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return kv;
}

}  // namespace

struct dw_cloud {
  deweather::PointCloud cloud;
};

struct dw_mask {
  deweather::FilterMask mask;
};

struct dw_labels {
  deweather::LabelSet labels;
};

extern "C" {

const char* dw_status_name(dw_status status) {
  switch (status) {
    case DW_OK: return "DW_OK";
    case DW_E_INVALID_ARGUMENT: return "DW_E_INVALID_ARGUMENT";
    case DW_E_FORMAT: return "DW_E_FORMAT";
    case DW_E_VALIDATION: return "DW_E_VALIDATION";
    case DW_E_ALIGNMENT: return "DW_E_ALIGNMENT";
    case DW_E_CONFIG: return "DW_E_CONFIG";
    case DW_E_FIT: return "DW_E_FIT";
    case DW_E_IO: return "DW_E_IO";
    case DW_E_UNKNOWN_FILTER: return "DW_E_UNKNOWN_FILTER";
    case DW_E_UNKNOWN_KEY: return "DW_E_UNKNOWN_KEY";
  }
  return "DW_UNKNOWN_STATUS";
}

const char* dw_last_error(void) { return g_last_error.c_str(); }

dw_status dw_cloud_read(const char* path, dw_cloud** out) {
  if (dw_status s = require(path && out, "path and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    deweather::ScanFile file{path, deweather::format_from_path(path)};
    *out = new dw_cloud{deweather::read_scan(file)};
  });
}

dw_status dw_cloud_create(const float* xyzi, size_t n, dw_cloud** out) {
  if (dw_status s = require(out && (xyzi || n == 0),
                            "xyzi and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    std::vector<deweather::Point> points(n);
    if (n > 0) {
      std::memcpy(points.data(), xyzi, n * sizeof(deweather::Point));
    }
    *out = new dw_cloud{deweather::PointCloud(std::move(points))};
  });
}

size_t dw_cloud_size(const dw_cloud* cloud) {
  return cloud != nullptr ? cloud->cloud.size() : 0;
}

dw_status dw_cloud_get(const dw_cloud* cloud, size_t i, float xyzi[4]) {
  if (dw_status s = require(cloud && xyzi, "cloud and xyzi must be non-NULL")) {
    return s;
  }
  if (i >= cloud->cloud.size()) {
    return set_error(deweather::ErrorCode::invalid_argument,
                     "point index out of range");
  }
  const deweather::Point& p = cloud->cloud[i];
  xyzi[0] = p.x;
  xyzi[1] = p.y;
  xyzi[2] = p.z;
  xyzi[3] = p.intensity;
  return DW_OK;
}

dw_status dw_cloud_write(const dw_cloud* cloud, const dw_mask* mask,
                         const char* path) {
  if (dw_status s = require(cloud && path, "cloud and path must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    deweather::ScanFile file{path, deweather::format_from_path(path)};
    if (mask != nullptr) {
      deweather::write_filtered(cloud->cloud, mask->mask, file);
    } else {
      deweather::FilterMask all(
          std::vector<std::uint8_t>(cloud->cloud.size(), 1));
      deweather::write_filtered(cloud->cloud, all, file);
    }
  });
}

void dw_cloud_free(dw_cloud* cloud) { delete cloud; }

size_t dw_mask_size(const dw_mask* mask) {
  return mask != nullptr ? mask->mask.size() : 0;
}

size_t dw_mask_kept(const dw_mask* mask) {
  return mask != nullptr ? mask->mask.kept_count() : 0;
}

int dw_mask_get(const dw_mask* mask, size_t i) {
  if (mask == nullptr || i >= mask->mask.size()) {
    return 0;
  }
  return mask->mask.kept(i) ? 1 : 0;
}

dw_status dw_mask_write(const dw_mask* mask, const char* path) {
  if (dw_status s = require(mask && path, "mask and path must be non-NULL")) {
    return s;
  }
  return guarded([&] { deweather::write_mask(mask->mask, path); });
}

dw_status dw_mask_read(const char* path, size_t expected_n, dw_mask** out) {
  if (dw_status s = require(path && out, "path and out must be non-NULL")) {
    return s;
  }
  return guarded(
      [&] { *out = new dw_mask{deweather::read_mask(path, expected_n)}; });
}

dw_status dw_mask_from_subsequence(const dw_cloud* cloud,
                                   const dw_cloud* filtered, dw_mask** out) {
  if (dw_status s =
          require(cloud && filtered && out, "arguments must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    const auto& full = cloud->cloud;
    const auto& sub = filtered->cloud;
    std::vector<std::uint8_t> keep(full.size(), 0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < full.size() && j < sub.size(); ++i) {
      if (std::memcmp(&full[i], &sub[j], sizeof(deweather::Point)) == 0) {
        keep[i] = 1;
        ++j;
      }
    }
    if (j != sub.size()) {
      throw deweather::Error(
          deweather::ErrorCode::alignment,
          "filtered cloud is not an ordered subsequence of the input scan (" +
              std::to_string(sub.size() - j) + " points unmatched)");
    }
    *out = new dw_mask{deweather::FilterMask(std::move(keep))};
  });
}

void dw_mask_free(dw_mask* mask) { delete mask; }

dw_status dw_labels_read(const char* path, const uint32_t* positive,
                         size_t n_positive, size_t expected_n,
                         dw_labels** out) {
  if (dw_status s = require(path && out && (positive || n_positive == 0),
                            "path and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    std::unordered_set<std::uint32_t> pos(positive, positive + n_positive);
    *out = new dw_labels{
        deweather::read_labels(path, std::move(pos), expected_n)};
  });
}

dw_status dw_labels_create(const uint32_t* labels, size_t n,
                           const uint32_t* positive, size_t n_positive,
                           dw_labels** out) {
  if (dw_status s = require(out && (labels || n == 0) &&
                                (positive || n_positive == 0),
                            "labels and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    *out = new dw_labels{deweather::LabelSet(
        std::vector<std::uint32_t>(labels, labels + n),
        std::unordered_set<std::uint32_t>(positive, positive + n_positive))};
  });
}

size_t dw_labels_size(const dw_labels* labels) {
  return labels != nullptr ? labels->labels.size() : 0;
}

dw_status dw_labels_write(const dw_labels* labels, const char* path) {
  if (dw_status s = require(labels && path,
                            "labels and path must be non-NULL")) {
    return s;
  }
  return guarded(
      [&] { deweather::write_labels(labels->labels.labels(), path); });
}

void dw_labels_free(dw_labels* labels) { delete labels; }

const char* dw_filter_names(int experimental) {
  static const std::string basic = [] {
    deweather::FilterRegistry registry(false);
    std::string joined;
    for (const std::string& n : registry.names()) {
      joined += joined.empty() ? n : "," + n;
    }
    return joined;
  }();
  static const std::string extended = [] {
    deweather::FilterRegistry registry(true);
    std::string joined;
    for (const std::string& n : registry.names()) {
      joined += joined.empty() ? n : "," + n;
    }
    return joined;
  }();
  return experimental ? extended.c_str() : basic.c_str();
}

const char* dw_filter_parameters(const char* name, int experimental) {
  if (name == nullptr) {
    return nullptr;
  }
  thread_local std::string summary;
  try {
    deweather::FilterRegistry registry(experimental != 0);
    summary = registry.parameter_summary(name);
    return summary.c_str();
  } catch (const deweather::Error&) {
    return nullptr;
  }
}

dw_status dw_filter_apply(const dw_cloud* cloud, const char* name,
                          const char* const* params, size_t nkv,
                          int experimental, dw_mask** out) {
  if (dw_status s = require(cloud && name && out && (params || nkv == 0),
                            "cloud, name and out must be non-NULL")) {
    return s;
  }
  g_filter_notes.clear();
  return guarded([&] {
    const deweather::KvParams kv = parse_kv_list(params, nkv);
    deweather::FilterRegistry registry(experimental != 0);
    deweather::FilterContext ctx(cloud->cloud);
    std::string notes;
    deweather::FilterMask mask = registry.run(ctx, name, kv, &notes);
    g_filter_notes = notes;
    *out = new dw_mask{std::move(mask)};
  });
}

const char* dw_filter_notes(void) { return g_filter_notes.c_str(); }

dw_status dw_evaluate(const dw_mask* mask, const dw_labels* labels,
                      dw_report* out) {
  if (dw_status s = require(mask && labels && out,
                            "mask, labels and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    const deweather::EvalReport r = deweather::evaluate(mask->mask,
                                                        labels->labels);
    out->tp = r.tp;
    out->fp = r.fp;
    out->tn = r.tn;
    out->fn = r.fn;
    out->precision =
        r.precision.value_or(std::numeric_limits<double>::quiet_NaN());
    out->recall = r.recall.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

dw_status dw_report_write(const dw_report* report, const char* path,
                          const char* format) {
  if (dw_status s = require(report && path && format,
                            "report, path and format must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    deweather::EvalReport r;
    r.tp = report->tp;
    r.fp = report->fp;
    r.tn = report->tn;
    r.fn = report->fn;
    if (report->precision == report->precision) {
      r.precision = report->precision;
    }
    if (report->recall == report->recall) {
      r.recall = report->recall;
    }
    const std::string fmt = format;
    if (fmt == "csv") {
      deweather::write_report(r, path, deweather::ReportFormat::csv);
    } else if (fmt == "json") {
      deweather::write_report(r, path, deweather::ReportFormat::json);
    } else {
      throw deweather::Error(deweather::ErrorCode::invalid_argument,
                             "report format must be 'csv' or 'json', got '" +
                                 fmt + "'");
    }
  });
}

dw_status dw_sweep_run(const dw_cloud* cloud, const dw_labels* labels,
                       const char* name, const char* const* grid,
                       size_t n_axes, const char* const* fixed, size_t n_fixed,
                       int experimental, const char* out_csv) {
  if (dw_status s = require(cloud && labels && name && out_csv &&
                                (grid || n_axes == 0) &&
                                (fixed || n_fixed == 0),
                            "cloud, labels, name and out_csv must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    deweather::ParamGrid pg;
    for (size_t i = 0; i < n_axes; ++i) {
      const std::string axis = grid[i] != nullptr ? grid[i] : "";
      const std::size_t eq = axis.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw deweather::Error(deweather::ErrorCode::config,
                               "expected key=v1,v2,... grid axis, got '" +
                                   axis + "'");
      }
      std::vector<std::string> values;
      std::stringstream ss(axis.substr(eq + 1));
      std::string item;
      while (std::getline(ss, item, ',')) {
        values.push_back(item);
      }
      pg.axes.emplace_back(axis.substr(0, eq), std::move(values));
    }
    const deweather::KvParams fixed_kv = parse_kv_list(fixed, n_fixed);
    deweather::FilterRegistry registry(experimental != 0);
    deweather::FilterContext ctx(cloud->cloud);
    const std::vector<deweather::SweepEntry> entries = deweather::sweep(
        ctx, labels->labels, name, pg, fixed_kv, registry);
    deweather::write_sweep_csv(entries, out_csv);
  });
}

dw_status dw_gamma_pdf(dw_gamma params, double r, double* out) {
  if (dw_status s = require(out != nullptr, "out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    const deweather::GammaParams gp(params.shape, params.scale);
    *out = deweather::gamma_pdf(gp, r);
  });
}

dw_status dw_gamma_fit(const double* ranges, size_t n, dw_gamma* out) {
  if (dw_status s = require(out && (ranges || n == 0),
                            "ranges and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    const deweather::GammaParams fitted =
        deweather::fit_gamma_mom(deweather::Ranges(ranges, ranges + n));
    out->shape = fitted.shape();
    out->scale = fitted.scale();
  });
}

dw_status dw_cloud_ranges(const dw_cloud* cloud, const dw_mask* mask, int kept,
                          double* out, size_t* n_out) {
  if (dw_status s = require(cloud && out, "cloud and out must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    const deweather::Ranges all = deweather::compute_ranges(cloud->cloud);
    if (mask == nullptr) {
      std::copy(all.begin(), all.end(), out);
      if (n_out != nullptr) {
        *n_out = all.size();
      }
      return;
    }
    if (mask->mask.size() != all.size()) {
      throw deweather::Error(
          deweather::ErrorCode::alignment,
          "mask has " + std::to_string(mask->mask.size()) +
              " verdicts but the cloud has " + std::to_string(all.size()) +
              " points");
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask->mask.kept(i) == (kept != 0)) {
        out[n++] = all[i];
      }
    }
    if (n_out != nullptr) {
      *n_out = n;
    }
  });
}

dw_status dw_histogram_write(const double* ranges, size_t n, double bin_width,
                             const char* path) {
  if (dw_status s = require(path && (ranges || n == 0),
                            "ranges and path must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    const deweather::RangeHistogram hist = deweather::build_histogram(
        deweather::Ranges(ranges, ranges + n), bin_width);
    deweather::write_histogram_csv(hist, path);
  });
}

void dw_synth_config_init(dw_synth_config* cfg) {
  if (cfg == nullptr) {
    return;
  }
  cfg->total_points = 12000;
  cfg->weather_fraction = 0.2;
  cfg->surface_weather_share = 0.12;
  cfg->weather = dw_gamma{2.15, 2.38};
  cfg->weather_label = 110;
  cfg->seed = 1;
}

dw_status dw_synth_scene(const dw_synth_config* cfg, dw_cloud** cloud,
                         dw_labels** labels) {
  if (dw_status s = require(cfg && cloud && labels,
                            "cfg, cloud and labels must be non-NULL")) {
    return s;
  }
  return guarded([&] {
    deweather::SynthConfig sc;
    sc.total_points = cfg->total_points;
    sc.weather_fraction = cfg->weather_fraction;
    sc.surface_weather_share = cfg->surface_weather_share;
    sc.weather = deweather::GammaParams(cfg->weather.shape, cfg->weather.scale);
    sc.weather_label = cfg->weather_label;
    sc.seed = cfg->seed;
    deweather::SynthScene scene = deweather::synth_scene(sc);
    auto* c = new dw_cloud{std::move(scene.cloud)};
    dw_labels* l = nullptr;
    try {
      l = new dw_labels{deweather::LabelSet(std::move(scene.labels),
                                            {cfg->weather_label})};
    } catch (...) {
      delete c;
      throw;
    }
    *cloud = c;
    *labels = l;
  });
}

}  // extern "C"
