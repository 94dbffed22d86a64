// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// deweather command line front end. Talks to the core exclusively through
// the public C API, so it doubles as a usage example for the shared library.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deweather/deweather.h"

namespace {

struct CloudDeleter {
  void operator()(dw_cloud* c) const { dw_cloud_free(c); }
};
struct MaskDeleter {
  void operator()(dw_mask* m) const { dw_mask_free(m); }
};
struct LabelsDeleter {
  void operator()(dw_labels* l) const { dw_labels_free(l); }
};

using CloudPtr = std::unique_ptr<dw_cloud, CloudDeleter>;
using MaskPtr = std::unique_ptr<dw_mask, MaskDeleter>;
using LabelsPtr = std::unique_ptr<dw_labels, LabelsDeleter>;

// Any dw_status failure becomes a one-line diagnostic and exit code 2.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(dw_status status, const std::string& context) {
  if (status != DW_OK) {
    throw CommandError(context + ": " + dw_last_error() + " [" +
                       dw_status_name(status) + "]");
  }
}

// Files written by the current invocation; removed again if a later step
// fails so a nonzero exit never leaves partial results behind.
class OutputSet {
 public:
  void committed(const std::string& path) { paths_.push_back(path); }
  void rollback() {
    for (const std::string& p : paths_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }

 private:
  std::vector<std::string> paths_;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

// Flat key=value file; '#' starts a comment. Returns entries in file order.
std::vector<std::string> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CommandError("cannot open config file '" + path + "'");
  }
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CommandError("config line '" + line + "' is not key=value");
    }
    std::string value = trim(line.substr(eq + 1));
    // Grid values may be comma separated; normalize embedded spaces.
    std::string packed;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      packed += packed.empty() ? trim(item) : "," + trim(item);
    }
    entries.push_back(trim(line.substr(0, eq)) + "=" + packed);
  }
  return entries;
}

std::vector<const char*> as_cstrs(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const std::string& s : v) {
    out.push_back(s.c_str());
  }
  return out;
}

void atomic_text_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw CommandError("cannot open '" + tmp + "' for writing");
    }
    out << contents;
    if (!out.good()) {
      std::filesystem::remove(tmp);
      throw CommandError("write failed on '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw CommandError("cannot move '" + tmp + "' to '" + path + "'");
  }
}

CloudPtr load_cloud(const std::string& path) {
  dw_cloud* cloud = nullptr;
  check(dw_cloud_read(path.c_str(), &cloud), "reading scan '" + path + "'");
  return CloudPtr(cloud);
}

LabelsPtr load_labels(const std::string& path, const dw_cloud* cloud,
                      const std::vector<std::uint32_t>& positives) {
  dw_labels* labels = nullptr;
  check(dw_labels_read(path.c_str(), positives.data(), positives.size(),
                       dw_cloud_size(cloud), &labels),
        "reading labels '" + path + "'");
  return LabelsPtr(labels);
}

std::string report_format(const std::string& path, std::string explicit_fmt) {
  if (!explicit_fmt.empty()) {
    return explicit_fmt;
  }
  const std::string ext = std::filesystem::path(path).extension().string();
  return ext == ".json" ? "json" : "csv";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

struct FilterArgs {
  std::string in, out, mask_out, filter = "idsor", config;
  std::vector<std::string> sets;
  bool experimental = false;
};

int run_filter(const FilterArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  OutputSet outputs;
  try {
    CloudPtr cloud = load_cloud(args.in);

    std::vector<std::string> params;
    if (!args.config.empty()) {
      params = read_kv_file(args.config);
    }
    params.insert(params.end(), args.sets.begin(), args.sets.end());
    const std::vector<const char*> cparams = as_cstrs(params);

    dw_mask* mask_raw = nullptr;
    check(dw_filter_apply(cloud.get(), args.filter.c_str(), cparams.data(),
                          cparams.size(), args.experimental ? 1 : 0,
                          &mask_raw),
          "running filter '" + args.filter + "'");
    MaskPtr mask(mask_raw);

    check(dw_cloud_write(cloud.get(), mask.get(), args.out.c_str()),
          "writing '" + args.out + "'");
    outputs.committed(args.out);
    if (!args.mask_out.empty()) {
      check(dw_mask_write(mask.get(), args.mask_out.c_str()),
            "writing '" + args.mask_out + "'");
      outputs.committed(args.mask_out);
    }

    const std::string notes = dw_filter_notes();
    if (!notes.empty()) {
      std::cout << "note: " << notes << "\n";
    }
    std::cout << "filter=" << args.filter << " points_in="
              << dw_cloud_size(cloud.get()) << " kept="
              << dw_mask_kept(mask.get()) << " removed="
              << dw_mask_size(mask.get()) - dw_mask_kept(mask.get())
              << " wall_ms=" << elapsed_ms(start) << "\n";
    return 0;
  } catch (const CommandError& e) {
    outputs.rollback();
    std::cerr << "deweather filter: " << e.what() << "\n";
    return 2;
  }
}

struct FitArgs {
  std::vector<std::string> in;
  std::string mask, subset = "removed", params_out, hist_out;
  double bin_width = 3.0;
};

int run_fit_pdf(const FitArgs& args) {
  OutputSet outputs;
  try {
    std::vector<double> ranges;
    for (const std::string& path : args.in) {
      CloudPtr cloud = load_cloud(path);
      std::vector<double> r(dw_cloud_size(cloud.get()));
      std::size_t n = r.size();
      MaskPtr mask;
      if (!args.mask.empty()) {
        if (args.in.size() != 1) {
          throw CommandError("--mask works with exactly one --in scan");
        }
        dw_mask* m = nullptr;
        check(dw_mask_read(args.mask.c_str(), r.size(), &m),
              "reading mask '" + args.mask + "'");
        mask.reset(m);
      }
      check(dw_cloud_ranges(cloud.get(), mask.get(),
                            args.subset == "kept" ? 1 : 0, r.data(), &n),
            "computing ranges for '" + path + "'");
      ranges.insert(ranges.end(), r.begin(), r.begin() + n);
    }

    dw_gamma fitted{};
    check(dw_gamma_fit(ranges.data(), ranges.size(), &fitted),
          "fitting gamma parameters");

    if (!args.hist_out.empty()) {
      check(dw_histogram_write(ranges.data(), ranges.size(), args.bin_width,
                               args.hist_out.c_str()),
            "writing '" + args.hist_out + "'");
      outputs.committed(args.hist_out);
    }
    if (!args.params_out.empty()) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "{\n  \"k\": %.10g,\n  \"theta\": %.10g,\n  \"samples\": "
                    "%zu\n}\n",
                    fitted.shape, fitted.scale, ranges.size());
      atomic_text_write(args.params_out, buf);
      outputs.committed(args.params_out);
    }
    std::printf("fitted k=%.6g theta=%.6g samples=%zu\n", fitted.shape,
                fitted.scale, ranges.size());
    return 0;
  } catch (const CommandError& e) {
    outputs.rollback();
    std::cerr << "deweather fit-pdf: " << e.what() << "\n";
    return 2;
  }
}

struct EvalArgs {
  std::string in, labels, mask, filtered, out, format;
  std::vector<std::uint32_t> positives{110};
};

int run_eval(const EvalArgs& args) {
  OutputSet outputs;
  try {
    CloudPtr cloud = load_cloud(args.in);
    LabelsPtr labels = load_labels(args.labels, cloud.get(), args.positives);

    MaskPtr mask;
    if (!args.mask.empty()) {
      dw_mask* m = nullptr;
      check(dw_mask_read(args.mask.c_str(), dw_cloud_size(cloud.get()), &m),
            "reading mask '" + args.mask + "'");
      mask.reset(m);
    } else if (!args.filtered.empty()) {
      CloudPtr filtered = load_cloud(args.filtered);
      dw_mask* m = nullptr;
      check(dw_mask_from_subsequence(cloud.get(), filtered.get(), &m),
            "matching '" + args.filtered + "' against the input scan");
      mask.reset(m);
    } else {
      throw CommandError("provide --mask or --filtered");
    }

    dw_report report{};
    check(dw_evaluate(mask.get(), labels.get(), &report), "evaluating");

    if (!args.out.empty()) {
      const std::string fmt = report_format(args.out, args.format);
      check(dw_report_write(&report, args.out.c_str(), fmt.c_str()),
            "writing '" + args.out + "'");
      outputs.committed(args.out);
    }
    std::printf("tp=%llu fp=%llu tn=%llu fn=%llu precision=%.6g recall=%.6g\n",
                static_cast<unsigned long long>(report.tp),
                static_cast<unsigned long long>(report.fp),
                static_cast<unsigned long long>(report.tn),
                static_cast<unsigned long long>(report.fn), report.precision,
                report.recall);
    return 0;
  } catch (const CommandError& e) {
    outputs.rollback();
    std::cerr << "deweather eval: " << e.what() << "\n";
    return 2;
  }
}

struct SweepArgs {
  std::string in, labels, filter, grid, out, config;
  std::vector<std::string> sets;
  std::vector<std::uint32_t> positives{110};
  bool experimental = false;
};

int run_sweep(const SweepArgs& args) {
  OutputSet outputs;
  try {
    CloudPtr cloud = load_cloud(args.in);
    LabelsPtr labels = load_labels(args.labels, cloud.get(), args.positives);

    const std::vector<std::string> axes = read_kv_file(args.grid);
    std::vector<std::string> fixed;
    if (!args.config.empty()) {
      fixed = read_kv_file(args.config);
    }
    fixed.insert(fixed.end(), args.sets.begin(), args.sets.end());

    const std::vector<const char*> caxes = as_cstrs(axes);
    const std::vector<const char*> cfixed = as_cstrs(fixed);
    check(dw_sweep_run(cloud.get(), labels.get(), args.filter.c_str(),
                       caxes.data(), caxes.size(), cfixed.data(),
                       cfixed.size(), args.experimental ? 1 : 0,
                       args.out.c_str()),
          "sweeping filter '" + args.filter + "'");
    outputs.committed(args.out);
    std::cout << "sweep filter=" << args.filter << " cells_written"
              << " -> " << args.out << "\n";
    return 0;
  } catch (const CommandError& e) {
    outputs.rollback();
    std::cerr << "deweather sweep: " << e.what() << "\n";
    return 2;
  }
}

struct SynthArgs {
  std::string out, labels_out;
  std::uint64_t seed = 1;
  std::size_t count = 12000;
  double weather_frac = 0.2;
  double surface_share = 0.12;
  double gamma_k = 2.15;
  double gamma_theta = 2.38;
  std::uint32_t weather_label = 110;
};

int run_synth(const SynthArgs& args) {
  OutputSet outputs;
  try {
    dw_synth_config cfg;
    dw_synth_config_init(&cfg);
    cfg.total_points = args.count;
    cfg.weather_fraction = args.weather_frac;
    cfg.surface_weather_share = args.surface_share;
    cfg.weather = dw_gamma{args.gamma_k, args.gamma_theta};
    cfg.weather_label = args.weather_label;
    cfg.seed = args.seed;

    dw_cloud* cloud_raw = nullptr;
    dw_labels* labels_raw = nullptr;
    check(dw_synth_scene(&cfg, &cloud_raw, &labels_raw),
          "generating synthetic scene");
    CloudPtr cloud(cloud_raw);
    LabelsPtr labels(labels_raw);

    check(dw_cloud_write(cloud.get(), nullptr, args.out.c_str()),
          "writing '" + args.out + "'");
    outputs.committed(args.out);
    check(dw_labels_write(labels.get(), args.labels_out.c_str()),
          "writing '" + args.labels_out + "'");
    outputs.committed(args.labels_out);

    std::cout << "synth points=" << dw_cloud_size(cloud.get()) << " seed="
              << args.seed << " -> " << args.out << ", " << args.labels_out
              << "\n";
    return 0;
  } catch (const CommandError& e) {
    outputs.rollback();
    std::cerr << "deweather synth: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deweather: weather-return removal for LiDAR point clouds"};
  app.require_subcommand(1);

  FilterArgs filter_args;
  CLI::App* filter = app.add_subcommand(
      "filter", "Filter a scan and write the cleaned result");
  filter->add_option("--in", filter_args.in, "input scan (.bin or .ply)")
      ->required();
  filter->add_option("--out", filter_args.out, "output scan (.bin or .ply)")
      ->required();
  filter->add_option("--mask-out", filter_args.mask_out,
                     "per-point verdict sidecar (raw 0/1 bytes)");
  filter->add_option("--filter", filter_args.filter,
                     std::string("filter name (") + dw_filter_names(1) + ")");
  filter->add_option("--set", filter_args.sets,
                     "filter parameters as key=value, may repeat");
  filter->add_option("--config", filter_args.config,
                     "key=value file layered under --set");
  filter->add_flag("--experimental", filter_args.experimental,
                   "enable experimental baselines (ddior)");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand(
      "fit-pdf", "Fit the gamma range distribution to scans");
  fit->add_option("--in", fit_args.in, "input scan(s)")->required();
  fit->add_option("--mask", fit_args.mask,
                  "mask sidecar restricting which points are used");
  fit->add_option("--use", fit_args.subset,
                  "with --mask: fit 'removed' (default) or 'kept' points")
      ->check(CLI::IsMember({"removed", "kept"}));
  fit->add_option("--params-out", fit_args.params_out,
                  "write fitted parameters as JSON");
  fit->add_option("--hist-out", fit_args.hist_out,
                  "write diagnostic histogram CSV");
  fit->add_option("--bin-width", fit_args.bin_width,
                  "histogram bin width, meters")
      ->capture_default_str();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score a mask or filtered scan against labels");
  eval->add_option("--in", eval_args.in, "original scan")->required();
  eval->add_option("--labels", eval_args.labels, "label file")->required();
  eval->add_option("--mask", eval_args.mask, "mask sidecar to score");
  eval->add_option("--filtered", eval_args.filtered,
                   "filtered scan to score (alternative to --mask)");
  eval->add_option("--out", eval_args.out, "report file (.csv or .json)");
  eval->add_option("--format", eval_args.format, "report format override")
      ->check(CLI::IsMember({"csv", "json"}));
  eval->add_option("--snow-labels", eval_args.positives,
                   "positive (weather) class ids")
      ->capture_default_str();

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Grid-search filter parameters against labels");
  sweep->add_option("--in", sweep_args.in, "input scan")->required();
  sweep->add_option("--labels", sweep_args.labels, "label file")->required();
  sweep->add_option("--filter", sweep_args.filter, "filter name")->required();
  sweep->add_option("--grid", sweep_args.grid,
                    "grid file: key = v1,v2,... per line")
      ->required();
  sweep->add_option("--out", sweep_args.out, "ranked results CSV")->required();
  sweep->add_option("--set", sweep_args.sets,
                    "fixed parameters applied to every cell");
  sweep->add_option("--config", sweep_args.config,
                    "key=value file layered under --set");
  sweep->add_option("--snow-labels", sweep_args.positives,
                    "positive (weather) class ids")
      ->capture_default_str();
  sweep->add_flag("--experimental", sweep_args.experimental,
                  "enable experimental baselines (ddior)");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a labeled synthetic scene");
  synth->add_option("--out", synth_args.out, "output scan")->required();
  synth->add_option("--labels-out", synth_args.labels_out,
                    "output label file")
      ->required();
  synth->add_option("--seed", synth_args.seed, "random seed")
      ->capture_default_str();
  synth->add_option("--count", synth_args.count, "total point budget")
      ->capture_default_str();
  synth->add_option("--weather-frac", synth_args.weather_frac,
                    "weather share of the scene")
      ->capture_default_str();
  synth->add_option("--surface-share", synth_args.surface_share,
                    "share of weather placed on structure")
      ->capture_default_str();
  synth->add_option("--gamma-k", synth_args.gamma_k,
                    "weather range distribution shape")
      ->capture_default_str();
  synth->add_option("--gamma-theta", synth_args.gamma_theta,
                    "weather range distribution scale, meters")
      ->capture_default_str();
  synth->add_option("--weather-label", synth_args.weather_label,
                    "label id written for weather points")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << "deweather: " << e.what() << "\n";
    return 2;
  }

  if (filter->parsed()) return run_filter(filter_args);
  if (fit->parsed()) return run_fit_pdf(fit_args);
  if (eval->parsed()) return run_eval(eval_args);
  if (sweep->parsed()) return run_sweep(sweep_args);
  if (synth->parsed()) return run_synth(synth_args);
  return 2;
}
