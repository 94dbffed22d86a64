// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "eval.hpp"

#include <algorithm>
#include <limits>

#include "error.hpp"
#include "filters.hpp"

namespace deweather {

EvalReport evaluate(const FilterMask& mask, const LabelSet& labels) {
  if (mask.size() != labels.size()) {
    throw Error(ErrorCode::alignment,
                "mask has " + std::to_string(mask.size()) +
                    " verdicts but label set has " +
                    std::to_string(labels.size()) + " entries");
  }
  if (labels.positive_classes().empty()) {
    throw Error(ErrorCode::config,
                "evaluation needs a non-empty positive class set");
  }
  EvalReport report;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool removed = !mask.kept(i);
    const bool positive = labels.positive(i);
    if (removed && positive) {
      ++report.tp;
    } else if (removed && !positive) {
      ++report.fp;
    } else if (!removed && positive) {
      ++report.fn;
    } else {
      ++report.tn;
    }
  }
  if (report.tp + report.fp > 0) {
    report.precision = static_cast<double>(report.tp) /
                       static_cast<double>(report.tp + report.fp);
  }
  if (report.tp + report.fn > 0) {
    report.recall = static_cast<double>(report.tp) /
                    static_cast<double>(report.tp + report.fn);
  }
  return report;
}

std::vector<SweepEntry> sweep(
    const FilterContext& context, const LabelSet& labels,
    const std::string& filter_name, const ParamGrid& grid,
    const std::vector<std::pair<std::string, std::string>>& fixed_params,
    const FilterRegistry& registry) {
  if (grid.axes.empty()) {
    throw Error(ErrorCode::invalid_argument, "parameter grid is empty");
  }
  for (const auto& [key, values] : grid.axes) {
    if (values.empty()) {
      throw Error(ErrorCode::invalid_argument,
                  "grid axis '" + key + "' has no values");
    }
  }
  std::vector<SweepEntry> entries;
  std::vector<std::size_t> cursor(grid.axes.size(), 0);
  while (true) {
    SweepEntry entry;
    KvParams params = fixed_params;
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
      const auto& [key, values] = grid.axes[a];
      entry.config.emplace_back(key, values[cursor[a]]);
      params.emplace_back(key, values[cursor[a]]);
    }
    const FilterMask mask = registry.run(context, filter_name, params);
    entry.report = evaluate(mask, labels);
    entries.push_back(std::move(entry));

    // Advance odometer-style: last axis fastest, first axis slowest.
    std::size_t a = grid.axes.size();
    while (a > 0) {
      --a;
      if (++cursor[a] < grid.axes[a].second.size()) {
        break;
      }
      cursor[a] = 0;
      if (a == 0) {
        goto done;
      }
    }
  }
done:

  const auto rank = [](const std::optional<double>& v) {
    return v.has_value() ? *v : -std::numeric_limits<double>::infinity();
  };
  std::stable_sort(entries.begin(), entries.end(),
                   [&](const SweepEntry& a, const SweepEntry& b) {
                     const double ra = rank(a.report.recall);
                     const double rb = rank(b.report.recall);
                     if (ra != rb) {
                       return ra > rb;
                     }
                     return rank(a.report.precision) > rank(b.report.precision);
                   });
  return entries;
}

}  // namespace deweather
