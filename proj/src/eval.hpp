// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// Confusion-matrix evaluation of filter masks against ground-truth labels.
// Convention: weather returns are the positive class and "removed" is the
// positive prediction, so recall is the fraction of weather points removed
// and precision is the fraction of removed points that were weather.

#ifndef DEWEATHER_EVAL_HPP_
#define DEWEATHER_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace deweather {

class FilterContext;
class FilterRegistry;

struct EvalReport {
  std::uint64_t tp = 0;  // removed, labeled weather
  std::uint64_t fp = 0;  // removed, labeled non-weather
  std::uint64_t tn = 0;  // kept, labeled non-weather
  std::uint64_t fn = 0;  // kept, labeled weather

  // Undefined (nullopt) when the denominator is zero: precision with nothing
  // removed, recall with no positive labels in the scan.
  std::optional<double> precision;
  std::optional<double> recall;
};

EvalReport evaluate(const FilterMask& mask, const LabelSet& labels);

// Ordered key -> candidate-values grid. Axis order is the declared parameter
// order; enumeration is the Cartesian product with the first axis varying
// slowest.
struct ParamGrid {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
};

struct SweepEntry {
  std::vector<std::pair<std::string, std::string>> config;
  EvalReport report;
};

// Runs filter_name once per grid cell (fixed params layered under the grid
// values) and returns entries sorted by recall desc, precision desc, with the
// enumeration order as the final tiebreak. Undefined metrics sort below any
// defined value.
std::vector<SweepEntry> sweep(
    const FilterContext& context, const LabelSet& labels,
    const std::string& filter_name, const ParamGrid& grid,
    const std::vector<std::pair<std::string, std::string>>& fixed_params,
    const FilterRegistry& registry);

}  // namespace deweather

#endif  // DEWEATHER_EVAL_HPP_
