// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scan and label file ingestion/emission. Binary scans are KITTI-style:
// consecutive little-endian float32 (x, y, z, intensity) records, no header.
// Label files are one little-endian uint32 per point; the low 16 bits carry
// the semantic class, the high 16 bits (instance id) are discarded. All
// writers go through a temp-file-plus-rename so a failed write never leaves a
// partial artifact at the target path.

#ifndef DEWEATHER_KITTI_IO_HPP_
#define DEWEATHER_KITTI_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "eval.hpp"
#include "types.hpp"
#include "weather.hpp"

namespace deweather {

enum class ScanFormat { kitti_bin, ply_ascii };

struct ScanFile {
  std::filesystem::path path;
  ScanFormat format = ScanFormat::kitti_bin;
};

// .bin -> kitti_bin, .ply -> ply_ascii; anything else is an error.
ScanFormat format_from_path(const std::filesystem::path& path);

PointCloud read_scan(const ScanFile& file);

// expected_n is the companion scan's point count; a mismatch is an alignment
// error reporting both counts.
LabelSet read_labels(const std::filesystem::path& path,
                     std::unordered_set<std::uint32_t> positive_classes,
                     std::size_t expected_n);

// Kept points, original relative order, same layout as read_scan (or an
// ASCII PLY with x, y, z, intensity properties).
void write_filtered(const PointCloud& cloud, const FilterMask& mask,
                    const ScanFile& out);

void write_labels(const std::vector<std::uint32_t>& labels,
                  const std::filesystem::path& path);

// Mask sidecar: one raw byte per point, 1 = kept, 0 = removed.
void write_mask(const FilterMask& mask, const std::filesystem::path& path);
FilterMask read_mask(const std::filesystem::path& path, std::size_t expected_n);

enum class ReportFormat { csv, json };

// Fields in order tp, fp, tn, fn, precision, recall. Undefined ratios are
// serialized as "nan" (CSV) or null (JSON).
void write_report(const EvalReport& report, const std::filesystem::path& path,
                  ReportFormat format);

// One row per sweep entry: the grid key columns first, then the six report
// fields, already in sweep rank order.
void write_sweep_csv(const std::vector<SweepEntry>& entries,
                     const std::filesystem::path& path);

// Diagnostic histogram CSV: bin_start, count, normalized_density.
void write_histogram_csv(const RangeHistogram& hist,
                         const std::filesystem::path& path);

// Atomic text/binary write used by every emitter above.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace deweather

#endif  // DEWEATHER_KITTI_IO_HPP_
