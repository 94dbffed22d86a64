// Copyright 2026 The deweather Authors
// SPDX-License-Identifier: Apache-2.0

#include "kitti_io.hpp"

#include <atomic>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace deweather {
namespace {

std::string read_whole_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw Error(ErrorCode::io, "read failed on '" + path.string() + "'");
  }
  return std::move(buffer).str();
}

// %.6g matches the report contract (>= 6 significant digits, no trailing
// zero noise); "nan" stands in for undefined ratios.
std::string format_metric(const std::optional<double>& value) {
  if (!value.has_value()) {
    return "nan";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", *value);
  return buf;
}

std::string format_float(float value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(value));
  return buf;
}

PointCloud read_ply_ascii(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path.string() + "' for reading");
  }
  std::string line;
  if (!std::getline(in, line) || line != "ply") {
    throw Error(ErrorCode::format, "'" + path.string() + "' is not a PLY file");
  }
  std::size_t vertex_count = 0;
  std::vector<std::string> properties;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string kind;
      ls >> kind;
      ascii = kind == "ascii";
    } else if (word == "element") {
      std::string name;
      ls >> name >> vertex_count;
      if (name != "vertex") {
        throw Error(ErrorCode::format,
                    "unsupported PLY element '" + name + "'");
      }
    } else if (word == "property") {
      std::string type, name;
      ls >> type >> name;
      properties.push_back(name);
    } else if (word == "end_header") {
      break;
    }
  }
  if (!ascii) {
    throw Error(ErrorCode::format, "only ASCII PLY is supported");
  }
  int col[4] = {-1, -1, -1, -1};
  const char* wanted[4] = {"x", "y", "z", "intensity"};
  for (std::size_t c = 0; c < properties.size(); ++c) {
    for (int w = 0; w < 4; ++w) {
      if (properties[c] == wanted[w]) {
        col[w] = static_cast<int>(c);
      }
    }
  }
  for (int w = 0; w < 4; ++w) {
    if (col[w] < 0) {
      throw Error(ErrorCode::format, std::string("PLY is missing property '") +
                                         wanted[w] + "'");
    }
  }
  std::vector<Point> points;
  points.reserve(vertex_count);
  std::vector<double> row(properties.size());
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::format,
                  "PLY vertex data ends early at row " + std::to_string(i));
    }
    std::istringstream ls(line);
    for (std::size_t c = 0; c < properties.size(); ++c) {
      if (!(ls >> row[c])) {
        throw Error(ErrorCode::format,
                    "malformed PLY vertex row " + std::to_string(i));
      }
    }
    Point p{};
    p.x = static_cast<float>(row[col[0]]);
    p.y = static_cast<float>(row[col[1]]);
    p.z = static_cast<float>(row[col[2]]);
    p.intensity = static_cast<float>(row[col[3]]);
    points.push_back(p);
  }
  return PointCloud(std::move(points));
}

}  // namespace

ScanFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".bin") {
    return ScanFormat::kitti_bin;
  }
  if (ext == ".ply") {
    return ScanFormat::ply_ascii;
  }
  throw Error(ErrorCode::invalid_argument,
              "cannot infer scan format from extension '" + ext +
                  "' (expected .bin or .ply)");
}

PointCloud read_scan(const ScanFile& file) {
  if (file.format == ScanFormat::ply_ascii) {
    return read_ply_ascii(file.path);
  }
  const std::string bytes = read_whole_file(file.path);
  if (bytes.size() % sizeof(Point) != 0) {
    throw Error(ErrorCode::format,
                "'" + file.path.string() + "' has " +
                    std::to_string(bytes.size()) +
                    " bytes, not a multiple of 16");
  }
  std::vector<Point> points(bytes.size() / sizeof(Point));
  std::memcpy(points.data(), bytes.data(), bytes.size());
  return PointCloud(std::move(points));
}

LabelSet read_labels(const std::filesystem::path& path,
                     std::unordered_set<std::uint32_t> positive_classes,
                     std::size_t expected_n) {
  if (positive_classes.empty()) {
    throw Error(ErrorCode::invalid_argument,
                "positive class set must not be empty");
  }
  const std::string bytes = read_whole_file(path);
  if (bytes.size() % 4 != 0) {
    throw Error(ErrorCode::format, "'" + path.string() + "' has " +
                                       std::to_string(bytes.size()) +
                                       " bytes, not a multiple of 4");
  }
  const std::size_t n = bytes.size() / 4;
  if (n != expected_n) {
    throw Error(ErrorCode::alignment,
                "label file '" + path.string() + "' has " + std::to_string(n) +
                    " entries but the scan has " + std::to_string(expected_n) +
                    " points");
  }
  std::vector<std::uint32_t> raw(n);
  std::memcpy(raw.data(), bytes.data(), bytes.size());
  for (std::uint32_t& value : raw) {
    value &= 0xFFFFu;  // drop the instance id
  }
  return LabelSet(std::move(raw), std::move(positive_classes));
}

void write_filtered(const PointCloud& cloud, const FilterMask& mask,
                    const ScanFile& out) {
  if (mask.size() != cloud.size()) {
    throw Error(ErrorCode::alignment,
                "mask has " + std::to_string(mask.size()) +
                    " verdicts but the cloud has " +
                    std::to_string(cloud.size()) + " points");
  }
  if (out.format == ScanFormat::kitti_bin) {
    std::string bytes;
    bytes.reserve(mask.kept_count() * sizeof(Point));
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (mask.kept(i)) {
        const char* p = reinterpret_cast<const char*>(&cloud[i]);
        bytes.append(p, sizeof(Point));
      }
    }
    write_file_atomic(out.path, bytes);
    return;
  }
  std::ostringstream os;
  os << "ply\n"
     << "format ascii 1.0\n"
     << "element vertex " << mask.kept_count() << "\n"
     << "property float x\n"
     << "property float y\n"
     << "property float z\n"
     << "property float intensity\n"
     << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (mask.kept(i)) {
      const Point& p = cloud[i];
      os << format_float(p.x) << ' ' << format_float(p.y) << ' '
         << format_float(p.z) << ' ' << format_float(p.intensity) << '\n';
    }
  }
  write_file_atomic(out.path, os.str());
}

void write_labels(const std::vector<std::uint32_t>& labels,
                  const std::filesystem::path& path) {
  std::string bytes(labels.size() * 4, '\0');
  std::memcpy(bytes.data(), labels.data(), bytes.size());
  write_file_atomic(path, bytes);
}

void write_mask(const FilterMask& mask, const std::filesystem::path& path) {
  write_file_atomic(path,
                    std::string(mask.bytes().begin(), mask.bytes().end()));
}

FilterMask read_mask(const std::filesystem::path& path,
                     std::size_t expected_n) {
  const std::string bytes = read_whole_file(path);
  if (bytes.size() != expected_n) {
    throw Error(ErrorCode::alignment,
                "mask file '" + path.string() + "' has " +
                    std::to_string(bytes.size()) +
                    " bytes but the scan has " + std::to_string(expected_n) +
                    " points");
  }
  std::vector<std::uint8_t> keep(bytes.begin(), bytes.end());
  try {
    return FilterMask(std::move(keep));
  } catch (const Error&) {
    throw Error(ErrorCode::format,
                "mask file '" + path.string() + "' holds bytes other than 0/1");
  }
}

void write_report(const EvalReport& report, const std::filesystem::path& path,
                  ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::ostringstream os;
    os << "tp,fp,tn,fn,precision,recall\n"
       << report.tp << ',' << report.fp << ',' << report.tn << ','
       << report.fn << ',' << format_metric(report.precision) << ','
       << format_metric(report.recall) << '\n';
    write_file_atomic(path, os.str());
    return;
  }
  nlohmann::ordered_json j;
  j["tp"] = report.tp;
  j["fp"] = report.fp;
  j["tn"] = report.tn;
  j["fn"] = report.fn;
  j["precision"] = report.precision.has_value()
                       ? nlohmann::ordered_json(*report.precision)
                       : nlohmann::ordered_json(nullptr);
  j["recall"] = report.recall.has_value()
                    ? nlohmann::ordered_json(*report.recall)
                    : nlohmann::ordered_json(nullptr);
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_sweep_csv(const std::vector<SweepEntry>& entries,
                     const std::filesystem::path& path) {
  std::ostringstream os;
  if (!entries.empty()) {
    for (const auto& [key, value] : entries.front().config) {
      os << key << ',';
    }
  }
  os << "tp,fp,tn,fn,precision,recall\n";
  for (const SweepEntry& entry : entries) {
    for (const auto& [key, value] : entry.config) {
      os << value << ',';
    }
    os << entry.report.tp << ',' << entry.report.fp << ',' << entry.report.tn
       << ',' << entry.report.fn << ','
       << format_metric(entry.report.precision) << ','
       << format_metric(entry.report.recall) << '\n';
  }
  write_file_atomic(path, os.str());
}

void write_histogram_csv(const RangeHistogram& hist,
                         const std::filesystem::path& path) {
  std::ostringstream os;
  os << "bin_start,count,normalized_density\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    char density[32];
    std::snprintf(density, sizeof(density), "%.6g", hist.density(b));
    os << static_cast<double>(b) * hist.bin_width << ',' << hist.counts[b]
       << ',' << density << '\n';
  }
  write_file_atomic(path, os.str());
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) {
    dir = ".";
  }
  const std::filesystem::path tmp =
      dir / (path.filename().string() + ".tmp" +
             std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::io,
                  "cannot open '" + tmp.string() + "' for writing");
    }
    out.write(contents.data(),
              static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out.good()) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::io, "write failed on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ec2;
    std::filesystem::remove(tmp, ec2);
    throw Error(ErrorCode::io, "cannot move '" + tmp.string() + "' to '" +
                                   path.string() + "': " + ec.message());
  }
}

}  // namespace deweather
