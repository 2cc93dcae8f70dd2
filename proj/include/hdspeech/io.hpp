// Copyright 2026 The hdspeech Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file io.hpp
 * @brief Manifest and feature-table CSV files.
 *
 * manifest.csv: header "id,path,label", one recording per line, paths
 * relative to the manifest's directory. features.csv: header
 * "id,label,<feature names>", values printed as shortest round-trip decimals,
 * missing values as empty fields. Both use LF line endings and no quoting, so
 * ids must not contain commas, quotes or line breaks.
 */
#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"

namespace hdspeech {

struct ManifestRow {
  std::string id;
  std::string path;  // as written; resolve with resolve_path
  Label label = Label::kHC;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::vector<ManifestRow> rows;

  std::filesystem::path resolve_path(const ManifestRow& row) const {
    const std::filesystem::path p(row.path);
    return p.is_absolute() ? p : base_dir / p;
  }
};

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline void check_field(std::string_view field, std::string_view what) {
  if (field.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must not be empty");
  if (field.find_first_of(",\"\r\n") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " '" + std::string(field) +
                                                 "' contains a comma, quote or line break");
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace detail

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kMalformedInput, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline Manifest read_manifest(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || lines[0] != "id,path,label") {
    throw Error(ErrorCode::kMalformedInput, path.string() + ": header must be 'id,path,label'");
  }
  Manifest m;
  m.base_dir = path.parent_path();
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv_line(lines[i]);
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (f.size() != 3) throw Error(ErrorCode::kMalformedInput, where + ": expected 3 fields");
    if (f[0].empty() || f[1].empty()) throw Error(ErrorCode::kMalformedInput, where + ": empty id or path");
    if (!seen.emplace(f[0]).second) {
      throw Error(ErrorCode::kMalformedInput, where + ": duplicate id '" + std::string(f[0]) + "'");
    }
    m.rows.push_back({std::string(f[0]), std::string(f[1]), parse_label(f[2])});
  }
  return m;
}

inline void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows) {
  std::string text = "id,path,label\n";
  for (const auto& r : rows) {
    detail::check_field(r.id, "id");
    detail::check_field(r.path, "path");
    text += r.id + "," + r.path + "," + to_string(r.label) + "\n";
  }
  detail::write_text(path, text);
}

inline std::string features_csv(const FeatureMatrix& m) {
  m.validate();
  std::string text = "id,label";
  for (const auto& n : m.feature_names) {
    detail::check_field(n, "feature name");
    text += "," + n;
  }
  text += "\n";
  for (const auto& r : m.rows) {
    detail::check_field(r.recording_id, "id");
    text += r.recording_id + "," + to_string(r.label);
    for (double v : r.values) {
      text += ",";
      if (!is_missing(v)) text += format_double(v);
    }
    text += "\n";
  }
  return text;
}

inline void write_features_csv(const std::filesystem::path& path, const FeatureMatrix& m) {
  detail::write_text(path, features_csv(m));
}

inline FeatureMatrix read_features_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) throw Error(ErrorCode::kMalformedInput, path.string() + ": empty file");
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw Error(ErrorCode::kMalformedInput, path.string() + ": header must start with 'id,label,' and name features");
  }
  FeatureMatrix m;
  std::set<std::string, std::less<>> names;
  for (std::size_t j = 2; j < header.size(); ++j) {
    if (header[j].empty() || !names.emplace(header[j]).second) {
      throw Error(ErrorCode::kMalformedInput, path.string() + ": empty or duplicate feature name in header");
    }
    m.feature_names.emplace_back(header[j]);
  }
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_csv_line(lines[i]);
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kMalformedInput, where + ": expected " + std::to_string(header.size()) + " fields, got " +
                                                  std::to_string(f.size()));
    }
    if (f[0].empty() || !ids.emplace(f[0]).second) {
      throw Error(ErrorCode::kMalformedInput, where + ": empty or duplicate id");
    }
    FeatureRow row{std::string(f[0]), parse_label(f[1]), {}};
    row.values.reserve(f.size() - 2);
    for (std::size_t j = 2; j < f.size(); ++j) {
      try {
        row.values.push_back(f[j].empty() ? kMissing : parse_double(f[j]));
      } catch (const Error& e) {
        throw Error(ErrorCode::kMalformedInput, where + ": " + e.what());
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace hdspeech
