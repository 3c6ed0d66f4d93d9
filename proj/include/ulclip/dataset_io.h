//
// Copyright 2026 The ulclip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Dataset CSV format:
//
//   user_id,dim_0,dim_1,...,dim_{d-1}
//   0,12.5,3.25
//   0,7,0
//   1,64,1
//
// One row per sample. Rows are grouped by user_id (a nonnegative integer);
// users are ordered by ascending id and each user's samples keep file order.
// Contribution counts are inferred from the grouping.

#ifndef ULCLIP_DATASET_IO_H_
#define ULCLIP_DATASET_IO_H_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "ulclip/data_model.h"

namespace ulclip {

namespace internal {

inline bool ParseDouble(absl::string_view text, double& out) {
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline bool ParseUserId(absl::string_view text, int64_t& out) {
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && out >= 0;
}

}  // namespace internal

// Parses CSV text; every sample must lie in the l1 ball of radius U.
inline absl::StatusOr<Dataset> ParseDatasetCsv(absl::string_view text,
                                               double U) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  // Drop blank lines (including the one after a trailing newline) but keep
  // 1-based line numbers for messages.
  std::size_t header_line = 0;
  while (header_line < lines.size() &&
         absl::StripAsciiWhitespace(lines[header_line]).empty()) {
    ++header_line;
  }
  if (header_line == lines.size()) {
    return absl::InvalidArgumentError("dataset CSV has no rows");
  }

  const std::vector<absl::string_view> header =
      absl::StrSplit(absl::StripAsciiWhitespace(lines[header_line]), ',');
  if (header.size() < 2 || absl::StripAsciiWhitespace(header[0]) != "user_id") {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown dataset CSV header '", lines[header_line],
        "'; expected user_id,dim_0,...,dim_{d-1}"));
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (absl::StripAsciiWhitespace(header[i]) != absl::StrCat("dim_", i - 1)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "unknown dataset CSV header column '%s' at position %d", header[i],
          i));
    }
  }
  const int d = static_cast<int>(header.size()) - 1;

  std::map<int64_t, Dataset::UserSamples> users;
  std::size_t rows = 0;
  for (std::size_t n = header_line + 1; n < lines.size(); ++n) {
    const absl::string_view line = absl::StripAsciiWhitespace(lines[n]);
    if (line.empty()) continue;
    const std::size_t line_no = n + 1;
    const std::vector<absl::string_view> fields = absl::StrSplit(line, ',');
    if (static_cast<int>(fields.size()) != d + 1) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: expected %d fields, got %d (dimension mismatch)", line_no,
          d + 1, fields.size()));
    }
    int64_t user_id = 0;
    if (!internal::ParseUserId(fields[0], user_id)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: malformed user_id '%s'", line_no, fields[0]));
    }
    std::vector<double> coords(d);
    for (int i = 0; i < d; ++i) {
      if (!internal::ParseDouble(fields[i + 1], coords[i])) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: malformed value '%s' in dim_%d", line_no, fields[i + 1],
            i));
      }
    }
    Point sample(std::move(coords));
    if (absl::Status s = ValidateSample(sample, d, U); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d (user %d): %s", line_no, user_id, s.message()));
    }
    users[user_id].push_back(std::move(sample));
    ++rows;
  }
  if (rows == 0) return absl::InvalidArgumentError("dataset CSV has no rows");

  std::vector<int64_t> counts;
  std::vector<Dataset::UserSamples> samples;
  for (auto& [id, user] : users) {
    counts.push_back(static_cast<int64_t>(user.size()));
    samples.push_back(std::move(user));
  }
  absl::StatusOr<ContributionProfile> profile =
      ContributionProfile::Create(std::move(counts), U, d);
  if (!profile.ok()) return profile.status();
  return Dataset::Create(*std::move(profile), std::move(samples));
}

inline std::string FormatDatasetCsv(const Dataset& ds) {
  std::string out = "user_id";
  for (int i = 0; i < ds.profile().d(); ++i) absl::StrAppend(&out, ",dim_", i);
  out += '\n';
  for (std::size_t l = 0; l < ds.samples().size(); ++l) {
    for (const Point& x : ds.user(l)) {
      absl::StrAppend(&out, l);
      for (double v : x.coords()) absl::StrAppendFormat(&out, ",%.17g", v);
      out += '\n';
    }
  }
  return out;
}

inline absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return buf.str();
}

inline absl::Status WriteFile(const std::string& path, absl::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot open ", path, " for writing"));
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

inline absl::StatusOr<Dataset> LoadDataset(const std::string& path, double U) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Dataset> ds = ParseDatasetCsv(*text, U);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(),
                        absl::StrCat(path, ": ", ds.status().message()));
  }
  return ds;
}

inline absl::Status SaveDataset(const Dataset& ds, const std::string& path) {
  return WriteFile(path, FormatDatasetCsv(ds));
}

}  // namespace ulclip

#endif  // ULCLIP_DATASET_IO_H_
