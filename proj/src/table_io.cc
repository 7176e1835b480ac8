// Copyright 2026 The rankdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rankdp/table_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace rankdp {
namespace {

absl::Status ParseError(int line, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("ParseError: line ", line, ": ", what));
}

}  // namespace

std::string FormatReal(double value) {
  char buf[64];
  // Shortest text that parses back to the same double; to_chars ignores the
  // global locale.
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

absl::StatusOr<CsvTable> ParseCsv(std::string_view text) {
  CsvTable table;
  int line_no = 0;
  bool have_header = false;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> fields;
    for (absl::string_view f : absl::StrSplit(line, ',')) {
      fields.emplace_back(absl::StripAsciiWhitespace(f));
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      return ParseError(line_no,
                        absl::StrFormat("expected %d fields, found %d",
                                        table.header.size(), fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) return ParseError(line_no, "missing header");
  return table;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << contents;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

absl::StatusOr<RankingDataset> ParseRankingCsv(std::string_view text) {
  absl::StatusOr<CsvTable> table = ParseCsv(text);
  if (!table.ok()) return table.status();
  const std::vector<std::string>& header = table->header;
  if (header.empty() || header.front() != "user_id") {
    return ParseError(1, "first column must be user_id");
  }
  const bool has_epsilon = header.back() == "epsilon";
  const int m = static_cast<int>(header.size()) - 1 - (has_epsilon ? 1 : 0);
  for (int k = 0; k < m; ++k) {
    if (header[k + 1] != absl::StrCat("item_", k)) {
      return ParseError(1, absl::StrCat("expected column item_", k, ", found ",
                                        header[k + 1]));
    }
  }
  RankingDataset dataset;
  for (size_t r = 0; r < table->rows.size(); ++r) {
    const std::vector<std::string>& row = table->rows[r];
    const int line_no = table->line_numbers[r];
    std::vector<int> ranks(m);
    for (int k = 0; k < m; ++k) {
      if (!absl::SimpleAtoi(row[k + 1], &ranks[k])) {
        return ParseError(line_no, absl::StrCat("bad rank '", row[k + 1], "'"));
      }
    }
    absl::StatusOr<Ranking> ranking = Ranking::Create(std::move(ranks));
    if (!ranking.ok()) return ParseError(line_no, ranking.status().message());
    dataset.user_ids.push_back(row[0]);
    dataset.rankings.push_back(*std::move(ranking));
    if (has_epsilon) {
      double eps;
      if (!absl::SimpleAtod(row.back(), &eps) || !(eps > 0)) {
        return ParseError(line_no,
                          absl::StrCat("bad epsilon '", row.back(), "'"));
      }
      dataset.per_user_epsilon.push_back(eps);
    }
  }
  for (int k = 0; k < m; ++k) dataset.item_ids.push_back(absl::StrCat(k));
  return dataset;
}

std::string RankingCsv(const RankingDataset& dataset, int num_items) {
  std::string out = "user_id";
  for (int k = 0; k < num_items; ++k) absl::StrAppend(&out, ",item_", k);
  const bool has_epsilon = !dataset.per_user_epsilon.empty();
  if (has_epsilon) out += ",epsilon";
  out += "\n";
  for (size_t u = 0; u < dataset.rankings.size(); ++u) {
    out += dataset.user_ids[u];
    for (int r : dataset.rankings[u].ranks()) absl::StrAppend(&out, ",", r);
    if (has_epsilon) {
      absl::StrAppend(&out, ",", FormatReal(dataset.per_user_epsilon[u]));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<FeatureTable> ParseFeatureCsv(std::string_view text) {
  absl::StatusOr<CsvTable> table = ParseCsv(text);
  if (!table.ok()) return table.status();
  const int cols = static_cast<int>(table->header.size()) - 1;
  if (cols < 1) return ParseError(1, "feature table needs an id and features");
  FeatureTable out;
  out.features.resize(static_cast<Eigen::Index>(table->rows.size()), cols);
  for (size_t r = 0; r < table->rows.size(); ++r) {
    const int line_no = table->line_numbers[r];
    out.ids.push_back(table->rows[r][0]);
    for (int c = 0; c < cols; ++c) {
      double v;
      if (!absl::SimpleAtod(table->rows[r][c + 1], &v) || !std::isfinite(v)) {
        return ParseError(line_no, absl::StrCat("bad feature value '",
                                                table->rows[r][c + 1], "'"));
      }
      out.features(static_cast<Eigen::Index>(r), c) = v;
    }
  }
  return out;
}

std::string FeatureCsv(const FeatureTable& table, std::string_view id_column) {
  std::string out(id_column);
  for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
    absl::StrAppend(&out, ",f", c);
  }
  out += "\n";
  for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
    out += table.ids[r];
    for (Eigen::Index c = 0; c < table.features.cols(); ++c) {
      absl::StrAppend(&out, ",", FormatReal(table.features(r, c)));
    }
    out += "\n";
  }
  return out;
}

}  // namespace rankdp
