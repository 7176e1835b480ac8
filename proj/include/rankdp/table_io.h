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

// CSV readers and writers for ranking datasets, feature tables and results.
// Output is locale-independent: '.' decimal point, LF line endings, reals at
// 17 significant digits.

#ifndef RANKDP_TABLE_IO_H_
#define RANKDP_TABLE_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "rankdp/ranking.h"

namespace rankdp {

// Shortest round-trip decimal form, independent of the locale.
std::string FormatReal(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row.
  std::vector<int> line_numbers;
};

// Plain comma-separated values (no quoting). Blank lines are ignored; every
// row must have as many fields as the header. Errors: "ParseError" with the
// 1-based line number.
absl::StatusOr<CsvTable> ParseCsv(std::string_view text);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

struct RankingDataset {
  std::vector<std::string> user_ids;
  std::vector<Ranking> rankings;
  // Per-user budgets; empty when the dataset carries none.
  std::vector<double> per_user_epsilon;
  // Original item identifiers for column k (ingested data); may be empty.
  std::vector<std::string> item_ids;

  int num_items() const {
    return rankings.empty() ? 0 : rankings.front().size();
  }
};

// Wide ranking CSV: `user_id,item_0,...,item_{m-1}[,epsilon]`, each cell the
// rank (1..m) of that item. A dataset with zero rows keeps its header width.
absl::StatusOr<RankingDataset> ParseRankingCsv(std::string_view text);
std::string RankingCsv(const RankingDataset& dataset, int num_items);

// Feature CSV: first column an id, remaining columns f0, f1, ...
struct FeatureTable {
  std::vector<std::string> ids;
  Eigen::MatrixXd features;
};

absl::StatusOr<FeatureTable> ParseFeatureCsv(std::string_view text);
std::string FeatureCsv(const FeatureTable& table, std::string_view id_column);

}  // namespace rankdp

#endif  // RANKDP_TABLE_IO_H_
