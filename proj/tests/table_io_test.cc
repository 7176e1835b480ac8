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

#include <clocale>
#include <cmath>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace rankdp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(FormatRealTest, RoundTripsAndIgnoresLocale) {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-300, -7.0, 123456789.125}) {
    EXPECT_EQ(std::stod(FormatReal(v)), v);
  }
  EXPECT_EQ(FormatReal(0.5), "0.5");
  EXPECT_EQ(FormatReal(4.0), "4");
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  EXPECT_EQ(FormatReal(0.25), "0.25");
  std::setlocale(LC_NUMERIC, "C");
}

TEST(CsvTest, ParsesAndReportsLines) {
  const CsvTable t = *ParseCsv("a,b\n1,2\n\n3,4\r\n");
  EXPECT_THAT(t.header, ElementsAre("a", "b"));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_THAT(t.line_numbers, ElementsAre(2, 4));
  EXPECT_THAT(ParseCsv("a,b\n1,2\n3\n").status().message(),
              HasSubstr("ParseError: line 3"));
}

TEST(RankingCsvTest, RoundTrip) {
  const std::string text =
      "user_id,item_0,item_1,item_2,epsilon\nu1,3,1,2,0.5\nu2,1,2,3,4\n";
  const RankingDataset d = *ParseRankingCsv(text);
  ASSERT_EQ(d.rankings.size(), 2u);
  EXPECT_EQ(d.rankings[0], *Ranking::Create({3, 1, 2}));
  EXPECT_THAT(d.per_user_epsilon, ElementsAre(0.5, 4.0));
  EXPECT_EQ(RankingCsv(d, 3), text);
}

TEST(RankingCsvTest, EmptyDatasetKeepsWidth) {
  const RankingDataset d = *ParseRankingCsv("user_id,item_0,item_1\n");
  EXPECT_TRUE(d.rankings.empty());
  EXPECT_EQ(d.item_ids.size(), 2u);
  EXPECT_EQ(RankingCsv(d, 2), "user_id,item_0,item_1\n");
}

TEST(RankingCsvTest, Errors) {
  EXPECT_THAT(ParseRankingCsv("id,item_0\n").status().message(),
              HasSubstr("ParseError: line 1"));
  EXPECT_THAT(ParseRankingCsv("user_id,item_0,item_1\nu,1,1\n")
                  .status()
                  .message(),
              HasSubstr("ParseError: line 2"));
  EXPECT_THAT(ParseRankingCsv("user_id,item_0,item_1\nu,1,x\n")
                  .status()
                  .message(),
              HasSubstr("ParseError: line 2"));
  EXPECT_THAT(ParseRankingCsv("user_id,item_0,item_1,epsilon\nu,1,2,-1\n")
                  .status()
                  .message(),
              HasSubstr("ParseError: line 2"));
}

TEST(FeatureCsvTest, RoundTrip) {
  const std::string text = "item_id,f0,f1\na,0.5,-1\nb,2,3.25\n";
  const FeatureTable t = *ParseFeatureCsv(text);
  EXPECT_EQ(t.features.rows(), 2);
  EXPECT_EQ(t.features(1, 1), 3.25);
  EXPECT_EQ(FeatureCsv(t, "item_id"), text);
  EXPECT_FALSE(ParseFeatureCsv("id,f0\na,nan\n").ok());
}

TEST(FileTest, WriteThenRead) {
  const std::string path = ::testing::TempDir() + "/rankdp_io_test.txt";
  ASSERT_TRUE(WriteFile(path, "hello\n").ok());
  EXPECT_EQ(*ReadFile(path), "hello\n");
  EXPECT_FALSE(ReadFile(path + ".missing").ok());
}

}  // namespace
}  // namespace rankdp
