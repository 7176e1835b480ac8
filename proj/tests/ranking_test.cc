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

#include "rankdp/ranking.h"

#include <algorithm>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace rankdp {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

Ranking R(std::vector<int> ranks) { return *Ranking::Create(std::move(ranks)); }

// Straight from the definition: pairs i < j ordered the same way.
int64_t ConcordantOracle(const Ranking& a, const Ranking& b) {
  int64_t c = 0;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = i + 1; j < a.size(); ++j) {
      if ((a.rank(i) < a.rank(j)) == (b.rank(i) < b.rank(j))) ++c;
    }
  }
  return c;
}

// a and b are neighbors when removing some item k leaves every other pair
// ordered alike.
bool NeighborOracle(const Ranking& a, const Ranking& b) {
  if (a == b) return false;
  const int m = a.size();
  for (int k = 0; k < m; ++k) {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      for (int j = i + 1; j < m && ok; ++j) {
        if (i == k || j == k) continue;
        if ((a.rank(i) < a.rank(j)) != (b.rank(i) < b.rank(j))) ok = false;
      }
    }
    if (ok) return true;
  }
  return false;
}

TEST(RankingTest, CreateValidates) {
  EXPECT_THAT(Ranking::Create({1}).status().message(), HasSubstr("TooShort"));
  EXPECT_THAT(Ranking::Create({1, 1}).status().message(),
              HasSubstr("NotAPermutation"));
  EXPECT_THAT(Ranking::Create({0, 1}).status().message(),
              HasSubstr("NotAPermutation"));
  EXPECT_TRUE(Ranking::Create({2, 1}).ok());
}

TEST(RankingTest, InvertAndFromOrderRoundTrip) {
  const Ranking r = R({3, 1, 4, 2});
  const std::vector<int> order = r.Invert();
  EXPECT_THAT(order, ElementsAre(1, 3, 0, 2));
  EXPECT_EQ(*Ranking::FromOrder(order), r);
  EXPECT_EQ(r.Reversed(), R({2, 4, 1, 3}));
}

TEST(RankingTest, ConcordanceOfFixedPair) {
  const Ranking a = R({1, 2, 3});
  const Ranking b = R({2, 1, 3});
  EXPECT_EQ(*ConcordantPairs(a, b), 2);
  EXPECT_EQ(*DiscordantPairs(a, b), 1);
  EXPECT_DOUBLE_EQ(*NormalizedConcordance(a, b), 2.0 / 3.0);
  EXPECT_EQ(*ConcordantPairs(a, a.Reversed()), 0);
}

TEST(RankingTest, ConcordanceMatchesPairwiseCountEverywhere) {
  for (int m = 2; m <= 5; ++m) {
    const std::vector<Ranking> all = *EnumeratePermutations(m);
    for (const Ranking& a : all) {
      for (const Ranking& b : all) {
        const int64_t c = *ConcordantPairs(a, b);
        ASSERT_EQ(c, ConcordantOracle(a, b));
        ASSERT_EQ(c + *DiscordantPairs(a, b), m * (m - 1) / 2);
        ASSERT_EQ(c, *ConcordantPairs(b, a));
      }
    }
  }
}

TEST(RankingTest, SizeMismatchIsAnError) {
  EXPECT_THAT(ConcordantPairs(R({1, 2}), R({1, 2, 3})).status().message(),
              HasSubstr("SizeMismatch"));
}

TEST(RankingTest, EnumerationIsLexicographicAndComplete) {
  const std::vector<Ranking> all = *EnumeratePermutations(4);
  ASSERT_EQ(all.size(), 24u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  EXPECT_EQ(std::set<Ranking>(all.begin(), all.end()).size(), 24u);
  EXPECT_THAT(EnumeratePermutations(9).status().message(),
              HasSubstr("CapExceeded"));
  EXPECT_EQ(EnumeratePermutations(9).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(RankingTest, PermutationIndexIsEnumerationPosition) {
  for (int m = 2; m <= 6; ++m) {
    const std::vector<Ranking> all = *EnumeratePermutations(m);
    ASSERT_EQ(static_cast<int64_t>(all.size()), Factorial(m));
    for (size_t k = 0; k < all.size(); ++k) {
      ASSERT_EQ(PermutationIndex(all[k]), static_cast<int64_t>(k));
      ASSERT_EQ(PermutationFromIndex(m, static_cast<int64_t>(k)), all[k]);
    }
  }
}

TEST(RankingTest, NeighborsMatchBruteForce) {
  for (int m = 2; m <= 5; ++m) {
    const std::vector<Ranking> all = *EnumeratePermutations(m);
    for (const Ranking& base : all) {
      std::vector<Ranking> expected;
      for (const Ranking& other : all) {
        if (NeighborOracle(base, other)) expected.push_back(other);
      }
      const std::vector<NeighborWitness> got = EnumerateNeighbors(base);
      std::vector<Ranking> got_rankings;
      for (const NeighborWitness& n : got) got_rankings.push_back(n.neighbor);
      ASSERT_EQ(got_rankings, expected) << base.ToString();
      ASSERT_EQ(static_cast<int>(got.size()), (m - 1) * (m - 1));
    }
  }
}

TEST(RankingTest, IdentityOfThreeHasFourNeighborsAndNotTheReversal) {
  const Ranking id = Ranking::Identity(3);
  const std::vector<NeighborWitness> n = EnumerateNeighbors(id);
  EXPECT_EQ(n.size(), 4u);
  for (const NeighborWitness& w : n) EXPECT_NE(w.neighbor, id.Reversed());
  EXPECT_FALSE(IsNeighbor(id, id.Reversed())->is_neighbor);
}

TEST(RankingTest, WitnessesAreExactlyTheExplainingItems) {
  const Ranking a = R({1, 2, 3, 4});
  // Adjacent swap of items 1 and 2: either one explains the difference.
  const NeighborCheck swap = *IsNeighbor(a, R({1, 3, 2, 4}));
  EXPECT_TRUE(swap.is_neighbor);
  EXPECT_THAT(swap.witness_items, ElementsAre(1, 2));
  // Moving item 0 to the end: only item 0 explains it.
  const NeighborCheck move = *IsNeighbor(a, R({4, 1, 2, 3}));
  EXPECT_TRUE(move.is_neighbor);
  EXPECT_THAT(move.witness_items, ElementsAre(0));
  EXPECT_FALSE(IsNeighbor(a, a)->is_neighbor);
  EXPECT_FALSE(IsNeighbor(a, R({2, 1, 4, 3}))->is_neighbor);
}

TEST(RankingTest, EnumeratedWitnessesAgreeWithIsNeighbor) {
  const std::vector<Ranking> all = *EnumeratePermutations(4);
  for (const Ranking& base : all) {
    for (const NeighborWitness& n : EnumerateNeighbors(base)) {
      const NeighborCheck check = *IsNeighbor(base, n.neighbor);
      ASSERT_TRUE(check.is_neighbor);
      ASSERT_EQ(check.witness_items, n.witness_items);
    }
  }
}

}  // namespace
}  // namespace rankdp
