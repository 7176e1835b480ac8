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

#include "rankdp/rng.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"

namespace rankdp {
namespace {

TEST(HashTest, ReferenceValues) {
  // First splitmix64 output from state 0.
  EXPECT_EQ(Mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(HashLabel(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(HashLabel("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(HashTest, DeriveSeedSeparatesParts) {
  EXPECT_NE(DeriveSeed(1, {2, 3}), DeriveSeed(1, {3, 2}));
  EXPECT_NE(DeriveSeed(1, {2}), DeriveSeed(2, {2}));
  EXPECT_NE(DeriveSeed(1, {}), DeriveSeed(1, {0}));
  EXPECT_EQ(DeriveSeed(5, {7, 9}), DeriveSeed(5, {7, 9}));
  EXPECT_EQ(DoubleBits(-0.0), DoubleBits(0.0));
  EXPECT_NE(DoubleBits(1.0), DoubleBits(std::nextafter(1.0, 2.0)));
}

TEST(RngTest, UniformRanges) {
  Rng rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.UniformOpen();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(RngTest, BelowIsUniform) {
  Rng rng(2);
  const int n = 7, draws = 70000;
  std::vector<int> counts(n, 0);
  for (int k = 0; k < draws; ++k) ++counts[rng.Below(n)];
  const double p = 1.0 / n;
  for (int c : counts) {
    EXPECT_NEAR(static_cast<double>(c) / draws, p,
                4 * std::sqrt(p * (1 - p) / draws));
  }
  EXPECT_EQ(rng.Below(1), 0u);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(99), b(99);
  for (int k = 0; k < 100; ++k) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  for (int workers : {1, 2, 8}) {
    std::vector<std::atomic<int>> hits(1000);
    ParallelFor(1000, workers, [&](int64_t i) { ++hits[i]; });
    for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
}

TEST(ParallelForTest, RethrowsWorkerExceptions) {
  EXPECT_THROW(ParallelFor(100, 4,
                           [](int64_t i) {
                             if (i == 37) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

TEST(WorkerCountTest, EnvironmentOverrides) {
  unsetenv("RANKDP_THREADS");
  EXPECT_EQ(ResolveWorkerCount(3), 3);
  EXPECT_GE(ResolveWorkerCount(0), 1);
  setenv("RANKDP_THREADS", "5", 1);
  EXPECT_EQ(ResolveWorkerCount(3), 5);
  setenv("RANKDP_THREADS", "junk", 1);
  EXPECT_EQ(ResolveWorkerCount(3), 3);
  unsetenv("RANKDP_THREADS");
}

}  // namespace
}  // namespace rankdp
