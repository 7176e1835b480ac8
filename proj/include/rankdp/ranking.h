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

// Permutation primitives. Items are 0-based indices; ranks are 1-based, so
// a Ranking over m items stores ranks[i] in {1, ..., m} for item i.

#ifndef RANKDP_RANKING_H_
#define RANKDP_RANKING_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace rankdp {

// Largest m for which full enumeration of the m! permutations is allowed.
inline constexpr int kEnumerationCap = 8;

class Ranking {
 public:
  // Validates that `ranks` is a permutation of 1..m with m >= 2.
  // Errors: "TooShort" when m < 2, "NotAPermutation" otherwise.
  static absl::StatusOr<Ranking> Create(std::vector<int> ranks);

  // ranks[i] = i + 1.
  static Ranking Identity(int m);

  // Builds a ranking from the item order: items_by_rank[k] holds the item
  // with rank k + 1. The argument must itself be a permutation of 0..m-1.
  static absl::StatusOr<Ranking> FromOrder(std::span<const int> items_by_rank);

  int size() const { return static_cast<int>(ranks_.size()); }
  int rank(int item) const { return ranks_[item]; }
  std::span<const int> ranks() const { return ranks_; }

  // result[k - 1] is the item holding rank k.
  std::vector<int> Invert() const;

  // rank m + 1 - r for every item.
  Ranking Reversed() const;

  std::string ToString() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;
  friend std::strong_ordering operator<=>(const Ranking& a,
                                          const Ranking& b) {
    return a.ranks_ <=> b.ranks_;
  }

 private:
  explicit Ranking(std::vector<int> ranks) : ranks_(std::move(ranks)) {}

  std::vector<int> ranks_;
};

// Unordered pairs {i, j} ordered the same way by both rankings, C(a, b).
// Error: "SizeMismatch".
absl::StatusOr<int64_t> ConcordantPairs(const Ranking& a, const Ranking& b);

// Unordered pairs ordered oppositely. C + D = m(m-1)/2.
absl::StatusOr<int64_t> DiscordantPairs(const Ranking& a, const Ranking& b);

// Ordered-pair fraction T = 2C / (m(m-1)), in [0, 1].
absl::StatusOr<double> NormalizedConcordance(const Ranking& a,
                                             const Ranking& b);

// All m! rankings in lexicographic order of their rank vectors.
// Error: "CapExceeded" when m > cap.
absl::StatusOr<std::vector<Ranking>> EnumeratePermutations(
    int m, int cap = kEnumerationCap);

// Position of `r` in the lexicographic order produced by
// EnumeratePermutations (Lehmer code). Valid for m <= 20.
int64_t PermutationIndex(const Ranking& r);

// Inverse of PermutationIndex.
Ranking PermutationFromIndex(int m, int64_t index);

int64_t Factorial(int m);

struct NeighborWitness {
  Ranking neighbor;
  // Sorted items k such that every pair not involving k is concordant.
  std::vector<int> witness_items;
};

// Every ranking reachable by removing one item and reinserting it at a
// different position. Duplicates are merged with their witness sets
// combined; there are (m-1)^2 distinct neighbors. Sorted by neighbor.
std::vector<NeighborWitness> EnumerateNeighbors(const Ranking& r);

struct NeighborCheck {
  bool is_neighbor = false;
  std::vector<int> witness_items;
};

// True iff a != b and some item k leaves all other pairs concordant.
// Error: "SizeMismatch".
absl::StatusOr<NeighborCheck> IsNeighbor(const Ranking& a, const Ranking& b);

namespace internal {

// Unchecked variants for hot loops; callers guarantee equal sizes.
int64_t CountConcordant(std::span<const int> a, std::span<const int> b);

}  // namespace internal

}  // namespace rankdp

#endif  // RANKDP_RANKING_H_
