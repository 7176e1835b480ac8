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
#include <map>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace rankdp {
namespace {

absl::Status SizeMismatch(const Ranking& a, const Ranking& b) {
  return absl::InvalidArgumentError(absl::StrFormat(
      "SizeMismatch: rankings over %d and %d items", a.size(), b.size()));
}

}  // namespace

absl::StatusOr<Ranking> Ranking::Create(std::vector<int> ranks) {
  const int m = static_cast<int>(ranks.size());
  if (m < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TooShort: a ranking needs at least 2 items, got %d", m));
  }
  std::vector<bool> seen(m + 1, false);
  for (int i = 0; i < m; ++i) {
    const int r = ranks[i];
    if (r < 1 || r > m) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "NotAPermutation: rank %d of item %d outside 1..%d", r, i, m));
    }
    if (seen[r]) {
      return absl::InvalidArgumentError(
          absl::StrFormat("NotAPermutation: rank %d appears twice", r));
    }
    seen[r] = true;
  }
  return Ranking(std::move(ranks));
}

Ranking Ranking::Identity(int m) {
  std::vector<int> ranks(m);
  std::iota(ranks.begin(), ranks.end(), 1);
  return Ranking(std::move(ranks));
}

absl::StatusOr<Ranking> Ranking::FromOrder(std::span<const int> items_by_rank) {
  const int m = static_cast<int>(items_by_rank.size());
  std::vector<int> ranks(m, 0);
  for (int k = 0; k < m; ++k) {
    const int item = items_by_rank[k];
    if (item < 0 || item >= m || ranks[item] != 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "NotAPermutation: item order entry %d is invalid", item));
    }
    ranks[item] = k + 1;
  }
  return Create(std::move(ranks));
}

std::vector<int> Ranking::Invert() const {
  std::vector<int> items(ranks_.size());
  for (int i = 0; i < size(); ++i) items[ranks_[i] - 1] = i;
  return items;
}

Ranking Ranking::Reversed() const {
  std::vector<int> ranks(ranks_);
  for (int& r : ranks) r = size() + 1 - r;
  return Ranking(std::move(ranks));
}

std::string Ranking::ToString() const {
  return absl::StrCat("[", absl::StrJoin(ranks_, ","), "]");
}

namespace internal {

int64_t CountConcordant(std::span<const int> a, std::span<const int> b) {
  const size_t m = a.size();
  int64_t count = 0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if ((a[i] - a[j]) * (b[i] - b[j]) > 0) ++count;
    }
  }
  return count;
}

}  // namespace internal

absl::StatusOr<int64_t> ConcordantPairs(const Ranking& a, const Ranking& b) {
  if (a.size() != b.size()) return SizeMismatch(a, b);
  return internal::CountConcordant(a.ranks(), b.ranks());
}

absl::StatusOr<int64_t> DiscordantPairs(const Ranking& a, const Ranking& b) {
  if (a.size() != b.size()) return SizeMismatch(a, b);
  const int64_t m = a.size();
  return m * (m - 1) / 2 - internal::CountConcordant(a.ranks(), b.ranks());
}

absl::StatusOr<double> NormalizedConcordance(const Ranking& a,
                                             const Ranking& b) {
  if (a.size() != b.size()) return SizeMismatch(a, b);
  const double m = a.size();
  return 2.0 * internal::CountConcordant(a.ranks(), b.ranks()) / (m * (m - 1));
}

int64_t Factorial(int m) {
  int64_t f = 1;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

absl::StatusOr<std::vector<Ranking>> EnumeratePermutations(int m, int cap) {
  if (m > cap) {
    return absl::OutOfRangeError(absl::StrFormat(
        "CapExceeded: enumerating %d! permutations exceeds cap m <= %d", m,
        cap));
  }
  if (m < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TooShort: a ranking needs at least 2 items, got %d", m));
  }
  std::vector<Ranking> out;
  out.reserve(Factorial(m));
  std::vector<int> ranks(m);
  std::iota(ranks.begin(), ranks.end(), 1);
  do {
    out.push_back(*Ranking::Create(ranks));
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return out;
}

int64_t PermutationIndex(const Ranking& r) {
  const int m = r.size();
  int64_t index = 0;
  for (int i = 0; i < m; ++i) {
    int smaller_after = 0;
    for (int j = i + 1; j < m; ++j) {
      if (r.rank(j) < r.rank(i)) ++smaller_after;
    }
    index = index * (m - i) + smaller_after;
  }
  return index;
}

Ranking PermutationFromIndex(int m, int64_t index) {
  std::vector<int> digits(m);
  for (int i = m - 1; i >= 0; --i) {
    const int base = m - i;
    digits[i] = static_cast<int>(index % base);
    index /= base;
  }
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> ranks(m);
  for (int i = 0; i < m; ++i) {
    ranks[i] = pool[digits[i]];
    pool.erase(pool.begin() + digits[i]);
  }
  return *Ranking::Create(std::move(ranks));
}

std::vector<NeighborWitness> EnumerateNeighbors(const Ranking& r) {
  const int m = r.size();
  const std::vector<int> order = r.Invert();
  std::map<Ranking, std::vector<int>> merged;
  for (int from = 0; from < m; ++from) {
    const int item = order[from];
    std::vector<int> rest = order;
    rest.erase(rest.begin() + from);
    for (int to = 0; to < m; ++to) {
      if (to == from) continue;
      std::vector<int> moved = rest;
      moved.insert(moved.begin() + to, item);
      merged[*Ranking::FromOrder(moved)].push_back(item);
    }
  }
  std::vector<NeighborWitness> out;
  out.reserve(merged.size());
  for (auto& [neighbor, witnesses] : merged) {
    std::sort(witnesses.begin(), witnesses.end());
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()),
                    witnesses.end());
    out.push_back({neighbor, std::move(witnesses)});
  }
  return out;
}

absl::StatusOr<NeighborCheck> IsNeighbor(const Ranking& a, const Ranking& b) {
  if (a.size() != b.size()) return SizeMismatch(a, b);
  NeighborCheck check;
  if (a == b) return check;
  const int m = a.size();
  // Items that take part in at least one discordant pair. A witness k must
  // belong to every discordant pair.
  std::vector<int> discordant_with(m, 0);
  int discordant = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if ((a.rank(i) - a.rank(j)) * (b.rank(i) - b.rank(j)) < 0) {
        ++discordant_with[i];
        ++discordant_with[j];
        ++discordant;
      }
    }
  }
  for (int k = 0; k < m; ++k) {
    if (discordant_with[k] == discordant) check.witness_items.push_back(k);
  }
  check.is_neighbor = !check.witness_items.empty();
  return check;
}

}  // namespace rankdp
