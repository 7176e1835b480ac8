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

#include "rankdp/attack.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "rankdp/mechanisms.h"
#include "rankdp/rng.h"
#include "rankdp/table_io.h"

namespace rankdp {
namespace {

absl::Status CheckSample(const AttackSample& sample) {
  if (sample.rankings.empty()) {
    return absl::InvalidArgumentError("EmptySample: no synthetic rankings");
  }
  const int m = sample.rankings.front().size();
  for (const Ranking& r : sample.rankings) {
    if (r.size() != m) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "SizeMismatch: sample mixes rankings over %d and %d items", m,
          r.size()));
    }
  }
  return absl::OkStatus();
}

void Tally(const Ranking& r, std::vector<int64_t>& above) {
  const int m = r.size();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (r.rank(i) > r.rank(j)) ++above[i * m + j];
    }
  }
}

}  // namespace

double EpsilonSchedule::EpsilonFor(int m, int64_t n) const {
  const double root = std::sqrt(static_cast<double>(n));
  switch (kind) {
    case Kind::kFixed:
      return c;
    case Kind::kSqrt:
      return c * (m - 1) / root;
    case Kind::kLogSqrt:
      return c * (m - 1) * std::log(static_cast<double>(n)) / root;
  }
  return c;
}

std::string_view EpsilonSchedule::name() const {
  switch (kind) {
    case Kind::kFixed:
      return "fixed";
    case Kind::kSqrt:
      return "sqrt";
    case Kind::kLogSqrt:
      return "logsqrt";
  }
  return "fixed";
}

absl::StatusOr<EpsilonSchedule> EpsilonSchedule::Parse(std::string_view kind,
                                                       double c) {
  if (!(c > 0) || !std::isfinite(c)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("schedule constant must be positive, got %g", c));
  }
  if (kind == "fixed") return EpsilonSchedule{Kind::kFixed, c};
  if (kind == "sqrt") return EpsilonSchedule{Kind::kSqrt, c};
  if (kind == "logsqrt") return EpsilonSchedule{Kind::kLogSqrt, c};
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown schedule '", std::string(kind), "' (expected fixed, sqrt or logsqrt)"));
}

absl::StatusOr<Ranking> MleFromPairwiseCounts(
    int m, const std::vector<int64_t>& above) {
  if (above.size() != static_cast<size_t>(m) * m) {
    return absl::InvalidArgumentError(
        absl::StrFormat("SizeMismatch: expected %d x %d pairwise counts", m, m));
  }
  if (m > kEnumerationCap) {
    return absl::OutOfRangeError(absl::StrFormat(
        "CapExceeded: exhaustive MLE supports m <= %d, got %d",
        kEnumerationCap, m));
  }
  std::vector<int> ranks(m);
  std::iota(ranks.begin(), ranks.end(), 1);
  std::vector<int> best = ranks;
  int64_t best_score = -1;
  // next_permutation walks rank vectors in lexicographic order, so keeping
  // only strict improvements returns the smallest maximizer.
  do {
    int64_t score = 0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (ranks[i] > ranks[j]) score += above[i * m + j];
      }
    }
    if (score > best_score) {
      best_score = score;
      best = ranks;
    }
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return Ranking::Create(std::move(best));
}

absl::StatusOr<Ranking> MleCentralRanking(const AttackSample& sample) {
  if (auto s = CheckSample(sample); !s.ok()) return s;
  const int m = sample.rankings.front().size();
  if (m > kEnumerationCap) {
    return absl::OutOfRangeError(absl::StrFormat(
        "CapExceeded: exhaustive MLE supports m <= %d, got %d",
        kEnumerationCap, m));
  }
  std::vector<int64_t> above(static_cast<size_t>(m) * m, 0);
  for (const Ranking& r : sample.rankings) Tally(r, above);
  return MleFromPairwiseCounts(m, above);
}

absl::StatusOr<Ranking> BordaAggregate(const AttackSample& sample) {
  if (auto s = CheckSample(sample); !s.ok()) return s;
  const int m = sample.rankings.front().size();
  // Rank sums order items exactly as mean ranks do and stay integral.
  std::vector<double> rank_sum(m, 0.0);
  for (const Ranking& r : sample.rankings) {
    for (int i = 0; i < m; ++i) rank_sum[i] += r.rank(i);
  }
  return InducedRanking(rank_sum);
}

uint64_t AttackCellSeed(uint64_t base_seed, int m,
                        const EpsilonSchedule& schedule, int64_t n) {
  return DeriveSeed(base_seed,
                    {HashLabel("attack"), static_cast<uint64_t>(m),
                     DoubleBits(schedule.EpsilonFor(m, n)),
                     static_cast<uint64_t>(n)});
}

absl::StatusOr<std::vector<AttackRow>> AttackErrorProbability(
    int m, const EpsilonSchedule& schedule, std::vector<int64_t> n_grid,
    int64_t replications, uint64_t base_seed, int workers) {
  if (m > kEnumerationCap) {
    return absl::OutOfRangeError(absl::StrFormat(
        "CapExceeded: exhaustive MLE supports m <= %d, got %d",
        kEnumerationCap, m));
  }
  if (m < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TooShort: a ranking needs at least 2 items, got %d", m));
  }
  if (replications < 1) {
    return absl::InvalidArgumentError("replications must be >= 1");
  }
  if (n_grid.empty()) return absl::InvalidArgumentError("empty N grid");
  std::sort(n_grid.begin(), n_grid.end());
  n_grid.erase(std::unique(n_grid.begin(), n_grid.end()), n_grid.end());
  if (n_grid.front() < 1) {
    return absl::InvalidArgumentError("every N must be >= 1");
  }

  std::vector<MallowsMechanism> mechanisms;
  std::vector<AttackRow> rows;
  for (int64_t n : n_grid) {
    AttackRow row;
    row.m = m;
    row.n = n;
    row.epsilon = schedule.EpsilonFor(m, n);
    row.schedule = std::string(schedule.name());
    row.replications = replications;
    row.seed = AttackCellSeed(base_seed, m, schedule, n);
    absl::StatusOr<MallowsMechanism> mech =
        MallowsMechanism::Create(row.epsilon, m);
    if (!mech.ok()) return mech.status();
    mechanisms.push_back(*std::move(mech));
    rows.push_back(std::move(row));
  }

  const Ranking truth = Ranking::Identity(m);
  const int64_t cells = static_cast<int64_t>(rows.size());
  std::vector<char> failed(cells * replications, 0);
  ParallelFor(cells * replications, workers, [&](int64_t job) {
    const int64_t cell = job / replications;
    const int64_t rep = job % replications;
    Rng rng(DeriveSeed(rows[cell].seed, {static_cast<uint64_t>(rep)}));
    std::vector<int64_t> above(static_cast<size_t>(m) * m, 0);
    for (int64_t s = 0; s < rows[cell].n; ++s) {
      Tally(*mechanisms[cell].Synthesize(truth, rng), above);
    }
    failed[job] = *MleFromPairwiseCounts(m, above) != truth;
  });

  for (int64_t cell = 0; cell < cells; ++cell) {
    AttackRow& row = rows[cell];
    row.errors = std::count(failed.begin() + cell * replications,
                            failed.begin() + (cell + 1) * replications, 1);
    row.error_rate = static_cast<double>(row.errors) / replications;
    row.std_error =
        std::sqrt(row.error_rate * (1.0 - row.error_rate) / replications);
  }
  return rows;
}

std::string AttackRowsToCsv(const std::vector<AttackRow>& rows, bool header) {
  std::string out;
  if (header) {
    out = "m,N,epsilon,schedule,replications,errors,error_rate,stderr,seed\n";
  }
  for (const AttackRow& r : rows) {
    absl::StrAppend(&out, r.m, ",", r.n, ",", FormatReal(r.epsilon), ",",
                    r.schedule, ",", r.replications, ",", r.errors, ",",
                    FormatReal(r.error_rate), ",", FormatReal(r.std_error), ",",
                    r.seed, "\n");
  }
  return out;
}

}  // namespace rankdp
