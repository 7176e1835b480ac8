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

// Inference attack: recover the central ranking from N synthetic rankings
// released by the Mallows synthesizer.

#ifndef RANKDP_ATTACK_H_
#define RANKDP_ATTACK_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rankdp/ranking.h"

namespace rankdp {

struct AttackSample {
  std::vector<Ranking> rankings;
  double epsilon = 0;
  int m = 0;
};

struct EpsilonSchedule {
  enum class Kind { kFixed, kSqrt, kLogSqrt };

  Kind kind = Kind::kFixed;
  double c = 1.0;

  // fixed: c; sqrt: c (m-1) / sqrt(N); logsqrt: c (m-1) ln(N) / sqrt(N).
  double EpsilonFor(int m, int64_t n) const;

  std::string_view name() const;

  // Accepts "fixed", "sqrt", "logsqrt".
  static absl::StatusOr<EpsilonSchedule> Parse(std::string_view kind,
                                               double c);
};

// Kemeny-type maximum-likelihood estimate: the ranking maximizing
// sum_i C(candidate, sample_i), searched exhaustively. The Mallows
// normalizer does not depend on the candidate, so epsilon plays no role.
// Ties resolve to the lexicographically smallest rank vector.
// Errors: "EmptySample", "CapExceeded", "SizeMismatch".
absl::StatusOr<Ranking> MleCentralRanking(const AttackSample& sample);

// Same estimator from the pairwise tally above[i][j] = #samples ranking
// item i above item j (row-major m x m).
absl::StatusOr<Ranking> MleFromPairwiseCounts(int m,
                                              const std::vector<int64_t>& above);

// Rank items by ascending mean rank; ties go to the lower item index.
absl::StatusOr<Ranking> BordaAggregate(const AttackSample& sample);

struct AttackRow {
  int m = 0;
  int64_t n = 0;
  double epsilon = 0;
  std::string schedule;
  int64_t replications = 0;
  int64_t errors = 0;
  double error_rate = 0;
  double std_error = 0;
  uint64_t seed = 0;  // cell seed; replication r uses DeriveSeed(seed, {r})
};

// For each N in n_grid (deduplicated, ascending): R replications of drawing
// N synthetic rankings of the identity at epsilon(N), recovering it by MLE,
// and counting failures. Deterministic in base_seed for any worker count.
absl::StatusOr<std::vector<AttackRow>> AttackErrorProbability(
    int m, const EpsilonSchedule& schedule, std::vector<int64_t> n_grid,
    int64_t replications, uint64_t base_seed, int workers = 1);

// Seed of one (m, schedule, N) cell.
uint64_t AttackCellSeed(uint64_t base_seed, int m,
                        const EpsilonSchedule& schedule, int64_t n);

// CSV with header m,N,epsilon,schedule,replications,errors,error_rate,
// stderr,seed.
std::string AttackRowsToCsv(const std::vector<AttackRow>& rows,
                            bool header = true);

}  // namespace rankdp

#endif  // RANKDP_ATTACK_H_
