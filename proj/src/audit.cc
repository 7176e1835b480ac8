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

#include "rankdp/audit.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "rankdp/rng.h"

namespace rankdp {

std::string AuditReport::ToJson() const {
  nlohmann::ordered_json j;
  j["configured_epsilon"] = configured_epsilon;
  j["measured_epsilon"] = measured_epsilon;
  j["mode"] = mode == AuditMode::kExact ? "exact" : "empirical";
  j["m"] = m;
  j["samples_per_arm"] = samples_per_arm;
  j["worst_neighbor"] = std::vector<int>(worst_neighbor.ranks().begin(),
                                         worst_neighbor.ranks().end());
  j["worst_output"] = std::vector<int>(worst_output.ranks().begin(),
                                       worst_output.ranks().end());
  j["skipped_cells"] = skipped_cells;
  return j.dump(2) + "\n";
}

absl::StatusOr<AuditReport> ExactEpsilon(const MallowsMechanism& mechanism,
                                         const Ranking& base) {
  const int m = mechanism.size();
  if (base.size() != m) {
    return absl::InvalidArgumentError(
        absl::StrFormat("SizeMismatch: base has %d items, mechanism %d",
                        base.size(), m));
  }
  absl::StatusOr<std::vector<Ranking>> outputs = EnumeratePermutations(m);
  if (!outputs.ok()) return outputs.status();

  std::vector<int64_t> base_concordance(outputs->size());
  for (size_t o = 0; o < outputs->size(); ++o) {
    base_concordance[o] =
        internal::CountConcordant(base.ranks(), (*outputs)[o].ranks());
  }

  AuditReport report;
  report.configured_epsilon = mechanism.epsilon();
  report.mode = AuditMode::kExact;
  report.m = m;
  int64_t worst_gap = -1;
  for (const NeighborWitness& nw : EnumerateNeighbors(base)) {
    for (size_t o = 0; o < outputs->size(); ++o) {
      const int64_t gap = std::llabs(
          base_concordance[o] -
          internal::CountConcordant(nw.neighbor.ranks(), (*outputs)[o].ranks()));
      if (gap > worst_gap) {
        worst_gap = gap;
        report.worst_neighbor = nw.neighbor;
        report.worst_output = (*outputs)[o];
      }
    }
  }
  report.measured_epsilon =
      worst_gap == 0 ? 0.0 : mechanism.pair_weight() * worst_gap;
  return report;
}

absl::StatusOr<AuditReport> EmpiricalEpsilon(const MallowsMechanism& mechanism,
                                             const Ranking& base,
                                             int64_t samples, uint64_t seed,
                                             int workers) {
  const int m = mechanism.size();
  if (samples <= 0) {
    return absl::InvalidArgumentError(
        "ZeroSamples: the empirical audit needs at least one draw per arm");
  }
  if (m > kEmpiricalAuditCap) {
    return absl::OutOfRangeError(absl::StrFormat(
        "CapExceeded: empirical audit supports m <= %d, got %d",
        kEmpiricalAuditCap, m));
  }
  if (base.size() != m) {
    return absl::InvalidArgumentError(
        absl::StrFormat("SizeMismatch: base has %d items, mechanism %d",
                        base.size(), m));
  }

  const std::vector<NeighborWitness> neighbors = EnumerateNeighbors(base);
  const int arms = static_cast<int>(neighbors.size()) + 1;
  const int64_t cells = Factorial(m);
  // Arm 0 is the base ranking, arm a > 0 is neighbors[a - 1].
  std::vector<std::vector<int64_t>> counts(arms,
                                           std::vector<int64_t>(cells, 0));
  ParallelFor(arms, workers, [&](int64_t arm) {
    const Ranking& input = arm == 0 ? base : neighbors[arm - 1].neighbor;
    Rng rng(DeriveSeed(seed, {static_cast<uint64_t>(arm)}));
    std::vector<int64_t>& tally = counts[arm];
    for (int64_t n = 0; n < samples; ++n) {
      ++tally[PermutationIndex(*mechanism.Synthesize(input, rng))];
    }
  });

  AuditReport report;
  report.configured_epsilon = mechanism.epsilon();
  report.mode = AuditMode::kEmpirical;
  report.m = m;
  report.samples_per_arm = samples;
  double worst = -1;
  for (int arm = 1; arm < arms; ++arm) {
    for (int64_t cell = 0; cell < cells; ++cell) {
      const int64_t a = counts[0][cell];
      const int64_t b = counts[arm][cell];
      if (a == 0 && b == 0) continue;
      if (a == 0 || b == 0) {
        ++report.skipped_cells;
        continue;
      }
      const double ratio = std::fabs(std::log(static_cast<double>(a) / b));
      if (ratio > worst) {
        worst = ratio;
        report.worst_neighbor = neighbors[arm - 1].neighbor;
        report.worst_output = PermutationFromIndex(m, cell);
      }
    }
  }
  report.measured_epsilon = worst < 0 ? 0.0 : worst;
  return report;
}

double LaplaceAnalyticEpsilon(const LaplaceMechanism& mechanism) {
  if (std::isinf(mechanism.scale())) return 0.0;
  return 2.0 * (mechanism.size() - 1) / mechanism.scale();
}

}  // namespace rankdp
