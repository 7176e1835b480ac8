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

#ifndef RANKDP_AUDIT_H_
#define RANKDP_AUDIT_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "rankdp/mechanisms.h"
#include "rankdp/ranking.h"

namespace rankdp {

enum class AuditMode { kExact, kEmpirical };

struct AuditReport {
  double configured_epsilon = 0;
  double measured_epsilon = 0;
  AuditMode mode = AuditMode::kExact;
  int m = 0;
  int64_t samples_per_arm = 0;  // empirical only
  Ranking worst_neighbor = Ranking::Identity(2);
  Ranking worst_output = Ranking::Identity(2);
  // Output cells observed in one arm but not the other (empirical only).
  int64_t skipped_cells = 0;

  // JSON object with the field names above; rankings as rank arrays.
  std::string ToJson() const;
};

// Supremum over neighbors of `base` and over all outputs of the absolute
// log-ratio of output probabilities. The Mallows normalizer is the same for
// every input, so each ratio reduces to pair_weight * |C(base, out) -
// C(neighbor, out)|. Error: "CapExceeded" when m > kEnumerationCap.
absl::StatusOr<AuditReport> ExactEpsilon(const MallowsMechanism& mechanism,
                                         const Ranking& base);

// Monte-Carlo audit: `samples` draws from base and from every neighbor, then
// the largest |log(count_base / count_neighbor)| over cells seen in both
// arms. Arm a uses the stream DeriveSeed(seed, {a}); arms run on `workers`
// threads. Errors: "ZeroSamples", "CapExceeded" (m > 6).
absl::StatusOr<AuditReport> EmpiricalEpsilon(const MallowsMechanism& mechanism,
                                             const Ranking& base,
                                             int64_t samples, uint64_t seed,
                                             int workers = 1);

// Largest output-density log-ratio of the Laplace mechanism over neighboring
// inputs: the rank vectors of neighbors differ by at most 2(m - 1) in L1.
double LaplaceAnalyticEpsilon(const LaplaceMechanism& mechanism);

inline constexpr int kEmpiricalAuditCap = 6;

}  // namespace rankdp

#endif  // RANKDP_AUDIT_H_
