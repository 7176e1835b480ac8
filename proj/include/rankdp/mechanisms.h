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

// Ranking-level privacy mechanisms.
//
// MallowsMechanism is the multistage insertion synthesizer: items are visited
// in increasing input rank and the item with input rank t is inserted among
// the t - 1 already placed items at a position V drawn from the truncated
// geometric law P(V = k) ∝ q^k, k = 0..t-1, with q = exp(epsilon / (m - 1)).
// V counts the placed items that end up below the new item, so V equals the
// number of pairs the new item keeps concordant with the input. The output
// follows a Mallows law, P(out) ∝ q^C(input, out), and any two neighboring
// inputs have output log-ratios bounded by epsilon.
//
// LaplaceMechanism is the additive baseline: i.i.d. Laplace noise with scale
// 2(m - 1) / epsilon on every rank.

#ifndef RANKDP_MECHANISMS_H_
#define RANKDP_MECHANISMS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "rankdp/ranking.h"
#include "rankdp/rng.h"

namespace rankdp {

struct StageDistribution {
  int t = 0;
  // probabilities[k] = P(V^(t) = k), k = 0..t-1.
  std::vector<double> probabilities;
};

struct StageMoments {
  double mean = 0;
  double variance = 0;
};

class MallowsMechanism {
 public:
  // epsilon must be > 0; +infinity yields the non-private pass-through.
  static absl::StatusOr<MallowsMechanism> Create(double epsilon, int m);

  // Also accepts epsilon == 0 (uniform output). Test use only.
  static absl::StatusOr<MallowsMechanism> CreateForTesting(double epsilon,
                                                           int m);

  double epsilon() const { return epsilon_; }
  int size() const { return m_; }
  bool non_private() const;

  // Exponent weight per concordant pair, epsilon / (m - 1).
  double pair_weight() const { return pair_weight_; }

  // Dispersion for the normalized concordance T in [0, 1]: epsilon * m / 2.
  double dispersion() const { return epsilon_ * m_ / 2.0; }

  // Draws one synthetic ranking. Consumes exactly m - 1 uniforms from rng.
  absl::StatusOr<Ranking> Synthesize(const Ranking& input, Rng& rng) const;

  // Step-by-step version that scores every candidate position by counting
  // concordant pairs against the partially built output. Consumes the same
  // uniforms as Synthesize and returns the same ranking.
  absl::StatusOr<Ranking> SynthesizeByScoring(const Ranking& input,
                                              Rng& rng) const;

  absl::StatusOr<StageDistribution> Stage(int t) const;

  // Inverse-CDF draw of V^(t). Requires 2 <= t <= m.
  int SampleStage(int t, Rng& rng) const;

  // Product over stages of P(V^(t) = v_t), where v_t is read off `output`.
  absl::StatusOr<double> ChainProbability(const Ranking& input,
                                          const Ranking& output) const;

  // q^C(input, output) / Z(m, epsilon), with Z the q-factorial.
  absl::StatusOr<double> Pmf(const Ranking& input,
                             const Ranking& output) const;

  // log Z(m, epsilon) = sum_t log(sum_{k<t} q^k).
  double LogNormalizer() const;

  // Mean and variance of V^(t).
  absl::StatusOr<StageMoments> ExpectedStagePosition(int t) const;

 private:
  MallowsMechanism(double epsilon, int m);

  double epsilon_;
  int m_;
  double pair_weight_;
  // stage_cdf_[t - 2][k] = P(V^(t) <= k); the last entry is exactly 1.
  std::vector<std::vector<double>> stage_cdf_;
};

struct NoisyScores {
  std::vector<double> values;
};

class LaplaceMechanism {
 public:
  // Calibrated scale 2(m - 1) / epsilon; epsilon must be > 0 (may be +inf).
  static absl::StatusOr<LaplaceMechanism> Create(double epsilon, int m);

  // Arbitrary scale >= 0 (+inf allowed), for auditing.
  static absl::StatusOr<LaplaceMechanism> CreateWithScale(double scale, int m);

  double scale() const { return scale_; }
  int size() const { return m_; }

  // values[i] = ranks[i] + Laplace(0, scale).
  absl::StatusOr<NoisyScores> Perturb(const Ranking& input, Rng& rng) const;

 private:
  LaplaceMechanism(double scale, int m) : scale_(scale), m_(m) {}

  double scale_;
  int m_;
};

// Ranks by ascending score: the smallest score receives rank 1. Ties go to the
// lower item index first. Errors: "NonFiniteScore", "TooShort".
absl::StatusOr<Ranking> InducedRanking(std::span<const double> scores);

// E[C(input, output)] for the Mallows synthesizer: sum_{t=2..m} E[V^(t)].
double ExpectedConcordanceMallows(int m, double epsilon);

// P(noisy rank of i > noisy rank of j) when the true ranks differ by
// `rank_gap` > 0, under Laplace scale 2(m - 1) / epsilon.
double LaplacePairOrderProbability(int rank_gap, int m, double epsilon);

// E[C(input, induced ranking of the Laplace output)].
double ExpectedConcordanceLaplace(int m, double epsilon);

}  // namespace rankdp

#endif  // RANKDP_MECHANISMS_H_
