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

#include "rankdp/mechanisms.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace rankdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Beyond this exponent the closed-form moments overflow; fall back to direct
// summation over the normalized stage law.
constexpr double kMaxClosedFormExponent = 600.0;
// Below this stage exponent the closed form loses digits to cancellation
// around q = 1, so the moments are summed directly.
constexpr double kMinClosedFormExponent = 1.0;

absl::Status SizeMismatch(int expected, int got) {
  return absl::InvalidArgumentError(absl::StrFormat(
      "SizeMismatch: mechanism is for %d items, ranking has %d", expected,
      got));
}

absl::Status StageOutOfRange(int t, int m) {
  return absl::InvalidArgumentError(
      absl::StrFormat("StageOutOfRange: stage %d outside 2..%d", t, m));
}

// P(V = k) ∝ exp(weight * k) for k < t, computed relative to the largest
// weight so nothing overflows.
std::vector<double> StageProbabilities(double weight, int t) {
  std::vector<double> p(t, 0.0);
  if (std::isinf(weight)) {
    p[t - 1] = 1.0;
    return p;
  }
  double total = 0;
  for (int k = 0; k < t; ++k) {
    p[k] = std::exp(weight * (k - (t - 1)));
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

// log(sum_{k=0}^{t-1} exp(weight * k)), weight >= 0.
double LogGeometricSum(double weight, int t) {
  if (weight == 0) return std::log(static_cast<double>(t));
  return weight * (t - 1) + std::log(-std::expm1(-weight * t)) -
         std::log(-std::expm1(-weight));
}

StageMoments DirectStageMoments(double weight, int t) {
  const std::vector<double> p = StageProbabilities(weight, t);
  double mean = 0;
  for (int k = 0; k < t; ++k) mean += k * p[k];
  double variance = 0;
  for (int k = 0; k < t; ++k) variance += (k - mean) * (k - mean) * p[k];
  return {mean, variance};
}

StageMoments StageMomentsFor(double weight, int t) {
  if (weight == 0) {
    return {(t - 1) / 2.0, (static_cast<double>(t) * t - 1) / 12.0};
  }
  if (std::isinf(weight)) return {static_cast<double>(t - 1), 0.0};
  if (weight * t > kMaxClosedFormExponent || weight * t < kMinClosedFormExponent) {
    return DirectStageMoments(weight, t);
  }
  const double q = std::exp(weight);
  const double qt = std::exp(weight * t);
  const double qm1 = std::expm1(weight);
  const double qtm1 = std::expm1(weight * t);
  const double mean = (t - 1) * qt / qtm1 - (qt - q) / (qm1 * qtm1);
  const double variance = static_cast<double>(t - 1) * (t - 1) * qt / qtm1 -
                          2.0 * mean / qm1 + (qt - q) / (qtm1 * qm1) -
                          mean * mean;
  return {mean, variance};
}

absl::Status ValidateEpsilon(double epsilon, bool allow_zero) {
  if (std::isnan(epsilon) || epsilon < 0 || (!allow_zero && epsilon == 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "epsilon must be %s, got %g", allow_zero ? ">= 0" : "> 0", epsilon));
  }
  return absl::OkStatus();
}

absl::Status ValidateSize(int m) {
  if (m < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TooShort: a ranking needs at least 2 items, got %d", m));
  }
  return absl::OkStatus();
}

}  // namespace

MallowsMechanism::MallowsMechanism(double epsilon, int m)
    : epsilon_(epsilon), m_(m), pair_weight_(epsilon / (m - 1)) {
  stage_cdf_.reserve(m - 1);
  for (int t = 2; t <= m; ++t) {
    std::vector<double> cdf = StageProbabilities(pair_weight_, t);
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    cdf.back() = 1.0;
    stage_cdf_.push_back(std::move(cdf));
  }
}

absl::StatusOr<MallowsMechanism> MallowsMechanism::Create(double epsilon,
                                                          int m) {
  if (auto s = ValidateEpsilon(epsilon, false); !s.ok()) return s;
  if (auto s = ValidateSize(m); !s.ok()) return s;
  return MallowsMechanism(epsilon, m);
}

absl::StatusOr<MallowsMechanism> MallowsMechanism::CreateForTesting(
    double epsilon, int m) {
  if (auto s = ValidateEpsilon(epsilon, true); !s.ok()) return s;
  if (auto s = ValidateSize(m); !s.ok()) return s;
  return MallowsMechanism(epsilon, m);
}

bool MallowsMechanism::non_private() const { return std::isinf(epsilon_); }

int MallowsMechanism::SampleStage(int t, Rng& rng) const {
  assert(t >= 2 && t <= m_);
  const std::vector<double>& cdf = stage_cdf_[t - 2];
  const double u = rng.Uniform();
  return static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                          cdf.begin());
}

absl::StatusOr<Ranking> MallowsMechanism::Synthesize(const Ranking& input,
                                                     Rng& rng) const {
  if (input.size() != m_) return SizeMismatch(m_, input.size());
  const std::vector<int> by_input_rank = input.Invert();
  // Items in synthetic order, lowest synthetic rank first.
  std::vector<int> order;
  order.reserve(m_);
  order.push_back(by_input_rank[0]);
  for (int t = 2; t <= m_; ++t) {
    const int v = SampleStage(t, rng);
    order.insert(order.begin() + v, by_input_rank[t - 1]);
  }
  return Ranking::FromOrder(order);
}

absl::StatusOr<Ranking> MallowsMechanism::SynthesizeByScoring(
    const Ranking& input, Rng& rng) const {
  if (input.size() != m_) return SizeMismatch(m_, input.size());
  const std::vector<int> by_input_rank = input.Invert();
  std::vector<int> synthetic(m_, 0);
  std::vector<int> placed = {by_input_rank[0]};
  synthetic[by_input_rank[0]] = 1;
  for (int t = 2; t <= m_; ++t) {
    const int item = by_input_rank[t - 1];
    // Candidate position k puts the new item just above the k lowest placed
    // items; count the placed items whose order against it then agrees with
    // the input order.
    std::vector<double> score(t);
    for (int k = 0; k < t; ++k) {
      int concordant = 0;
      for (int l : placed) {
        if ((t - input.rank(l)) * (k + 0.5 - synthetic[l]) > 0) ++concordant;
      }
      assert(concordant == k);
      score[k] = concordant;
    }
    std::vector<double> cdf(t);
    if (non_private()) {
      const double best = *std::max_element(score.begin(), score.end());
      for (int k = 0; k < t; ++k) cdf[k] = score[k] == best ? 1.0 : 0.0;
    } else {
      const double best = *std::max_element(score.begin(), score.end());
      for (int k = 0; k < t; ++k) {
        cdf[k] = std::exp(pair_weight_ * (score[k] - best));
      }
    }
    const double total = std::accumulate(cdf.begin(), cdf.end(), 0.0);
    for (double& c : cdf) c /= total;
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    cdf.back() = 1.0;
    const double u = rng.Uniform();
    const int v = static_cast<int>(
        std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    for (int l : placed) {
      if (synthetic[l] > v + 0.5) ++synthetic[l];
    }
    synthetic[item] = v + 1;
    placed.push_back(item);
  }
  return Ranking::Create(std::move(synthetic));
}

absl::StatusOr<StageDistribution> MallowsMechanism::Stage(int t) const {
  if (t < 2 || t > m_) return StageOutOfRange(t, m_);
  return StageDistribution{t, StageProbabilities(pair_weight_, t)};
}

absl::StatusOr<double> MallowsMechanism::ChainProbability(
    const Ranking& input, const Ranking& output) const {
  if (input.size() != m_) return SizeMismatch(m_, input.size());
  if (output.size() != m_) return SizeMismatch(m_, output.size());
  const std::vector<int> by_input_rank = input.Invert();
  double log_p = 0;
  for (int t = 2; t <= m_; ++t) {
    const int item = by_input_rank[t - 1];
    int below = 0;
    for (int s = 0; s < t - 1; ++s) {
      if (output.rank(by_input_rank[s]) < output.rank(item)) ++below;
    }
    const double p = StageProbabilities(pair_weight_, t)[below];
    if (p == 0) return 0.0;
    log_p += std::log(p);
  }
  return std::exp(log_p);
}

double MallowsMechanism::LogNormalizer() const {
  double log_z = 0;
  for (int t = 2; t <= m_; ++t) log_z += LogGeometricSum(pair_weight_, t);
  return log_z;
}

absl::StatusOr<double> MallowsMechanism::Pmf(const Ranking& input,
                                             const Ranking& output) const {
  if (input.size() != m_) return SizeMismatch(m_, input.size());
  if (output.size() != m_) return SizeMismatch(m_, output.size());
  const int64_t concordant =
      internal::CountConcordant(input.ranks(), output.ranks());
  if (non_private()) {
    return concordant == static_cast<int64_t>(m_) * (m_ - 1) / 2 ? 1.0 : 0.0;
  }
  return std::exp(pair_weight_ * concordant - LogNormalizer());
}

absl::StatusOr<StageMoments> MallowsMechanism::ExpectedStagePosition(
    int t) const {
  if (t < 2 || t > m_) return StageOutOfRange(t, m_);
  return StageMomentsFor(pair_weight_, t);
}

absl::StatusOr<LaplaceMechanism> LaplaceMechanism::Create(double epsilon,
                                                          int m) {
  if (auto s = ValidateEpsilon(epsilon, false); !s.ok()) return s;
  if (auto s = ValidateSize(m); !s.ok()) return s;
  return LaplaceMechanism(2.0 * (m - 1) / epsilon, m);
}

absl::StatusOr<LaplaceMechanism> LaplaceMechanism::CreateWithScale(
    double scale, int m) {
  if (std::isnan(scale) || scale < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale must be >= 0, got %g", scale));
  }
  if (auto s = ValidateSize(m); !s.ok()) return s;
  return LaplaceMechanism(scale, m);
}

absl::StatusOr<NoisyScores> LaplaceMechanism::Perturb(const Ranking& input,
                                                      Rng& rng) const {
  if (input.size() != m_) return SizeMismatch(m_, input.size());
  NoisyScores out;
  out.values.resize(m_);
  for (int i = 0; i < m_; ++i) {
    out.values[i] = input.rank(i) + rng.Laplace(scale_);
  }
  return out;
}

absl::StatusOr<Ranking> InducedRanking(std::span<const double> scores) {
  const int m = static_cast<int>(scores.size());
  if (auto s = ValidateSize(m); !s.ok()) return s;
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "NonFiniteScore: score of item %d is %g", i, scores[i]));
    }
  }
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] < scores[b]; });
  return Ranking::FromOrder(order);
}

double ExpectedConcordanceMallows(int m, double epsilon) {
  const double weight = epsilon / (m - 1);
  double total = 0;
  for (int t = 2; t <= m; ++t) total += StageMomentsFor(weight, t).mean;
  return total;
}

double LaplacePairOrderProbability(int rank_gap, int m, double epsilon) {
  if (std::isinf(epsilon)) return 1.0;
  // The difference of the two noisy ranks is rank_gap plus the difference of
  // two Laplace(b) draws; its tail is (1/2) e^{-x} (1 + x/2) at x = gap / b.
  const double x = epsilon * rank_gap / (2.0 * (m - 1));
  return 1.0 - std::exp(-x) * (0.5 + x / 4.0);
}

double ExpectedConcordanceLaplace(int m, double epsilon) {
  double total = 0;
  for (int gap = 1; gap < m; ++gap) {
    total += (m - gap) * LaplacePairOrderProbability(gap, m, epsilon);
  }
  return total;
}

}  // namespace rankdp
