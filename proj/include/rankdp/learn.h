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

// Personalized pairwise ranking on privatized rankings.
//
// Convention used throughout this module: a user's rank of an item is its
// position in ASCENDING score order, so rank(i) > rank(j) exactly when the
// user scores i above j. The training indicator, the accuracy metric and the
// generated data all follow it.

#ifndef RANKDP_LEARN_H_
#define RANKDP_LEARN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "rankdp/ranking.h"
#include "rankdp/rng.h"
#include "rankdp/table_io.h"

namespace rankdp {

struct UserItemData {
  Eigen::MatrixXd user_features;  // n x p
  Eigen::MatrixXd item_features;  // m x q
  Eigen::MatrixXd true_scores;    // n x m
  std::vector<Ranking> rankings;  // induced by true_scores rows
  std::vector<double> per_user_epsilon;

  int num_users() const { return static_cast<int>(user_features.rows()); }
  int num_items() const { return static_cast<int>(item_features.rows()); }
};

struct GeneratorOptions {
  int n = 300;
  int m = 15;
  int p = 4;
  int q = 4;
  // Empty means all ones.
  std::vector<double> alpha;
  std::vector<double> beta;
  double feature_bound = 3.0;  // features ~ Unif(-bound, bound)
  double epsilon = 1.0;        // default per-user budget
};

// Features uniform on (-bound, bound), scores r_ui = alpha.x_u + beta.y_i,
// rankings induced by ascending score with index tie-break.
// Error: "BadDimensions".
absl::StatusOr<UserItemData> GenerateDataset(const GeneratorOptions& options,
                                             Rng& rng);

// Fresh users for an existing item set (same alpha, beta).
absl::StatusOr<UserItemData> GenerateUsers(const GeneratorOptions& options,
                                           const Eigen::MatrixXd& item_features,
                                           Rng& rng);

// Row-wise induced rankings of a score matrix.
absl::StatusOr<std::vector<Ranking>> RankingsFromScores(
    const Eigen::MatrixXd& scores);

enum class MechanismKind { kMallows, kLaplace };

absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name);
std::string_view MechanismName(MechanismKind kind);

// One privatized ranking: Mallows synthesis, or Laplace perturbation followed
// by the induced ranking.
absl::StatusOr<Ranking> Privatize(const Ranking& ranking, double epsilon,
                                  MechanismKind kind, Rng& rng);

// Per-user privatization; user u draws only from Rng(user_seeds[u]).
absl::StatusOr<std::vector<Ranking>> PrivatizeRankings(
    std::span<const Ranking> rankings, std::span<const double> epsilons,
    MechanismKind kind, std::span<const uint64_t> user_seeds,
    int workers = 1);

// User u uses DeriveSeed(seed, {u}).
absl::StatusOr<std::vector<Ranking>> PrivatizeDataset(const UserItemData& data,
                                                      MechanismKind kind,
                                                      uint64_t seed,
                                                      int workers = 1);

// Two-tower scorer. Parameters live in one flat vector so that gradients,
// finite differences and updates share a layout.
//
//   linear: f(x, y) = a.x + b.y                  params = [a, b]
//   mlp:    f(x, y) = user_tower(x) . item_tower(y)
//
// Each tower is a stack of affine layers with tanh between them (none after
// the last layer). Layer parameters are stored as W (out x in, row-major)
// followed by the bias, user tower first.
class ScoringModel {
 public:
  enum class Kind { kLinear, kMlp };

  static ScoringModel Linear(int p, int q);

  // widths include the input dimension first and the embedding dimension
  // last; both towers must end in the same embedding dimension.
  static absl::StatusOr<ScoringModel> Mlp(std::vector<int> user_widths,
                                          std::vector<int> item_widths);

  // Widths {p, 10, 10, 10} and {q, 10, 10, 10}.
  static ScoringModel DefaultMlp(int p, int q);

  Kind kind() const { return kind_; }
  int user_dim() const { return user_widths_.front(); }
  int item_dim() const { return item_widths_.front(); }
  size_t parameter_count() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }

  // Uniform(-scale, scale) per parameter.
  void InitializeUniform(Rng& rng, double scale = 0.1);

  // n x m matrix of f(x_u, y_i).
  Eigen::MatrixXd Scores(const Eigen::MatrixXd& users,
                         const Eigen::MatrixXd& items) const;

  // Gradient of sum_{u,i} score_grad(u, i) * f(x_u, y_i) w.r.t. parameters.
  std::vector<double> Backward(const Eigen::MatrixXd& users,
                               const Eigen::MatrixXd& items,
                               const Eigen::MatrixXd& score_grad) const;

  std::string Describe() const;

 private:
  struct Tower {
    std::vector<Eigen::MatrixXd> activations;  // input, then each layer
  };

  ScoringModel(Kind kind, std::vector<int> user_widths,
               std::vector<int> item_widths);

  Eigen::MatrixXd Forward(const Eigen::MatrixXd& input, size_t offset,
                          const std::vector<int>& widths, Tower* trace) const;
  void BackwardTower(const Tower& trace, const Eigen::MatrixXd& output_grad,
                     size_t offset, const std::vector<int>& widths,
                     std::vector<double>& grad) const;
  size_t item_offset() const;

  Kind kind_;
  std::vector<int> user_widths_;
  std::vector<int> item_widths_;
  std::vector<double> params_;
};

struct LossAndGradient {
  double loss = 0;
  std::vector<double> gradient;
  int64_t pairs = 0;
};

// Mean over users u and ordered item pairs with rank_u(i) > rank_u(j) of
// log(1 + exp(-(f_ui - f_uj))), plus ridge * |params|^2.
// Errors: "NonFiniteLoss", "SizeMismatch".
absl::StatusOr<LossAndGradient> PairwiseLossAndGradient(
    const ScoringModel& model, const Eigen::MatrixXd& users,
    const Eigen::MatrixXd& items, std::span<const Ranking> rankings,
    double ridge = 0.0);

struct TrainConfig {
  double learning_rate = 0.1;
  int batch_size = 32;  // users per gradient step
  int max_epochs = 200;
  double validation_fraction = 0.25;
  // When >= 0, the exact number of held-out users (overrides the fraction).
  int validation_users = -1;
  int patience = 30;
  double ridge = 0.0;
  double init_scale = 0.1;
  uint64_t seed = 0;
};

struct TrainResult {
  ScoringModel model;
  int epochs_run = 0;
  int best_epoch = 0;  // 0 = the initial model
  double train_loss = 0;
  double train_accuracy = 0;       // symmetric, on training synthetics
  double validation_accuracy = 0;  // symmetric, on validation synthetics
};

// Mini-batch gradient descent on the pairwise logistic loss. The last
// floor(n * validation_fraction) users (or validation_users) are held out; training stops after
// `patience` epochs without a better validation accuracy and returns the
// best parameters seen. Deterministic in config.seed.
// Errors: "Diverged", "SizeMismatch", invalid config.
absl::StatusOr<TrainResult> Train(const ScoringModel& initial,
                                  const Eigen::MatrixXd& users,
                                  const Eigen::MatrixXd& items,
                                  std::span<const Ranking> rankings,
                                  const TrainConfig& config);

struct PairwiseAccuracy {
  // Literal metric: agreements / (N m (m - 1)); at most 0.5.
  double l_pair = 0;
  // agreements / (number of ordered pairs with r_ui > r_uj); 1.0 for a
  // perfect model.
  double symmetric = 0;
};

// Agreement I(r_ui > r_uj) I(f_ui > f_uj) over test users and i != j.
// Error: "EmptyTestSet".
absl::StatusOr<PairwiseAccuracy> EvaluatePairwiseAccuracy(
    const ScoringModel& model, const Eigen::MatrixXd& users,
    const Eigen::MatrixXd& items, const Eigen::MatrixXd& true_scores);

// Same metric with a ranking standing in for the true scores.
absl::StatusOr<PairwiseAccuracy> EvaluateRankingAccuracy(
    const ScoringModel& model, const Eigen::MatrixXd& users,
    const Eigen::MatrixXd& items, std::span<const Ranking> rankings);

struct OrderFileFormat {
  int header_lines = 0;    // lines skipped before the first record
  int leading_fields = 0;  // fields skipped at the start of each record
  // Item IDs to keep, in any order; empty keeps every item.
  std::vector<std::string> keep_items;
};

// One record per user listing item IDs from most to least preferred,
// whitespace separated. Kept items are re-indexed densely in ascending ID
// order (numeric when all IDs are integers). The most preferred kept item
// gets the highest rank. Errors: "ParseError" (with line), "UnknownItemId".
absl::StatusOr<RankingDataset> ParseOrderFile(std::string_view text,
                                              const OrderFileFormat& format);
absl::StatusOr<RankingDataset> IngestOrderFile(const std::string& path,
                                               const OrderFileFormat& format);

}  // namespace rankdp

#endif  // RANKDP_LEARN_H_
