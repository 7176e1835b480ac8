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

// Experiment drivers behind the command-line tool. Every driver is
// deterministic in its base seed: cell seeds come from
//   DeriveSeed(base_seed, {HashLabel(command), m, DoubleBits(epsilon), N, ...})
// and results are assembled in grid order, so output bytes do not depend on
// the worker count.

#ifndef RANKDP_HARNESS_H_
#define RANKDP_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "rankdp/attack.h"
#include "rankdp/audit.h"
#include "rankdp/learn.h"
#include "rankdp/table_io.h"

namespace rankdp {

std::string_view Version();

// Reproduction record written next to every output file.
struct RunManifest {
  std::string command;
  std::string parameters_json;  // echo of the effective parameters
  double wall_seconds = 0;
  // One entry per output cell: a label and the seed that regenerates it.
  std::vector<std::pair<std::string, uint64_t>> cell_seeds;

  std::string ToJson() const;
};

// ---- synthesize ------------------------------------------------------------

struct SynthesizeResult {
  RankingDataset output;
  int num_items = 0;
  RunManifest manifest;
};

// One synthetic ranking per row. A per-user `epsilon` column takes
// precedence over `epsilon`. User u draws from
// DeriveSeed(seed, {HashLabel("synthesize"), u}).
absl::StatusOr<SynthesizeResult> RunSynthesize(const RankingDataset& input,
                                               int num_items, double epsilon,
                                               MechanismKind kind,
                                               uint64_t seed, int workers = 1);

// ---- audit -----------------------------------------------------------------

// Audits the Mallows synthesizer around the identity ranking.
absl::StatusOr<AuditReport> RunAudit(int m, double epsilon, AuditMode mode,
                                     int64_t samples, uint64_t seed,
                                     int workers = 1);

// ---- utility ---------------------------------------------------------------

struct UtilityRow {
  int m = 0;
  double epsilon = 0;
  double mallows_mc = 0;
  double mallows_cf = 0;
  double laplace_mc = 0;
  double laplace_cf = 0;
  int64_t reps = 0;
  uint64_t seed = 0;
  double mallows_se = 0;  // not part of the CSV
  double laplace_se = 0;
};

// Monte-Carlo and closed-form expected concordance C(identity, output) for
// both mechanisms on every (m, epsilon) cell.
absl::StatusOr<std::vector<UtilityRow>> RunUtility(
    const std::vector<int>& m_list, const std::vector<double>& epsilon_grid,
    int64_t reps, uint64_t seed, int workers = 1);

// m,epsilon,mallows_mc,mallows_cf,laplace_mc,laplace_cf,reps,seed
std::string UtilityCsv(const std::vector<UtilityRow>& rows);

// n log-spaced points from lo to hi inclusive.
std::vector<double> LogGrid(double lo, double hi, int n);

// ---- attack ----------------------------------------------------------------

absl::StatusOr<std::vector<AttackRow>> RunAttack(
    const std::vector<int>& m_list, const EpsilonSchedule& schedule,
    const std::vector<int64_t>& n_grid, int64_t reps, uint64_t seed,
    int workers = 1);

// ---- stage moments ---------------------------------------------------------

struct StageMomentRow {
  int t = 0;
  double empirical_mean = 0;
  double empirical_variance = 0;
  double closed_form_mean = 0;
  double closed_form_variance = 0;
  double mean_se = 0;
  double variance_se = 0;
};

struct StageMomentsReport {
  int m = 0;
  double epsilon = 0;
  int64_t samples = 0;
  uint64_t seed = 0;
  std::vector<StageMomentRow> stages;

  std::string ToJson() const;
};

// Draws `samples` synthetic rankings of the identity and reads off each
// stage's insertion position V^(t).
absl::StatusOr<StageMomentsReport> RunStageMoments(int m, double epsilon,
                                                   int64_t samples,
                                                   uint64_t seed);

// ---- learn -----------------------------------------------------------------

struct LearnExperimentConfig {
  int n_train = 300;
  int n_val = 100;
  int n_test = 1000;
  int m = 15;
  int p = 4;
  int q = 4;
  std::vector<double> alpha;  // empty = all ones
  std::vector<double> beta;
  std::vector<double> epsilons = {1.0, 4.0};
  // "mallows", "laplace", or "none" (train on the raw rankings).
  std::vector<std::string> mechanisms = {"mallows", "laplace"};
  int replications = 10;
  uint64_t seed = 0;
  std::string model = "linear";  // or "mlp"
  std::vector<int> hidden = {10, 10, 10};
  TrainConfig train;  // validation_fraction is derived from n_train/n_val

  // Optional real data. When rankings_csv is set the generator is skipped,
  // users are shuffled per replication and split into train / validation /
  // test by n_train and n_val (the rest are test users), and the test
  // users' rankings stand in for their true scores.
  std::string rankings_csv;
  std::string user_features_csv;
  std::string item_features_csv;
};

// Accepts JSON or TOML with the same keys (see README).
absl::StatusOr<LearnExperimentConfig> ParseLearnConfig(std::string_view text,
                                                       bool is_toml);
absl::StatusOr<LearnExperimentConfig> LoadLearnConfig(const std::string& path);

struct LearnRow {
  int run = 0;
  std::string mechanism;
  double epsilon = 0;
  int n = 0;
  int m = 0;
  uint64_t seed = 0;
  double train_acc = 0;
  double val_acc = 0;
  double test_acc_sym = 0;
};

struct LearnSummaryRow {
  std::string mechanism;
  double epsilon = 0;
  int runs = 0;
  double mean_test_acc_sym = 0;
  std::optional<double> se_test_acc_sym;  // absent for a single run
};

struct LearnResult {
  std::vector<LearnRow> rows;
  std::vector<LearnSummaryRow> summary;
};

absl::StatusOr<LearnResult> RunLearn(const LearnExperimentConfig& config,
                                     int workers = 1);

// run,mechanism,epsilon,n,m,seed,train_acc,val_acc,test_acc_sym
std::string LearnCsv(const std::vector<LearnRow>& rows);
// mechanism,epsilon,runs,mean_test_acc_sym,se_test_acc_sym
std::string LearnSummaryCsv(const std::vector<LearnSummaryRow>& rows);

}  // namespace rankdp

#endif  // RANKDP_HARNESS_H_
