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

#include "rankdp/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "rankdp/mechanisms.h"
#include "rankdp/rng.h"
#include "tomlplusplus/toml.hpp"

namespace rankdp {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct MeanAndError {
  double mean = 0;
  double se = 0;
};

MeanAndError Summarize(const std::vector<double>& values) {
  MeanAndError out;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return out;
  double ss = 0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / (n - 1) / n);
  return out;
}

// Shared by the JSON and TOML front ends.
absl::StatusOr<LearnExperimentConfig> ConfigFromJson(
    const nlohmann::json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be an object");
  }
  static const std::set<std::string> kKnown = {
      "n_train", "n_val",        "n_test", "m",        "p",
      "q",       "alpha",        "beta",   "epsilons", "mechanisms",
      "replications", "seed",    "model",  "hidden",   "train",
      "data"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  LearnExperimentConfig c;
  try {
    c.n_train = j.value("n_train", c.n_train);
    c.n_val = j.value("n_val", c.n_val);
    c.n_test = j.value("n_test", c.n_test);
    c.m = j.value("m", c.m);
    c.p = j.value("p", c.p);
    c.q = j.value("q", c.q);
    c.alpha = j.value("alpha", c.alpha);
    c.beta = j.value("beta", c.beta);
    c.epsilons = j.value("epsilons", c.epsilons);
    c.mechanisms = j.value("mechanisms", c.mechanisms);
    c.replications = j.value("replications", c.replications);
    c.seed = j.value("seed", c.seed);
    c.model = j.value("model", c.model);
    c.hidden = j.value("hidden", c.hidden);
    if (j.contains("train")) {
      const nlohmann::json& t = j.at("train");
      static const std::set<std::string> kTrainKeys = {
          "learning_rate", "batch_size", "max_epochs",
          "patience",      "ridge",      "init_scale"};
      for (const auto& [key, value] : t.items()) {
        if (!kTrainKeys.contains(key)) {
          return absl::InvalidArgumentError(
              absl::StrCat("unknown train key '", key, "'"));
        }
      }
      c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
      c.train.batch_size = t.value("batch_size", c.train.batch_size);
      c.train.max_epochs = t.value("max_epochs", c.train.max_epochs);
      c.train.patience = t.value("patience", c.train.patience);
      c.train.ridge = t.value("ridge", c.train.ridge);
      c.train.init_scale = t.value("init_scale", c.train.init_scale);
    }
    if (j.contains("data")) {
      const nlohmann::json& d = j.at("data");
      static const std::set<std::string> kDataKeys = {
          "rankings_csv", "user_features_csv", "item_features_csv"};
      for (const auto& [key, value] : d.items()) {
        if (!kDataKeys.contains(key)) {
          return absl::InvalidArgumentError(
              absl::StrCat("unknown data key '", key, "'"));
        }
      }
      c.rankings_csv = d.value("rankings_csv", c.rankings_csv);
      c.user_features_csv = d.value("user_features_csv", c.user_features_csv);
      c.item_features_csv = d.value("item_features_csv", c.item_features_csv);
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad config: ", e.what()));
  }
  return c;
}

absl::Status ValidateLearnConfig(const LearnExperimentConfig& c) {
  if (c.n_train < 1 || c.n_val < 1 || c.replications < 1) {
    return absl::InvalidArgumentError(
        "n_train, n_val and replications must be positive");
  }
  if (c.rankings_csv.empty() && c.n_test < 1) {
    return absl::InvalidArgumentError("n_test must be positive");
  }
  if (c.rankings_csv.empty() && (c.m < 2 || c.p < 1 || c.q < 1)) {
    return absl::InvalidArgumentError("BadDimensions: need m >= 2, p, q >= 1");
  }
  for (double e : c.epsilons) {
    if (!(e > 0)) return absl::InvalidArgumentError("epsilons must be > 0");
  }
  for (const std::string& mech : c.mechanisms) {
    if (mech != "none" && !ParseMechanismKind(mech).ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown mechanism '", mech, "'"));
    }
  }
  if (c.model != "linear" && c.model != "mlp") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown model '", c.model, "' (linear or mlp)"));
  }
  if (c.model == "mlp" && c.hidden.empty()) {
    return absl::InvalidArgumentError("mlp needs at least one hidden width");
  }
  if (c.rankings_csv.empty() != c.user_features_csv.empty() ||
      c.rankings_csv.empty() != c.item_features_csv.empty()) {
    return absl::InvalidArgumentError(
        "rankings_csv, user_features_csv and item_features_csv go together");
  }
  return absl::OkStatus();
}

// One (mechanism, epsilon) training arm; "none" has a single arm.
struct LearnArm {
  std::string mechanism;
  double epsilon;
};

std::vector<LearnArm> LearnArms(const LearnExperimentConfig& c) {
  std::vector<LearnArm> arms;
  for (const std::string& mech : c.mechanisms) {
    if (mech == "none") {
      arms.push_back({mech, std::numeric_limits<double>::infinity()});
      continue;
    }
    for (double e : c.epsilons) arms.push_back({mech, e});
  }
  return arms;
}

// Train / validation / test split for one replication.
struct LearnSplit {
  Eigen::MatrixXd fit_users;  // train then validation
  std::vector<Ranking> fit_rankings;
  Eigen::MatrixXd test_users;
  Eigen::MatrixXd test_truth;
  Eigen::MatrixXd items;
};

struct LoadedData {
  RankingDataset rankings;
  Eigen::MatrixXd users;  // aligned with rankings.user_ids
  Eigen::MatrixXd items;
};

absl::StatusOr<LoadedData> LoadLearnData(const LearnExperimentConfig& c) {
  absl::StatusOr<std::string> text = ReadFile(c.rankings_csv);
  if (!text.ok()) return text.status();
  absl::StatusOr<RankingDataset> rankings = ParseRankingCsv(*text);
  if (!rankings.ok()) return rankings.status();
  text = ReadFile(c.user_features_csv);
  if (!text.ok()) return text.status();
  absl::StatusOr<FeatureTable> users = ParseFeatureCsv(*text);
  if (!users.ok()) return users.status();
  text = ReadFile(c.item_features_csv);
  if (!text.ok()) return text.status();
  absl::StatusOr<FeatureTable> items = ParseFeatureCsv(*text);
  if (!items.ok()) return items.status();

  const int m = rankings->num_items();
  if (items->features.rows() != m) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "BadDimensions: %d item feature rows for %d items",
        items->features.rows(), m));
  }
  std::map<std::string, Eigen::Index> user_row;
  for (size_t r = 0; r < users->ids.size(); ++r) user_row[users->ids[r]] = r;
  LoadedData out;
  out.users.resize(static_cast<Eigen::Index>(rankings->rankings.size()),
                   users->features.cols());
  for (size_t u = 0; u < rankings->user_ids.size(); ++u) {
    auto it = user_row.find(rankings->user_ids[u]);
    if (it == user_row.end()) {
      return absl::NotFoundError(absl::StrCat(
          "UnknownUserId: no features for user ", rankings->user_ids[u]));
    }
    out.users.row(u) = users->features.row(it->second);
  }
  out.rankings = *std::move(rankings);
  out.items = items->features;
  return out;
}

absl::StatusOr<LearnSplit> MakeSplit(const LearnExperimentConfig& c,
                                     const LoadedData* loaded,
                                     uint64_t data_seed) {
  Rng rng(data_seed);
  LearnSplit split;
  if (loaded == nullptr) {
    GeneratorOptions gen;
    gen.n = c.n_train + c.n_val;
    gen.m = c.m;
    gen.p = c.p;
    gen.q = c.q;
    gen.alpha = c.alpha;
    gen.beta = c.beta;
    absl::StatusOr<UserItemData> fit = GenerateDataset(gen, rng);
    if (!fit.ok()) return fit.status();
    gen.n = c.n_test;
    absl::StatusOr<UserItemData> test =
        GenerateUsers(gen, fit->item_features, rng);
    if (!test.ok()) return test.status();
    split.fit_users = fit->user_features;
    split.fit_rankings = fit->rankings;
    split.items = fit->item_features;
    split.test_users = test->user_features;
    split.test_truth = test->true_scores;
    return split;
  }

  const int total = static_cast<int>(loaded->rankings.rankings.size());
  const int n_fit = c.n_train + c.n_val;
  if (total <= n_fit) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "EmptyTestSet: %d users, n_train + n_val = %d", total, n_fit));
  }
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  for (int i = total - 1; i > 0; --i) {
    std::swap(order[i], order[rng.Below(static_cast<uint64_t>(i) + 1)]);
  }
  const int m = loaded->rankings.num_items();
  split.items = loaded->items;
  split.fit_users.resize(n_fit, loaded->users.cols());
  split.test_users.resize(total - n_fit, loaded->users.cols());
  split.test_truth.resize(total - n_fit, m);
  for (int k = 0; k < total; ++k) {
    const int u = order[k];
    if (k < n_fit) {
      split.fit_users.row(k) = loaded->users.row(u);
      split.fit_rankings.push_back(loaded->rankings.rankings[u]);
    } else {
      split.test_users.row(k - n_fit) = loaded->users.row(u);
      for (int i = 0; i < m; ++i) {
        split.test_truth(k - n_fit, i) = loaded->rankings.rankings[u].rank(i);
      }
    }
  }
  return split;
}

}  // namespace

std::string_view Version() { return RANKDP_VERSION; }

std::string RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = std::string(Version());
  j["parameters"] = parameters_json.empty() ? nlohmann::ordered_json::object()
                                      : nlohmann::ordered_json::parse(parameters_json);
  j["wall_seconds"] = wall_seconds;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& [label, seed] : cell_seeds) {
    cells.push_back({{"cell", label}, {"seed", seed}});
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

absl::StatusOr<SynthesizeResult> RunSynthesize(const RankingDataset& input,
                                               int num_items, double epsilon,
                                               MechanismKind kind,
                                               uint64_t seed, int workers) {
  const Clock::time_point start = Clock::now();
  const size_t n = input.rankings.size();
  std::vector<double> budgets = input.per_user_epsilon;
  if (budgets.empty()) budgets.assign(n, epsilon);
  if (budgets.size() != n) {
    return absl::InvalidArgumentError("SizeMismatch: epsilon column length");
  }
  for (const Ranking& r : input.rankings) {
    if (r.size() != num_items) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "SizeMismatch: ranking of %d items, expected %d", r.size(),
          num_items));
    }
  }
  std::vector<uint64_t> seeds(n);
  for (size_t u = 0; u < n; ++u) {
    seeds[u] = DeriveSeed(seed, {HashLabel("synthesize"), u});
  }
  absl::StatusOr<std::vector<Ranking>> out =
      PrivatizeRankings(input.rankings, budgets, kind, seeds, workers);
  if (!out.ok()) return out.status();

  SynthesizeResult result;
  result.num_items = num_items;
  result.output.user_ids = input.user_ids;
  result.output.rankings = *std::move(out);
  result.output.per_user_epsilon = input.per_user_epsilon;
  result.output.item_ids = input.item_ids;

  nlohmann::ordered_json params;
  params["mechanism"] = std::string(MechanismName(kind));
  params["epsilon"] = epsilon;
  params["per_user_epsilon"] = !input.per_user_epsilon.empty();
  params["users"] = n;
  params["m"] = num_items;
  params["seed"] = seed;
  result.manifest.command = "synthesize";
  result.manifest.parameters_json = params.dump();
  for (size_t u = 0; u < n; ++u) {
    result.manifest.cell_seeds.emplace_back(input.user_ids[u], seeds[u]);
  }
  result.manifest.wall_seconds = SecondsSince(start);
  return result;
}

absl::StatusOr<AuditReport> RunAudit(int m, double epsilon, AuditMode mode,
                                     int64_t samples, uint64_t seed,
                                     int workers) {
  absl::StatusOr<MallowsMechanism> mech = MallowsMechanism::Create(epsilon, m);
  if (!mech.ok()) return mech.status();
  const Ranking base = Ranking::Identity(m);
  if (mode == AuditMode::kExact) return ExactEpsilon(*mech, base);
  return EmpiricalEpsilon(*mech, base, samples, seed, workers);
}

std::vector<double> LogGrid(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {lo};
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < n; ++k) {
    out.push_back(k == n - 1 ? hi : std::exp(a + (b - a) * k / (n - 1)));
  }
  out.front() = lo;
  return out;
}

absl::StatusOr<std::vector<UtilityRow>> RunUtility(
    const std::vector<int>& m_list, const std::vector<double>& epsilon_grid,
    int64_t reps, uint64_t seed, int workers) {
  if (reps < 1) return absl::InvalidArgumentError("reps must be positive");
  std::vector<UtilityRow> rows;
  for (int m : m_list) {
    if (m < 2) return absl::InvalidArgumentError("TooShort: m must be >= 2");
    for (double e : epsilon_grid) {
      if (!(e > 0) || !std::isfinite(e)) {
        return absl::InvalidArgumentError("epsilon must be positive and finite");
      }
      UtilityRow row;
      row.m = m;
      row.epsilon = e;
      row.reps = reps;
      row.seed = DeriveSeed(seed, {HashLabel("utility"),
                                   static_cast<uint64_t>(m), DoubleBits(e),
                                   static_cast<uint64_t>(reps)});
      row.mallows_cf = ExpectedConcordanceMallows(m, e);
      row.laplace_cf = ExpectedConcordanceLaplace(m, e);
      rows.push_back(row);
    }
  }

  std::vector<absl::Status> status(rows.size());
  ParallelFor(static_cast<int64_t>(rows.size()), workers,
              [&](int64_t cell) {
                UtilityRow& row = rows[cell];
                const Ranking base = Ranking::Identity(row.m);
                absl::StatusOr<MallowsMechanism> mallows =
                    MallowsMechanism::Create(row.epsilon, row.m);
                absl::StatusOr<LaplaceMechanism> laplace =
                    LaplaceMechanism::Create(row.epsilon, row.m);
                if (!mallows.ok() || !laplace.ok()) {
                  status[cell] =
                      mallows.ok() ? laplace.status() : mallows.status();
                  return;
                }
                Rng mallows_rng(DeriveSeed(row.seed, {0}));
                Rng laplace_rng(DeriveSeed(row.seed, {1}));
                std::vector<double> mc(reps);
                std::vector<double> lc(reps);
                for (int64_t r = 0; r < reps; ++r) {
                  absl::StatusOr<Ranking> out =
                      mallows->Synthesize(base, mallows_rng);
                  if (!out.ok()) {
                    status[cell] = out.status();
                    return;
                  }
                  mc[r] = static_cast<double>(
                      internal::CountConcordant(base.ranks(), out->ranks()));
                  absl::StatusOr<NoisyScores> noisy =
                      laplace->Perturb(base, laplace_rng);
                  if (!noisy.ok()) {
                    status[cell] = noisy.status();
                    return;
                  }
                  absl::StatusOr<Ranking> induced =
                      InducedRanking(noisy->values);
                  if (!induced.ok()) {
                    status[cell] = induced.status();
                    return;
                  }
                  lc[r] = static_cast<double>(
                      internal::CountConcordant(base.ranks(), induced->ranks()));
                }
                const MeanAndError ms = Summarize(mc);
                const MeanAndError ls = Summarize(lc);
                row.mallows_mc = ms.mean;
                row.mallows_se = ms.se;
                row.laplace_mc = ls.mean;
                row.laplace_se = ls.se;
              });
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  return rows;
}

std::string UtilityCsv(const std::vector<UtilityRow>& rows) {
  std::string out =
      "m,epsilon,mallows_mc,mallows_cf,laplace_mc,laplace_cf,reps,seed\n";
  for (const UtilityRow& r : rows) {
    absl::StrAppend(&out, r.m, ",", FormatReal(r.epsilon), ",",
                    FormatReal(r.mallows_mc), ",", FormatReal(r.mallows_cf),
                    ",", FormatReal(r.laplace_mc), ",",
                    FormatReal(r.laplace_cf), ",", r.reps, ",", r.seed, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<AttackRow>> RunAttack(
    const std::vector<int>& m_list, const EpsilonSchedule& schedule,
    const std::vector<int64_t>& n_grid, int64_t reps, uint64_t seed,
    int workers) {
  std::vector<AttackRow> rows;
  for (int m : m_list) {
    absl::StatusOr<std::vector<AttackRow>> part =
        AttackErrorProbability(m, schedule, n_grid, reps, seed, workers);
    if (!part.ok()) return part.status();
    rows.insert(rows.end(), part->begin(), part->end());
  }
  return rows;
}

std::string StageMomentsReport::ToJson() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["epsilon"] = epsilon;
  j["samples"] = samples;
  j["seed"] = seed;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const StageMomentRow& s : stages) {
    nlohmann::ordered_json row;
    row["t"] = s.t;
    row["empirical_mean"] = s.empirical_mean;
    row["empirical_variance"] = s.empirical_variance;
    row["closed_form_mean"] = s.closed_form_mean;
    row["closed_form_variance"] = s.closed_form_variance;
    row["mean_se"] = s.mean_se;
    row["variance_se"] = s.variance_se;
    list.push_back(std::move(row));
  }
  j["stages"] = std::move(list);
  return j.dump(2) + "\n";
}

absl::StatusOr<StageMomentsReport> RunStageMoments(int m, double epsilon,
                                                   int64_t samples,
                                                   uint64_t seed) {
  if (samples < 2) {
    return absl::InvalidArgumentError("ZeroSamples: need at least 2 samples");
  }
  absl::StatusOr<MallowsMechanism> mech = MallowsMechanism::Create(epsilon, m);
  if (!mech.ok()) return mech.status();
  const Ranking base = Ranking::Identity(m);
  // positions[t - 2][s]: where the item of input rank t landed among the
  // first t items in draw s.
  std::vector<std::vector<int>> positions(
      m - 1, std::vector<int>(static_cast<size_t>(samples)));
  Rng rng(DeriveSeed(seed, {HashLabel("stage-moments"),
                            static_cast<uint64_t>(m), DoubleBits(epsilon),
                            static_cast<uint64_t>(samples)}));
  for (int64_t s = 0; s < samples; ++s) {
    absl::StatusOr<Ranking> out = mech->Synthesize(base, rng);
    if (!out.ok()) return out.status();
    for (int t = 2; t <= m; ++t) {
      const int item = t - 1;
      int below = 0;
      for (int other = 0; other < item; ++other) {
        if (out->rank(other) < out->rank(item)) ++below;
      }
      positions[t - 2][s] = below;
    }
  }

  StageMomentsReport report;
  report.m = m;
  report.epsilon = epsilon;
  report.samples = samples;
  report.seed = seed;
  const double n = static_cast<double>(samples);
  for (int t = 2; t <= m; ++t) {
    const std::vector<int>& v = positions[t - 2];
    double mean = 0;
    for (int x : v) mean += x;
    mean /= n;
    double m2 = 0;
    double m4 = 0;
    for (int x : v) {
      const double d = x - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double variance = m2 / (n - 1);
    m2 /= n;
    m4 /= n;
    absl::StatusOr<StageMoments> cf = mech->ExpectedStagePosition(t);
    if (!cf.ok()) return cf.status();
    StageMomentRow row;
    row.t = t;
    row.empirical_mean = mean;
    row.empirical_variance = variance;
    row.closed_form_mean = cf->mean;
    row.closed_form_variance = cf->variance;
    row.mean_se = std::sqrt(variance / n);
    row.variance_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    report.stages.push_back(row);
  }
  return report;
}

absl::StatusOr<LearnExperimentConfig> ParseLearnConfig(std::string_view text,
                                                       bool is_toml) {
  nlohmann::json j;
  if (is_toml) {
    try {
      toml::table table = toml::parse(text);
      std::ostringstream ss;
      ss << toml::json_formatter{table};
      j = nlohmann::json::parse(ss.str());
    } catch (const toml::parse_error& e) {
      return absl::InvalidArgumentError(
          absl::StrCat("ParseError: line ", e.source().begin.line, ": ",
                       std::string(e.description())));
    }
  } else {
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      return absl::InvalidArgumentError(absl::StrCat("ParseError: ", e.what()));
    }
  }
  absl::StatusOr<LearnExperimentConfig> c = ConfigFromJson(j);
  if (!c.ok()) return c.status();
  if (absl::Status s = ValidateLearnConfig(*c); !s.ok()) return s;
  return c;
}

absl::StatusOr<LearnExperimentConfig> LoadLearnConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseLearnConfig(*text, absl::EndsWith(path, ".toml"));
}

absl::StatusOr<LearnResult> RunLearn(const LearnExperimentConfig& config,
                                     int workers) {
  if (absl::Status s = ValidateLearnConfig(config); !s.ok()) return s;
  std::optional<LoadedData> loaded;
  LearnExperimentConfig c = config;
  if (!c.rankings_csv.empty()) {
    absl::StatusOr<LoadedData> data = LoadLearnData(c);
    if (!data.ok()) return data.status();
    loaded = *std::move(data);
    c.m = loaded->rankings.num_items();
    c.p = static_cast<int>(loaded->users.cols());
    c.q = static_cast<int>(loaded->items.cols());
  }

  absl::StatusOr<ScoringModel> model_or = ScoringModel::Linear(c.p, c.q);
  if (c.model == "mlp") {
    std::vector<int> user_widths = {c.p};
    std::vector<int> item_widths = {c.q};
    user_widths.insert(user_widths.end(), c.hidden.begin(), c.hidden.end());
    item_widths.insert(item_widths.end(), c.hidden.begin(), c.hidden.end());
    model_or = ScoringModel::Mlp(user_widths, item_widths);
  }
  if (!model_or.ok()) return model_or.status();
  const ScoringModel model_template = *std::move(model_or);

  const std::vector<LearnArm> arms = LearnArms(c);
  const int reps = c.replications;
  std::vector<LearnRow> rows(static_cast<size_t>(reps) * arms.size());
  std::vector<absl::Status> status(reps);

  ParallelFor(reps, workers, [&](int64_t r) {
    const uint64_t data_seed =
        DeriveSeed(c.seed, {HashLabel("learn-data"), static_cast<uint64_t>(r)});
    absl::StatusOr<LearnSplit> split =
        MakeSplit(c, loaded ? &*loaded : nullptr, data_seed);
    if (!split.ok()) {
      status[r] = split.status();
      return;
    }
    // Arms within a replication share data, initialization and batch order,
    // so their differences reflect the mechanism alone.
    Rng init_rng(DeriveSeed(data_seed, {HashLabel("init")}));
    ScoringModel initial = model_template;
    initial.InitializeUniform(init_rng, c.train.init_scale);
    TrainConfig train = c.train;
    train.validation_users = c.n_val;
    train.seed = DeriveSeed(data_seed, {HashLabel("batches")});

    const int n_fit = static_cast<int>(split->fit_rankings.size());
    for (size_t a = 0; a < arms.size(); ++a) {
      const LearnArm& arm = arms[a];
      const uint64_t cell_seed = DeriveSeed(
          c.seed, {HashLabel("learn"), static_cast<uint64_t>(c.m),
                   DoubleBits(arm.epsilon), static_cast<uint64_t>(c.n_train),
                   static_cast<uint64_t>(r), HashLabel(arm.mechanism)});
      std::vector<Ranking> synthetic;
      if (arm.mechanism == "none") {
        synthetic = split->fit_rankings;
      } else {
        std::vector<double> budgets(n_fit, arm.epsilon);
        std::vector<uint64_t> seeds(n_fit);
        for (int u = 0; u < n_fit; ++u) {
          seeds[u] = DeriveSeed(cell_seed, {static_cast<uint64_t>(u)});
        }
        absl::StatusOr<std::vector<Ranking>> privatized = PrivatizeRankings(
            split->fit_rankings, budgets, *ParseMechanismKind(arm.mechanism),
            seeds);
        if (!privatized.ok()) {
          status[r] = privatized.status();
          return;
        }
        synthetic = *std::move(privatized);
      }
      absl::StatusOr<TrainResult> trained = Train(
          initial, split->fit_users, split->items, synthetic, train);
      if (!trained.ok()) {
        status[r] = trained.status();
        return;
      }
      absl::StatusOr<PairwiseAccuracy> test = EvaluatePairwiseAccuracy(
          trained->model, split->test_users, split->items, split->test_truth);
      if (!test.ok()) {
        status[r] = test.status();
        return;
      }
      LearnRow& row = rows[static_cast<size_t>(r) * arms.size() + a];
      row.run = static_cast<int>(r);
      row.mechanism = arm.mechanism;
      row.epsilon = arm.epsilon;
      row.n = c.n_train;
      row.m = c.m;
      row.seed = cell_seed;
      row.train_acc = trained->train_accuracy;
      row.val_acc = trained->validation_accuracy;
      row.test_acc_sym = test->symmetric;
    }
  });
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }

  LearnResult result;
  result.rows = std::move(rows);
  for (size_t a = 0; a < arms.size(); ++a) {
    std::vector<double> acc;
    for (int r = 0; r < reps; ++r) {
      acc.push_back(result.rows[static_cast<size_t>(r) * arms.size() + a]
                        .test_acc_sym);
    }
    const MeanAndError s = Summarize(acc);
    LearnSummaryRow row;
    row.mechanism = arms[a].mechanism;
    row.epsilon = arms[a].epsilon;
    row.runs = reps;
    row.mean_test_acc_sym = s.mean;
    if (reps > 1) row.se_test_acc_sym = s.se;
    result.summary.push_back(row);
  }
  return result;
}

std::string LearnCsv(const std::vector<LearnRow>& rows) {
  std::string out =
      "run,mechanism,epsilon,n,m,seed,train_acc,val_acc,test_acc_sym\n";
  for (const LearnRow& r : rows) {
    absl::StrAppend(&out, r.run, ",", r.mechanism, ",", FormatReal(r.epsilon),
                    ",", r.n, ",", r.m, ",", r.seed, ",",
                    FormatReal(r.train_acc), ",", FormatReal(r.val_acc), ",",
                    FormatReal(r.test_acc_sym), "\n");
  }
  return out;
}

std::string LearnSummaryCsv(const std::vector<LearnSummaryRow>& rows) {
  std::string out = "mechanism,epsilon,runs,mean_test_acc_sym,se_test_acc_sym\n";
  for (const LearnSummaryRow& r : rows) {
    absl::StrAppend(&out, r.mechanism, ",", FormatReal(r.epsilon), ",", r.runs,
                    ",", FormatReal(r.mean_test_acc_sym), ",",
                    r.se_test_acc_sym ? FormatReal(*r.se_test_acc_sym) : "",
                    "\n");
  }
  return out;
}

}  // namespace rankdp
