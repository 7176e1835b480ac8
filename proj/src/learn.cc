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

#include "rankdp/learn.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "rankdp/mechanisms.h"

namespace rankdp {
namespace {

absl::Status BadDimensions(std::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("BadDimensions: ", std::string(what)));
}

Eigen::VectorXd CoefficientsOrOnes(const std::vector<double>& v, int dim) {
  if (v.empty()) return Eigen::VectorXd::Ones(dim);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
}

absl::Status CheckGenerator(const GeneratorOptions& o) {
  if (o.n < 2 || o.m < 2) return BadDimensions("need n >= 2 and m >= 2");
  if (o.p < 1 || o.q < 1) return BadDimensions("feature dimensions must be >= 1");
  if (!o.alpha.empty() && static_cast<int>(o.alpha.size()) != o.p) {
    return BadDimensions(
        absl::StrFormat("alpha has %d entries, p = %d", o.alpha.size(), o.p));
  }
  if (!o.beta.empty() && static_cast<int>(o.beta.size()) != o.q) {
    return BadDimensions(
        absl::StrFormat("beta has %d entries, q = %d", o.beta.size(), o.q));
  }
  if (!(o.epsilon > 0)) {
    return absl::InvalidArgumentError("per-user epsilon must be > 0");
  }
  return absl::OkStatus();
}

Eigen::MatrixXd UniformMatrix(int rows, int cols, double bound, Rng& rng) {
  Eigen::MatrixXd out(rows, cols);
  // Row-major fill so the draw order is independent of Eigen's storage.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out(r, c) = rng.Uniform(-bound, bound);
  }
  return out;
}

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

absl::StatusOr<PairwiseAccuracy> Agreement(const Eigen::MatrixXd& truth,
                                           const Eigen::MatrixXd& predicted) {
  const Eigen::Index n = truth.rows();
  const Eigen::Index m = truth.cols();
  if (n == 0) return absl::InvalidArgumentError("EmptyTestSet: no test users");
  int64_t agree = 0;
  int64_t ordered = 0;
  for (Eigen::Index u = 0; u < n; ++u) {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i == j || !(truth(u, i) > truth(u, j))) continue;
        ++ordered;
        if (predicted(u, i) > predicted(u, j)) ++agree;
      }
    }
  }
  PairwiseAccuracy out;
  out.l_pair = static_cast<double>(agree) /
               (static_cast<double>(n) * m * (m - 1));
  out.symmetric = ordered == 0 ? 0.0 : static_cast<double>(agree) / ordered;
  return out;
}

Eigen::MatrixXd RankMatrix(std::span<const Ranking> rankings, int m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rankings.size()), m);
  for (size_t u = 0; u < rankings.size(); ++u) {
    for (int i = 0; i < m; ++i) out(u, i) = rankings[u].rank(i);
  }
  return out;
}

Eigen::MatrixXd SelectRows(const Eigen::MatrixXd& m,
                           std::span<const int> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (size_t r = 0; r < rows.size(); ++r) out.row(r) = m.row(rows[r]);
  return out;
}

}  // namespace

absl::StatusOr<std::vector<Ranking>> RankingsFromScores(
    const Eigen::MatrixXd& scores) {
  std::vector<Ranking> out;
  out.reserve(scores.rows());
  std::vector<double> row(scores.cols());
  for (Eigen::Index u = 0; u < scores.rows(); ++u) {
    for (Eigen::Index i = 0; i < scores.cols(); ++i) row[i] = scores(u, i);
    absl::StatusOr<Ranking> r = InducedRanking(row);
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

absl::StatusOr<UserItemData> GenerateUsers(const GeneratorOptions& options,
                                           const Eigen::MatrixXd& item_features,
                                           Rng& rng) {
  if (auto s = CheckGenerator(options); !s.ok()) return s;
  if (item_features.cols() != options.q) {
    return BadDimensions(absl::StrFormat("item features have %d columns, q = %d",
                                         item_features.cols(), options.q));
  }
  UserItemData data;
  data.item_features = item_features;
  data.user_features =
      UniformMatrix(options.n, options.p, options.feature_bound, rng);
  const Eigen::VectorXd alpha = CoefficientsOrOnes(options.alpha, options.p);
  const Eigen::VectorXd beta = CoefficientsOrOnes(options.beta, options.q);
  const Eigen::VectorXd user_part = data.user_features * alpha;
  const Eigen::RowVectorXd item_part = (item_features * beta).transpose();
  data.true_scores =
      user_part.replicate(1, item_features.rows()) +
      item_part.replicate(options.n, 1);
  absl::StatusOr<std::vector<Ranking>> rankings =
      RankingsFromScores(data.true_scores);
  if (!rankings.ok()) return rankings.status();
  data.rankings = *std::move(rankings);
  data.per_user_epsilon.assign(options.n, options.epsilon);
  return data;
}

absl::StatusOr<UserItemData> GenerateDataset(const GeneratorOptions& options,
                                             Rng& rng) {
  if (auto s = CheckGenerator(options); !s.ok()) return s;
  const Eigen::MatrixXd items =
      UniformMatrix(options.m, options.q, options.feature_bound, rng);
  return GenerateUsers(options, items, rng);
}

absl::StatusOr<MechanismKind> ParseMechanismKind(std::string_view name) {
  if (name == "mallows") return MechanismKind::kMallows;
  if (name == "laplace") return MechanismKind::kLaplace;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown mechanism '", std::string(name), "' (expected mallows or laplace)"));
}

std::string_view MechanismName(MechanismKind kind) {
  return kind == MechanismKind::kMallows ? "mallows" : "laplace";
}

absl::StatusOr<Ranking> Privatize(const Ranking& ranking, double epsilon,
                                  MechanismKind kind, Rng& rng) {
  if (kind == MechanismKind::kMallows) {
    absl::StatusOr<MallowsMechanism> mech =
        MallowsMechanism::Create(epsilon, ranking.size());
    if (!mech.ok()) return mech.status();
    return mech->Synthesize(ranking, rng);
  }
  absl::StatusOr<LaplaceMechanism> mech =
      LaplaceMechanism::Create(epsilon, ranking.size());
  if (!mech.ok()) return mech.status();
  absl::StatusOr<NoisyScores> noisy = mech->Perturb(ranking, rng);
  if (!noisy.ok()) return noisy.status();
  return InducedRanking(noisy->values);
}

absl::StatusOr<std::vector<Ranking>> PrivatizeRankings(
    std::span<const Ranking> rankings, std::span<const double> epsilons,
    MechanismKind kind, std::span<const uint64_t> user_seeds, int workers) {
  if (epsilons.size() != rankings.size() ||
      user_seeds.size() != rankings.size()) {
    return absl::InvalidArgumentError(
        "SizeMismatch: rankings, epsilons and seeds differ in length");
  }
  std::vector<std::optional<Ranking>> out(rankings.size());
  std::vector<absl::Status> errors(rankings.size());
  ParallelFor(static_cast<int64_t>(rankings.size()), workers, [&](int64_t u) {
    Rng rng(user_seeds[u]);
    absl::StatusOr<Ranking> r = Privatize(rankings[u], epsilons[u], kind, rng);
    if (r.ok()) {
      out[u] = *std::move(r);
    } else {
      errors[u] = r.status();
    }
  });
  std::vector<Ranking> result;
  result.reserve(rankings.size());
  for (size_t u = 0; u < rankings.size(); ++u) {
    if (!errors[u].ok()) return errors[u];
    result.push_back(*std::move(out[u]));
  }
  return result;
}

absl::StatusOr<std::vector<Ranking>> PrivatizeDataset(const UserItemData& data,
                                                      MechanismKind kind,
                                                      uint64_t seed,
                                                      int workers) {
  std::vector<uint64_t> seeds(data.rankings.size());
  for (size_t u = 0; u < seeds.size(); ++u) seeds[u] = DeriveSeed(seed, {u});
  return PrivatizeRankings(data.rankings, data.per_user_epsilon, kind, seeds,
                           workers);
}

// ---------------------------------------------------------------------------
// ScoringModel

ScoringModel::ScoringModel(Kind kind, std::vector<int> user_widths,
                           std::vector<int> item_widths)
    : kind_(kind),
      user_widths_(std::move(user_widths)),
      item_widths_(std::move(item_widths)) {
  size_t count = 0;
  if (kind_ == Kind::kLinear) {
    count = user_widths_.front() + item_widths_.front();
  } else {
    for (const auto* widths : {&user_widths_, &item_widths_}) {
      for (size_t l = 1; l < widths->size(); ++l) {
        count += static_cast<size_t>((*widths)[l]) * ((*widths)[l - 1] + 1);
      }
    }
  }
  params_.assign(count, 0.0);
}

ScoringModel ScoringModel::Linear(int p, int q) {
  return ScoringModel(Kind::kLinear, {p}, {q});
}

absl::StatusOr<ScoringModel> ScoringModel::Mlp(std::vector<int> user_widths,
                                               std::vector<int> item_widths) {
  if (user_widths.size() < 2 || item_widths.size() < 2) {
    return absl::InvalidArgumentError(
        "each tower needs an input width and at least one layer");
  }
  if (user_widths.back() != item_widths.back()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "tower embeddings differ: %d vs %d", user_widths.back(),
        item_widths.back()));
  }
  for (int w : user_widths) {
    if (w < 1) return absl::InvalidArgumentError("layer widths must be >= 1");
  }
  for (int w : item_widths) {
    if (w < 1) return absl::InvalidArgumentError("layer widths must be >= 1");
  }
  return ScoringModel(Kind::kMlp, std::move(user_widths),
                      std::move(item_widths));
}

ScoringModel ScoringModel::DefaultMlp(int p, int q) {
  return ScoringModel(Kind::kMlp, {p, 10, 10, 10}, {q, 10, 10, 10});
}

void ScoringModel::InitializeUniform(Rng& rng, double scale) {
  for (double& w : params_) w = rng.Uniform(-scale, scale);
}

size_t ScoringModel::item_offset() const {
  size_t offset = 0;
  for (size_t l = 1; l < user_widths_.size(); ++l) {
    offset += static_cast<size_t>(user_widths_[l]) * (user_widths_[l - 1] + 1);
  }
  return offset;
}

Eigen::MatrixXd ScoringModel::Forward(const Eigen::MatrixXd& input,
                                      size_t offset,
                                      const std::vector<int>& widths,
                                      Tower* trace) const {
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd a = input;
  if (trace) trace->activations.push_back(a);
  const size_t layers = widths.size() - 1;
  for (size_t l = 1; l <= layers; ++l) {
    const int in = widths[l - 1];
    const int out = widths[l];
    Eigen::Map<const RowMajor> w(params_.data() + offset, out, in);
    Eigen::Map<const Eigen::RowVectorXd> b(params_.data() + offset + out * in,
                                           out);
    offset += static_cast<size_t>(out) * (in + 1);
    Eigen::MatrixXd z = a * w.transpose();
    z.rowwise() += b;
    a = l < layers ? Eigen::MatrixXd(z.array().tanh()) : z;
    if (trace) trace->activations.push_back(a);
  }
  return a;
}

void ScoringModel::BackwardTower(const Tower& trace,
                                 const Eigen::MatrixXd& output_grad,
                                 size_t offset, const std::vector<int>& widths,
                                 std::vector<double>& grad) const {
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const size_t layers = widths.size() - 1;
  std::vector<size_t> offsets(layers + 1);
  offsets[1] = offset;
  for (size_t l = 2; l <= layers; ++l) {
    offsets[l] = offsets[l - 1] +
                 static_cast<size_t>(widths[l - 1]) * (widths[l - 2] + 1);
  }
  // delta = dLoss / d(pre-activation) of the current layer.
  Eigen::MatrixXd delta = output_grad;
  for (size_t l = layers; l >= 1; --l) {
    const int in = widths[l - 1];
    const int out = widths[l];
    const Eigen::MatrixXd& below = trace.activations[l - 1];
    Eigen::Map<RowMajor> dw(grad.data() + offsets[l], out, in);
    Eigen::Map<Eigen::RowVectorXd> db(grad.data() + offsets[l] + out * in,
                                      out);
    dw += delta.transpose() * below;
    db += delta.colwise().sum();
    if (l == 1) break;
    Eigen::Map<const RowMajor> w(params_.data() + offsets[l], out, in);
    Eigen::MatrixXd upstream = delta * w;
    delta = upstream.array() * (1.0 - below.array().square());
  }
}

Eigen::MatrixXd ScoringModel::Scores(const Eigen::MatrixXd& users,
                                     const Eigen::MatrixXd& items) const {
  if (kind_ == Kind::kLinear) {
    const int p = user_widths_.front();
    const int q = item_widths_.front();
    Eigen::Map<const Eigen::VectorXd> a(params_.data(), p);
    Eigen::Map<const Eigen::VectorXd> b(params_.data() + p, q);
    const Eigen::VectorXd user_part = users * a;
    const Eigen::RowVectorXd item_part = (items * b).transpose();
    return user_part.replicate(1, items.rows()) +
           item_part.replicate(users.rows(), 1);
  }
  const Eigen::MatrixXd u = Forward(users, 0, user_widths_, nullptr);
  const Eigen::MatrixXd v = Forward(items, item_offset(), item_widths_, nullptr);
  return u * v.transpose();
}

std::vector<double> ScoringModel::Backward(
    const Eigen::MatrixXd& users, const Eigen::MatrixXd& items,
    const Eigen::MatrixXd& score_grad) const {
  std::vector<double> grad(params_.size(), 0.0);
  if (kind_ == Kind::kLinear) {
    const int p = user_widths_.front();
    const int q = item_widths_.front();
    Eigen::Map<Eigen::VectorXd> da(grad.data(), p);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + p, q);
    da = users.transpose() * score_grad.rowwise().sum();
    db = items.transpose() * score_grad.colwise().sum().transpose();
    return grad;
  }
  Tower user_trace;
  Tower item_trace;
  const Eigen::MatrixXd u = Forward(users, 0, user_widths_, &user_trace);
  const Eigen::MatrixXd v =
      Forward(items, item_offset(), item_widths_, &item_trace);
  BackwardTower(user_trace, score_grad * v, 0, user_widths_, grad);
  BackwardTower(item_trace, score_grad.transpose() * u, item_offset(),
                item_widths_, grad);
  return grad;
}

std::string ScoringModel::Describe() const {
  if (kind_ == Kind::kLinear) {
    return absl::StrFormat("linear(p=%d, q=%d)", user_widths_.front(),
                           item_widths_.front());
  }
  return absl::StrCat("mlp(user=[", absl::StrJoin(user_widths_, ","),
                      "], item=[", absl::StrJoin(item_widths_, ","), "])");
}

// ---------------------------------------------------------------------------
// Loss, training, evaluation

absl::StatusOr<LossAndGradient> PairwiseLossAndGradient(
    const ScoringModel& model, const Eigen::MatrixXd& users,
    const Eigen::MatrixXd& items, std::span<const Ranking> rankings,
    double ridge) {
  const Eigen::Index n = users.rows();
  const Eigen::Index m = items.rows();
  if (static_cast<size_t>(n) != rankings.size() ||
      users.cols() != model.user_dim() || items.cols() != model.item_dim()) {
    return absl::InvalidArgumentError(
        "SizeMismatch: features, rankings and model disagree on dimensions");
  }
  for (const Ranking& r : rankings) {
    if (r.size() != m) {
      return absl::InvalidArgumentError(
          "SizeMismatch: ranking length differs from item count");
    }
  }
  LossAndGradient out;
  out.pairs = static_cast<int64_t>(n) * m * (m - 1) / 2;
  const Eigen::MatrixXd scores = model.Scores(users, items);
  Eigen::MatrixXd score_grad = Eigen::MatrixXd::Zero(n, m);
  double total = 0;
  const double weight = out.pairs > 0 ? 1.0 / out.pairs : 0.0;
  for (Eigen::Index u = 0; u < n; ++u) {
    const Ranking& r = rankings[u];
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (r.rank(i) <= r.rank(j)) continue;
        const double margin = scores(u, i) - scores(u, j);
        total += Softplus(-margin);
        const double slope = -Sigmoid(-margin) * weight;
        score_grad(u, i) += slope;
        score_grad(u, j) -= slope;
      }
    }
  }
  out.loss = total * weight;
  out.gradient = model.Backward(users, items, score_grad);
  if (ridge > 0) {
    std::span<const double> params = model.parameters();
    double norm2 = 0;
    for (size_t k = 0; k < params.size(); ++k) {
      norm2 += params[k] * params[k];
      out.gradient[k] += 2.0 * ridge * params[k];
    }
    out.loss += ridge * norm2;
  }
  if (!std::isfinite(out.loss)) {
    return absl::FailedPreconditionError(
        absl::StrFormat("NonFiniteLoss: loss evaluated to %g", out.loss));
  }
  return out;
}

absl::StatusOr<PairwiseAccuracy> EvaluatePairwiseAccuracy(
    const ScoringModel& model, const Eigen::MatrixXd& users,
    const Eigen::MatrixXd& items, const Eigen::MatrixXd& true_scores) {
  if (users.rows() == 0) {
    return absl::InvalidArgumentError("EmptyTestSet: no test users");
  }
  if (true_scores.rows() != users.rows() || true_scores.cols() != items.rows()) {
    return absl::InvalidArgumentError(
        "SizeMismatch: true scores do not match users x items");
  }
  return Agreement(true_scores, model.Scores(users, items));
}

absl::StatusOr<PairwiseAccuracy> EvaluateRankingAccuracy(
    const ScoringModel& model, const Eigen::MatrixXd& users,
    const Eigen::MatrixXd& items, std::span<const Ranking> rankings) {
  if (users.rows() == 0 || rankings.empty()) {
    return absl::InvalidArgumentError("EmptyTestSet: no test users");
  }
  return EvaluatePairwiseAccuracy(
      model, users, items,
      RankMatrix(rankings, static_cast<int>(items.rows())));
}

absl::StatusOr<TrainResult> Train(const ScoringModel& initial,
                                  const Eigen::MatrixXd& users,
                                  const Eigen::MatrixXd& items,
                                  std::span<const Ranking> rankings,
                                  const TrainConfig& config) {
  if (!(config.learning_rate > 0)) {
    return absl::InvalidArgumentError("learning rate must be > 0");
  }
  if (config.validation_fraction < 0 || config.validation_fraction >= 1) {
    return absl::InvalidArgumentError("validation fraction must be in [0, 1)");
  }
  if (config.batch_size < 1 || config.max_epochs < 0 || config.patience < 1) {
    return absl::InvalidArgumentError(
        "batch size and patience must be >= 1, epochs >= 0");
  }
  const int n = static_cast<int>(users.rows());
  if (static_cast<size_t>(n) != rankings.size()) {
    return absl::InvalidArgumentError(
        "SizeMismatch: one ranking per user required");
  }
  const int n_val =
      config.validation_users >= 0
          ? config.validation_users
          : static_cast<int>(std::floor(n * config.validation_fraction));
  const int n_train = n - n_val;
  if (n_train < 1) return absl::InvalidArgumentError("no training users");

  const Eigen::MatrixXd train_users = users.topRows(n_train);
  const Eigen::MatrixXd val_users = users.bottomRows(n_val);
  const std::span<const Ranking> train_rankings = rankings.first(n_train);
  const std::span<const Ranking> val_rankings = rankings.last(n_val);

  auto validation_score = [&](const ScoringModel& model) -> double {
    if (n_val == 0) return 0.0;
    return EvaluateRankingAccuracy(model, val_users, items, val_rankings)
        ->symmetric;
  };

  Rng rng(config.seed);
  ScoringModel model = initial;
  ScoringModel best = model;
  double best_val = validation_score(model);
  int best_epoch = 0;
  int epochs = 0;
  std::vector<int> order(n_train);
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    epochs = epoch;
    for (int k = n_train - 1; k > 0; --k) {
      std::swap(order[k], order[rng.Below(k + 1)]);
    }
    for (int start = 0; start < n_train; start += config.batch_size) {
      const int stop = std::min(n_train, start + config.batch_size);
      const std::span<const int> batch(order.data() + start, stop - start);
      std::vector<Ranking> batch_rankings;
      batch_rankings.reserve(batch.size());
      for (int u : batch) batch_rankings.push_back(train_rankings[u]);
      absl::StatusOr<LossAndGradient> step = PairwiseLossAndGradient(
          model, SelectRows(train_users, batch), items, batch_rankings,
          config.ridge);
      if (!step.ok()) {
        return absl::InternalError(absl::StrCat(
            "Diverged: epoch ", epoch, ": ", step.status().message()));
      }
      std::span<double> params = model.mutable_parameters();
      for (size_t p = 0; p < params.size(); ++p) {
        params[p] -= config.learning_rate * step->gradient[p];
        if (!std::isfinite(params[p])) {
          return absl::InternalError(absl::StrFormat(
              "Diverged: parameter became non-finite in epoch %d", epoch));
        }
      }
    }
    if (n_val == 0) {
      best = model;
      best_epoch = epoch;
      continue;
    }
    const double val = validation_score(model);
    if (val > best_val) {
      best_val = val;
      best = model;
      best_epoch = epoch;
    } else if (epoch - best_epoch >= config.patience) {
      break;
    }
  }

  absl::StatusOr<LossAndGradient> final_loss = PairwiseLossAndGradient(
      best, train_users, items, train_rankings, config.ridge);
  if (!final_loss.ok()) {
    return absl::InternalError(
        absl::StrCat("Diverged: ", final_loss.status().message()));
  }
  TrainResult result{best};
  result.epochs_run = epochs;
  result.best_epoch = best_epoch;
  result.train_loss = final_loss->loss;
  result.train_accuracy =
      EvaluateRankingAccuracy(best, train_users, items, train_rankings)
          ->symmetric;
  result.validation_accuracy = n_val == 0 ? 0.0 : best_val;
  return result;
}

// ---------------------------------------------------------------------------
// Order files

absl::StatusOr<RankingDataset> ParseOrderFile(std::string_view text,
                                              const OrderFileFormat& format) {
  auto parse_error = [](int line, absl::string_view what) {
    return absl::InvalidArgumentError(
        absl::StrCat("ParseError: line ", line, ": ", what));
  };
  std::vector<std::vector<std::string>> records;
  std::vector<int> record_lines;
  int line_no = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_no;
    if (line_no <= format.header_lines) continue;
    std::vector<std::string> fields =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r,"), absl::SkipEmpty());
    if (fields.empty()) continue;
    if (static_cast<int>(fields.size()) <= format.leading_fields + 1) {
      return parse_error(line_no, "record lists fewer than two items");
    }
    fields.erase(fields.begin(), fields.begin() + format.leading_fields);
    records.push_back(std::move(fields));
    record_lines.push_back(line_no);
  }

  RankingDataset dataset;
  if (records.empty()) return dataset;

  // The first record fixes the item universe.
  std::set<std::string> universe(records.front().begin(),
                                 records.front().end());
  bool numeric = true;
  for (const std::string& id : universe) {
    int64_t v;
    numeric = numeric && absl::SimpleAtoi(id, &v);
  }
  std::vector<std::string> kept = format.keep_items.empty()
                                      ? std::vector<std::string>(
                                            universe.begin(), universe.end())
                                      : format.keep_items;
  for (const std::string& id : kept) {
    if (!universe.count(id)) {
      return absl::NotFoundError(absl::StrCat(
          "UnknownItemId: item '", id, "' does not occur in line ",
          record_lines.front()));
    }
  }
  std::sort(kept.begin(), kept.end(),
            [numeric](const std::string& a, const std::string& b) {
              if (numeric) {
                int64_t x = 0, y = 0;
                (void)absl::SimpleAtoi(a, &x);
                (void)absl::SimpleAtoi(b, &y);
                return x < y;
              }
              return a < b;
            });
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.size() < 2) {
    return absl::InvalidArgumentError("TooShort: keep at least two items");
  }
  std::map<std::string, int> dense;
  for (size_t k = 0; k < kept.size(); ++k) dense[kept[k]] = static_cast<int>(k);
  const int m = static_cast<int>(kept.size());

  for (size_t r = 0; r < records.size(); ++r) {
    const std::vector<std::string>& rec = records[r];
    std::set<std::string> ids(rec.begin(), rec.end());
    if (ids.size() != rec.size()) {
      return parse_error(record_lines[r], "item listed twice");
    }
    if (ids != universe) {
      return parse_error(record_lines[r],
                         "record lists a different item set than line " +
                             std::to_string(record_lines.front()));
    }
    std::vector<int> ranks(m, 0);
    int next_rank = m;  // most preferred first, so it gets the top rank
    for (const std::string& id : rec) {
      auto it = dense.find(id);
      if (it == dense.end()) continue;
      ranks[it->second] = next_rank--;
    }
    absl::StatusOr<Ranking> ranking = Ranking::Create(std::move(ranks));
    if (!ranking.ok()) return parse_error(record_lines[r], ranking.status().message());
    dataset.user_ids.push_back(std::to_string(r));
    dataset.rankings.push_back(*std::move(ranking));
  }
  dataset.item_ids = kept;
  return dataset;
}

absl::StatusOr<RankingDataset> IngestOrderFile(const std::string& path,
                                               const OrderFileFormat& format) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseOrderFile(*text, format);
}

}  // namespace rankdp
