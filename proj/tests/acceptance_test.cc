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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "rankdp/attack.h"
#include "rankdp/audit.h"
#include "rankdp/harness.h"
#include "rankdp/learn.h"
#include "rankdp/mechanisms.h"
#include "rankdp/ranking.h"
#include "rankdp/rng.h"
#include "test_util.h"

namespace rankdp {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(const char* id, Clock::time_point start, const Outcome& o) {
  const double secs =
      std::chrono::duration<double>(Clock::now() - start).count();
  std::printf("%s %s (%.1fs) %s\n", id, o.pass ? "PASS" : "FAIL", secs,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

template <typename T>
bool Check(const absl::StatusOr<T>& s, Outcome& o) {
  if (s.ok()) return true;
  o.pass = false;
  o.detail = std::string(s.status().message());
  return false;
}

double PooledSe(double a, double b) { return std::sqrt(a * a + b * b); }

Outcome Ac1() {
  double worst_gap = 0, worst_sum = 0;
  for (int m = 2; m <= 6; ++m) {
    const std::vector<Ranking> all = *EnumeratePermutations(m);
    for (double eps : {0.5, 1.0, 3.0}) {
      const MallowsMechanism mech = *MallowsMechanism::Create(eps, m);
      for (const Ranking& in : all) {
        double chain_sum = 0, pmf_sum = 0;
        for (const Ranking& out : all) {
          const double c = *mech.ChainProbability(in, out);
          const double p = *mech.Pmf(in, out);
          worst_gap = std::max(worst_gap, std::fabs(c - p));
          chain_sum += c;
          pmf_sum += p;
        }
        worst_sum = std::max({worst_sum, std::fabs(chain_sum - 1),
                              std::fabs(pmf_sum - 1)});
      }
    }
  }
  return {worst_gap < 1e-12 && worst_sum <= 1e-12,
          absl::StrFormat("max|chain-pmf|=%.3g max|sum-1|=%.3g", worst_gap,
                          worst_sum)};
}

Outcome Ac2() {
  double worst = 0;
  for (int m = 2; m <= 6; ++m) {
    const std::vector<Ranking> bases =
        m <= 4 ? *EnumeratePermutations(m)
               : std::vector<Ranking>{Ranking::Identity(m)};
    for (double eps : {0.5, 1.0, 2.0, 4.0}) {
      const MallowsMechanism mech = *MallowsMechanism::Create(eps, m);
      for (const Ranking& base : bases) {
        worst = std::max(
            worst, std::fabs(ExactEpsilon(mech, base)->measured_epsilon - eps));
      }
    }
  }
  return {worst <= 1e-9, absl::StrFormat("max|measured-eps|=%.3g", worst)};
}

constexpr uint64_t kAc3Seed = 3;
constexpr uint64_t kAc4Seed = 4;
constexpr uint64_t kAc6Seed = 6;

std::string Ac3Json(int workers, std::vector<double>* measured = nullptr) {
  std::string out;
  for (double eps : {0.5, 1.0, 2.0}) {
    const AuditReport r =
        *RunAudit(3, eps, AuditMode::kEmpirical, 1000000, kAc3Seed, workers);
    if (measured) measured->push_back(r.measured_epsilon);
    out += r.ToJson();
  }
  return out;
}

Outcome Ac3(std::string& json) {
  std::vector<double> measured;
  json = Ac3Json(1, &measured);
  const double eps[] = {0.5, 1.0, 2.0};
  bool pass = true;
  std::string detail;
  for (int k = 0; k < 3; ++k) {
    pass = pass && std::fabs(measured[k] - eps[k]) <= 0.08;
    detail += absl::StrFormat("eps=%g est=%.4f ", eps[k], measured[k]);
  }
  return {pass, detail};
}

std::vector<UtilityRow> Ac4Rows(int workers) {
  return *RunUtility({4, 5, 6}, LogGrid(0.1, 30.0, 20), 5000, kAc4Seed,
                     workers);
}

Outcome Ac4(std::string& csv) {
  const std::vector<UtilityRow> rows = Ac4Rows(1);
  csv = UtilityCsv(rows);
  int dominated = 0, agree = 0;
  for (const UtilityRow& r : rows) {
    if (r.mallows_cf > r.laplace_cf) ++dominated;
    if (std::fabs(r.mallows_mc - r.mallows_cf) <= 3 * r.mallows_se &&
        std::fabs(r.laplace_mc - r.laplace_cf) <= 3 * r.laplace_se) {
      ++agree;
    }
  }
  const int n = static_cast<int>(rows.size());
  return {n == 60 && dominated == n && agree >= 0.95 * n,
          absl::StrFormat("cf dominance %d/%d, MC within 3 SE %d/%d",
                          dominated, n, agree, n)};
}

Outcome Ac5() {
  bool pass = true;
  double worst_z = 0;
  for (double eps : {1.0, 5.0}) {
    const StageMomentsReport r = *RunStageMoments(10, eps, 100000, 5);
    for (const StageMomentRow& s : r.stages) {
      const double zm =
          std::fabs(s.empirical_mean - s.closed_form_mean) / s.mean_se;
      const double zv = std::fabs(s.empirical_variance -
                                  s.closed_form_variance) /
                        s.variance_se;
      worst_z = std::max({worst_z, zm, zv});
      pass = pass && zm <= 3 && zv <= 3;
    }
  }
  return {pass, absl::StrFormat("max |z| over stages = %.2f", worst_z)};
}

std::vector<int64_t> Range(int64_t first, int64_t last, int64_t step) {
  std::vector<int64_t> out;
  for (int64_t n = first; n <= last; n += step) out.push_back(n);
  return out;
}

std::vector<AttackRow> Ac6Rows(int workers) {
  return *RunAttack({3}, *EpsilonSchedule::Parse("fixed", 4.0),
                    Range(10, 100, 10), 500, kAc6Seed, workers);
}

Outcome Ac6(std::string& csv) {
  const std::vector<AttackRow> rows = Ac6Rows(1);
  csv = AttackRowsToCsv(rows);
  bool monotone = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      if (rows[j].error_rate - rows[i].error_rate >
          3 * PooledSe(rows[i].std_error, rows[j].std_error)) {
        monotone = false;
      }
    }
  }
  const double last = rows.back().error_rate;
  return {monotone && last < 0.05,
          absl::StrFormat("rate(N=10)=%.3f rate(N=100)=%.3f monotone=%s",
                          rows.front().error_rate, last,
                          monotone ? "yes" : "no")};
}

Outcome Ac7() {
  const std::vector<int64_t> grid = Range(100, 1000, 100);
  const std::vector<AttackRow> sq = *RunAttack(
      {3}, *EpsilonSchedule::Parse("sqrt", 1.0), grid, 2000, 7, 1);
  const std::vector<AttackRow> ls = *RunAttack(
      {3}, *EpsilonSchedule::Parse("logsqrt", 1.0), grid, 2000, 7, 1);
  double min_rate = 1;
  for (const AttackRow& r : sq) min_rate = std::min(min_rate, r.error_rate);
  const double drop = ls.front().error_rate - ls.back().error_rate;
  const double se = PooledSe(ls.front().std_error, ls.back().std_error);
  return {min_rate > 0.05 && drop > 3 * se,
          absl::StrFormat("sqrt: min rate %.3f; logsqrt: %.3f -> %.3f "
                          "(drop %.2f pooled SE)",
                          min_rate, ls.front().error_rate,
                          ls.back().error_rate, se > 0 ? drop / se : 0.0)};
}

Outcome Ac8() {
  LearnExperimentConfig c;
  c.n_train = 300;
  c.n_val = 100;
  c.n_test = 1000;
  c.m = 15;
  c.epsilons = {1.0, 4.0};
  c.mechanisms = {"mallows", "laplace"};
  c.replications = 10;
  c.seed = 8;
  c.model = "mlp";
  c.hidden = {10, 10, 10};
  c.train.learning_rate = 0.1;
  c.train.max_epochs = 200;
  c.train.patience = 30;
  Outcome o;
  const absl::StatusOr<LearnResult> r = RunLearn(c, ResolveWorkerCount(0));
  if (!Check(r, o)) return o;
  auto find = [&](const std::string& mech, double eps) {
    for (const LearnSummaryRow& s : r->summary) {
      if (s.mechanism == mech && s.epsilon == eps) return s;
    }
    return LearnSummaryRow{};
  };
  o.pass = true;
  for (double eps : {1.0, 4.0}) {
    const LearnSummaryRow m = find("mallows", eps);
    const LearnSummaryRow l = find("laplace", eps);
    const double gap = m.mean_test_acc_sym - l.mean_test_acc_sym;
    const double se =
        PooledSe(m.se_test_acc_sym.value_or(0), l.se_test_acc_sym.value_or(0));
    o.pass = o.pass && gap > 0;
    if (eps == 4.0) o.pass = o.pass && gap >= 2 * se;
    o.detail += absl::StrFormat(
        "eps=%g mallows=%.4f laplace=%.4f gap=%.2f SE; ", eps,
        m.mean_test_acc_sym, l.mean_test_acc_sym, se > 0 ? gap / se : 0.0);
  }
  return o;
}

Outcome Ac9() {
  double worst = 0;
  Rng rng(9);
  for (bool mlp : {false, true}) {
    ScoringModel model =
        mlp ? ScoringModel::DefaultMlp(4, 4) : ScoringModel::Linear(4, 4);
    for (int point = 0; point < 100; ++point) {
      GeneratorOptions options;
      options.n = 5;
      options.m = 6;
      const UserItemData d = *GenerateDataset(options, rng);
      model.InitializeUniform(rng, 0.5);
      worst = std::max(worst, testing_util::GradientRelativeError(
                                  model, d.user_features, d.item_features,
                                  d.rankings, 0.01));
    }
  }
  return {worst < 1e-5, absl::StrFormat("max relative error %.3g", worst)};
}

Outcome Ac10(const std::string& ac3, const std::string& ac4,
             const std::string& ac6) {
  bool same = true;
  for (int workers : {2, 8}) {
    same = same && Ac3Json(workers) == ac3;
    same = same && UtilityCsv(Ac4Rows(workers)) == ac4;
    same = same && AttackRowsToCsv(Ac6Rows(workers)) == ac6;
  }
  return {same, same ? "outputs identical at 1, 2 and 8 workers"
                     : "outputs differ across worker counts"};
}

int Main() {
  std::string ac3, ac4, ac6;
  Clock::time_point t = Clock::now();
  Report("AC1", t, Ac1());
  t = Clock::now();
  Report("AC2", t, Ac2());
  t = Clock::now();
  Report("AC3", t, Ac3(ac3));
  t = Clock::now();
  Report("AC4", t, Ac4(ac4));
  t = Clock::now();
  Report("AC5", t, Ac5());
  t = Clock::now();
  Report("AC6", t, Ac6(ac6));
  t = Clock::now();
  Report("AC7", t, Ac7());
  t = Clock::now();
  Report("AC8", t, Ac8());
  t = Clock::now();
  Report("AC9", t, Ac9());
  t = Clock::now();
  Report("AC10", t, Ac10(ac3, ac4, ac6));
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace rankdp

int main() { return rankdp::Main(); }
