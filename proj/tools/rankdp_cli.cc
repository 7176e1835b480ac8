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

// rankdp: command-line front end for the experiment drivers.
//
// Exit status: 0 on success, 1 on a usage error, 2 on a runtime error.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "nlohmann/json.hpp"
#include "rankdp/harness.h"
#include "rankdp/rng.h"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct UsageError {
  std::string message;
};

int Fail(const absl::Status& status) {
  std::cerr << "rankdp: " << status.message() << "\n";
  return kRuntimeError;
}

absl::Status Emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return absl::OkStatus();
  }
  return rankdp::WriteFile(path, contents);
}

absl::Status EmitManifest(const std::string& output,
                          const rankdp::RunManifest& manifest) {
  if (output.empty() || output == "-") return absl::OkStatus();
  return rankdp::WriteFile(output + ".manifest.json", manifest.ToJson());
}

double Elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// "0.5,1,2" or "log:LO:HI:COUNT".
std::vector<double> ParseRealGrid(const std::string& text) {
  std::vector<double> out;
  absl::string_view rest = text;
  if (absl::ConsumePrefix(&rest, "log:")) {
    std::vector<std::string> parts = absl::StrSplit(rest, ':');
    double lo, hi;
    int count;
    if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &lo) ||
        !absl::SimpleAtod(parts[1], &hi) ||
        !absl::SimpleAtoi(parts[2], &count) || !(lo > 0) || !(hi >= lo) ||
        count < 1) {
      throw UsageError{"bad log grid '" + text + "' (log:LO:HI:COUNT)"};
    }
    return rankdp::LogGrid(lo, hi, count);
  }
  for (absl::string_view field : absl::StrSplit(text, ',')) {
    double v;
    if (!absl::SimpleAtod(field, &v)) {
      throw UsageError{"bad number '" + std::string(field) + "' in '" + text +
                       "'"};
    }
    out.push_back(v);
  }
  return out;
}

// "10,20,50" or "FIRST:LAST:STEP" (inclusive).
std::vector<int64_t> ParseIntGrid(const std::string& text) {
  std::vector<int64_t> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts = absl::StrSplit(text, ':');
    int64_t first, last, step;
    if (parts.size() != 3 || !absl::SimpleAtoi(parts[0], &first) ||
        !absl::SimpleAtoi(parts[1], &last) ||
        !absl::SimpleAtoi(parts[2], &step) || step < 1 || last < first) {
      throw UsageError{"bad range '" + text + "' (FIRST:LAST:STEP)"};
    }
    for (int64_t v = first; v <= last; v += step) out.push_back(v);
    return out;
  }
  for (absl::string_view field : absl::StrSplit(text, ',')) {
    int64_t v;
    if (!absl::SimpleAtoi(field, &v)) {
      throw UsageError{"bad integer '" + std::string(field) + "' in '" + text +
                       "'"};
    }
    out.push_back(v);
  }
  return out;
}

std::vector<int> ToInts(const std::vector<int64_t>& v) {
  return std::vector<int>(v.begin(), v.end());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private ranking synthesis, audits and "
               "experiments."};
  app.set_version_flag("--version", std::string(rankdp::Version()));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (RANKDP_THREADS overrides; default: all "
                 "cores)")
      ->check(CLI::NonNegativeNumber);

  uint64_t seed = 0;
  double epsilon = 1.0;
  std::string output;

  // synthesize
  CLI::App* synth =
      app.add_subcommand("synthesize", "Privatize every ranking in a CSV.");
  std::string synth_input;
  std::string synth_mechanism = "mallows";
  synth->add_option("input", synth_input, "Ranking CSV")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--epsilon", epsilon,
                    "Privacy budget (a per-user epsilon column wins)")
      ->required();
  synth->add_option("--mechanism", synth_mechanism, "mallows or laplace")
      ->check(CLI::IsMember({"mallows", "laplace"}));
  synth->add_option("--seed", seed, "Base seed");
  synth->add_option("--output", output, "Output CSV ('-' for stdout)")
      ->required();

  // audit
  CLI::App* audit = app.add_subcommand(
      "audit", "Measure the privacy loss of the Mallows synthesizer.");
  int audit_m = 3;
  std::string audit_mode = "exact";
  int64_t audit_samples = 1000000;
  audit->add_option("--m", audit_m, "Number of items")->required();
  audit->add_option("--epsilon", epsilon, "Configured budget")->required();
  audit->add_option("--mode", audit_mode, "exact or empirical")
      ->check(CLI::IsMember({"exact", "empirical"}));
  audit->add_option("--samples", audit_samples, "Draws per arm (empirical)");
  audit->add_option("--seed", seed, "Base seed");
  audit->add_option("--output", output, "Output JSON ('-' for stdout)")
      ->required();

  // utility
  CLI::App* utility = app.add_subcommand(
      "utility", "Expected concordance of both mechanisms, MC and exact.");
  std::string utility_m = "4,5,6";
  std::string utility_eps = "log:0.1:30:20";
  int64_t utility_reps = 5000;
  utility->add_option("--m-list", utility_m, "Comma-separated m values");
  utility->add_option("--epsilon-grid", utility_eps,
                      "Comma-separated values or log:LO:HI:COUNT");
  utility->add_option("--reps", utility_reps, "Replications per cell");
  utility->add_option("--seed", seed, "Base seed");
  utility->add_option("--output", output, "Output CSV ('-' for stdout)")
      ->required();

  // attack
  CLI::App* attack = app.add_subcommand(
      "attack", "Error rate of MLE recovery of the central ranking.");
  std::string attack_m = "3";
  std::string attack_schedule = "fixed";
  double attack_c = 4.0;
  std::string attack_n = "10:100:10";
  int64_t attack_reps = 500;
  attack->add_option("--m-list", attack_m, "Comma-separated m values");
  attack->add_option("--schedule", attack_schedule, "fixed, sqrt or logsqrt")
      ->check(CLI::IsMember({"fixed", "sqrt", "logsqrt"}));
  attack->add_option("--c", attack_c, "Schedule constant");
  attack->add_option("--n-grid", attack_n,
                     "Comma-separated sample sizes or FIRST:LAST:STEP");
  attack->add_option("--reps", attack_reps, "Replications per cell");
  attack->add_option("--seed", seed, "Base seed");
  attack->add_option("--output", output, "Output CSV ('-' for stdout)")
      ->required();

  // learn
  CLI::App* learn = app.add_subcommand(
      "learn", "Train pairwise rankers on privatized rankings.");
  std::string learn_config;
  learn->add_option("--config", learn_config, "TOML or JSON experiment file")
      ->required()
      ->check(CLI::ExistingFile);
  learn->add_option("--output", output,
                    "Per-run CSV; the summary goes to <output>.summary.csv")
      ->required();

  // stage-moments
  CLI::App* stages = app.add_subcommand(
      "stage-moments", "Empirical vs exact moments of each insertion stage.");
  int stage_m = 10;
  int64_t stage_samples = 100000;
  stages->add_option("--m", stage_m, "Number of items");
  stages->add_option("--epsilon", epsilon, "Privacy budget")->required();
  stages->add_option("--samples", stage_samples, "Number of draws");
  stages->add_option("--seed", seed, "Base seed");
  stages->add_option("--output", output, "Output JSON (default stdout)");

  // ingest
  CLI::App* ingest = app.add_subcommand(
      "ingest", "Convert a preference-order file into a ranking CSV.");
  std::string ingest_input;
  rankdp::OrderFileFormat format;
  std::string keep;
  ingest->add_option("input", ingest_input, "Order file")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--header-lines", format.header_lines,
                     "Lines to skip before the first record");
  ingest->add_option("--leading-fields", format.leading_fields,
                     "Fields to skip at the start of each record");
  ingest->add_option("--keep", keep, "Comma-separated item ids to keep");
  ingest->add_option("--output", output, "Output CSV ('-' for stdout)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  const int workers = rankdp::ResolveWorkerCount(threads);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (synth->parsed()) {
      absl::StatusOr<std::string> text = rankdp::ReadFile(synth_input);
      if (!text.ok()) return Fail(text.status());
      absl::StatusOr<rankdp::RankingDataset> data =
          rankdp::ParseRankingCsv(*text);
      if (!data.ok()) return Fail(data.status());
      const int m = static_cast<int>(data->item_ids.size());
      absl::StatusOr<rankdp::SynthesizeResult> result = rankdp::RunSynthesize(
          *data, m, epsilon, *rankdp::ParseMechanismKind(synth_mechanism),
          seed, workers);
      if (!result.ok()) return Fail(result.status());
      if (auto s = Emit(output, rankdp::RankingCsv(result->output, m));
          !s.ok()) {
        return Fail(s);
      }
      if (auto s = EmitManifest(output, result->manifest); !s.ok()) {
        return Fail(s);
      }
      return 0;
    }

    if (audit->parsed()) {
      absl::StatusOr<rankdp::AuditReport> report = rankdp::RunAudit(
          audit_m, epsilon,
          audit_mode == "exact" ? rankdp::AuditMode::kExact
                                : rankdp::AuditMode::kEmpirical,
          audit_samples, seed, workers);
      if (!report.ok()) return Fail(report.status());
      if (auto s = Emit(output, report->ToJson()); !s.ok()) return Fail(s);
      return 0;
    }

    if (utility->parsed()) {
      const std::vector<int> ms = ToInts(ParseIntGrid(utility_m));
      const std::vector<double> grid = ParseRealGrid(utility_eps);
      absl::StatusOr<std::vector<rankdp::UtilityRow>> rows =
          rankdp::RunUtility(ms, grid, utility_reps, seed, workers);
      if (!rows.ok()) return Fail(rows.status());
      if (auto s = Emit(output, rankdp::UtilityCsv(*rows)); !s.ok()) {
        return Fail(s);
      }
      rankdp::RunManifest manifest;
      manifest.command = "utility";
      manifest.parameters_json = nlohmann::ordered_json{
          {"m_list", ms}, {"epsilon_grid", grid},
          {"reps", utility_reps}, {"seed", seed}}.dump();
      for (const rankdp::UtilityRow& r : *rows) {
        manifest.cell_seeds.emplace_back(
            "m=" + std::to_string(r.m) + ",epsilon=" +
                rankdp::FormatReal(r.epsilon),
            r.seed);
      }
      manifest.wall_seconds = Elapsed(start);
      if (auto s = EmitManifest(output, manifest); !s.ok()) return Fail(s);
      return 0;
    }

    if (attack->parsed()) {
      absl::StatusOr<rankdp::EpsilonSchedule> schedule =
          rankdp::EpsilonSchedule::Parse(attack_schedule, attack_c);
      if (!schedule.ok()) {
        std::cerr << "rankdp: " << schedule.status().message() << "\n";
        return kUsageError;
      }
      const std::vector<int> ms = ToInts(ParseIntGrid(attack_m));
      const std::vector<int64_t> ns = ParseIntGrid(attack_n);
      absl::StatusOr<std::vector<rankdp::AttackRow>> rows =
          rankdp::RunAttack(ms, *schedule, ns, attack_reps, seed, workers);
      if (!rows.ok()) return Fail(rows.status());
      if (auto s = Emit(output, rankdp::AttackRowsToCsv(*rows)); !s.ok()) {
        return Fail(s);
      }
      rankdp::RunManifest manifest;
      manifest.command = "attack";
      manifest.parameters_json =
          nlohmann::ordered_json{{"m_list", ms},
                                 {"schedule", attack_schedule},
                                 {"c", attack_c},
                                 {"n_grid", ns},
                                 {"reps", attack_reps},
                                 {"seed", seed}}
              .dump();
      for (const rankdp::AttackRow& r : *rows) {
        manifest.cell_seeds.emplace_back(
            "m=" + std::to_string(r.m) + ",N=" + std::to_string(r.n), r.seed);
      }
      manifest.wall_seconds = Elapsed(start);
      if (auto s = EmitManifest(output, manifest); !s.ok()) return Fail(s);
      return 0;
    }

    if (learn->parsed()) {
      absl::StatusOr<rankdp::LearnExperimentConfig> config =
          rankdp::LoadLearnConfig(learn_config);
      if (!config.ok()) return Fail(config.status());
      absl::StatusOr<rankdp::LearnResult> result =
          rankdp::RunLearn(*config, workers);
      if (!result.ok()) return Fail(result.status());
      if (auto s = Emit(output, rankdp::LearnCsv(result->rows)); !s.ok()) {
        return Fail(s);
      }
      if (output != "-") {
        if (auto s = rankdp::WriteFile(output + ".summary.csv",
                                       rankdp::LearnSummaryCsv(result->summary));
            !s.ok()) {
          return Fail(s);
        }
      } else {
        std::cout << rankdp::LearnSummaryCsv(result->summary);
      }
      rankdp::RunManifest manifest;
      manifest.command = "learn";
      absl::StatusOr<std::string> config_text = rankdp::ReadFile(learn_config);
      manifest.parameters_json =
          nlohmann::ordered_json{{"config", learn_config},
                                 {"config_text", config_text.ok()
                                                     ? *config_text
                                                     : std::string()}}
              .dump();
      for (const rankdp::LearnRow& r : result->rows) {
        manifest.cell_seeds.emplace_back(
            "run=" + std::to_string(r.run) + "," + r.mechanism +
                ",epsilon=" + rankdp::FormatReal(r.epsilon),
            r.seed);
      }
      manifest.wall_seconds = Elapsed(start);
      if (auto s = EmitManifest(output, manifest); !s.ok()) return Fail(s);
      return 0;
    }

    if (stages->parsed()) {
      absl::StatusOr<rankdp::StageMomentsReport> report =
          rankdp::RunStageMoments(stage_m, epsilon, stage_samples, seed);
      if (!report.ok()) return Fail(report.status());
      if (auto s = Emit(output, report->ToJson()); !s.ok()) return Fail(s);
      return 0;
    }

    if (ingest->parsed()) {
      if (!keep.empty()) format.keep_items = absl::StrSplit(keep, ',');
      absl::StatusOr<rankdp::RankingDataset> data =
          rankdp::IngestOrderFile(ingest_input, format);
      if (!data.ok()) return Fail(data.status());
      if (auto s = Emit(output, rankdp::RankingCsv(
                                    *data,
                                    static_cast<int>(data->item_ids.size())));
          !s.ok()) {
        return Fail(s);
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "rankdp: " << e.message << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "rankdp: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
