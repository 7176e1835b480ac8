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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

struct CliResult {
  int code = -1;
  std::string out;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/rankdp_cli_" + name;
}

CliResult RunCli(const std::string& args, const std::string& env = "") {
  const std::string out = TempPath("stdout.txt");
  const std::string cmd = env + " " + RANKDP_CLI_PATH + " " + args + " >" +
                          out + " 2>" + TempPath("stderr.txt");
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  return r;
}

TEST(CliTest, HelpForEverySubcommand) {
  EXPECT_EQ(RunCli("--help").code, 0);
  for (const char* sub : {"synthesize", "audit", "utility", "attack", "learn",
                          "stage-moments", "ingest"}) {
    const CliResult r = RunCli(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_THAT(r.out, HasSubstr("--")) << sub;
  }
  EXPECT_EQ(RunCli("--version").code, 0);
}

TEST(CliTest, UsageErrorsExitWithOne) {
  EXPECT_EQ(RunCli("frobnicate").code, 1);
  EXPECT_EQ(RunCli("audit --m 3").code, 1);
  EXPECT_EQ(RunCli("attack --schedule cubic --output -").code, 1);
  EXPECT_EQ(RunCli("synthesize /nonexistent.csv --epsilon 1 --output -").code, 1);
}

TEST(CliTest, RuntimeErrorsExitWithTwo) {
  EXPECT_EQ(RunCli("audit --m 10 --epsilon 1 --output -").code, 2);
  EXPECT_EQ(RunCli("utility --reps 0 --output -").code, 2);
  EXPECT_EQ(RunCli("stage-moments --epsilon 1 --samples 1").code, 2);
}

TEST(CliTest, AuditPrintsJson) {
  const CliResult r = RunCli("audit --m 4 --epsilon 1.25 --output -");
  ASSERT_EQ(r.code, 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["measured_epsilon"].get<double>(), 1.25, 1e-9);
}

TEST(CliTest, SynthesizeWritesCsvAndManifest) {
  const std::string in = TempPath("in.csv");
  std::ofstream(in) << "user_id,item_0,item_1,item_2\nu1,1,2,3\nu2,3,2,1\n";
  const std::string out = TempPath("synth.csv");
  ASSERT_EQ(RunCli("synthesize " + in + " --epsilon 2 --seed 4 --output " + out)
                .code,
            0);
  EXPECT_THAT(Slurp(out), StartsWith("user_id,item_0,item_1,item_2\nu1,"));
  const nlohmann::json m =
      nlohmann::json::parse(Slurp(out + ".manifest.json"));
  EXPECT_EQ(m["command"], "synthesize");
  EXPECT_EQ(m["cells"].size(), 2u);
  const std::string again = TempPath("synth2.csv");
  ASSERT_EQ(
      RunCli("synthesize " + in + " --epsilon 2 --seed 4 --output " + again)
          .code,
      0);
  EXPECT_EQ(Slurp(out), Slurp(again));
}

TEST(CliTest, ThreadCountDoesNotChangeOutput) {
  const std::string args =
      "attack --m-list 3 --schedule fixed --c 2 --n-grid 10:30:10 --reps 50 "
      "--seed 8 --output -";
  const CliResult one = RunCli("--threads 1 " + args);
  const CliResult four = RunCli("--threads 4 " + args);
  const CliResult env = RunCli(args, "RANKDP_THREADS=3");
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(one.out, env.out);
  EXPECT_THAT(one.out, StartsWith("m,N,epsilon,schedule,"));
}

TEST(CliTest, UtilityAcceptsLogGrid) {
  const CliResult r = RunCli(
      "utility --m-list 3,4 --epsilon-grid log:0.1:30:3 --reps 20 --output -");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7);
  EXPECT_THAT(r.out, HasSubstr("\n3,0.1,"));
  EXPECT_THAT(r.out, HasSubstr("\n4,30,"));
}

TEST(CliTest, IngestThenLearn) {
  const std::string csv = TempPath("ingest.csv");
  ASSERT_EQ(RunCli(std::string("ingest ") + RANKDP_TEST_DATA_DIR +
                "/order_fixture.txt --header-lines 1 --leading-fields 2 "
                "--keep 4,0,2,1,3 --output " + csv)
                .code,
            0);
  EXPECT_THAT(Slurp(csv), StartsWith("user_id,item_0,item_1,item_2,item_3,"
                                     "item_4\n"));

  const std::string config = TempPath("learn.toml");
  std::ofstream(config) << "n_train = 20\nn_val = 5\nn_test = 20\nm = 4\n"
                           "replications = 2\nepsilons = [1.0]\n"
                           "[train]\nmax_epochs = 3\n";
  const std::string out = TempPath("learn.csv");
  ASSERT_EQ(RunCli("learn --config " + config + " --output " + out).code, 0);
  EXPECT_THAT(Slurp(out), StartsWith("run,mechanism,epsilon,n,m,seed,"));
  EXPECT_THAT(Slurp(out + ".summary.csv"),
              StartsWith("mechanism,epsilon,runs,mean_test_acc_sym,"));
  EXPECT_TRUE(std::filesystem::exists(out + ".manifest.json"));
}

TEST(CliTest, StageMomentsDefaultsToStdout) {
  const CliResult r = RunCli("stage-moments --m 4 --epsilon 1 --samples 500");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["stages"].size(), 3u);
}

}  // namespace
