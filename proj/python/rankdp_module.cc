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

// Python bindings. Rankings cross the boundary as lists of ranks (1..m).

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"
#include "rankdp/attack.h"
#include "rankdp/audit.h"
#include "rankdp/harness.h"
#include "rankdp/learn.h"
#include "rankdp/mechanisms.h"
#include "rankdp/ranking.h"
#include "rankdp/rng.h"

namespace py = pybind11;

namespace rankdp {
namespace {

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) throw py::value_error(std::string(value.status().message()));
  return *std::move(value);
}

Ranking ToRanking(const std::vector<int>& ranks) {
  return Unwrap(Ranking::Create(ranks));
}

std::vector<int> ToList(const Ranking& r) {
  return std::vector<int>(r.ranks().begin(), r.ranks().end());
}

std::vector<std::vector<int>> ToLists(const std::vector<Ranking>& rankings) {
  std::vector<std::vector<int>> out;
  out.reserve(rankings.size());
  for (const Ranking& r : rankings) out.push_back(ToList(r));
  return out;
}

py::dict AuditToDict(const AuditReport& r) {
  py::dict d;
  d["mode"] = r.mode == AuditMode::kExact ? "exact" : "empirical";
  d["m"] = r.m;
  d["configured_epsilon"] = r.configured_epsilon;
  d["measured_epsilon"] = r.measured_epsilon;
  d["samples_per_arm"] = r.samples_per_arm;
  d["skipped_cells"] = r.skipped_cells;
  d["worst_neighbor"] = ToList(r.worst_neighbor);
  d["worst_output"] = ToList(r.worst_output);
  return d;
}

PYBIND11_MODULE(_rankdp, mod) {
  mod.attr("__version__") = std::string(Version());

  mod.def(
      "concordant_pairs",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return Unwrap(ConcordantPairs(ToRanking(a), ToRanking(b)));
      },
      py::arg("a"), py::arg("b"));
  mod.def(
      "is_neighbor",
      [](const std::vector<int>& a, const std::vector<int>& b) {
        return Unwrap(IsNeighbor(ToRanking(a), ToRanking(b))).is_neighbor;
      },
      py::arg("a"), py::arg("b"));
  mod.def(
      "enumerate_permutations",
      [](int m) { return ToLists(Unwrap(EnumeratePermutations(m))); },
      py::arg("m"));

  mod.def(
      "mallows_synthesize",
      [](const std::vector<int>& ranking, double epsilon, uint64_t seed) {
        const Ranking in = ToRanking(ranking);
        const MallowsMechanism mech =
            Unwrap(MallowsMechanism::Create(epsilon, in.size()));
        Rng rng(seed);
        return ToList(Unwrap(mech.Synthesize(in, rng)));
      },
      py::arg("ranking"), py::arg("epsilon"), py::arg("seed") = 0);
  mod.def(
      "mallows_pmf",
      [](const std::vector<int>& input, const std::vector<int>& output,
         double epsilon) {
        const Ranking in = ToRanking(input);
        const MallowsMechanism mech =
            Unwrap(MallowsMechanism::Create(epsilon, in.size()));
        return Unwrap(mech.Pmf(in, ToRanking(output)));
      },
      py::arg("input"), py::arg("output"), py::arg("epsilon"));
  mod.def(
      "laplace_synthesize",
      [](const std::vector<int>& ranking, double epsilon, uint64_t seed) {
        Rng rng(seed);
        return ToList(Unwrap(Privatize(ToRanking(ranking), epsilon,
                                       MechanismKind::kLaplace, rng)));
      },
      py::arg("ranking"), py::arg("epsilon"), py::arg("seed") = 0);
  mod.def(
      "privatize_rankings",
      [](const std::vector<std::vector<int>>& rankings, double epsilon,
         const std::string& mechanism, uint64_t seed) {
        std::vector<Ranking> in;
        std::vector<uint64_t> seeds;
        for (size_t u = 0; u < rankings.size(); ++u) {
          in.push_back(ToRanking(rankings[u]));
          seeds.push_back(DeriveSeed(seed, {HashLabel("synthesize"), u}));
        }
        const std::vector<double> budgets(in.size(), epsilon);
        return ToLists(Unwrap(PrivatizeRankings(
            in, budgets, Unwrap(ParseMechanismKind(mechanism)), seeds)));
      },
      py::arg("rankings"), py::arg("epsilon"), py::arg("mechanism") = "mallows",
      py::arg("seed") = 0);
  mod.def("expected_concordance_mallows", &ExpectedConcordanceMallows,
          py::arg("m"), py::arg("epsilon"));
  mod.def("expected_concordance_laplace", &ExpectedConcordanceLaplace,
          py::arg("m"), py::arg("epsilon"));

  mod.def(
      "audit",
      [](int m, double epsilon, const std::string& mode, int64_t samples,
         uint64_t seed, int workers) {
        if (mode != "exact" && mode != "empirical") {
          throw py::value_error("mode must be 'exact' or 'empirical'");
        }
        return AuditToDict(Unwrap(RunAudit(
            m, epsilon,
            mode == "exact" ? AuditMode::kExact : AuditMode::kEmpirical,
            samples, seed, workers)));
      },
      py::arg("m"), py::arg("epsilon"), py::arg("mode") = "exact",
      py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("workers") = 1);

  mod.def(
      "mle_central_ranking",
      [](const std::vector<std::vector<int>>& sample) {
        AttackSample s;
        for (const auto& r : sample) s.rankings.push_back(ToRanking(r));
        if (!s.rankings.empty()) s.m = s.rankings.front().size();
        return ToList(Unwrap(MleCentralRanking(s)));
      },
      py::arg("sample"));
  mod.def(
      "attack_csv",
      [](const std::vector<int>& m_list, const std::string& schedule, double c,
         const std::vector<int64_t>& n_grid, int64_t reps, uint64_t seed,
         int workers) {
        return AttackRowsToCsv(Unwrap(
            RunAttack(m_list, Unwrap(EpsilonSchedule::Parse(schedule, c)),
                      n_grid, reps, seed, workers)));
      },
      py::arg("m_list"), py::arg("schedule"), py::arg("c"), py::arg("n_grid"),
      py::arg("reps"), py::arg("seed") = 0, py::arg("workers") = 1);
  mod.def(
      "utility_csv",
      [](const std::vector<int>& m_list, const std::vector<double>& epsilons,
         int64_t reps, uint64_t seed, int workers) {
        return UtilityCsv(
            Unwrap(RunUtility(m_list, epsilons, reps, seed, workers)));
      },
      py::arg("m_list"), py::arg("epsilons"), py::arg("reps"),
      py::arg("seed") = 0, py::arg("workers") = 1);
  mod.def(
      "stage_moments_json",
      [](int m, double epsilon, int64_t samples, uint64_t seed) {
        return Unwrap(RunStageMoments(m, epsilon, samples, seed)).ToJson();
      },
      py::arg("m"), py::arg("epsilon"), py::arg("samples"),
      py::arg("seed") = 0);
  mod.def(
      "learn",
      [](const std::string& config, bool is_toml, int workers) {
        const LearnResult r =
            Unwrap(RunLearn(Unwrap(ParseLearnConfig(config, is_toml)),
                            workers));
        return py::make_tuple(LearnCsv(r.rows), LearnSummaryCsv(r.summary));
      },
      py::arg("config"), py::arg("is_toml") = false, py::arg("workers") = 1);
}

}  // namespace
}  // namespace rankdp
