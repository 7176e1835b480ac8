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

#ifndef RANKDP_TESTS_TEST_UTIL_H_
#define RANKDP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rankdp/learn.h"

namespace rankdp::testing_util {

inline std::string DataPath(const std::string& name) {
  return std::string(RANKDP_TEST_DATA_DIR) + "/" + name;
}

// |g_analytic - g_numeric| / max(|g_analytic|, |g_numeric|) with central
// differences of step h on the full loss.
inline double GradientRelativeError(ScoringModel model,
                                    const Eigen::MatrixXd& users,
                                    const Eigen::MatrixXd& items,
                                    std::span<const Ranking> rankings,
                                    double ridge, double h = 1e-5) {
  const std::vector<double> analytic =
      PairwiseLossAndGradient(model, users, items, rankings, ridge)->gradient;
  double diff2 = 0, a2 = 0, n2 = 0;
  for (size_t k = 0; k < model.parameter_count(); ++k) {
    const double saved = model.parameters()[k];
    model.mutable_parameters()[k] = saved + h;
    const double up =
        PairwiseLossAndGradient(model, users, items, rankings, ridge)->loss;
    model.mutable_parameters()[k] = saved - h;
    const double down =
        PairwiseLossAndGradient(model, users, items, rankings, ridge)->loss;
    model.mutable_parameters()[k] = saved;
    const double numeric = (up - down) / (2 * h);
    diff2 += (analytic[k] - numeric) * (analytic[k] - numeric);
    a2 += analytic[k] * analytic[k];
    n2 += numeric * numeric;
  }
  const double scale = std::sqrt(std::max(a2, n2));
  return scale == 0 ? std::sqrt(diff2) : std::sqrt(diff2) / scale;
}

}  // namespace rankdp::testing_util

#endif  // RANKDP_TESTS_TEST_UTIL_H_
