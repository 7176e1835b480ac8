# Copyright 2026 The rankdp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import json
import math

import pytest

import rankdp


def test_concordance_and_neighbors():
    assert rankdp.concordant_pairs([1, 2, 3], [2, 1, 3]) == 2
    assert rankdp.is_neighbor([1, 2, 3], [2, 1, 3])
    assert not rankdp.is_neighbor([1, 2, 3], [3, 2, 1])
    assert len(rankdp.enumerate_permutations(4)) == 24


def test_pmf_sums_to_one():
    outputs = [list(p) for p in itertools.permutations([1, 2, 3, 4])]
    total = sum(rankdp.mallows_pmf([2, 4, 1, 3], o, 1.5) for o in outputs)
    assert math.isclose(total, 1.0, abs_tol=1e-12)


def test_synthesis_is_seeded():
    a = rankdp.mallows_synthesize([1, 2, 3, 4, 5], 1.0, seed=3)
    assert a == rankdp.mallows_synthesize([1, 2, 3, 4, 5], 1.0, seed=3)
    assert sorted(a) == [1, 2, 3, 4, 5]
    b = rankdp.laplace_synthesize([1, 2, 3], 1e9, seed=1)
    assert b == [1, 2, 3]
    out = rankdp.privatize_rankings([[1, 2], [2, 1]], 1.0, "laplace", seed=2)
    assert len(out) == 2


def test_errors_raise_value_error():
    with pytest.raises(ValueError, match="NotAPermutation"):
        rankdp.concordant_pairs([1, 1], [1, 2])
    with pytest.raises(ValueError, match="CapExceeded"):
        rankdp.audit(10, 1.0)
    with pytest.raises(ValueError):
        rankdp.mallows_synthesize([1, 2], -1.0)


def test_audit_and_utility():
    assert math.isclose(rankdp.audit(4, 2.0)["measured_epsilon"], 2.0,
                        abs_tol=1e-9)
    assert (rankdp.expected_concordance_mallows(5, 1.0)
            > rankdp.expected_concordance_laplace(5, 1.0))
    csv = rankdp.utility_csv([3], [1.0], 50, seed=1)
    assert csv.splitlines()[0].startswith("m,epsilon,mallows_mc")


def test_attack_and_moments():
    assert rankdp.mle_central_ranking([[1, 2, 3], [1, 3, 2], [1, 2, 3]]) == [1, 2, 3]
    csv = rankdp.attack_csv([3], "fixed", 4.0, [10, 20], 20, seed=5)
    assert len(csv.splitlines()) == 3
    report = json.loads(rankdp.stage_moments_json(4, 1.0, 1000, seed=2))
    assert len(report["stages"]) == 3


def test_learn_small():
    rows, summary = rankdp.learn(json.dumps({
        "n_train": 20, "n_val": 5, "n_test": 20, "m": 4, "replications": 1,
        "epsilons": [1.0], "train": {"max_epochs": 2}}))
    assert rows.startswith("run,mechanism")
    assert len(summary.splitlines()) == 3
