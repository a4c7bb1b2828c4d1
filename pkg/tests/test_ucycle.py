# Copyright 2025-2026 permhash authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# --------------------------------------------------------------------------

import math
from itertools import combinations, permutations

import pytest

from permhash.permcore import HashKey
from permhash.ucycle import (
    build_cycle,
    count_symbols,
    cycle_from_json,
    cycle_lookup,
    cycle_to_json,
    dump_cycle,
    load_cycle,
    substitute_removed,
    substitute_sequential,
    successor_counts,
    verify_cycle,
)
from permhash.util.errors import ErrorCode, PermHashError

NAMES = {"A": "alpha", "B": "beta", "G": "gamma", "D": "delta"}
FOUR = ("alpha", "beta", "gamma", "delta")


def expand(short: str):
    return tuple(NAMES[c] for c in short.split())


WITHOUT_GAMMA = expand("A B A A B D A B B A D D B A D B B D A A D B D D")
WITHOUT_GAMMA_DELTA = expand("A B A A B A A B B A B B B A B B B A A A B B A A")


# ------ Verification ------


def test_four_node_cycle_verifies(four_node_cycle):
    assert 24 == len(four_node_cycle.symbols)
    assert verify_cycle(four_node_cycle.symbols, FOUR).valid
    assert {n: 6 for n in FOUR} == count_symbols(four_node_cycle.symbols)


def test_three_node_cycle():
    assert verify_cycle(["a", "b", "a", "c", "b", "c"], "abc").valid


def test_repeated_window():
    result = verify_cycle(["a", "b", "a", "b", "c", "c"], "abc")
    assert not result.valid
    assert 2 == result.first_violation
    assert {"valid": False, "first_violation": 2, "reason": result.reason} == result.to_dict()


def test_verify_diagnostics():
    assert not verify_cycle(["a", "b", "c"], "abc").valid
    assert verify_cycle(["a", "b", "c"], "abc").first_violation is None
    result = verify_cycle(["a", "b", "a", "c", "b", "x"], "abc")
    assert not result.valid and 5 == result.first_violation
    # window (c, c) holds a duplicate symbol
    result = verify_cycle(["a", "b", "a", "c", "c", "b"], "abc")
    assert not result.valid and 3 == result.first_violation


# ------ Construction ------


def test_build_small():
    assert ("a", "b") == build_cycle(["a", "b"]).symbols
    assert ("a", "b", "a", "c", "b", "c") == build_cycle(["a", "b", "c"]).symbols


def test_build_follows_node_order():
    assert ("c", "b", "c", "a", "b", "a") == build_cycle(["c", "b", "a"]).symbols
    assert ("c", "b", "a") == build_cycle(["c", "b", "a"]).node_set
    assert build_cycle(sorted(["c", "b", "a"])) == build_cycle(["a", "b", "c"])


@pytest.mark.parametrize("n", range(2, 7))
def test_build_verifies(n):
    nodes = [f"n{i}" for i in range(n)]
    cycle = build_cycle(nodes)
    assert math.factorial(n) == len(cycle.symbols)
    assert verify_cycle(cycle.symbols, nodes).valid
    assert cycle == build_cycle(nodes)


@pytest.mark.parametrize("nodes", [["a"], [f"n{i}" for i in range(7)]])
def test_build_unsupported(nodes):
    with pytest.raises(PermHashError) as e:
        build_cycle(nodes)
    assert ErrorCode.UNSUPPORTED_SIZE == e.value.code


def test_build_budget():
    with pytest.raises(PermHashError) as e:
        build_cycle(["a", "b", "c", "d"], node_budget=5)
    assert ErrorCode.BUDGET_EXCEEDED == e.value.code


# ------ Removal by substitution ------


def test_remove_gamma_then_delta(four_node_cycle):
    step = substitute_removed(four_node_cycle.symbols, ["gamma"])
    assert WITHOUT_GAMMA == step
    assert {"alpha": 8, "beta": 8, "delta": 8} == count_symbols(step)
    step = substitute_removed(step, ["delta"])
    assert WITHOUT_GAMMA_DELTA == step
    assert {"alpha": 12, "beta": 12} == count_symbols(step)


def test_set_and_sequential_agree(four_node_cycle):
    at_once = substitute_removed(four_node_cycle.symbols, ["gamma", "delta"])
    assert WITHOUT_GAMMA_DELTA == at_once
    assert at_once == substitute_sequential(four_node_cycle.symbols, ["delta", "gamma"])


def test_remove_nothing(four_node_cycle):
    assert four_node_cycle.symbols == substitute_removed(four_node_cycle.symbols, [])


def test_no_survivors(four_node_cycle):
    with pytest.raises(PermHashError) as e:
        substitute_removed(four_node_cycle.symbols, FOUR)
    assert ErrorCode.NO_SURVIVORS == e.value.code
    with pytest.raises(PermHashError):
        cycle_lookup(four_node_cycle, HashKey.from_int(0), removed=FOUR)


@pytest.mark.parametrize("n", range(2, 6))
def test_every_removal_subset(n):
    nodes = [f"n{i}" for i in range(n)]
    symbols = build_cycle(nodes).symbols
    for size in range(1, n):
        for removed in combinations(nodes, size):
            out = substitute_removed(symbols, removed)
            counts = count_symbols(out)
            assert set(counts) == set(nodes) - set(removed)
            assert {math.factorial(n) // (n - size)} == set(counts.values())
            for i, s in enumerate(symbols):
                if s not in removed:
                    assert s == out[i]
            for order in permutations(removed):
                assert out == substitute_sequential(symbols, order)


# ------ Lookup ------


def test_lookup_counts(four_node_cycle):
    owners = [cycle_lookup(four_node_cycle, HashKey.from_int(k)) for k in range(24)]
    assert {n: 6 for n in FOUR} == count_symbols(owners)
    owners = [cycle_lookup(four_node_cycle, HashKey.from_int(k), removed={"gamma"}) for k in range(24)]
    assert {"alpha": 8, "beta": 8, "delta": 8} == count_symbols(owners)
    assert list(WITHOUT_GAMMA) == owners


def test_lookup_single_survivor(four_node_cycle):
    for k in range(48):
        assert "beta" == cycle_lookup(four_node_cycle, HashKey.from_int(k), removed={"alpha", "gamma", "delta"})


def test_successor_counts(four_node_cycle):
    pairs = successor_counts(four_node_cycle.symbols)
    assert 12 == len(pairs)
    assert {2} == set(pairs.values())
    assert all(a != b for a, b in pairs)


def test_count_symbols_empty():
    assert {} == count_symbols([])


# ------ Files ------


def test_cycle_json(tmp_path, four_node_cycle):
    assert four_node_cycle.symbols == cycle_from_json(cycle_to_json(four_node_cycle.symbols)).symbols
    path = str(tmp_path / "c.json")
    dump_cycle(four_node_cycle.symbols, path)
    assert four_node_cycle == load_cycle(path)


@pytest.mark.parametrize("data", [b"[1,2]", b'{"a":1}', b"[", b'["a",""]'])
def test_cycle_json_errors(data):
    with pytest.raises(PermHashError):
        cycle_from_json(data)


def test_cycle_json_invalid_utf8():
    with pytest.raises(PermHashError) as e:
        cycle_from_json(b'["a","\xff"]')
    assert ErrorCode.PARSE_ERROR == e.value.code
    assert 6 == e.value.detail["position"]
