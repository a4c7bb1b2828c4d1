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

import hashlib
import logging
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permhash.membership import NodeTable, new_table, remove
from permhash.permcore import (
    EntropyPolicy,
    FreeMarker,
    HashKey,
    InsertionStrategy,
    capacity,
    check_entropy,
    derive_key,
    first_live,
    first_simple,
    get_strategy,
    iter_digits,
    min_key_bits,
    permute,
    permute_symbols,
    preference_list,
    reachable_fraction,
)
from permhash.util.errors import ErrorCode, PermHashError

OFF = EntropyPolicy.OFF

FROM_END_ROWS = [
    ("alpha", "beta", "gamma"),
    ("beta", "alpha", "gamma"),
    ("alpha", "gamma", "beta"),
    ("beta", "gamma", "alpha"),
    ("gamma", "alpha", "beta"),
    ("gamma", "beta", "alpha"),
]

FROM_START_ROWS = [
    ("gamma", "beta", "alpha"),
    ("gamma", "alpha", "beta"),
    ("beta", "gamma", "alpha"),
    ("alpha", "gamma", "beta"),
    ("beta", "alpha", "gamma"),
    ("alpha", "beta", "gamma"),
]


def key(value):
    return HashKey.from_int(value, 512)


# ------ Worked examples ------


@pytest.mark.parametrize("k", range(6))
def test_from_end_table(greek_from_end, k):
    assert permute(greek_from_end, key(k)) == FROM_END_ROWS[k]


@pytest.mark.parametrize("k", range(6))
def test_from_start_table(greek_from_start, k):
    assert permute(greek_from_start, key(k)) == FROM_START_ROWS[k]


def test_from_end_table_is_every_ordering(greek_from_end):
    assert 6 == len({permute(greek_from_end, key(k)) for k in range(6)})


@pytest.mark.parametrize("k", range(6))
def test_first_choice_matches_head(greek_from_end, k):
    assert first_simple(greek_from_end, key(k)) == FROM_END_ROWS[k][0]
    assert first_live(greek_from_end, key(k)) == FROM_END_ROWS[k][0]


def test_first_choice_keys_from_end(greek_from_end):
    owners = [first_simple(greek_from_end, key(k)) for k in range(6)]
    assert owners == ["alpha", "beta", "alpha", "beta", "gamma", "gamma"]


def test_key_period(greek_from_end):
    for k in range(6):
        assert permute(greek_from_end, key(k)) == permute(greek_from_end, key(k + 6))


def test_strategy_override(greek_from_end):
    assert permute(greek_from_end, key(0), InsertionStrategy.FROM_START) == FROM_START_ROWS[0]


def test_free_slot_filtered():
    table = NodeTable(slots=("alpha", None, "gamma"), strategy=InsertionStrategy.FROM_END)
    assert permute(table, key(4)) == ("gamma", "alpha")
    assert first_live(table, key(1)) == "alpha"
    assert first_live(table, key(3)) == "gamma"
    assert FreeMarker(1) in permute_symbols(table, key(4))


def test_single_node():
    table = new_table(["solo"])
    for k in (0, 1, 2**100):
        assert permute(table, key(k)) == ("solo",)
        assert first_simple(table, key(k)) == "solo"


def test_first_simple_errors():
    with pytest.raises(PermHashError) as e:
        first_simple(new_table([]), key(0))
    assert ErrorCode.EMPTY_TABLE == e.value.code
    with pytest.raises(PermHashError) as e:
        first_simple(NodeTable(slots=("alpha", None, "gamma")), key(0))
    assert ErrorCode.HAS_TOMBSTONES == e.value.code


def test_empty_table_errors():
    with pytest.raises(PermHashError) as e:
        permute(new_table([]), key(0))
    assert ErrorCode.EMPTY_TABLE == e.value.code
    with pytest.raises(PermHashError) as e:
        first_live(new_table([]), key(0))
    assert ErrorCode.NO_LIVE_NODES == e.value.code


def test_preference_list(greek_from_end):
    assert preference_list(greek_from_end, key(4), 2) == ("gamma", "alpha")
    assert preference_list(greek_from_end, key(4), 2, skip=["gamma"]) == ("alpha", "beta")
    assert preference_list(greek_from_end, key(4), 5) == FROM_END_ROWS[4]
    assert preference_list(greek_from_end, key(4), 2, skip=list(FROM_END_ROWS[4])) == ()


# ------ Keys and digits ------


def test_iter_digits():
    # 23 = 3*3! + 2*2! + 1*1!
    assert list(iter_digits(23, 4)) == [(1, 0), (2, 1), (3, 2), (4, 3)]
    assert [d for _, d in iter_digits(5, 3)] == [0, 1, 2]


def test_hash_key_bounds():
    HashKey(7, 3)
    with pytest.raises(PermHashError):
        HashKey(8, 3)
    with pytest.raises(PermHashError):
        HashKey(-1, 8)
    with pytest.raises(PermHashError):
        HashKey(0, 0)
    assert 1 == HashKey.from_int(0).source_bits


def test_derive_key():
    k = derive_key(b"hello")
    assert 512 == k.source_bits
    assert k == derive_key(b"hello")
    assert k != derive_key(b"hello!")
    assert derive_key(b"hello", 1024).value >> 512 == k.value
    assert derive_key(b"hello", 64).value == k.value >> 448


def test_derive_key_vectors():
    # block i is sha512(data || 0x00 || i as 4-byte big-endian)
    empty = hashlib.sha512(b"\x00" * 5).digest()
    assert HashKey(int.from_bytes(empty, "big"), 512) == derive_key(b"", 512)

    blocks = hashlib.sha512(b"abc\x00\x00\x00\x00\x00").digest() + hashlib.sha512(b"abc\x00\x00\x00\x00\x01").digest()
    assert 128 == len(blocks)
    assert int.from_bytes(blocks, "big") == derive_key(b"abc", 1024).value
    assert int.from_bytes(blocks[:3], "big") == derive_key(b"abc", 24).value


@pytest.mark.parametrize("width", [0, 12, -8])
def test_derive_key_width(width):
    with pytest.raises(PermHashError) as e:
        derive_key(b"x", width)
    assert ErrorCode.WIDTH_NOT_BYTE_ALIGNED == e.value.code


def test_get_strategy():
    assert InsertionStrategy.FROM_END == get_strategy("from_end")
    assert InsertionStrategy.FROM_START == get_strategy(InsertionStrategy.FROM_START)
    with pytest.raises(PermHashError) as e:
        get_strategy("middle")
    assert ErrorCode.PARSE_ERROR == e.value.code


@pytest.mark.parametrize("strategy", list(InsertionStrategy))
@pytest.mark.parametrize("length", range(33))
def test_insert_index_bijection(strategy, length):
    indices = sorted(strategy.insert_index(d, length) for d in range(length + 1))
    assert list(range(length + 1)) == indices


# ------ Capacity and entropy ------


@pytest.mark.parametrize("bits, nodes", [(32, 12), (512, 98), (64, 20), (1, 2), (2, 2), (3, 3)])
def test_capacity(bits, nodes):
    assert nodes == capacity(bits)


def test_capacity_is_tight():
    for bits in (32, 64, 128, 512):
        n = capacity(bits)
        assert math.factorial(n) <= 2**bits < math.factorial(n + 1)


def test_min_key_bits():
    assert 29 == min_key_bits(12)
    assert 61 == min_key_bits(12, 32)
    assert 0 == min_key_bits(1)
    for n in range(1, 40):
        b = min_key_bits(n)
        assert 2**b >= math.factorial(n)
        assert 0 == b or 2 ** (b - 1) < math.factorial(n)


def test_reachable_fraction():
    assert Fraction(1) == reachable_fraction(12, 32)
    assert Fraction(2**32, math.factorial(13)) == reachable_fraction(13, 32)
    assert reachable_fraction(13, 32) < 1


def test_check_entropy(caplog):
    narrow = HashKey(3, 8)
    assert check_entropy(3, HashKey(3, 512), EntropyPolicy.STRICT)
    assert check_entropy(3, narrow, OFF)
    with caplog.at_level(logging.WARNING):
        assert not check_entropy(3, narrow, EntropyPolicy.WARN)
    assert "Entropy guard" in caplog.text
    with pytest.raises(PermHashError) as e:
        check_entropy(3, narrow, EntropyPolicy.STRICT)
    assert ErrorCode.ENTROPY_EXHAUSTED == e.value.code
    assert check_entropy(12, HashKey(0, 32), EntropyPolicy.STRICT, margin_bits=0)
    with pytest.raises(PermHashError):
        check_entropy(13, HashKey(0, 32), EntropyPolicy.STRICT, margin_bits=0)


def test_strict_permute_refuses_narrow_key(greek_from_end):
    with pytest.raises(PermHashError) as e:
        permute(greek_from_end, HashKey(4, 8), entropy_policy=EntropyPolicy.STRICT)
    assert ErrorCode.ENTROPY_EXHAUSTED == e.value.code
    assert FROM_END_ROWS[4] == permute(greek_from_end, HashKey(4, 8), entropy_policy=OFF)


# ------ Oracle and removal properties ------


def _random_table(rng: random.Random, strategy: InsertionStrategy) -> NodeTable:
    n_slots = rng.randint(1, 12)
    slots = [f"n{i}" for i in range(n_slots)]
    for i in range(n_slots - 1):
        if rng.random() < 0.3:
            slots[i] = None
    return NodeTable(slots=tuple(slots), strategy=strategy)


@pytest.mark.slow
def test_oracle_equivalence():
    rng = random.Random(20240611)
    mismatches = 0
    for case in range(100_000):
        strategy = InsertionStrategy.FROM_START if 0 == case % 2 else InsertionStrategy.FROM_END
        table = _random_table(rng, strategy)
        k = HashKey(rng.getrandbits(128), 128)
        head = permute(table, k, entropy_policy=OFF)[0]
        if first_live(table, k, entropy_policy=OFF) != head:
            mismatches += 1
        if None not in table.slots and first_simple(table, k, entropy_policy=OFF) != head:
            mismatches += 1
    assert 0 == mismatches


@pytest.mark.parametrize("strategy", list(InsertionStrategy))
@pytest.mark.parametrize("n", range(3, 8))
def test_removal_identity(strategy, n):
    table = new_table([f"n{i}" for i in range(n)], strategy)
    for x in table.slots:
        smaller = remove(table, x)
        for k in range(math.factorial(n)):
            expected = tuple(s for s in permute(table, key(k)) if s != x)
            assert permute(smaller, key(k)) == expected


@given(
    value=st.integers(min_value=0, max_value=2**128 - 1),
    mask=st.lists(st.booleans(), min_size=1, max_size=10),
    strategy=st.sampled_from(list(InsertionStrategy)),
)
def test_permute_orders_live_nodes(value, mask, strategy):
    slots = [f"n{i}" if keep else None for i, keep in enumerate(mask)] + ["last"]
    table = NodeTable(slots=tuple(slots), strategy=strategy)
    k = HashKey(value, 128)
    order = permute(table, k, entropy_policy=OFF)
    assert sorted(order) == sorted(s for s in slots if s is not None)
    assert first_live(table, k, entropy_policy=OFF) == order[0]
