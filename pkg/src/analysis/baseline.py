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

from fractions import Fraction
from typing import Union

from permhash.membership import add, new_table
from permhash.permcore import HashKey, InsertionStrategy
from permhash.util.errors import ErrorCode, PermHashError

from .census import EXACT_MAX_SLOTS, CensusMode, remap_matrix


def simple_mod_hash(key: Union[HashKey, int], n: int) -> int:
    """Index into the node list: `key mod n`."""
    if n < 1:
        raise PermHashError(ErrorCode.USAGE, f"n must be positive, got {n}")
    value = key.value if isinstance(key, HashKey) else key
    return value % n


def simple_mod_survival(n: int, m: int) -> Fraction:
    """
    Exact share of keys in `[0, n*(n+1)*m)` that keep their index when the node count goes from `n` to `n+1`.
    """
    if n < 1 or m < 1:
        raise PermHashError(ErrorCode.USAGE, f"n and m must be positive, got n={n}, m={m}")
    n_keys = n * (n + 1) * m
    survivors = sum(1 for k in range(n_keys) if simple_mod_hash(k, n) == simple_mod_hash(k, n + 1))
    return Fraction(survivors, n_keys)


def survival_report(n: int, m: int, exact_max_slots: int = EXACT_MAX_SLOTS) -> dict:
    """
    Simple-mod survival next to the share of keys the permutation hash moves for the same n -> n+1 change.
    The two shares are equal: one is the complement of the other's kept share.
    """
    fraction = simple_mod_survival(n, m)
    report = {
        "n": n,
        "m": m,
        "keys": n * (n + 1) * m,
        "fraction": fraction,
        "expected": Fraction(1, n + 1),
        "perfect_moved_fraction": None,
    }
    if n + 1 <= exact_max_slots:
        before = new_table([f"n{i}" for i in range(n)], InsertionStrategy.FROM_START)
        after = add(before, f"n{n}")
        matrix = remap_matrix(before, after, mode=CensusMode.exact(), exact_max_slots=exact_max_slots)
        report["perfect_moved_fraction"] = Fraction(matrix.moved, matrix.moved + matrix.unmoved)
    return report
