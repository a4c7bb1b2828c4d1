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

import logging
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from tqdm.auto import tqdm

from permhash.membership import NodeTable, live_nodes
from permhash.permcore import (
    EntropyPolicy,
    HashKey,
    InsertionStrategy,
    first_live,
    permute_symbols,
)
from permhash.util.errors import ErrorCode, PermHashError
from src.util.report_util import table_fingerprint
from src.util.seeding import generate_seed_sequence, resolve_seed

EXACT_MAX_SLOTS = 8
SAMPLE_BLOCK = 4096


class CensusKind(Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class CensusMode:
    """Key range of a census: every key in `[0, L!)`, or `samples` seeded random keys of `key_bits` bits."""

    kind: CensusKind = CensusKind.EXACT
    samples: int = 0
    seed: Optional[int] = None
    key_bits: int = 128
    block: int = SAMPLE_BLOCK

    @classmethod
    def exact(cls) -> "CensusMode":
        return cls(kind=CensusKind.EXACT)

    @classmethod
    def sampled(
        cls, samples: int, seed: Optional[int], key_bits: int = 128, block: int = SAMPLE_BLOCK
    ) -> "CensusMode":
        assert samples >= 1 and key_bits >= 1 and block >= 1
        return cls(kind=CensusKind.SAMPLED, samples=samples, seed=resolve_seed(seed), key_bits=key_bits, block=block)


@dataclass(frozen=True)
class _Partition:
    """Contiguous exact-key range, or a run of sample blocks."""

    start: int
    stop: int


# -------------------- Key streams --------------------


def _block_keys(mode: CensusMode, block: int, block_seed: int) -> Iterator[int]:
    rng = random.Random(block_seed)
    n = min(mode.block, mode.samples - block * mode.block)
    for _ in range(n):
        yield rng.getrandbits(mode.key_bits)


def _n_blocks(mode: CensusMode) -> int:
    return -(-mode.samples // mode.block)


def _range_size(mode: CensusMode, n_slots: int) -> int:
    if CensusKind.EXACT == mode.kind:
        return math.factorial(n_slots)
    return mode.samples


def _partitions(n_units: int, n_partitions: int) -> List[_Partition]:
    n_partitions = max(1, min(n_partitions, n_units))
    bounds = np.linspace(0, n_units, n_partitions + 1).round().astype(int)
    return [_Partition(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def iter_keys(mode: CensusMode, n_slots: int, part: _Partition) -> Iterator[int]:
    if CensusKind.EXACT == mode.kind:
        yield from range(part.start, part.stop)
    else:
        seeds = generate_seed_sequence(mode.seed, _n_blocks(mode))
        for block in range(part.start, part.stop):
            yield from _block_keys(mode, block, seeds[block])


def _check_range(n_slots: int, mode: CensusMode, exact_max_slots: int) -> None:
    if CensusKind.EXACT == mode.kind and n_slots > exact_max_slots:
        raise PermHashError(
            ErrorCode.RANGE_TOO_LARGE,
            f"Exact mode enumerates {n_slots}! keys; limit is {exact_max_slots} slots, use sampled mode",
        )


def _run_partitions(func, args_list: list, num_workers: int, progress: bool, desc: str) -> list:
    if num_workers > 1 and len(args_list) > 1:
        with ProcessPoolExecutor(max_workers=num_workers) as pool:
            return list(tqdm(pool.map(func, *zip(*args_list)), total=len(args_list), desc=desc, disable=not progress))
    return [func(*a) for a in tqdm(args_list, desc=desc, disable=not progress)]


def _units(mode: CensusMode, n_slots: int) -> int:
    return _range_size(mode, n_slots) if CensusKind.EXACT == mode.kind else _n_blocks(mode)


def _mode_to_dict(mode: CensusMode, n_slots: int) -> dict:
    if CensusKind.EXACT == mode.kind:
        return {"kind": mode.kind.value, "start": 0, "stop": math.factorial(n_slots)}
    return {
        "kind": mode.kind.value,
        "samples": mode.samples,
        "seed": mode.seed,
        "key_bits": mode.key_bits,
        "block": mode.block,
    }


# -------------------- Census --------------------


@dataclass
class CensusReport:
    counts: Dict[str, int]
    total: int
    mode: dict
    fingerprint: str
    strategy: str
    standard_error: Optional[Dict[str, float]] = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "fingerprint": self.fingerprint,
            "strategy": self.strategy,
            "mode": self.mode,
            "total": self.total,
            "counts": self.counts,
        }
        if self.standard_error is not None:
            out["standard_error"] = self.standard_error
        return out

    def rows(self) -> List[dict]:
        return [{"node": n, "count": c, "share": c / self.total} for n, c in self.counts.items()]


def _census_partition(table: NodeTable, strategy: InsertionStrategy, mode: CensusMode, part: _Partition) -> Counter:
    n_slots = len(table.slots)
    counts = Counter()
    for k in iter_keys(mode, n_slots, part):
        key = HashKey(value=k, source_bits=max(1, k.bit_length()))
        counts[first_live(table, key, strategy, entropy_policy=EntropyPolicy.OFF)] += 1
    return counts


def census(
    table: NodeTable,
    strategy: Optional[InsertionStrategy] = None,
    mode: CensusMode = CensusMode.exact(),
    partitions: int = 4,
    num_workers: int = 1,
    exact_max_slots: int = EXACT_MAX_SLOTS,
    progress: bool = False,
) -> CensusReport:
    """
    Count how often each live node is the first choice over a key range.

    In exact mode every key in `[0, slot_count!)` is visited, so each ordering of the slot symbols appears once.
    The key range is split into `partitions` pieces that may run on `num_workers` processes; the counts are
    summed, so the report does not depend on either number.
    """
    strategy = table.strategy if strategy is None else strategy
    nodes = live_nodes(table)
    if 0 == len(nodes):
        raise PermHashError(ErrorCode.NO_LIVE_NODES, "Table has no live nodes")
    n_slots = len(table.slots)
    _check_range(n_slots, mode, exact_max_slots)

    parts = _partitions(_units(mode, n_slots), partitions)
    results = _run_partitions(
        _census_partition,
        [(table, strategy, mode, p) for p in parts],
        num_workers,
        progress,
        desc="Census",
    )
    total_counts = sum(results, Counter())
    counts = {n: total_counts.get(n, 0) for n in nodes}
    total = sum(counts.values())

    standard_error = None
    if CensusKind.SAMPLED == mode.kind:
        standard_error = {n: math.sqrt(c / total * (1 - c / total) / total) for n, c in counts.items()}

    report = CensusReport(
        counts=counts,
        total=total,
        mode=_mode_to_dict(mode, n_slots),
        fingerprint=table_fingerprint(table),
        strategy=strategy.value,
        standard_error=standard_error,
    )
    logging.debug(f"Census {report.fingerprint}: {counts}")
    return report


def ordering_census(table: NodeTable, strategy: Optional[InsertionStrategy] = None) -> Counter:
    """How many keys in `[0, slot_count!)` produce each full ordering of the slot symbols (markers included)."""
    n_slots = len(table.slots)
    _check_range(n_slots, CensusMode.exact(), EXACT_MAX_SLOTS)
    orderings = Counter()
    for k in range(math.factorial(n_slots)):
        orderings[permute_symbols(table, HashKey(k, max(1, k.bit_length())), strategy)] += 1
    return orderings


# -------------------- Remap matrix --------------------


@dataclass
class RemapMatrix:
    """`counts[old][new]`: keys whose first choice moved from `old` to `new`."""

    counts: Dict[str, Dict[str, int]]
    moved: int
    unmoved: int
    mode: dict
    before: str
    after: str
    strategy: str

    def column(self, node: str) -> Dict[str, int]:
        return {old: row.get(node, 0) for old, row in self.counts.items() if old != node}

    def row(self, node: str) -> Dict[str, int]:
        return dict(self.counts.get(node, {}))

    def off_diagonal(self) -> List[Tuple[str, str, int]]:
        return [
            (old, new, c)
            for old, row in self.counts.items()
            for new, c in row.items()
            if old != new and c > 0
        ]

    def to_dict(self) -> dict:
        return {
            "before": self.before,
            "after": self.after,
            "strategy": self.strategy,
            "mode": self.mode,
            "moved": self.moved,
            "unmoved": self.unmoved,
            "matrix": self.counts,
        }

    def rows(self) -> List[dict]:
        return [{"old": old, "new": new, "count": c} for old, row in self.counts.items() for new, c in row.items()]


def _remap_partition(
    before: NodeTable, after: NodeTable, strategy: InsertionStrategy, mode: CensusMode, n_slots: int, part: _Partition
) -> Counter:
    pairs = Counter()
    for k in iter_keys(mode, n_slots, part):
        key = HashKey(value=k, source_bits=max(1, k.bit_length()))
        old = first_live(before, key, strategy, entropy_policy=EntropyPolicy.OFF)
        new = first_live(after, key, strategy, entropy_policy=EntropyPolicy.OFF)
        pairs[(old, new)] += 1
    return pairs


def remap_matrix(
    before: NodeTable,
    after: NodeTable,
    strategy: Optional[InsertionStrategy] = None,
    mode: CensusMode = CensusMode.exact(),
    partitions: int = 4,
    num_workers: int = 1,
    exact_max_slots: int = EXACT_MAX_SLOTS,
    progress: bool = False,
) -> RemapMatrix:
    """
    Movement of first choices between two tables over a key range. Exact mode covers `[0, L!)` with `L` the
    larger slot count, which is a whole number of periods for both tables.
    """
    if before.strategy != after.strategy or (strategy is not None and strategy != before.strategy):
        raise PermHashError(
            ErrorCode.STRATEGY_MISMATCH,
            f"Tables use {before.strategy.value} and {after.strategy.value}"
            + (f", requested {strategy.value}" if strategy is not None else ""),
        )
    strategy = before.strategy
    for t in (before, after):
        if 0 == len(live_nodes(t)):
            raise PermHashError(ErrorCode.NO_LIVE_NODES, "Both tables need a live node")
    n_slots = max(len(before.slots), len(after.slots))
    _check_range(n_slots, mode, exact_max_slots)

    parts = _partitions(_units(mode, n_slots), partitions)
    results = _run_partitions(
        _remap_partition,
        [(before, after, strategy, mode, n_slots, p) for p in parts],
        num_workers,
        progress,
        desc="Remap",
    )
    pairs = sum(results, Counter())

    old_nodes = live_nodes(before)
    new_nodes = list(dict.fromkeys(live_nodes(before) + live_nodes(after)))
    counts = {old: {new: pairs.get((old, new), 0) for new in new_nodes} for old in old_nodes}
    unmoved = sum(c for (old, new), c in pairs.items() if old == new)
    moved = sum(pairs.values()) - unmoved

    return RemapMatrix(
        counts=counts,
        moved=moved,
        unmoved=unmoved,
        mode=_mode_to_dict(mode, n_slots),
        before=table_fingerprint(before),
        after=table_fingerprint(after),
        strategy=strategy.value,
    )
