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
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm.auto import tqdm

from permhash.ring import RingState, ring_owner
from permhash.util.errors import ErrorCode, PermHashError
from src.util.metric import MetricTracker
from src.util.seeding import partition_rng, resolve_seed

# Simulated rings use a 32-bit circle, held in int64 so arc arithmetic never overflows
SIM_POINT_BITS = 32
MIN_SPREAD_TRIALS = 100
MIN_MEDIAN_TRIALS = 10_000
TRIAL_BLOCK = 1024


def _arc_lengths(sorted_points: np.ndarray, perimeter: int) -> np.ndarray:
    """Arc ending at each point along the last axis; the first arc wraps from the last point."""
    wrap = sorted_points[..., -1:] - perimeter
    return np.diff(sorted_points, axis=-1, prepend=wrap)


def _check_trials(trials: int, minimum: int) -> None:
    if trials < minimum:
        raise PermHashError(ErrorCode.USAGE, f"Need at least {minimum} trials, got {trials}")


# -------------------- Load spread --------------------


def ring_spread_stats(
    node_count: int,
    k: int,
    trials: int = 1000,
    seed: Optional[int] = None,
    progress: bool = False,
) -> dict:
    """
    Per-node load spread of fresh random rings with `k` points per node.

    A node's load is the total length of the arcs its points own. Each trial draws its points from
    `partition_rng(seed, trial)`, so a trial's outcome does not depend on the others.

    Args:
        node_count (`int`):
            Nodes per ring.
        k (`int`):
            Points per node.
        trials (`int`, *optional*, defaults to `1000`):
            Number of independent rings, at least 100.
        seed (`int`, *optional*):
            Base seed; drawn and logged when missing.
    Returns:
        `dict`: mean, standard error and 95% interval for `mean_min` (mean load over smallest load),
        `max_mean` (largest load over mean load) and `cv` (coefficient of variation of the loads).
    """
    if node_count < 1 or k < 1:
        raise PermHashError(ErrorCode.USAGE, f"node_count and k must be positive, got {node_count}, {k}")
    _check_trials(trials, MIN_SPREAD_TRIALS)
    seed = resolve_seed(seed)
    perimeter = 1 << SIM_POINT_BITS

    owners = np.repeat(np.arange(node_count), k)
    tracker = MetricTracker("mean_min", "max_mean", "cv")
    for trial in tqdm(range(trials), desc=f"Spread k={k}", disable=not progress):
        rng = partition_rng(seed, trial)
        points = rng.integers(0, perimeter, size=node_count * k, dtype=np.int64)
        order = np.argsort(points, kind="stable")
        lengths = _arc_lengths(points[order], perimeter)
        loads = np.bincount(owners[order], weights=lengths, minlength=node_count)

        mean = loads.mean()
        tracker.update("mean_min", mean / loads.min())
        tracker.update("max_mean", loads.max() / mean)
        tracker.update("cv", loads.std() / mean)

    result = tracker.result()
    logging.debug(f"Spread nodes={node_count} k={k}: mean/min={result['mean_min']['mean']:.4f}")
    return {"nodes": node_count, "k": k, "trials": trials, "seed": seed, **result}


def ring_median_mean(points: int, trials: int = MIN_MEDIAN_TRIALS, seed: Optional[int] = None) -> dict:
    """
    Median over mean arc length for rings of `points` uniform points.

    The headline ratio pools every arc of every trial before taking the median; the per-trial ratio
    averaged across trials is reported next to it.
    """
    if points < 1:
        raise PermHashError(ErrorCode.USAGE, f"points must be positive, got {points}")
    _check_trials(trials, MIN_MEDIAN_TRIALS)
    seed = resolve_seed(seed)
    perimeter = 1 << SIM_POINT_BITS

    pooled: List[np.ndarray] = []
    per_trial = MetricTracker("median_mean")
    for block, start in enumerate(range(0, trials, TRIAL_BLOCK)):
        n = min(TRIAL_BLOCK, trials - start)
        rng = partition_rng(seed, block)
        pts = np.sort(rng.integers(0, perimeter, size=(n, points), dtype=np.int64), axis=1)
        lengths = _arc_lengths(pts, perimeter)
        pooled.append(lengths.ravel())
        for ratio in np.median(lengths, axis=1) / lengths.mean(axis=1):
            per_trial.update("median_mean", ratio)

    all_lengths = np.concatenate(pooled)
    ratio = float(np.median(all_lengths) / all_lengths.mean())
    return {
        "points": points,
        "trials": trials,
        "seed": seed,
        "median_mean": ratio,
        "per_trial_median_mean": per_trial.result()["median_mean"],
    }


# -------------------- Remap on a concrete ring --------------------


@dataclass
class RingRemapReport:
    """Circle length moved between owners, measured on the merged arc boundaries of two rings."""

    transfers: Dict[str, Dict[str, int]]
    moved_length: int
    perimeter: int
    changed_nodes: Tuple[str, ...]
    violations: int

    @property
    def minimal(self) -> bool:
        return 0 == self.violations

    def to_dict(self) -> dict:
        return {
            "perimeter": self.perimeter,
            "moved_length": self.moved_length,
            "changed_nodes": list(self.changed_nodes),
            "violations": self.violations,
            "minimal": self.minimal,
            "transfers": self.transfers,
        }


def ring_remap(before: RingState, after: RingState) -> RingRemapReport:
    """
    Exact ownership change between two rings on the same circle.

    Between two consecutive boundaries of the merged point set each ring has a single owner, so evaluating
    both owners at every boundary covers the whole circle. A violation is an arc that changes owner without
    the added or removed node on either side.
    """
    if before.config.point_bits != after.config.point_bits:
        raise PermHashError(ErrorCode.INVARIANT_VIOLATION, "Rings use different point widths")
    perimeter = before.config.perimeter
    boundaries = sorted(set(before.points) | set(after.points))
    if 0 == len(boundaries):
        raise PermHashError(ErrorCode.EMPTY_RING, "Both rings are empty")

    changed = tuple(sorted(set(before.nodes) ^ set(after.nodes)))
    transfers: Dict[str, Dict[str, int]] = {}
    moved = 0
    violations = 0
    prev = boundaries[-1] - perimeter
    for b in boundaries:
        length = b - prev
        prev = b
        old, new = ring_owner(before, b), ring_owner(after, b)
        if old == new:
            continue
        transfers.setdefault(old, {})
        transfers[old][new] = transfers[old].get(new, 0) + length
        moved += length
        if old not in changed and new not in changed:
            violations += 1
    if violations > 0:
        logging.warning(f"Ring remap has {violations} arc(s) moving between unchanged nodes")
    return RingRemapReport(
        transfers=transfers,
        moved_length=moved,
        perimeter=perimeter,
        changed_nodes=changed,
        violations=violations,
    )
