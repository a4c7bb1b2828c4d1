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

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .permcore import HashKey, NodeId, check_node_id
from .util.errors import ErrorCode, PermHashError

MAX_CYCLE_SIZE = 6
DEFAULT_NODE_BUDGET = 10**8


@dataclass(frozen=True)
class Cycle:
    """Universal cycle of the shorthand permutations of `node_set`: `n!` symbols, every (n-1)-window distinct."""

    symbols: Tuple[NodeId, ...]
    node_set: Tuple[NodeId, ...]


@dataclass(frozen=True)
class CycleVerification:
    valid: bool
    first_violation: Optional[int] = None
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"valid": self.valid}
        if not self.valid:
            out["first_violation"] = self.first_violation
            out["reason"] = self.reason
        return out


def _window(symbols: Sequence[NodeId], start: int, width: int) -> Tuple[NodeId, ...]:
    n = len(symbols)
    return tuple(symbols[(start + j) % n] for j in range(width))


def verify_cycle(symbols: Sequence[str], node_set: Iterable[str]) -> CycleVerification:
    """
    Check that `symbols` is a universal cycle of the shorthand permutations of `node_set`.

    Reports the index of the first window that repeats or contains a duplicate symbol.
    """
    node_set = tuple(dict.fromkeys(node_set))
    n = len(node_set)
    expected_len = math.factorial(n)
    if len(symbols) != expected_len:
        return CycleVerification(False, None, f"length {len(symbols)} != {n}! = {expected_len}")
    allowed = set(node_set)
    for i, s in enumerate(symbols):
        if s not in allowed:
            return CycleVerification(False, i, f"symbol {s!r} not in node set")

    width = n - 1
    seen: Dict[Tuple[NodeId, ...], int] = {}
    for i in range(len(symbols)):
        w = _window(symbols, i, width)
        if len(set(w)) != width:
            return CycleVerification(False, i, f"window {list(w)} repeats a symbol")
        if w in seen:
            return CycleVerification(False, i, f"window {list(w)} already seen at {seen[w]}")
        seen[w] = i
    return CycleVerification(True)


def build_cycle(
    node_set: Iterable[str],
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_size: int = MAX_CYCLE_SIZE,
) -> Cycle:
    """
    Depth-first construction of a universal cycle of shorthand permutations.

    Vertices are the (n-2)-symbol overlaps; each shorthand permutation is an edge from its prefix to its suffix.
    Every vertex has in- and out-degree two, so a closed walk using every edge once (found with Hierholzer's
    depth-first stack) lists every shorthand permutation exactly once, consecutive ones overlapping by n-2
    symbols. Children are expanded in `node_set` order, so the result is deterministic.

    Args:
        node_set (`Iterable[str]`):
            Distinct node labels; their order fixes the search order.
        node_budget (`int`, *optional*, defaults to `10**8`):
            Maximum number of edge expansions before giving up.
        max_size (`int`, *optional*, defaults to `6`):
            Largest supported node count.
    Returns:
        `Cycle`: a sequence of `n!` symbols.
    """
    symbols = tuple(check_node_id(s) for s in dict.fromkeys(node_set))
    n = len(symbols)
    if n < 2 or n > max_size:
        raise PermHashError(ErrorCode.UNSUPPORTED_SIZE, f"Cycle construction supports 2..{max_size} nodes, got {n}")

    start = symbols[: n - 2]
    pending: Dict[Tuple[NodeId, ...], List[NodeId]] = {}
    stack: List[Tuple[Tuple[NodeId, ...], Optional[Tuple[NodeId, ...]]]] = [(start, None)]
    circuit: List[Tuple[NodeId, ...]] = []
    expansions = 0
    while stack:
        vertex, via_edge = stack[-1]
        if vertex not in pending:
            pending[vertex] = [s for s in symbols if s not in vertex]
        choices = pending[vertex]
        if choices:
            edge = vertex + (choices.pop(0),)
            stack.append((edge[1:], edge))
            expansions += 1
            if expansions > node_budget:
                raise PermHashError(ErrorCode.BUDGET_EXCEEDED, f"Gave up after {node_budget} expansions (n={n})")
        else:
            stack.pop()
            if via_edge is not None:
                circuit.append(via_edge)
    circuit.reverse()

    cycle = tuple(edge[0] for edge in circuit)
    logging.debug(f"Built cycle for {n} nodes with {expansions} expansions")
    assert len(cycle) == math.factorial(n), "walk did not cover every shorthand permutation"
    return Cycle(symbols=cycle, node_set=symbols)


# -------------------- Removal by substitution --------------------


def _survivor_check(symbols: Sequence[NodeId], removed: set) -> None:
    if not any(s not in removed for s in symbols):
        raise PermHashError(ErrorCode.NO_SURVIVORS, "Every symbol of the cycle is removed")


def substitute_removed(symbols: Sequence[str], removed: Iterable[str]) -> Tuple[NodeId, ...]:
    """Replace each removed symbol by the next surviving symbol in cycle order, wrapping past the end."""
    removed = set(removed)
    if 0 == len(removed):
        return tuple(symbols)
    _survivor_check(symbols, removed)

    n = len(symbols)
    out = list(symbols)
    # walk backwards twice so that the tail sees survivors at the head
    nxt = None
    for i in range(2 * n - 1, -1, -1):
        s = symbols[i % n]
        if s in removed:
            if i < n:
                out[i] = nxt
        else:
            nxt = s
    return tuple(out)


def substitute_sequential(symbols: Sequence[str], removed: Sequence[str]) -> Tuple[NodeId, ...]:
    """Remove one node at a time, in the given order, each against the previous result."""
    out = tuple(symbols)
    for node in removed:
        out = substitute_removed(out, (node,))
    return out


def cycle_lookup(cycle: Sequence[str], key: HashKey, removed: Iterable[str] = ()) -> NodeId:
    """Symbol of segment `key mod len(cycle)`, resolved to the next survivor if it was removed."""
    symbols = cycle.symbols if isinstance(cycle, Cycle) else tuple(cycle)
    removed = set(removed)
    _survivor_check(symbols, removed)
    n = len(symbols)
    idx = key.value % n
    while symbols[idx] in removed:
        idx = (idx + 1) % n
    return symbols[idx]


def count_symbols(symbols: Iterable[str]) -> Dict[NodeId, int]:
    return dict(Counter(symbols))


def successor_counts(symbols: Sequence[str]) -> Dict[Tuple[NodeId, NodeId], int]:
    n = len(symbols)
    return dict(Counter((symbols[i], symbols[(i + 1) % n]) for i in range(n)))


# -------------------- Persistence --------------------


def cycle_to_json(symbols: Sequence[str]) -> bytes:
    return json.dumps(list(symbols), separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def cycle_from_json(data: bytes) -> Cycle:
    try:
        obj = json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except UnicodeDecodeError as e:
        raise PermHashError(ErrorCode.PARSE_ERROR, {"position": e.start, "msg": "invalid UTF-8"})
    except json.JSONDecodeError as e:
        raise PermHashError(ErrorCode.PARSE_ERROR, {"position": e.pos, "msg": e.msg})
    if not isinstance(obj, list) or not all(isinstance(s, str) for s in obj):
        raise PermHashError(ErrorCode.PARSE_ERROR, {"path": "$", "msg": "expected an array of labels"})
    symbols = tuple(check_node_id(s) for s in obj)
    return Cycle(symbols=symbols, node_set=tuple(dict.fromkeys(symbols)))


def load_cycle(path: str) -> Cycle:
    with open(path, "rb") as f:
        return cycle_from_json(f.read())


def dump_cycle(symbols: Sequence[str], path: str) -> None:
    with open(path, "wb") as f:
        f.write(cycle_to_json(symbols))
