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
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from .permcore import InsertionStrategy, NodeId, check_node_id, get_strategy
from .util.errors import ErrorCode, PermHashError

FREE = None
TABLE_FORMAT_VERSION = 1

Slot = Optional[NodeId]


@dataclass(frozen=True)
class NodeTable:
    """
    Ordered node slots with free-slot markers (`FREE`), bound to one insertion strategy.

    The slot order is the order in which nodes were added, except where a new node took a free slot. The last
    slot is never free and occupied labels are pairwise distinct.
    """

    slots: Tuple[Slot, ...]
    strategy: InsertionStrategy = InsertionStrategy.FROM_START

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if len(self.slots) > 0 and self.slots[-1] is FREE:
            raise PermHashError(ErrorCode.INVARIANT_VIOLATION, "Last slot must not be free")
        live = [s for s in self.slots if s is not FREE]
        for label in live:
            check_node_id(label)
        if len(set(live)) != len(live):
            raise PermHashError(ErrorCode.INVARIANT_VIOLATION, "Duplicate node label in table")

    def __contains__(self, node) -> bool:
        return node is not FREE and node in self.slots

    def __len__(self) -> int:
        return len(self.slots)


def new_table(
    nodes: Iterable[str],
    strategy: InsertionStrategy = InsertionStrategy.FROM_START,
) -> NodeTable:
    nodes = [check_node_id(n) for n in nodes]
    seen = set()
    for n in nodes:
        if n in seen:
            raise PermHashError(ErrorCode.DUPLICATE_NODE, f"Node {n!r} given twice")
        seen.add(n)
    return NodeTable(slots=tuple(nodes), strategy=strategy)


def add(table: NodeTable, node: str) -> NodeTable:
    """Place `node` in the lowest-index free slot, or append a new slot when there is none."""
    node = check_node_id(node)
    if node in table:
        raise PermHashError(ErrorCode.DUPLICATE_NODE, f"Node {node!r} already in table")
    slots = list(table.slots)
    try:
        idx = slots.index(FREE)
        slots[idx] = node
    except ValueError:
        idx = len(slots)
        slots.append(node)
    logging.debug(f"Added {node!r} at slot {idx}")
    return NodeTable(slots=tuple(slots), strategy=table.strategy)


def remove(table: NodeTable, node: str) -> NodeTable:
    """Free the slot of `node`, then drop every trailing free slot."""
    if node not in table:
        raise PermHashError(ErrorCode.NODE_NOT_FOUND, f"Node {node!r} not in table")
    slots = list(table.slots)
    slots[slots.index(node)] = FREE
    while len(slots) > 0 and slots[-1] is FREE:
        slots.pop()
    logging.debug(f"Removed {node!r}, {len(table.slots) - len(slots)} slot(s) trimmed")
    return NodeTable(slots=tuple(slots), strategy=table.strategy)


def live_nodes(table: NodeTable) -> Tuple[NodeId, ...]:
    return tuple(s for s in table.slots if s is not FREE)


def slot_count(table: NodeTable) -> int:
    return len(table.slots)


def live_count(table: NodeTable) -> int:
    return len(live_nodes(table))


# -------------------- Persistence --------------------


def table_to_dict(table: NodeTable) -> dict:
    # key order is part of the canonical form
    return {
        "version": TABLE_FORMAT_VERSION,
        "strategy": table.strategy.value,
        "slots": list(table.slots),
    }


def serialize(table: NodeTable) -> bytes:
    return json.dumps(table_to_dict(table), separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def table_from_dict(obj) -> NodeTable:
    if not isinstance(obj, dict):
        raise PermHashError(ErrorCode.PARSE_ERROR, {"path": "$", "msg": "expected an object"})
    for field in ("version", "strategy", "slots"):
        if field not in obj:
            raise PermHashError(ErrorCode.PARSE_ERROR, {"path": f"$.{field}", "msg": "missing field"})
    if TABLE_FORMAT_VERSION != obj["version"]:
        raise PermHashError(
            ErrorCode.PARSE_ERROR, {"path": "$.version", "msg": f"unsupported version {obj['version']!r}"}
        )
    strategy = get_strategy(obj["strategy"])
    slots = obj["slots"]
    if not isinstance(slots, list):
        raise PermHashError(ErrorCode.PARSE_ERROR, {"path": "$.slots", "msg": "expected an array"})
    for i, s in enumerate(slots):
        if s is not None and not isinstance(s, str):
            raise PermHashError(ErrorCode.PARSE_ERROR, {"path": f"$.slots[{i}]", "msg": "expected string or null"})
    return NodeTable(slots=tuple(slots), strategy=strategy)


def deserialize(data: bytes) -> NodeTable:
    try:
        obj = json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except UnicodeDecodeError as e:
        raise PermHashError(ErrorCode.PARSE_ERROR, {"position": e.start, "msg": "invalid UTF-8"})
    except json.JSONDecodeError as e:
        raise PermHashError(
            ErrorCode.PARSE_ERROR, {"position": e.pos, "line": e.lineno, "column": e.colno, "msg": e.msg}
        )
    return table_from_dict(obj)
