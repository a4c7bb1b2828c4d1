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
import struct
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

from .permcore import HashKey, NodeId, check_node_id
from .util.digest import SEPARATOR, counter_block, leading_bits
from .util.errors import ErrorCode, PermHashError

RING_FORMAT_VERSION = 1
SUPPORTED_POINT_BITS = (32, 64)
ADD = "add"
REMOVE = "remove"

RingEvent = Tuple[NodeId, str]


@dataclass(frozen=True)
class RingConfig:
    point_bits: int = 32
    replicas_k: int = 3
    max_attempts: int = 1 << 16

    def __post_init__(self):
        if self.point_bits not in SUPPORTED_POINT_BITS:
            raise PermHashError(
                ErrorCode.INVARIANT_VIOLATION, f"point_bits must be one of {SUPPORTED_POINT_BITS}"
            )
        if self.replicas_k < 1:
            raise PermHashError(ErrorCode.INVARIANT_VIOLATION, "replicas_k must be >= 1")

    @property
    def perimeter(self) -> int:
        return 1 << self.point_bits


@dataclass(frozen=True)
class RingState:
    """
    Points around the circle, sorted, with the owner of each point and the add/remove history.

    The state is a function of `config` and `log` alone: `replay(config, log)` rebuilds it exactly.
    """

    config: RingConfig
    points: Tuple[int, ...] = ()
    owners: Tuple[NodeId, ...] = ()
    log: Tuple[RingEvent, ...] = field(default=())

    @property
    def nodes(self) -> Tuple[NodeId, ...]:
        return tuple(dict.fromkeys(n for n, op in self.log if ADD == op and n in self.owners))

    def point_map(self) -> Dict[int, NodeId]:
        return dict(zip(self.points, self.owners))


def new_ring(config: RingConfig) -> RingState:
    return RingState(config=config)


def _from_point_map(state: RingState, point_map: Dict[int, NodeId], event: RingEvent) -> RingState:
    points = tuple(sorted(point_map))
    return RingState(
        config=state.config,
        points=points,
        owners=tuple(point_map[p] for p in points),
        log=state.log + (event,),
    )


def ring_point(label: str, replica: int, attempt: int, point_bits: int) -> int:
    """Leading `point_bits` bits of SHA-512(label || 0x00 || replica || 0x00 || attempt), integers 4-byte BE."""
    digest = counter_block(label.encode("utf-8") + SEPARATOR + struct.pack(">I", replica), attempt)
    return leading_bits(digest, point_bits)


def key_point(key: HashKey, point_bits: int) -> int:
    """Leading `point_bits` bits of the key; keys no wider than the circle are used as they are."""
    if key.source_bits > point_bits:
        return key.value >> (key.source_bits - point_bits)
    return key.value


def ring_add(state: RingState, node: str) -> RingState:
    """
    Place `replicas_k` points for `node`. A contested point stays with its incumbent and the newcomer retries
    with the next attempt number.
    """
    node = check_node_id(node)
    if node in state.owners:
        raise PermHashError(ErrorCode.DUPLICATE_NODE, f"Node {node!r} already on the ring")
    cfg = state.config
    point_map = state.point_map()
    n_collisions = 0
    for replica in range(cfg.replicas_k):
        attempt = 0
        while True:
            point = ring_point(node, replica, attempt, cfg.point_bits)
            if point not in point_map:
                point_map[point] = node
                break
            attempt += 1
            n_collisions += 1
            if attempt >= cfg.max_attempts:
                raise PermHashError(
                    ErrorCode.POINT_SPACE_EXHAUSTED,
                    f"No free point for {node!r} replica {replica} after {attempt} attempts",
                )
    if n_collisions > 0:
        logging.debug(f"Ring add {node!r}: resolved {n_collisions} collision(s)")
    return _from_point_map(state, point_map, (node, ADD))


def ring_remove(state: RingState, node: str) -> RingState:
    if node not in state.owners:
        raise PermHashError(ErrorCode.NODE_NOT_FOUND, f"Node {node!r} not on the ring")
    point_map = {p: n for p, n in zip(state.points, state.owners) if n != node}
    return _from_point_map(state, point_map, (NodeId(node), REMOVE))


def ring_owner(state: RingState, point: int) -> NodeId:
    """Owner of a circle point: the node of the smallest ring point `>= point`, wrapping around."""
    if 0 == len(state.points):
        raise PermHashError(ErrorCode.EMPTY_RING, "Ring has no points")
    idx = bisect_left(state.points, point)
    if idx == len(state.points):
        idx = 0
    return state.owners[idx]


def ring_lookup(state: RingState, key: HashKey) -> NodeId:
    return ring_owner(state, key_point(key, state.config.point_bits))


def segment_lengths(state: RingState) -> List[int]:
    """Arc lengths in point order; the arc ending at `points[i]` is `(points[i-1], points[i]]`."""
    points = state.points
    if 0 == len(points):
        raise PermHashError(ErrorCode.EMPTY_RING, "Ring has no points")
    lengths = [points[0] + state.config.perimeter - points[-1]]
    lengths.extend(b - a for a, b in zip(points[:-1], points[1:]))
    return lengths


def owner_arcs(state: RingState) -> List[Tuple[int, int, NodeId]]:
    """`(start_exclusive, end_inclusive, owner)` per point; the first arc starts at the last point and wraps."""
    if 0 == len(state.points):
        raise PermHashError(ErrorCode.EMPTY_RING, "Ring has no points")
    starts = (state.points[-1],) + state.points[:-1]
    return list(zip(starts, state.points, state.owners))


# -------------------- Persistence --------------------


def replay(config: RingConfig, log: Iterable[RingEvent]) -> RingState:
    state = new_ring(config)
    for node, op in log:
        if ADD == op:
            state = ring_add(state, node)
        elif REMOVE == op:
            state = ring_remove(state, node)
        else:
            raise PermHashError(ErrorCode.PARSE_ERROR, f"Unknown ring event: {op!r}")
    return state


def serialize_ring(state: RingState) -> bytes:
    obj = {
        "version": RING_FORMAT_VERSION,
        "point_bits": state.config.point_bits,
        "replicas_k": state.config.replicas_k,
        "log": [[n, op] for n, op in state.log],
    }
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def deserialize_ring(data: bytes, max_attempts: int = 1 << 16) -> RingState:
    try:
        obj = json.loads(data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data)
    except UnicodeDecodeError as e:
        raise PermHashError(ErrorCode.PARSE_ERROR, {"position": e.start, "msg": "invalid UTF-8"})
    except json.JSONDecodeError as e:
        raise PermHashError(ErrorCode.PARSE_ERROR, {"position": e.pos, "msg": e.msg})
    if not isinstance(obj, dict) or RING_FORMAT_VERSION != obj.get("version"):
        raise PermHashError(ErrorCode.PARSE_ERROR, {"path": "$.version", "msg": "unsupported or missing version"})
    try:
        config = RingConfig(
            point_bits=int(obj["point_bits"]),
            replicas_k=int(obj["replicas_k"]),
            max_attempts=max_attempts,
        )
        log = [(NodeId(n), op) for n, op in obj["log"]]
    except PermHashError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise PermHashError(ErrorCode.PARSE_ERROR, {"path": "$", "msg": str(e)})
    return replay(config, log)
