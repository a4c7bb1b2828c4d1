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
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Iterator, List, NamedTuple, NewType, Optional, Tuple, Union

from .util.digest import expand
from .util.errors import ErrorCode, PermHashError

if TYPE_CHECKING:
    from .membership import NodeTable

NodeId = NewType("NodeId", str)
Permutation = Tuple[NodeId, ...]

DEFAULT_ENTROPY_MARGIN_BITS = 32


def check_node_id(label: str) -> NodeId:
    if not isinstance(label, str) or 0 == len(label):
        raise PermHashError(ErrorCode.INVARIANT_VIOLATION, f"Invalid node label: {label!r}")
    return NodeId(label)


@dataclass(frozen=True)
class HashKey:
    """
    Arbitrary-precision non-negative key together with the bit width of the source that produced it.

    Args:
        value (`int`):
            Key value, `0 <= value < 2**source_bits`.
        source_bits (`int`):
            Bit width of the entropy source.
    """

    value: int
    source_bits: int

    def __post_init__(self):
        if self.source_bits < 1:
            raise PermHashError(
                ErrorCode.INVARIANT_VIOLATION, f"source_bits must be positive, got {self.source_bits}"
            )
        if self.value < 0 or self.value >> self.source_bits:
            raise PermHashError(
                ErrorCode.INVARIANT_VIOLATION,
                f"Key {self.value} does not fit in {self.source_bits} bits",
            )

    @classmethod
    def from_int(cls, value: int, source_bits: Optional[int] = None) -> "HashKey":
        if source_bits is None:
            source_bits = max(1, value.bit_length())
        return cls(value=value, source_bits=source_bits)


class InsertionStrategy(Enum):
    """Maps a key digit to the insertion index of the new symbol in the permutation built so far."""

    FROM_START = "from_start"
    FROM_END = "from_end"

    def insert_index(self, digit: int, length: int) -> int:
        assert 0 <= digit <= length
        if InsertionStrategy.FROM_START == self:
            return digit
        elif InsertionStrategy.FROM_END == self:
            return length - digit
        raise NotImplementedError


def get_strategy(name: Union[str, InsertionStrategy]) -> InsertionStrategy:
    if isinstance(name, InsertionStrategy):
        return name
    try:
        return InsertionStrategy(name)
    except ValueError:
        raise PermHashError(ErrorCode.PARSE_ERROR, f"Unknown insertion strategy: {name!r}")


class EntropyPolicy(Enum):
    WARN = "warn"
    STRICT = "strict"
    OFF = "off"


class FreeMarker(NamedTuple):
    """Placeholder for a free slot; distinct per slot index."""

    slot_index: int


Symbol = Union[NodeId, FreeMarker]


# -------------------- Capacity & entropy --------------------


def capacity(bits: int) -> int:
    """Largest node count `n` such that `n! <= 2**bits`."""
    assert bits >= 1
    limit = 1 << bits
    n, fact = 1, 1
    while fact * (n + 1) <= limit:
        n += 1
        fact *= n
    return n


def min_key_bits(n: int, margin_bits: int = 0) -> int:
    """Smallest `b` with `2**b >= n! * 2**margin_bits`."""
    assert n >= 1 and margin_bits >= 0
    return (math.factorial(n) - 1).bit_length() + margin_bits


def reachable_fraction(slot_count: int, bits: int) -> Fraction:
    """Share of the `slot_count!` orderings that a `bits`-bit key can select."""
    n_orderings = math.factorial(slot_count)
    return Fraction(min(1 << bits, n_orderings), n_orderings)


def check_entropy(
    slot_count: int,
    key: HashKey,
    policy: EntropyPolicy = EntropyPolicy.WARN,
    margin_bits: int = DEFAULT_ENTROPY_MARGIN_BITS,
) -> bool:
    """
    Entropy guard. Returns `True` if the key is wide enough, i.e. `log2(slot_count!) <= source_bits - margin_bits`.

    A breach is logged under `EntropyPolicy.WARN` and raises `ENTROPY_EXHAUSTED` under `EntropyPolicy.STRICT`.
    """
    if EntropyPolicy.OFF == policy:
        return True
    threshold = key.source_bits - margin_bits
    if threshold >= 0 and math.factorial(slot_count) <= (1 << threshold):
        return True
    msg = (
        f"{slot_count} slots need {min_key_bits(slot_count, margin_bits)} key bits "
        f"(margin {margin_bits}), key source has {key.source_bits}"
    )
    if EntropyPolicy.STRICT == policy:
        raise PermHashError(ErrorCode.ENTROPY_EXHAUSTED, msg)
    logging.warning(f"Entropy guard: {msg}")
    return False


def derive_key(data: bytes, width_bits: int = 512) -> HashKey:
    """
    Derive a `width_bits`-wide key from arbitrary bytes.

    Block i is SHA-512(data || 0x00 || i as 4-byte big-endian); the blocks are concatenated and the leading
    `width_bits` bits are read as a big-endian integer.
    """
    if width_bits <= 0 or 0 != width_bits % 8:
        raise PermHashError(
            ErrorCode.WIDTH_NOT_BYTE_ALIGNED, f"width_bits must be a positive multiple of 8, got {width_bits}"
        )
    stream = expand(data, width_bits // 8)
    return HashKey(value=int.from_bytes(stream, "big"), source_bits=width_bits)


# -------------------- Mixed-radix key consumption --------------------


def iter_digits(value: int, n_digits: int) -> Iterator[Tuple[int, int]]:
    """Yields `(base, digit)` for bases 1..n_digits, least-significant digit first. The leftover quotient is dropped."""
    for base in range(1, n_digits + 1):
        value, digit = divmod(value, base)
        yield base, digit


def _slot_symbols(slots: Iterable[Optional[str]]) -> List[Symbol]:
    return [FreeMarker(i) if label is None else label for i, label in enumerate(slots)]


def _resolve(table: "NodeTable", strategy: Optional[InsertionStrategy]) -> InsertionStrategy:
    return table.strategy if strategy is None else strategy


def permute_symbols(
    table: "NodeTable",
    key: HashKey,
    strategy: Optional[InsertionStrategy] = None,
) -> Tuple[Symbol, ...]:
    """Full ordering of the table's slot symbols, free-slot markers included."""
    strategy = _resolve(table, strategy)
    if 0 == len(table.slots):
        raise PermHashError(ErrorCode.EMPTY_TABLE, "Table has no slots")
    order: List[Symbol] = []
    symbols = _slot_symbols(table.slots)
    for (base, digit), symbol in zip(iter_digits(key.value, len(symbols)), symbols):
        order.insert(strategy.insert_index(digit, base - 1), symbol)
    return tuple(order)


def permute(
    table: "NodeTable",
    key: HashKey,
    strategy: Optional[InsertionStrategy] = None,
    entropy_policy: EntropyPolicy = EntropyPolicy.WARN,
) -> Permutation:
    """
    Ordering of the live nodes of `table` selected by `key`.

    Slots are visited in table order with base 1, 2, 3, ...; each consumes the digit `key mod base` and inserts
    its symbol at the index chosen by the strategy. Free slots consume digits like occupied ones and are filtered
    out at the end.

    Args:
        table (`NodeTable`):
            Node table; must have at least one slot.
        key (`HashKey`):
            Key to consume.
        strategy (`InsertionStrategy`, *optional*):
            Overrides the strategy bound to the table.
        entropy_policy (`EntropyPolicy`, *optional*, defaults to `EntropyPolicy.WARN`):
            Behaviour when the key is too narrow for the table.
    Returns:
        `Tuple[NodeId, ...]`: live nodes, first choice first.
    """
    check_entropy(len(table.slots), key, entropy_policy)
    order = permute_symbols(table, key, strategy)
    return tuple(s for s in order if not isinstance(s, FreeMarker))


def first_simple(
    table: "NodeTable",
    key: HashKey,
    strategy: Optional[InsertionStrategy] = None,
    entropy_policy: EntropyPolicy = EntropyPolicy.WARN,
) -> NodeId:
    """Head of `permute` for tables without free slots, tracking only the current head."""
    strategy = _resolve(table, strategy)
    slots = table.slots
    if 0 == len(slots):
        raise PermHashError(ErrorCode.EMPTY_TABLE, "Table has no slots")
    if any(s is None for s in slots):
        raise PermHashError(ErrorCode.HAS_TOMBSTONES, "Single-result lookup needs a table without free slots")
    check_entropy(len(slots), key, entropy_policy)

    head = None
    for (base, digit), label in zip(iter_digits(key.value, len(slots)), slots):
        if 0 == strategy.insert_index(digit, base - 1):
            head = label
    return head


def first_live(
    table: "NodeTable",
    key: HashKey,
    strategy: Optional[InsertionStrategy] = None,
    entropy_policy: EntropyPolicy = EntropyPolicy.WARN,
) -> NodeId:
    """
    Head of `permute` without building the permutation.

    Keeps the current live head and its index in the unfiltered ordering; a free-slot marker inserted at or
    before the head only shifts that index.
    """
    strategy = _resolve(table, strategy)
    slots = table.slots
    if all(s is None for s in slots):
        raise PermHashError(ErrorCode.NO_LIVE_NODES, "Table has no live nodes")
    check_entropy(len(slots), key, entropy_policy)

    head, head_pos = None, 0
    for (base, digit), label in zip(iter_digits(key.value, len(slots)), slots):
        index = strategy.insert_index(digit, base - 1)
        if label is not None:
            if head is None or index <= head_pos:
                head, head_pos = label, index
        elif head is not None and index <= head_pos:
            head_pos += 1
    return head


def preference_list(
    table: "NodeTable",
    key: HashKey,
    count: int,
    strategy: Optional[InsertionStrategy] = None,
    skip: Iterable[str] = (),
    entropy_policy: EntropyPolicy = EntropyPolicy.WARN,
) -> Permutation:
    """
    First `count` live nodes to try for `key`, leaving out nodes in `skip` (e.g. overloaded machines).

    Returns fewer than `count` nodes when not enough candidates remain.
    """
    assert count >= 1
    skip = set(skip)
    order = permute(table, key, strategy, entropy_policy=entropy_policy)
    return tuple(n for n in order if n not in skip)[:count]
