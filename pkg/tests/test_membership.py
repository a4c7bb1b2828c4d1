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

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permhash.membership import (
    FREE,
    NodeTable,
    add,
    deserialize,
    live_count,
    live_nodes,
    new_table,
    remove,
    serialize,
    slot_count,
)
from permhash.permcore import InsertionStrategy
from permhash.util.errors import ErrorCode, PermHashError


def test_new_table(greek_from_end):
    assert ("alpha", "beta", "gamma") == greek_from_end.slots
    assert InsertionStrategy.FROM_END == greek_from_end.strategy
    assert 3 == slot_count(greek_from_end) == live_count(greek_from_end)
    assert "beta" in greek_from_end
    assert FREE not in greek_from_end


def test_new_table_duplicate():
    with pytest.raises(PermHashError) as e:
        new_table(["alpha", "beta", "alpha"])
    assert ErrorCode.DUPLICATE_NODE == e.value.code


def test_remove_leaves_free_slot(greek_from_end):
    table = remove(greek_from_end, "beta")
    assert ("alpha", FREE, "gamma") == table.slots
    assert ("alpha", "gamma") == live_nodes(table)
    assert 3 == slot_count(table)


def test_add_fills_free_slot(greek_from_end):
    table = add(remove(greek_from_end, "beta"), "delta")
    assert ("alpha", "delta", "gamma") == table.slots


def test_add_fills_lowest_free_slot():
    table = NodeTable(slots=(FREE, "beta", FREE, "delta"))
    assert ("epsilon", "beta", FREE, "delta") == add(table, "epsilon").slots


def test_add_appends(greek_from_end):
    table = add(greek_from_end, "delta")
    assert ("alpha", "beta", "gamma", "delta") == table.slots
    assert InsertionStrategy.FROM_END == table.strategy


def test_remove_trims_trailing_free_slots():
    table = NodeTable(slots=("alpha", FREE, FREE, "delta"))
    assert ("alpha",) == remove(table, "delta").slots
    assert () == remove(new_table(["solo"]), "solo").slots


def test_membership_errors(greek_from_end):
    with pytest.raises(PermHashError) as e:
        add(greek_from_end, "beta")
    assert ErrorCode.DUPLICATE_NODE == e.value.code
    with pytest.raises(PermHashError) as e:
        remove(greek_from_end, "delta")
    assert ErrorCode.NODE_NOT_FOUND == e.value.code


@pytest.mark.parametrize(
    "slots",
    [("alpha", FREE), ("alpha", "alpha"), ("alpha", ""), (FREE,)],
)
def test_table_invariants(slots):
    with pytest.raises(PermHashError) as e:
        NodeTable(slots=slots)
    assert ErrorCode.INVARIANT_VIOLATION == e.value.code


# ------ Persistence ------


def test_serialize_canonical(greek_from_end):
    table = remove(greek_from_end, "beta")
    assert b'{"version":1,"strategy":"from_end","slots":["alpha",null,"gamma"]}' == serialize(table)
    assert table == deserialize(serialize(table))


def test_serialize_utf8():
    table = new_table(["α", "β"])
    data = serialize(table)
    assert "α".encode("utf-8") in data
    assert table == deserialize(data)


def test_deserialize_whitespace():
    text = b'{\n  "version": 1,\n  "strategy": "from_start",\n  "slots": ["a", null, "c"]\n}'
    assert ("a", FREE, "c") == deserialize(text).slots


def test_deserialize_bad_json():
    with pytest.raises(PermHashError) as e:
        deserialize(b'{"version": 1,')
    assert ErrorCode.PARSE_ERROR == e.value.code
    assert {"position", "line", "column", "msg"} <= set(e.value.detail)


@pytest.mark.parametrize(
    "data, path",
    [
        (b"[]", "$"),
        (b'{"strategy":"from_end","slots":[]}', "$.version"),
        (b'{"version":2,"strategy":"from_end","slots":[]}', "$.version"),
        (b'{"version":1,"slots":[]}', "$.strategy"),
        (b'{"version":1,"strategy":"from_end","slots":{}}', "$.slots"),
        (b'{"version":1,"strategy":"from_end","slots":["a",3]}', "$.slots[1]"),
    ],
)
def test_deserialize_schema(data, path):
    with pytest.raises(PermHashError) as e:
        deserialize(data)
    assert ErrorCode.PARSE_ERROR == e.value.code
    assert path == e.value.detail["path"]


def test_deserialize_bad_strategy():
    with pytest.raises(PermHashError) as e:
        deserialize(b'{"version":1,"strategy":"sideways","slots":["a"]}')
    assert ErrorCode.PARSE_ERROR == e.value.code


def test_deserialize_invariant():
    with pytest.raises(PermHashError) as e:
        deserialize(b'{"version":1,"strategy":"from_end","slots":["a",null]}')
    assert ErrorCode.INVARIANT_VIOLATION == e.value.code


# ------ Add/remove sequences ------

LABELS = [f"n{i}" for i in range(8)]


@given(ops=st.lists(st.tuples(st.booleans(), st.sampled_from(LABELS)), max_size=40))
def test_add_remove_sequences(ops):
    table = new_table([], InsertionStrategy.FROM_END)
    live = set()
    for is_add, label in ops:
        before = table.slots
        if is_add and label not in live:
            table = add(table, label)
            live.add(label)
        elif not is_add and label in live:
            table = remove(table, label)
            live.discard(label)
            # survivors keep their slot index
            for i, s in enumerate(table.slots):
                if s is not FREE:
                    assert before[i] == s
        assert set(live_nodes(table)) == live
        assert 0 == len(table.slots) or table.slots[-1] is not FREE
        assert table == deserialize(serialize(table))
