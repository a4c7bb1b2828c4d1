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

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import pytest

from permhash.membership import new_table
from permhash.permcore import InsertionStrategy
from permhash.ucycle import load_cycle

REPO_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
FOUR_NODE_CYCLE = os.path.join(REPO_ROOT, "data", "cycles", "four_node_24.json")
GREEK = ("alpha", "beta", "gamma")


@pytest.fixture
def greek_from_end():
    return new_table(GREEK, InsertionStrategy.FROM_END)


@pytest.fixture
def greek_from_start():
    return new_table(GREEK, InsertionStrategy.FROM_START)


@pytest.fixture
def four_node_cycle():
    return load_cycle(FOUR_NODE_CYCLE)


@pytest.fixture
def cycle_path():
    return FOUR_NODE_CYCLE
