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

from .membership import (  # noqa: F401
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
from .permcore import (  # noqa: F401
    EntropyPolicy,
    HashKey,
    InsertionStrategy,
    capacity,
    check_entropy,
    derive_key,
    first_live,
    first_simple,
    get_strategy,
    min_key_bits,
    permute,
    preference_list,
    reachable_fraction,
)
from .ring import (  # noqa: F401
    RingConfig,
    RingState,
    deserialize_ring,
    new_ring,
    ring_add,
    ring_lookup,
    ring_remove,
    serialize_ring,
)
from .ucycle import (  # noqa: F401
    Cycle,
    build_cycle,
    cycle_lookup,
    load_cycle,
    substitute_removed,
    verify_cycle,
)
from .util.errors import ErrorCode, PermHashError  # noqa: F401

__version__ = "0.1.0"
