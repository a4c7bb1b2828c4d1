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
import numpy as np
from typing import List, Optional


def resolve_seed(seed: Optional[int]) -> int:
    """
    Return `seed`, or a fresh one when it is None. The returned value is what reports record.
    """
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (1 << 63))
        logging.warning(
            f"No seed given, reproducibility is not guaranteed; using seed={seed}"
        )
    return seed


def partition_seed_sequence(seed: int, index: int) -> np.random.SeedSequence:
    """Independent stream for partition (or trial) `index`, derived from `seed` only."""
    return np.random.SeedSequence(entropy=seed, spawn_key=(index,))


def partition_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(partition_seed_sequence(seed, index))


def generate_seed_sequence(initial_seed: int, length: int) -> List[int]:
    """Integer seeds (e.g. for `random.Random`) for partitions 0..length-1."""
    seed_sequence = []
    for i in range(length):
        state = partition_seed_sequence(initial_seed, i).generate_state(2, dtype=np.uint64)
        seed_sequence.append((int(state[0]) << 64) | int(state[1]))
    return seed_sequence
