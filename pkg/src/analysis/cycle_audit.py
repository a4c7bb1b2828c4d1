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
from itertools import combinations, permutations
from typing import Iterable, Sequence

from permhash.ucycle import count_symbols, substitute_removed, substitute_sequential, successor_counts, verify_cycle


def cycle_audit(symbols: Sequence[str], node_set: Iterable[str], all_orders: bool = True) -> dict:
    """
    Verify a cycle and replay every proper removal subset against it.

    For each subset the report holds the survivor histogram, whether the survivors tie, and whether removing
    the nodes one at a time (in every order when `all_orders`, else in `node_set` order) gives the same
    sequence as removing the whole set at once.
    """
    node_set = tuple(dict.fromkeys(node_set))
    verification = verify_cycle(symbols, node_set)
    pairs = successor_counts(symbols) if len(symbols) > 0 else {}

    subsets = []
    for size in range(1, len(node_set)):
        for removed in combinations(node_set, size):
            at_once = substitute_removed(symbols, removed)
            histogram = count_symbols(at_once)
            orders = permutations(removed) if all_orders else [removed]
            agree = all(substitute_sequential(symbols, order) == at_once for order in orders)
            subsets.append(
                {
                    "removed": list(removed),
                    "histogram": histogram,
                    "equal": 1 == len(set(histogram.values())),
                    "sequential_agrees": agree,
                }
            )

    report = {
        "verification": verification.to_dict(),
        "histogram": count_symbols(symbols),
        "successors_equal": 1 >= len(set(pairs.values())),
        "subsets": subsets,
        "all_equal": all(s["equal"] for s in subsets),
        "all_agree": all(s["sequential_agrees"] for s in subsets),
    }
    logging.debug(f"Cycle audit over {len(subsets)} removal subsets: equal={report['all_equal']}")
    return report
