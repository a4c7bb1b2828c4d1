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

import hashlib
import json
import pandas as pd
from fractions import Fraction
from typing import List

from permhash.membership import NodeTable, serialize


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def to_canonical_json(obj) -> str:
    """Compact JSON; dict keys keep insertion order, which report builders fix."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, default=_default)


def to_csv(rows: List[dict]) -> str:
    return pd.DataFrame(rows).to_csv(index=False)


def table_fingerprint(table: NodeTable) -> str:
    return hashlib.sha256(serialize(table)).hexdigest()[:16]
