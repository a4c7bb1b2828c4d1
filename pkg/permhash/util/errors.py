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

from enum import Enum
from typing import Any, Dict, Optional


class ErrorCode(Enum):
    # permcore
    EMPTY_TABLE = "EMPTY_TABLE"
    HAS_TOMBSTONES = "HAS_TOMBSTONES"
    NO_LIVE_NODES = "NO_LIVE_NODES"
    WIDTH_NOT_BYTE_ALIGNED = "WIDTH_NOT_BYTE_ALIGNED"
    ENTROPY_EXHAUSTED = "ENTROPY_EXHAUSTED"
    # membership
    DUPLICATE_NODE = "DUPLICATE_NODE"
    NODE_NOT_FOUND = "NODE_NOT_FOUND"
    PARSE_ERROR = "PARSE_ERROR"
    INVARIANT_VIOLATION = "INVARIANT_VIOLATION"
    # ring
    POINT_SPACE_EXHAUSTED = "POINT_SPACE_EXHAUSTED"
    EMPTY_RING = "EMPTY_RING"
    # ucycle
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    UNSUPPORTED_SIZE = "UNSUPPORTED_SIZE"
    NO_SURVIVORS = "NO_SURVIVORS"
    # analysis
    RANGE_TOO_LARGE = "RANGE_TOO_LARGE"
    STRATEGY_MISMATCH = "STRATEGY_MISMATCH"
    # cli
    USAGE = "USAGE"


class PermHashError(ValueError):
    """
    Domain error carrying a stable `ErrorCode`.

    Args:
        code (`ErrorCode`):
            Machine-readable error code.
        detail (`str` or `dict`, *optional*):
            Human-readable explanation, or structured context such as a parse position.
    """

    def __init__(self, code: ErrorCode, detail: Optional[Any] = None) -> None:
        self.code = code
        self.detail = detail
        super().__init__(f"{code.value}: {detail}" if detail is not None else code.value)

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code.value, "detail": self.detail}
