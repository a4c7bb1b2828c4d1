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

from .baseline import simple_mod_hash, simple_mod_survival, survival_report  # noqa: F401
from .census import (  # noqa: F401
    CensusKind,
    CensusMode,
    CensusReport,
    RemapMatrix,
    census,
    ordering_census,
    remap_matrix,
)
from .cycle_audit import cycle_audit  # noqa: F401
from .ring_stats import RingRemapReport, ring_median_mean, ring_remap, ring_spread_stats  # noqa: F401
