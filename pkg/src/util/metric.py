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

import pandas as pd

Z_95 = 1.959963984540054


class MetricTracker:
    """Collects per-trial samples and summarises them as mean, standard error and a 95% interval."""

    def __init__(self, *keys):
        self.keys = keys
        self._samples = {k: [] for k in self.keys}

    def update(self, key, value):
        self._samples[key].append(float(value))

    def data(self) -> pd.DataFrame:
        return pd.DataFrame(self._samples, columns=list(self.keys))

    def result(self) -> dict:
        df = self.data()
        mean = df.mean()
        # single sample has no spread estimate
        sem = df.sem(ddof=1) if len(df) > 1 else pd.Series(0.0, index=df.columns)
        out = {}
        for k in self.keys:
            m, s = float(mean[k]), float(sem[k])
            out[k] = {
                "mean": m,
                "sem": s,
                "ci95": [m - Z_95 * s, m + Z_95 * s],
                "n": int(df[k].count()),
            }
        return out
