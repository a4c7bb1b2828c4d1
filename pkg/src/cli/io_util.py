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
import os
import stat
import sys
import tempfile
from dataclasses import dataclass
from typing import Any, List, Optional, TextIO

from permhash.membership import NodeTable, deserialize, serialize
from permhash.ring import RingState, deserialize_ring, serialize_ring
from permhash.util.errors import ErrorCode, PermHashError
from src.util.report_util import to_canonical_json, to_csv

JSON = "json"
CSV = "csv"
OUTPUT_FORMATS = (JSON, CSV)


@dataclass
class CommandResult:
    """A command's single stdout document; `rows` is the flat form used for CSV output."""

    payload: Any
    rows: Optional[List[dict]] = None


def read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except FileNotFoundError:
        raise PermHashError(ErrorCode.USAGE, f"File not found: {path}")


def _target_mode(path: str) -> int:
    try:
        return stat.S_IMODE(os.stat(path).st_mode)
    except FileNotFoundError:
        umask = os.umask(0)
        os.umask(umask)
        return 0o666 & ~umask


def write_atomic(path: str, data: bytes) -> None:
    """
    Write to a temporary file in the target directory, then rename it over `path`.

    The file keeps the mode of the file it replaces; new files get the usual umask-derived mode.
    """
    target_dir = os.path.dirname(os.path.abspath(path))
    mode = _target_mode(path)
    fd, tmp_path = tempfile.mkstemp(prefix=".permhash-", dir=target_dir)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.chmod(tmp_path, mode)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logging.debug(f"Wrote {len(data)} bytes to {path}")


def load_table(path: str) -> NodeTable:
    return deserialize(read_bytes(path))


def save_table(table: NodeTable, path: str) -> None:
    write_atomic(path, serialize(table))


def load_ring(path: str, max_attempts: int) -> RingState:
    return deserialize_ring(read_bytes(path), max_attempts=max_attempts)


def save_ring(state: RingState, path: str) -> None:
    write_atomic(path, serialize_ring(state))


def emit(result: CommandResult, output: str = JSON, stream: TextIO = None) -> None:
    stream = sys.stdout if stream is None else stream
    if CSV == output:
        if result.rows is not None:
            stream.write(to_csv(result.rows))
            return
        logging.warning("This command has no tabular form, writing JSON")
    stream.write(to_canonical_json(result.payload) + "\n")


def emit_error(err: PermHashError, stream: TextIO = None) -> None:
    stream = sys.stderr if stream is None else stream
    stream.write(to_canonical_json(err.to_dict()) + "\n")
