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
import struct

SHA512_BYTES = 64
SEPARATOR = b"\x00"


def counter_block(data: bytes, counter: int) -> bytes:
    """SHA-512 of `data || 0x00 || counter` with the counter as 4-byte big-endian."""
    return hashlib.sha512(data + SEPARATOR + struct.pack(">I", counter)).digest()


def expand(data: bytes, n_bytes: int) -> bytes:
    """
    Counter-mode expansion of `data` into `n_bytes` bytes.

    Block i is `counter_block(data, i)`; blocks are concatenated and the stream is cut to length.
    """
    assert n_bytes >= 0
    n_blocks = -(-n_bytes // SHA512_BYTES)
    stream = b"".join(counter_block(data, i) for i in range(n_blocks))
    return stream[:n_bytes]


def leading_bits(digest: bytes, n_bits: int) -> int:
    """Big-endian integer formed by the first `n_bits` bits of `digest`."""
    assert 0 < n_bits <= len(digest) * 8
    value = int.from_bytes(digest, "big")
    return value >> (len(digest) * 8 - n_bits)
