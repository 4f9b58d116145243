# Copyright 2025 Jozsef Szalma

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


# Standard imports
import os
import struct
import logging
from pathlib import Path
from typing import Optional, Union

# 3rd party imports
import numpy as np

# Package imports
from .exceptions import CacheFormatError
from .sieve_core import LpfSegment

logger = logging.getLogger(__name__)

MAGIC = b"SPLF"
VERSION = 0x01
# magic, version byte, lo, hi
HEADER = struct.Struct("<4sBQQ")
VALUE_DTYPE = np.dtype("<u8")


def write_segment_file(path: Union[str, Path], segment: LpfSegment) -> None:
    """Serialize a segment: header followed by (hi - lo) little-endian uint64 values."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, segment.lo, segment.hi))
        fh.write(segment.lpf.astype(VALUE_DTYPE, copy=False).tobytes())
    os.replace(tmp, path)


def read_segment_file(path: Union[str, Path]) -> LpfSegment:
    """
    Parse a segment file written by write_segment_file.

    Raises:
        CacheFormatError: On a bad magic, unknown version or truncated payload
    """
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise CacheFormatError(f"{path}: truncated header")
    magic, version, lo, hi = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if hi <= lo:
        raise CacheFormatError(f"{path}: empty interval [{lo}, {hi})")
    expected = HEADER.size + (hi - lo) * VALUE_DTYPE.itemsize
    if len(data) != expected:
        raise CacheFormatError(f"{path}: expected {expected} bytes, found {len(data)}")
    lpf = np.frombuffer(data, dtype=VALUE_DTYPE, offset=HEADER.size).astype(np.uint64)
    return LpfSegment(lo=lo, hi=hi, lpf=lpf)


class SegmentCache:
    """
    Directory of LPF segment files keyed by their interval.

    The cache only saves recomputation; a missing or damaged file is
    treated as a miss.
    """

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path_for(self, lo: int, hi: int) -> Path:
        return self.directory / f"lpf_{lo}_{hi}.splf"

    def load(self, lo: int, hi: int) -> Optional[LpfSegment]:
        path = self.path_for(lo, hi)
        if not path.exists():
            self.misses += 1
            return None
        try:
            segment = read_segment_file(path)
        except CacheFormatError as e:
            logger.warning(f"Ignoring damaged cache file: {e}")
            self.misses += 1
            return None
        if (segment.lo, segment.hi) != (lo, hi):
            logger.warning(f"Cache file {path} holds [{segment.lo}, {segment.hi}), ignoring")
            self.misses += 1
            return None
        self.hits += 1
        return segment

    def store(self, segment: LpfSegment) -> None:
        try:
            write_segment_file(self.path_for(segment.lo, segment.hi), segment)
        except OSError as e:
            logger.warning(f"Could not write cache segment [{segment.lo}, {segment.hi}): {e}")

    @classmethod
    def from_dir(cls, directory: Optional[str]) -> Optional["SegmentCache"]:
        """Build a cache when a directory is configured, else None."""
        return cls(directory) if directory else None
