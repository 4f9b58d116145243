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


"""
Segmented sieves over 64-bit integers.

Provides the ordered prime table behind pi(x), largest-prime-factor values
over arbitrary intervals [lo, hi), and a smallest-prime-factor table for
exact factorisation of small integers.
"""

# Standard imports
import logging
from dataclasses import dataclass
from math import isqrt
from typing import TYPE_CHECKING, Iterator, List, Optional, Tuple

# 3rd party imports
import numpy as np

# Package imports
from .config import SieveConfig
from .exceptions import BudgetError, OutOfRangeError, PreconditionError

if TYPE_CHECKING:
    from .segment_cache import SegmentCache

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to `limit`, ascending, as a uint64 array."""
    limit: int
    primes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.primes.size)

    def __len__(self) -> int:
        return self.count


@dataclass(frozen=True)
class LpfSegment:
    """
    Largest prime factors over the interval [lo, hi).

    lpf[n - lo] = P+(n), with P+(1) = 1.
    """
    lo: int
    hi: int
    lpf: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo

    def value(self, n: int) -> int:
        """Return P+(n) for a single n inside the segment."""
        if not self.lo <= n < self.hi:
            raise OutOfRangeError(f"{n} outside segment [{self.lo}, {self.hi})")
        return int(self.lpf[n - self.lo])


def _small_primes(limit: int) -> np.ndarray:
    """Plain Eratosthenes up to `limit`, used for base primes."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def segment_bounds(lo: int, hi: int, size: int) -> Iterator[Tuple[int, int]]:
    """Split [lo, hi) into consecutive half-open pieces of at most `size` integers."""
    start = lo
    while start < hi:
        stop = min(start + size, hi)
        yield start, stop
        start = stop


def primes_up_to(n: int, config: Optional[SieveConfig] = None) -> PrimeTable:
    """
    Generate every prime <= n with an odd-only segmented sieve.

    Args:
        n: Inclusive upper limit, at least 2
        config: Sieve budgets; defaults apply when omitted

    Returns:
        PrimeTable: The primes up to n

    Raises:
        PreconditionError: If n < 2
        BudgetError: If n exceeds the configured prime-table cap
    """
    config = config or SieveConfig()
    if n < 2:
        raise PreconditionError(f"primes_up_to needs n >= 2, got {n}")
    if n > config.max_prime_limit:
        raise BudgetError(
            f"prime table limit {n} exceeds the configured cap {config.max_prime_limit}",
            cap=config.max_prime_limit,
        )

    base = _small_primes(isqrt(n)).tolist()
    odd_base = [p for p in base if p != 2]
    chunks: List[np.ndarray] = [np.array([2], dtype=np.uint64)]

    # Each segment holds segment_size/2 odd candidates; index i <-> low + 2i
    span = 2 * max(1, config.segment_size // 2)
    low = 3
    while low <= n:
        high = min(low + span, n + 1)
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in odd_base:
            p2 = p * p
            if p2 >= high:
                break
            start = max(p2, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2::p] = False
        chunks.append((low + 2 * np.flatnonzero(mask)).astype(np.uint64))
        low = high if high % 2 == 1 else high + 1

    primes = np.concatenate(chunks)
    logger.debug(f"Sieved {primes.size} primes up to {n}")
    return PrimeTable(limit=n, primes=primes)


def pi(x: int, table: PrimeTable) -> int:
    """
    Count primes <= x by binary search on the table.

    Raises:
        OutOfRangeError: If x lies beyond the table limit
    """
    if x > table.limit:
        raise OutOfRangeError(f"pi({x}) requested but table only reaches {table.limit}")
    if x < 2:
        return 0
    return int(np.searchsorted(table.primes, np.uint64(x), side="right"))


def is_prime_in(values: np.ndarray, table: PrimeTable) -> np.ndarray:
    """Vectorised membership of `values` (all <= table.limit) in the prime table."""
    values = np.asarray(values, dtype=np.uint64)
    if table.count == 0 or values.size == 0:
        return np.zeros(values.shape, dtype=bool)
    idx = np.searchsorted(table.primes, values)
    idx = np.minimum(idx, table.count - 1)
    return table.primes[idx] == values


def lpf_segment(
    lo: int,
    hi: int,
    base: PrimeTable,
    cache: Optional["SegmentCache"] = None,
    config: Optional[SieveConfig] = None,
) -> LpfSegment:
    """
    Largest prime factor of every integer in [lo, hi).

    Every base prime p <= sqrt(hi - 1) is divided out of its multiples as
    often as it occurs, recording p as the running maximum; whatever residual
    is left above 1 is a prime larger than sqrt(hi - 1) and therefore P+(n).

    Args:
        lo: Inclusive start, at least 1
        hi: Exclusive end, greater than lo
        base: Prime table reaching at least floor(sqrt(hi - 1))
        cache: Optional on-disk segment cache
        config: Sieve budgets; defaults apply when omitted

    Returns:
        LpfSegment: P+(n) for n in [lo, hi)

    Raises:
        PreconditionError: On an empty interval, lo = 0 or a short base table
        BudgetError: If the interval is wider than the segment cap
    """
    config = config or SieveConfig()
    if lo < 1:
        raise PreconditionError(f"P+ is defined on positive integers only, got lo={lo}")
    if hi <= lo:
        raise PreconditionError(f"empty interval [{lo}, {hi})")
    size = hi - lo
    if size > config.max_segment_size:
        raise BudgetError(
            f"segment width {size} exceeds the configured cap {config.max_segment_size}; "
            f"use a segment size of at most {config.max_segment_size}",
            cap=config.max_segment_size,
        )
    root = isqrt(hi - 1)
    if base.limit < root:
        raise PreconditionError(
            f"base table reaches {base.limit} but segment [{lo}, {hi}) needs primes up to {root}"
        )

    if cache is not None:
        cached = cache.load(lo, hi)
        if cached is not None:
            return cached

    residual = np.arange(lo, hi, dtype=np.uint64)
    lpf = np.ones(size, dtype=np.uint64)
    stop = int(np.searchsorted(base.primes, np.uint64(root), side="right"))
    for p in base.primes[:stop].tolist():
        offset = (-lo) % p
        if offset >= size:
            continue
        lpf[offset::p] = p
        divisor = np.uint64(p)
        pk = p
        while pk < hi:
            offset = (-lo) % pk
            if offset >= size:
                break
            residual[offset::pk] //= divisor
            pk *= p

    large = residual > 1
    lpf[large] = residual[large]

    segment = LpfSegment(lo=lo, hi=hi, lpf=lpf)
    if cache is not None:
        cache.store(segment)
    return segment


def lpf_table(n: int, config: Optional[SieveConfig] = None) -> LpfSegment:
    """P+(k) for every k in [1, n], as a single segment."""
    if n < 1:
        raise PreconditionError(f"lpf_table needs n >= 1, got {n}")
    base = primes_up_to(max(2, isqrt(n)), config)
    return lpf_segment(1, n + 1, base, config=config)


def smallest_prime_factors(n: int) -> np.ndarray:
    """
    Smallest prime factor of every integer up to n.

    spf[0] = 0, spf[1] = 1 and spf[p] = p for primes.
    """
    if n < 1:
        raise PreconditionError(f"smallest_prime_factors needs n >= 1, got {n}")
    dtype = np.uint32 if n < (1 << 32) else np.uint64
    spf = np.arange(n + 1, dtype=dtype)
    # Descending order leaves the smallest prime written last
    for p in reversed(_small_primes(isqrt(n)).tolist()):
        spf[p * p::p] = p
    return spf


def factor_distinct(n: int, spf: np.ndarray) -> List[int]:
    """Distinct prime factors of n in ascending order, read off an SPF table."""
    if n < 1 or n >= spf.size:
        raise OutOfRangeError(f"{n} outside the SPF table range [1, {spf.size})")
    factors: List[int] = []
    while n > 1:
        p = int(spf[n])
        factors.append(p)
        while n % p == 0:
            n //= p
    return factors
