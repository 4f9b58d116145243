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
Counting statistics of shifted primes.

T_c(x) counts primes p <= x whose shifted value p - 1 has a prime factor
of size at least p^c; T'_c(x) uses the fixed threshold x^c instead. Both are
computed in one streaming pass over largest-prime-factor segments, and
T'_c(x) is cross-checked by the independent pair sum over p - 1 = qh.
"""

# Standard imports
import math
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, List, Optional, Sequence, Tuple

# 3rd party imports
import gmpy2
import numpy as np
from typing_extensions import Self

# Package imports
from .config import SieveConfig
from .exceptions import BudgetError, PreconditionError
from .segment_cache import SegmentCache
from .sieve_core import PrimeTable, is_prime_in, lpf_segment, primes_up_to, segment_bounds

logger = logging.getLogger(__name__)

# Relative width of the band in which float log comparisons are not trusted
_LOG_GUARD = 1e-9


@dataclass(frozen=True)
class Exponent:
    """An exact exponent c = num/den with 0 < c < 1, stored in lowest terms."""
    num: int
    den: int

    def __post_init__(self):
        if not 0 < self.num < self.den:
            raise PreconditionError(f"exponent must satisfy 0 < c < 1, got {self.num}/{self.den}")
        if gcd(self.num, self.den) != 1:
            raise PreconditionError(f"exponent {self.num}/{self.den} is not in lowest terms")

    @classmethod
    def from_fraction(cls, value: Fraction) -> Self:
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str, max_den: int = 1000) -> Self:
        """
        Parse a decimal ("0.89") or a ratio ("16/17") into an exact exponent.

        Decimals are read exactly, so k decimals give a denominator dividing 10^k.

        Raises:
            PreconditionError: If the text is not a number in (0, 1) or needs
                a denominator above max_den
        """
        try:
            value = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise PreconditionError(f"cannot read exponent {text!r}: {e}")
        if value.denominator > max_den:
            raise PreconditionError(
                f"exponent {text!r} needs denominator {value.denominator} > {max_den}"
            )
        return cls.from_fraction(value)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def exponent_grid(start: str, stop: str, step: str, max_den: int = 1000) -> List[Exponent]:
    """
    Expand a decimal grid start:stop:step into exact exponents.

    The stop value is included when the grid lands on it exactly.
    """
    first = Exponent.parse(start, max_den).fraction
    last = Exponent.parse(stop, max_den).fraction
    try:
        delta = Fraction(step.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise PreconditionError(f"cannot read grid step {step!r}: {e}")
    if delta <= 0:
        raise PreconditionError(f"grid step must be positive, got {step!r}")
    if last < first:
        raise PreconditionError(f"grid stop {stop} lies below start {start}")
    grid = []
    value = first
    while value <= last:
        grid.append(Exponent.parse(str(value), max_den))
        value += delta
    return grid


@dataclass
class DensityRow:
    c: Exponent
    t_c: int
    t_prime_c: int
    pi_x: int
    ratio_t: float
    ratio_t_prime: float
    lemma2_gap_normalized: float


@dataclass
class DensityScan:
    """Per-exponent counts of T_c(x), T'_c(x) and pi(x) at one x."""
    x: int
    rows: List[DensityRow] = field(default_factory=list)

    def row_for(self, c: Exponent) -> DensityRow:
        for row in self.rows:
            if row.c == c:
                return row
        raise KeyError(f"exponent {c} not in scan")


def holds_threshold(q: int, p: int, c: Exponent) -> bool:
    """
    Decide q >= p^c exactly by comparing q^den >= p^num in big integers.

    Ties satisfy the condition.
    """
    return gmpy2.mpz(q) ** c.den >= gmpy2.mpz(p) ** c.num


def threshold_root(x: int, c: Exponent) -> int:
    """Smallest integer q with q >= x^c, i.e. q^den >= x^num."""
    root, exact = gmpy2.iroot(gmpy2.mpz(x) ** c.num, c.den)
    return int(root) if exact else int(root) + 1


def _count_at_least_power(q: np.ndarray, p: np.ndarray, c: Exponent) -> int:
    """
    Count pairs with q >= p^c.

    Pairs whose float log comparison is clear-cut are decided in bulk; the
    rest are decided by holds_threshold.
    """
    if q.size == 0:
        return 0
    lq = c.den * np.log(q.astype(np.float64))
    lp = c.num * np.log(p.astype(np.float64))
    diff = lq - lp
    band = _LOG_GUARD * (lq + lp + 1.0)
    count = int(np.count_nonzero(diff > band))
    unsure = np.flatnonzero(np.abs(diff) <= band)
    for i in unsure.tolist():
        if holds_threshold(int(q[i]), int(p[i]), c):
            count += 1
    return count


def _scan_segment(
    lo: int,
    hi: int,
    base: PrimeTable,
    grid: Sequence[Exponent],
    thresholds: Sequence[int],
    config: SieveConfig,
) -> Tuple[int, List[int], List[int]]:
    """
    Counts over shifted values n = p - 1 in [lo, hi).

    Returns:
        Tuple of (primes found, T_c counts per grid entry, T'_c counts per grid entry)
    """
    cache = SegmentCache.from_dir(config.cache_dir)
    # One extra integer so that primality of n + 1 = hi is visible
    segment = lpf_segment(lo, hi + 1, base, cache=cache, config=config)
    shifted = np.arange(lo, hi, dtype=np.uint64)
    candidates = shifted + np.uint64(1)
    is_prime = segment.lpf[1:] == candidates
    primes = candidates[is_prime]
    largest = segment.lpf[:-1][is_prime]

    t_counts = []
    t_prime_counts = []
    for c, threshold in zip(grid, thresholds):
        t_counts.append(_count_at_least_power(largest, primes, c))
        if threshold >= 1 << 64:
            t_prime_counts.append(0)
        else:
            t_prime_counts.append(int(np.count_nonzero(largest >= np.uint64(threshold))))
    logger.debug(f"Segment [{lo}, {hi}): {primes.size} primes")
    return int(primes.size), t_counts, t_prime_counts


def _threshold_gap(t_c: int, t_prime_c: int, x: int) -> float:
    log_x = math.log(x)
    return (t_c - t_prime_c) * log_x * log_x / (x * math.log(log_x))


def check_x(x: int, config: SieveConfig) -> None:
    """Reject x above the configured cap unless large runs are allowed."""
    if x > config.x_cap and not config.allow_large:
        raise BudgetError(
            f"x={x} exceeds the configured cap {config.x_cap}; pass allow_large to override",
            cap=config.x_cap,
        )


def scan_tc(
    x: int,
    grid: Iterable[Exponent],
    config: Optional[SieveConfig] = None,
) -> DensityScan:
    """
    Compute T_c(x), T'_c(x) and pi(x) for every exponent in the grid.

    One pass over LPF segments of the shifted values n = p - 1 in [1, x).
    Segments are farmed out to worker processes; their count vectors are
    summed in segment order, so the result does not depend on the worker count.

    Args:
        x: Upper limit for p, at least 100
        grid: Exponents to evaluate
        config: Sieve budgets and worker count

    Returns:
        DensityScan: One row per distinct exponent, sorted by c

    Raises:
        PreconditionError: On x < 100 or an empty grid
        BudgetError: If x exceeds the configured cap
    """
    config = config or SieveConfig()
    grid = sorted(set(grid), key=lambda c: c.fraction)
    if x < 100:
        raise PreconditionError(f"scan_tc needs x >= 100, got {x}")
    if not grid:
        raise PreconditionError("scan_tc needs a nonempty exponent grid")
    check_x(x, config)

    base = primes_up_to(max(2, isqrt(x)), config)
    thresholds = [threshold_root(x, c) for c in grid]
    width = min(config.segment_size, config.max_segment_size - 1)
    bounds = list(segment_bounds(1, x, width))
    workers = min(config.workers, len(bounds))
    logger.info(f"Scanning x={x} over {len(bounds)} segments with {workers} worker(s)")

    args = [(lo, hi, base, grid, thresholds, config) for lo, hi in bounds]
    if workers <= 1:
        results = [_scan_segment(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_segment, *zip(*args)))

    pi_x = sum(r[0] for r in results)
    t_totals = [sum(r[1][i] for r in results) for i in range(len(grid))]
    t_prime_totals = [sum(r[2][i] for r in results) for i in range(len(grid))]

    scan = DensityScan(x=x)
    for c, t_c, t_prime_c in zip(grid, t_totals, t_prime_totals):
        scan.rows.append(DensityRow(
            c=c,
            t_c=t_c,
            t_prime_c=t_prime_c,
            pi_x=pi_x,
            ratio_t=t_c / pi_x,
            ratio_t_prime=t_prime_c / pi_x,
            lemma2_gap_normalized=_threshold_gap(t_c, t_prime_c, x),
        ))
    logger.info(f"Scan of x={x} finished: pi(x)={pi_x}")
    return scan


def _require_table(table: Optional[PrimeTable], limit: int, config: Optional[SieveConfig]) -> PrimeTable:
    if table is None:
        return primes_up_to(max(2, limit), config)
    if table.limit < limit:
        raise PreconditionError(f"prime table reaches {table.limit}, need {limit}")
    return table


def tprime_via_pairs(
    x: int,
    c: Exponent,
    table: Optional[PrimeTable] = None,
    config: Optional[SieveConfig] = None,
) -> int:
    """
    T'_c(x) as the pair sum over p - 1 = qh.

    Sums, over primes q with x^c <= q < x, the number of h >= 1 with
    qh + 1 <= x prime. For c >= 1/2 the shifted value p - 1 <= x - 1 has at
    most one prime factor >= x^c, so the sum counts each p once.

    Raises:
        PreconditionError: If c < 1/2
    """
    if c.fraction < Fraction(1, 2):
        raise PreconditionError(f"pair identity needs c >= 1/2, got {c}")
    table = _require_table(table, x, config)
    low = threshold_root(x, c)
    if low > x - 1:
        return 0

    primes = table.primes[: int(np.searchsorted(table.primes, np.uint64(x), side="right"))]
    qs = primes[(primes >= np.uint64(low)) & (primes < np.uint64(x))]
    total = 0
    h = 1
    while qs.size:
        q_max = (x - 1) // h
        stop = int(np.searchsorted(qs, np.uint64(q_max), side="right"))
        if stop == 0:
            break
        total += int(np.count_nonzero(is_prime_in(qs[:stop] * np.uint64(h) + np.uint64(1), table)))
        h += 1
    return total


def prime_pair_count(
    h: int,
    y: int,
    table: Optional[PrimeTable] = None,
    config: Optional[SieveConfig] = None,
) -> int:
    """
    Number of primes q with 2 < q < y and qh + 1 prime.

    Args:
        h: Even multiplier, at least 2
        y: Exclusive bound on q
        table: Optional prime table reaching h * (y - 1) + 1

    Raises:
        PreconditionError: If h is odd or below 2
    """
    if h < 2 or h % 2:
        raise PreconditionError(f"h must be even and >= 2, got {h}")
    if y <= 3:
        return 0
    table = _require_table(table, h * (y - 1) + 1, config)
    stop = int(np.searchsorted(table.primes, np.uint64(y), side="left"))
    qs = table.primes[:stop]
    qs = qs[qs > np.uint64(2)]
    return int(np.count_nonzero(is_prime_in(qs * np.uint64(h) + np.uint64(1), table)))
