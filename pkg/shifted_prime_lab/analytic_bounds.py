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
Closed-form and sieve-side quantities behind the upper bound 8(1/c - 1).

Covers the singular series, the weighted harmonic sum S(z), the main term of
the two-form sieve bound for pairs (q, qh + 1), its sum over even h, the
partial-summation integral with its closed form, and the bound itself.
"""

# Standard imports
import math
import logging
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, Union

# 3rd party imports
import gmpy2
import numpy as np
from scipy.integrate import quad

# Package imports
from .config import SieveConfig
from .dickman import RhoSolver
from .exceptions import BudgetError, DomainError, PreconditionError, ToleranceError
from .shifted_stats import DensityRow, Exponent
from .sieve_core import PrimeTable, factor_distinct, primes_up_to, smallest_prime_factors

logger = logging.getLogger(__name__)

ExponentLike = Union[Exponent, Fraction, float]

QUADRATURE_TOL = 1e-12


@dataclass(frozen=True)
class SingularSeriesValue:
    """
    Truncated product over odd primes p <= cutoff of (1 - 1/(p - 1)^2).

    tail_bound bounds the relative error against the infinite product.
    """
    value: float
    cutoff: int
    tail_bound: float


@dataclass
class BoundReport:
    x: int
    c: Exponent
    empirical_ratio: float
    eh_prediction: float
    theorem_bound: float
    closed_form_limit: float
    sieve_rhs_normalized: Optional[float] = None
    lower_bound: Optional[float] = None
    informative: bool = True

    @property
    def eh_deviation(self) -> float:
        """Distance between the empirical ratio and 1 - rho(1/c)."""
        return abs(self.empirical_ratio - self.eh_prediction)

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["eh_deviation"] = self.eh_deviation
        data["c"] = str(self.c)
        data["c_num"] = self.c.num
        data["c_den"] = self.c.den
        return data


def _as_fraction(c: ExponentLike) -> Fraction:
    if isinstance(c, Exponent):
        return c.fraction
    return Fraction(c)


def singular_series(
    cutoff: int,
    table: Optional[PrimeTable] = None,
    config: Optional[SieveConfig] = None,
) -> SingularSeriesValue:
    """
    Product over odd primes p <= cutoff of (1 - 1/(p - 1)^2), summed in log space.

    The omitted tail satisfies sum_{p > P} 1/(p - 1)^2 < 1/(P - 1) for the
    largest included prime P, which is reported as the relative tail bound.

    Raises:
        PreconditionError: If cutoff < 3
    """
    if cutoff < 3:
        raise PreconditionError(f"singular series needs cutoff >= 3, got {cutoff}")
    if table is None or table.limit < cutoff:
        table = primes_up_to(cutoff, config)
    stop = int(np.searchsorted(table.primes, np.uint64(cutoff), side="right"))
    odd = table.primes[1:stop].astype(np.float64)
    log_value = float(np.sum(np.log1p(-1.0 / (odd - 1.0) ** 2)))
    largest = int(table.primes[stop - 1])
    value = math.exp(log_value)
    logger.debug(f"Singular series up to {largest}: {value:.12f}")
    return SingularSeriesValue(value=value, cutoff=largest, tail_bound=1.0 / (largest - 1))


def _multiplicative_table(limit: int, factor: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """
    out[n] = prod over distinct primes p | n of factor(p), for n in [0, limit].

    Each n is factored by repeatedly reading its smallest prime factor.
    """
    spf = smallest_prime_factors(max(limit, 1)).astype(np.int64)
    residual = np.arange(limit + 1, dtype=np.int64)
    residual[0] = 1
    out = np.ones(limit + 1)
    while True:
        active = np.flatnonzero(residual > 1)
        if active.size == 0:
            break
        r = residual[active]
        p = spf[r]
        out[active] *= factor(p)
        r //= p
        again = r % p == 0
        while again.any():
            r[again] //= p[again]
            again = r % p == 0
        residual[active] = r
    return out


def singular_weights(limit: int) -> np.ndarray:
    """prod over odd primes p | h of (1 + 1/(p - 2)), for every h in [0, limit]."""
    return _multiplicative_table(
        limit, lambda p: np.where(p > 2, (p - 1) / np.maximum(p - 2, 1), 1.0)
    )


def relaxed_weights(limit: int) -> np.ndarray:
    """2 * prod over odd primes p | h of (1 + 1/p), for every h in [0, limit]."""
    return 2.0 * _multiplicative_table(limit, lambda p: np.where(p > 2, (p + 1) / p, 1.0))


def singular_weight(h: int, spf: Optional[np.ndarray] = None) -> Fraction:
    """Exact prod over odd primes p | h of (1 + 1/(p - 2)); 1 when h has no odd prime factor."""
    if h < 1:
        raise DomainError(f"weight needs h >= 1, got {h}")
    spf = spf if spf is not None and spf.size > h else smallest_prime_factors(h)
    weight = Fraction(1)
    for p in factor_distinct(h, spf):
        if p > 2:
            weight *= Fraction(p - 1, p - 2)
    return weight


def relaxed_weight(h: int, spf: Optional[np.ndarray] = None) -> Fraction:
    """Exact 2 * prod over odd primes p | h of (1 + 1/p)."""
    if h < 1:
        raise DomainError(f"weight needs h >= 1, got {h}")
    spf = spf if spf is not None and spf.size > h else smallest_prime_factors(h)
    weight = Fraction(2)
    for p in factor_distinct(h, spf):
        if p > 2:
            weight *= Fraction(p + 1, p)
    return weight


def weight_comparison_holds(h: int, spf: Optional[np.ndarray] = None) -> bool:
    """Whether prod(1 + 1/(p - 2)) <= 2 prod(1 + 1/p) over the odd primes dividing h."""
    return singular_weight(h, spf) <= relaxed_weight(h, spf)


def _last_h(z: float) -> int:
    """Largest integer h with h < z."""
    return math.ceil(z) - 1


def s_of_z(z: float, config: Optional[SieveConfig] = None) -> float:
    """
    S(z) = sum over even h < z of singular_weight(h)/h; S(z) = 0 for 1 <= z < 2.

    Raises:
        DomainError: If z < 1
        BudgetError: If the h-range exceeds the configured cap
    """
    config = config or SieveConfig()
    if z < 1:
        raise DomainError(f"S(z) is defined for z >= 1, got {z}")
    last = _last_h(z)
    if last < 2:
        return 0.0
    if last > config.max_h:
        raise BudgetError(f"S({z}) needs h up to {last}, cap is {config.max_h}", cap=config.max_h)
    weights = singular_weights(last)
    h = np.arange(2, last + 1, 2)
    return float(np.sum(weights[h] / h))


def s_of_z_exact(z: float) -> Fraction:
    """S(z) as an exact rational, for small z."""
    if z < 1:
        raise DomainError(f"S(z) is defined for z >= 1, got {z}")
    last = _last_h(z)
    if last < 2:
        return Fraction(0)
    spf = smallest_prime_factors(last)
    return sum((singular_weight(h, spf) / h for h in range(2, last + 1, 2)), Fraction(0))


def s_asymptotic_ratio(z: float, ss: SingularSeriesValue, config: Optional[SieveConfig] = None) -> float:
    """S(z) * 2 * singular series / ln z, which tends to 1."""
    if z < 10:
        raise DomainError(f"asymptotic ratio needs z >= 10, got {z}")
    return s_of_z(z, config) * 2.0 * ss.value / math.log(z)


def pair_bound(h: int, y: float, ss: SingularSeriesValue) -> float:
    """
    Main term 16 * S * singular_weight(h) * y / ln(y)^2 of the sieve upper
    bound for #{2 < q < y : q, qh + 1 prime}.

    Raises:
        PreconditionError: If h is odd or below 2
        DomainError: If y < 16
    """
    if h < 2 or h % 2:
        raise PreconditionError(f"h must be even and >= 2, got {h}")
    if y < 16:
        raise DomainError(f"pair bound needs y >= 16, got {y}")
    log_y = math.log(y)
    return 16.0 * ss.value * float(singular_weight(h)) * y / (log_y * log_y)


def even_h_limit(x: int, c: Exponent) -> int:
    """Largest integer h with h < x^(1 - c), decided exactly."""
    root, exact = gmpy2.iroot(gmpy2.mpz(x) ** (c.den - c.num), c.den)
    return int(root) - 1 if exact else int(root)


def sieve_rhs(
    x: int,
    c: Exponent,
    ss: SingularSeriesValue,
    config: Optional[SieveConfig] = None,
) -> float:
    """
    16 * S * sum over even h < x^(1-c) of singular_weight(h) * (x/h) / ln(x/h)^2.

    Main term only; the (1 + o(1)) factor is not included.

    Raises:
        PreconditionError: If c < 1/2
        BudgetError: If the h-range exceeds the configured cap
    """
    config = config or SieveConfig()
    if c.fraction < Fraction(1, 2):
        raise PreconditionError(f"sieve_rhs needs 1/2 <= c < 1, got {c}")
    last = even_h_limit(x, c)
    if last < 2:
        return 0.0
    if last > config.max_h:
        raise BudgetError(
            f"sieve_rhs at x={x}, c={c} needs h up to {last}, cap is {config.max_h}",
            cap=config.max_h,
        )
    weights = singular_weights(last)
    h = np.arange(2, last + 1, 2)
    ratio = x / h
    log_ratio = np.log(ratio)
    return 16.0 * ss.value * float(np.sum(weights[h] * ratio / (log_ratio * log_ratio)))


def partial_summation_closed_form(c: ExponentLike, ss: SingularSeriesValue) -> float:
    """Coefficient (1/(2c) - 1/2)/S of 1/ln x in the partial-summation limit."""
    value = _as_fraction(c)
    if not 0 < value <= 1:
        raise DomainError(f"closed form needs 0 < c <= 1, got {value}")
    return float(Fraction(1, 2) / value - Fraction(1, 2)) / ss.value


def partial_summation_integral(c: ExponentLike, x: float) -> float:
    """
    int_{x^c}^{x} (ln x - ln u)/u * (ln u)^(-3) du, integrated in v = ln u.

    Raises:
        ToleranceError: If the adaptive quadrature reports a problem
    """
    c = float(_as_fraction(c))
    if not 0 < c <= 1:
        raise DomainError(f"integral needs 0 < c <= 1, got {c}")
    log_x = math.log(x)
    if c == 1:
        return 0.0
    result = quad(
        lambda v: (log_x - v) / v ** 3,
        c * log_x,
        log_x,
        epsabs=QUADRATURE_TOL,
        epsrel=QUADRATURE_TOL,
        full_output=1,
    )
    if len(result) > 3:
        raise ToleranceError(f"quadrature did not converge at c={c}, x={x}: {result[3]}")
    value, error = result[0], result[1]
    if error > max(QUADRATURE_TOL, QUADRATURE_TOL * abs(value)) * 100:
        raise ToleranceError(f"quadrature error {error:.3e} above target at c={c}, x={x}")
    return float(value)


def partial_summation_quadrature(c: ExponentLike, x: float, ss: SingularSeriesValue) -> float:
    """
    Boundary term minus the integral, both divided by S.

    ln x times the result converges to partial_summation_closed_form(c).

    Raises:
        DomainError: If c is outside (0, 1) or x < 100
    """
    value = _as_fraction(c)
    if not 0 < value < 1:
        raise DomainError(f"quadrature needs 0 < c < 1, got {value}")
    if x < 100:
        raise DomainError(f"quadrature needs x >= 100, got {x}")
    cf = float(value)
    boundary = (1 - cf) / (2 * cf * cf) / (ss.value * math.log(x))
    return boundary - partial_summation_integral(value, x) / ss.value


def theorem_bound_exact(c: Exponent) -> Fraction:
    """8(1/c - 1) as an exact rational."""
    return 8 * (Fraction(c.den, c.num) - 1)


def theorem_bound(c: Exponent) -> float:
    """8(1/c - 1); above 1 (c < 8/9) the bound carries no information."""
    return float(theorem_bound_exact(c))


def is_informative(c: Exponent) -> bool:
    return theorem_bound_exact(c) <= 1


def bound_threshold(level: Union[Fraction, int]) -> Fraction:
    """Smallest c with 8(1/c - 1) <= level, namely 8/(8 + level)."""
    level = Fraction(level)
    if level <= 0:
        raise DomainError(f"level must be positive, got {level}")
    return Fraction(8) / (8 + level)


def liminf_lower_bound(c: ExponentLike) -> Optional[float]:
    """The classical lower bound 1 - c on the density, valid for 0 < c <= 1/2."""
    value = _as_fraction(c)
    if 0 < value <= Fraction(1, 2):
        return float(1 - value)
    return None


def assemble_bound_report(
    row: DensityRow,
    x: int,
    ss: SingularSeriesValue,
    solver: RhoSolver,
    with_sieve_rhs: bool = False,
    config: Optional[SieveConfig] = None,
) -> BoundReport:
    """Collect every analytic quantity for one scanned exponent."""
    c = row.c
    rhs_normalized = None
    if with_sieve_rhs and c.fraction >= Fraction(1, 2):
        rhs_normalized = sieve_rhs(x, c, ss, config) / (x / math.log(x))
    informative = is_informative(c)
    if not informative:
        logger.debug(f"Theorem bound at c={c} exceeds 1 and is not informative")
    return BoundReport(
        x=x,
        c=c,
        empirical_ratio=row.ratio_t,
        eh_prediction=solver.eh_density(float(c)),
        theorem_bound=theorem_bound(c),
        closed_form_limit=16.0 * ss.value * partial_summation_closed_form(c, ss),
        sieve_rhs_normalized=rhs_normalized,
        lower_bound=liminf_lower_bound(c),
        informative=informative,
    )
