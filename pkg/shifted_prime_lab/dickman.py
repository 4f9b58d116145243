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
Dickman's function rho(u) and the Elliott-Halberstam density 1 - rho(1/c).

rho is tabulated unit interval by unit interval from
rho(v) = rho(k) - int_k^v rho(t - 1)/t dt on [k, k + 1], where the integrand
only needs values already stored for [k - 1, k]. Grid nodes include every
integer, so each quadrature panel sits inside one smooth piece of rho.
"""

# Standard imports
import math
import logging
from functools import lru_cache
from typing import List, Optional, Tuple

# 3rd party imports
import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import bisect

# Package imports
from .config import RhoConfig
from .exceptions import DomainError, NoRootError, OutOfRangeError, ToleranceError

logger = logging.getLogger(__name__)


class RhoSolver:
    """
    Memoized grid of rho on [0, u_max] with cubic interpolation between nodes.

    The solver is built once and is read-only afterwards.
    """

    def __init__(self, u_max: float = 20.0, step: float = 1.0 / 1024, tol: float = 1e-10):
        """
        Tabulate rho on a uniform grid.

        Args:
            u_max: Largest argument the solver answers for
            step: Grid spacing; 1/step must be an integer
            tol: Absolute error target for rho and the threshold solver
        """
        config = RhoConfig(u_max=u_max, step=step, tol=tol)
        self.u_max = config.u_max
        self.tol = config.tol
        self.nodes_per_unit = config.nodes_per_unit
        self.step = 1.0 / self.nodes_per_unit
        self.units = math.ceil(self.u_max)

        n = self.nodes_per_unit
        local = np.arange(n + 1) * self.step
        values = np.empty(self.units * n + 1)
        values[: n + 1] = 1.0
        for k in range(1, self.units):
            t = k + local
            integrand = values[(k - 1) * n: k * n + 1] / t
            integral = cumulative_simpson(integrand, dx=self.step, initial=0.0)
            values[k * n: (k + 1) * n + 1] = values[k * n] - integral
        self.values = values

        self._splines: List[CubicSpline] = [
            CubicSpline(k + local, values[k * n: (k + 1) * n + 1])
            for k in range(self.units)
        ]
        logger.debug(f"Built rho grid on [0, {self.units}] with step {self.step}")

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.values.size) * self.step

    def rho(self, u: float) -> float:
        """
        Dickman's function at u.

        Raises:
            DomainError: If u < 0
            OutOfRangeError: If u > u_max
        """
        if u < 0:
            raise DomainError(f"rho is defined for u >= 0, got {u}")
        if u > self.u_max:
            raise OutOfRangeError(f"rho({u}) requested beyond u_max={self.u_max}")
        if u <= 1.0:
            return 1.0
        k = math.floor(u)
        if u == k:
            # integer nodes are shared by neighbouring pieces
            return float(self.values[k * self.nodes_per_unit])
        return float(self._splines[k](u))

    def eh_density(self, c: float) -> float:
        """
        Predicted limiting density 1 - rho(1/c) of primes p with P+(p - 1) >= p^c.

        Raises:
            DomainError: If c is outside (0, 1]
            OutOfRangeError: If 1/c > u_max
        """
        if not 0 < c <= 1:
            raise DomainError(f"eh_density needs 0 < c <= 1, got {c}")
        u = 1.0 / c
        if u > self.u_max and u - self.u_max <= 1e-12 * self.u_max:
            u = self.u_max
        return 1.0 - self.rho(u)

    def solve_eh_threshold(self, target: float) -> float:
        """
        Find c with eh_density(c) = target by bisection on (1/u_max, 1].

        eh_density decreases in c, so the root is unique.

        Raises:
            NoRootError: If target is outside (0, 1 - rho(u_max))
            ToleranceError: If the bracket closes without meeting tol
        """
        low = 1.0 / self.u_max
        ceiling = self.eh_density(low)
        if not 0 < target < ceiling:
            raise NoRootError(f"target {target} outside the achievable range (0, {ceiling})")
        root = bisect(
            lambda c: self.eh_density(c) - target,
            low,
            1.0,
            xtol=max(self.tol * 1e-3, 1e-15),
        )
        residual = abs(self.eh_density(root) - target)
        if residual > self.tol:
            raise ToleranceError(f"threshold for {target} only met to {residual:.3e}")
        return float(root)

    def refinement_error(self) -> float:
        """Largest change of a stored node value when the grid step is halved."""
        finer = RhoSolver(u_max=self.u_max, step=self.step / 2, tol=self.tol)
        return float(np.max(np.abs(finer.values[::2] - self.values)))

    def table(self, step: float = 0.05, u_max: Optional[float] = None) -> List[Tuple[float, float]]:
        """(u, rho(u)) pairs on a uniform output grid starting at 0."""
        u_max = self.u_max if u_max is None else u_max
        if step <= 0:
            raise DomainError(f"table step must be positive, got {step}")
        count = int(math.floor(u_max / step + 1e-9)) + 1
        return [(i * step, self.rho(min(i * step, self.u_max))) for i in range(count)]


@lru_cache(maxsize=4)
def default_solver(u_max: float = 20.0, tol: float = 1e-10) -> RhoSolver:
    """Shared solver with the default grid step."""
    return RhoSolver(u_max=u_max, tol=tol)
