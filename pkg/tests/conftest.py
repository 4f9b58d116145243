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


import os
from fractions import Fraction
from typing import List

import pytest
from dotenv import load_dotenv

# Get the directory containing this file (tests/) then go up one level
project_root = os.path.abspath(
    os.path.join(os.path.dirname(__file__), '..')
)

# Load SPL_* settings from the project .env, if there is one
load_dotenv(dotenv_path=os.path.join(project_root, '.env'))

from shifted_prime_lab import SieveConfig, RhoSolver, primes_up_to, singular_series


def _env_flag(name: str) -> bool:
    return os.getenv(name, "false").lower() in ("true", "1", "yes")


# Desk-scale runs (x = 10^8, cutoff 10^8) take minutes
need_slow = pytest.mark.skipif(
    not _env_flag("SPL_RUN_SLOW"),
    reason="desk-scale run disabled; set SPL_RUN_SLOW=1 to enable"
)


# Trial-division oracles, independent of the sieves under test
def trial_factors(n: int) -> List[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def trial_lpf(n: int) -> int:
    return max(trial_factors(n)) if n > 1 else 1


def trial_is_prime(n: int) -> bool:
    return n >= 2 and trial_factors(n) == [n]


def trial_weight(h: int) -> Fraction:
    weight = Fraction(1)
    for p in trial_factors(h):
        if p > 2:
            weight *= Fraction(p - 1, p - 2)
    return weight


def brute_tc(x: int, num: int, den: int) -> int:
    """T_c(x) by exhaustive trial division."""
    return sum(
        1 for p in range(2, x + 1)
        if trial_is_prime(p) and trial_lpf(p - 1) ** den >= p ** num
    )


@pytest.fixture
def small_config() -> SieveConfig:
    """Tiny segments so that every code path crosses segment boundaries."""
    return SieveConfig(segment_size=1 << 10, workers=1)


@pytest.fixture(scope="session")
def rho_solver() -> RhoSolver:
    return RhoSolver()


@pytest.fixture(scope="session")
def table_1e5():
    return primes_up_to(10 ** 5)


@pytest.fixture(scope="session")
def singular_1e6():
    return singular_series(10 ** 6)


@pytest.fixture
def twin_prime_constant() -> float:
    return 0.6601618158468696
