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
Shifted primes with large prime factors, computed at desk scale.

This package counts primes p <= x whose shifted value p - 1 has a large
prime factor, evaluates Dickman's function and the sieve-side constants,
and compares the counts with the unconditional upper bound 8(1/c - 1) and
the conditional prediction 1 - rho(1/c).
"""

__version__ = "0.1.0"

from shifted_prime_lab.config import SieveConfig, RhoConfig, OutputFormat
from shifted_prime_lab.sieve_core import PrimeTable, LpfSegment, primes_up_to, pi, lpf_segment
from shifted_prime_lab.shifted_stats import (
    Exponent,
    DensityScan,
    holds_threshold,
    scan_tc,
    tprime_via_pairs,
    prime_pair_count,
)
from shifted_prime_lab.dickman import RhoSolver
from shifted_prime_lab.analytic_bounds import (
    SingularSeriesValue,
    BoundReport,
    singular_series,
    s_of_z,
    s_asymptotic_ratio,
    pair_bound,
    sieve_rhs,
    partial_summation_closed_form,
    partial_summation_quadrature,
    theorem_bound,
)
