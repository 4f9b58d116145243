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


import math

import pytest

from shifted_prime_lab import (
    SieveConfig,
    Exponent,
    RhoSolver,
    scan_tc,
    tprime_via_pairs,
    primes_up_to,
    prime_pair_count,
    singular_series,
    pair_bound,
    theorem_bound,
)
from tests.conftest import need_slow

PAIR_EXPONENTS = [Exponent(1, 2), Exponent(3, 5), Exponent(2, 3), Exponent(3, 4), Exponent(9, 10)]
EH_EXPONENTS = [Exponent(3, 5), Exponent(7, 10), Exponent(4, 5), Exponent(9, 10)]
BOUND_EXPONENTS = [Exponent(89, 100), Exponent(23, 25), Exponent(19, 20)]


@pytest.fixture(scope="module")
def scans():
    """One scan per decade from 10^5 to 10^8 over every exponent used below"""
    grid = PAIR_EXPONENTS + EH_EXPONENTS + BOUND_EXPONENTS
    return {x: scan_tc(x, grid, SieveConfig()) for x in (10 ** 5, 10 ** 6, 10 ** 7, 10 ** 8)}


@pytest.mark.integration
def test_pair_identity_at_one_million():
    """Test that the pair sum reproduces T'_c(10^6) exactly"""
    x = 10 ** 6
    table = primes_up_to(x)
    scan = scan_tc(x, PAIR_EXPONENTS, SieveConfig())
    for row in scan.rows:
        assert tprime_via_pairs(x, row.c, table) == row.t_prime_c


@pytest.mark.integration
def test_prime_count_at_one_million():
    """Test pi(10^6) through the scan itself"""
    scan = scan_tc(10 ** 6, [Exponent(1, 2)], SieveConfig())
    assert scan.rows[0].pi_x == 78498


@pytest.mark.integration
@pytest.mark.slow
@need_slow
class TestDeskScale:
    def test_singular_series_stabilises(self):
        """Test cutoff 10^7 against 10^8 and the value at 10^8"""
        table = primes_up_to(10 ** 8)
        coarse = singular_series(10 ** 7, table)
        fine = singular_series(10 ** 8, table)

        assert abs(coarse.value - fine.value) / fine.value < coarse.tail_bound
        assert 0.6601610 <= fine.value <= 0.6601626

    def test_pair_bound_dominance(self):
        """Test the sieve main term against pair counts for y = 10^6"""
        y = 10 ** 6
        table = primes_up_to(98 * y)
        ss = singular_series(10 ** 7)
        for h in range(2, 100, 2):
            assert prime_pair_count(h, y, table) <= pair_bound(h, y, ss)

    def test_theorem_bound_holds(self, scans):
        """Test T_c(10^8)/pi(10^8) <= 8(1/c - 1)/2 for c near 1"""
        scan = scans[10 ** 8]
        for c in BOUND_EXPONENTS:
            assert scan.row_for(c).ratio_t <= theorem_bound(c) / 2

    def test_threshold_gap_stays_bounded(self, scans):
        """Test that the normalised gap between T_c and T'_c at c = 0.7 stays within a factor 10"""
        gaps = [scan.row_for(Exponent(7, 10)).lemma2_gap_normalized for scan in scans.values()]
        assert min(gaps) > 0
        assert max(gaps) / min(gaps) < 10

    def test_density_approaches_prediction(self, scans):
        """Test that the distance to 1 - rho(1/c) shrinks from 10^5 to 10^8"""
        solver = RhoSolver()
        for c in EH_EXPONENTS:
            prediction = solver.eh_density(float(c))
            early = abs(scans[10 ** 5].row_for(c).ratio_t - prediction)
            late = abs(scans[10 ** 8].row_for(c).ratio_t - prediction)
            assert late < early
            assert prediction == pytest.approx(math.log(1 / float(c)), abs=1e-9)
