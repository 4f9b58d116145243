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


import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shifted_prime_lab import SieveConfig, primes_up_to, pi, lpf_segment
from shifted_prime_lab.exceptions import BudgetError, OutOfRangeError, PreconditionError
from shifted_prime_lab.sieve_core import (
    factor_distinct,
    is_prime_in,
    lpf_table,
    segment_bounds,
    smallest_prime_factors,
)
from tests.conftest import trial_factors, trial_is_prime, trial_lpf


class TestPrimesUpTo:
    def test_small_table(self):
        """Test the primes up to 10"""
        table = primes_up_to(10)

        assert table.limit == 10
        assert table.primes.tolist() == [2, 3, 5, 7]
        assert table.primes.dtype == np.uint64

    def test_counts(self):
        """Test pi at 100, 10^5 and 10^6"""
        assert primes_up_to(100).count == 25
        assert primes_up_to(10 ** 5).count == 9592
        assert primes_up_to(10 ** 6).count == 78498

    def test_matches_trial_division(self):
        """Test every prime up to 3000 against trial division"""
        expected = [n for n in range(2, 3001) if trial_is_prime(n)]
        assert primes_up_to(3000).primes.tolist() == expected

    def test_small_segments_agree(self, small_config):
        """Test that segment boundaries do not change the table"""
        default = primes_up_to(10 ** 5)
        segmented = primes_up_to(10 ** 5, small_config)

        assert np.array_equal(default.primes, segmented.primes)

    @pytest.mark.parametrize("n", [2, 3, 4, 9, 25, 49, 1024, 1025])
    def test_edge_limits(self, n):
        """Test limits that are prime squares or sit next to segment ends"""
        expected = [k for k in range(2, n + 1) if trial_is_prime(k)]
        assert primes_up_to(n, SieveConfig(segment_size=8, workers=1)).primes.tolist() == expected

    def test_count_is_monotone(self):
        """Test that the count never drops as n grows"""
        counts = [primes_up_to(n).count for n in range(2, 400, 7)]
        assert counts == sorted(counts)

    def test_rejects_small_n(self):
        """Test the n >= 2 precondition"""
        with pytest.raises(PreconditionError):
            primes_up_to(1)

    def test_budget(self):
        """Test that the configured cap is named in the error"""
        with pytest.raises(BudgetError) as excinfo:
            primes_up_to(10 ** 6, SieveConfig(max_prime_limit=10 ** 5))
        assert excinfo.value.cap == 10 ** 5
        assert "100000" in str(excinfo.value)


class TestPi:
    def test_known_values(self, table_1e5):
        """Test pi at 1, 2 and 1000"""
        assert pi(1, table_1e5) == 0
        assert pi(2, table_1e5) == 1
        assert pi(1000, table_1e5) == 168
        assert pi(10 ** 5, table_1e5) == 9592

    def test_out_of_range(self, table_1e5):
        """Test that queries past the table limit fail"""
        with pytest.raises(OutOfRangeError):
            pi(10 ** 5 + 1, table_1e5)

    def test_membership(self, table_1e5):
        """Test vectorised membership against trial division"""
        values = np.arange(1, 500, dtype=np.uint64)
        expected = [trial_is_prime(int(v)) for v in values]
        assert is_prime_in(values, table_1e5).tolist() == expected


class TestLpfSegment:
    def test_convention_at_one(self):
        """Test P+(1) = 1"""
        segment = lpf_segment(1, 20, primes_up_to(10))
        assert segment.value(1) == 1

    def test_examples(self):
        """Test P+(12) = 3 and P+(2^20) = 2"""
        assert lpf_segment(10, 20, primes_up_to(10)).value(12) == 3
        n = 1 << 20
        assert lpf_segment(n - 5, n + 5, primes_up_to(2000)).value(n) == 2

    def test_matches_trial_division(self):
        """Test every n <= 10^5 against trial division"""
        segment = lpf_table(10 ** 5)
        expected = np.array([trial_lpf(n) for n in range(1, 10 ** 5 + 1)], dtype=np.uint64)

        assert len(segment) == 10 ** 5
        assert np.array_equal(segment.lpf, expected)

    def test_primes_are_fixed_points(self, table_1e5):
        """Test that P+(p) = p for every prime in the segment"""
        segment = lpf_segment(50_000, 60_000, table_1e5)
        primes = table_1e5.primes[(table_1e5.primes >= 50_000) & (table_1e5.primes < 60_000)]

        assert np.array_equal(segment.lpf[(primes - np.uint64(50_000)).astype(np.int64)], primes)

    def test_adjacent_segments_concatenate(self, table_1e5):
        """Test that two adjacent segments equal one segment over the union"""
        left = lpf_segment(1000, 4321, table_1e5)
        right = lpf_segment(4321, 9000, table_1e5)
        whole = lpf_segment(1000, 9000, table_1e5)

        assert np.array_equal(np.concatenate([left.lpf, right.lpf]), whole.lpf)

    def test_large_interval(self):
        """Test a window high up, where residuals above sqrt are common"""
        lo = 10 ** 12
        segment = lpf_segment(lo, lo + 200, primes_up_to(10 ** 6))
        for n in range(lo, lo + 200, 37):
            assert segment.value(n) == trial_lpf(n)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=1, max_value=10 ** 6))
    def test_random_values(self, n):
        """Property: the segment value equals the trial-division maximum"""
        lo = max(1, n - 3)
        segment = lpf_segment(lo, n + 4, primes_up_to(1001))
        assert segment.value(n) == trial_lpf(n)

    def test_preconditions(self):
        """Test lo = 0, empty intervals and short base tables"""
        base = primes_up_to(10)
        with pytest.raises(PreconditionError):
            lpf_segment(0, 10, base)
        with pytest.raises(PreconditionError):
            lpf_segment(10, 10, base)
        with pytest.raises(PreconditionError):
            lpf_segment(1, 1000, base)

    def test_budget(self):
        """Test the segment width cap"""
        config = SieveConfig(segment_size=64, max_segment_size=128)
        with pytest.raises(BudgetError):
            lpf_segment(1, 1000, primes_up_to(40), config=config)

    def test_value_outside_segment(self):
        """Test that single lookups stay inside the interval"""
        segment = lpf_segment(5, 10, primes_up_to(10))
        with pytest.raises(OutOfRangeError):
            segment.value(10)


class TestSmallestPrimeFactors:
    def test_table(self):
        """Test SPF values against trial division"""
        spf = smallest_prime_factors(5000)

        assert spf[1] == 1
        for n in range(2, 5001):
            assert spf[n] == trial_factors(n)[0]

    def test_factor_distinct(self):
        """Test distinct factor extraction"""
        spf = smallest_prime_factors(1000)

        assert factor_distinct(1, spf) == []
        assert factor_distinct(360, spf) == [2, 3, 5]
        assert factor_distinct(997, spf) == [997]
        with pytest.raises(OutOfRangeError):
            factor_distinct(1001, spf)


def test_segment_bounds():
    """Test that segment bounds tile the interval"""
    assert list(segment_bounds(1, 10, 4)) == [(1, 5), (5, 9), (9, 10)]
    assert list(segment_bounds(3, 3, 4)) == []
