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
from enum import Enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from typing_extensions import Self


class OutputFormat(Enum):
    """Output formats supported by the report commands."""
    CSV = "csv"
    JSON = "json"


# Reals in CSV output are rendered with this many significant digits
CSV_SIGNIFICANT_DIGITS = 12

TC_SCAN_HEADER = (
    "x", "c_num", "c_den", "t_c", "t_prime_c", "pi_x", "ratio_t",
    "ratio_t_prime", "eh_prediction", "theorem_bound", "lemma2_gap_normalized",
)

BOUND_REPORT_HEADER = (
    "x", "c_num", "c_den", "empirical_ratio", "eh_prediction", "eh_deviation", "theorem_bound",
    "closed_form_limit", "sieve_rhs_normalized", "lower_bound", "informative",
)


@dataclass
class SieveConfig:
    """Memory budgets and execution settings for the sieving layer."""
    segment_size: int = 1 << 22
    max_prime_limit: int = 1 << 30
    max_segment_size: int = 1 << 26
    max_h: int = 10 ** 8
    x_cap: int = 1 << 40
    allow_large: bool = False
    workers: Optional[int] = None
    cache_dir: Optional[str] = None

    def __post_init__(self):
        """Fill the worker count and reject non-positive budgets."""
        if not self.workers:
            self.workers = os.cpu_count() or 1
        for name in ("segment_size", "max_prime_limit", "max_segment_size", "max_h", "x_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.segment_size > self.max_segment_size:
            raise ValueError(
                f"segment_size {self.segment_size} exceeds max_segment_size {self.max_segment_size}"
            )

    @classmethod
    def from_env(cls, **overrides) -> Self:
        """
        Build a configuration from SPL_* environment variables.

        Args:
            **overrides: Explicit values that win over the environment

        Returns:
            SieveConfig: The merged configuration
        """
        values = {
            "cache_dir": os.getenv("SPL_CACHE_DIR") or None,
        }
        if os.getenv("SPL_SEGMENT_SIZE"):
            values["segment_size"] = int(os.getenv("SPL_SEGMENT_SIZE"))
        if os.getenv("SPL_WORKERS"):
            values["workers"] = int(os.getenv("SPL_WORKERS"))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class RhoConfig:
    """Grid settings for the Dickman function solver."""
    u_max: float = 20.0
    step: float = 1.0 / 1024
    tol: float = 1e-10

    def __post_init__(self):
        """Check that the grid aligns with the integer breakpoints of rho."""
        if self.u_max < 1:
            raise ValueError(f"u_max must be at least 1, got {self.u_max}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        per_unit = Fraction(self.step).limit_denominator(1 << 20)
        if per_unit <= 0 or per_unit.numerator != 1:
            raise ValueError(f"1/step must be an integer, got step={self.step}")

    @property
    def nodes_per_unit(self) -> int:
        return round(1 / self.step)
