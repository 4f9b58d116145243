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


"""Exception types raised by the library; the CLI maps them to exit codes."""

from typing import Optional


class SplError(Exception):
    """Base class for all library errors."""


class PreconditionError(SplError, ValueError):
    """An operation was called with arguments outside its contract."""


class DomainError(PreconditionError):
    """A real argument lies outside the domain of the function."""


class OutOfRangeError(PreconditionError):
    """A query exceeds the range a precomputed table covers."""


class BudgetError(SplError, RuntimeError):
    """A computation would exceed a configured memory or size cap."""

    def __init__(self, message: str, cap: Optional[int] = None):
        super().__init__(message)
        self.cap = cap


class VerificationError(SplError, RuntimeError):
    """Two independent computations of the same quantity disagree."""


class NoRootError(SplError, ValueError):
    """A root-finding target lies outside the achievable range."""


class ToleranceError(SplError, RuntimeError):
    """A numerical method did not reach its error target."""


class CacheFormatError(SplError, ValueError):
    """A segment cache file is truncated or has the wrong header."""
