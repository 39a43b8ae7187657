"""Extended-precision numeric layer and fundamental constants.

Reals and complexes are mpmath `mpf`/`mpc` values; the working precision is
always explicit, measured in decimal digits, and applied through
`working_precision(digits)`.  Every routine here computes at the requested
digits plus a fixed guard margin, so results are correctly rounded well
below the tolerances stated by callers.

Constants (pi, the Euler-Mascheroni gamma) are computed once per precision
and cached; the caches are write-once under the GIL so concurrent readers
are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import InvalidInputError

BigReal = mp.mpf
BigComplex = mp.mpc

DEFAULT_PRECISION = 30

# Extra decimal digits carried internally beyond the caller-visible precision.
GUARD_DIGITS = 8


def working_precision(precision: int):
    """Context manager setting mpmath to `precision` + guard digits."""
    if precision < 1:
        raise InvalidInputError("precision must be at least 1 digit")
    return mp.workdps(precision + GUARD_DIGITS)


@lru_cache(maxsize=64)
def pi_value(precision: int = DEFAULT_PRECISION) -> BigReal:
    """pi at the given working precision."""
    with working_precision(precision):
        return +mp.pi


@lru_cache(maxsize=64)
def euler_gamma(precision: int = DEFAULT_PRECISION) -> BigReal:
    """The Euler-Mascheroni constant, absolute error below 10^-precision."""
    if precision < 1:
        raise InvalidInputError("precision must be at least 1 digit")
    with working_precision(precision):
        return +mp.euler


@dataclass(frozen=True)
class BernoulliTable:
    """Exact rational Bernoulli numbers B_0 .. B_{2K} (B_1 = -1/2)."""

    values: tuple[Fraction, ...]

    @staticmethod
    def up_to(max_index: int) -> "BernoulliTable":
        """Build the table with the defining recurrence
        sum_{j<=m} C(m+1, j) B_j = 0."""
        if max_index < 0:
            raise InvalidInputError("table size must be nonnegative")
        values: list[Fraction] = [Fraction(1)]
        for m in range(1, max_index + 1):
            acc = Fraction(0)
            for j in range(m):
                acc += math.comb(m + 1, j) * values[j]
            values.append(-acc / (m + 1))
        return BernoulliTable(tuple(values))

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def verify_recurrence(self) -> bool:
        """Re-check sum_{j<=m} C(m+1, j) B_j = 0 for every row."""
        for m in range(1, len(self.values)):
            acc = sum(
                (math.comb(m + 1, j) * self.values[j] for j in range(m + 1)),
                start=Fraction(0),
            )
            if acc != 0:
                return False
        return True


@lru_cache(maxsize=16)
def _bernoulli_table(max_index: int) -> BernoulliTable:
    return BernoulliTable.up_to(max_index)


def bernoulli_number(k: int) -> Fraction:
    """Exact B_k (B_1 = -1/2 convention)."""
    if k < 0:
        raise InvalidInputError("Bernoulli index must be nonnegative")
    size = max(64, 1 << (k.bit_length() + 1))
    return _bernoulli_table(size if k > 64 else 64)[k]


def zeta_even(k: int, precision: int = DEFAULT_PRECISION) -> BigReal:
    """zeta(k) for even k >= 2 via the Bernoulli closed form.

    zeta(k) = (-1)^{k/2+1} B_k (2 pi)^k / (2 k!), exact up to the final
    rounding of pi powers.
    """
    if k < 2 or k % 2:
        raise InvalidInputError(f"zeta_even needs an even k >= 2, got {k}")
    b = bernoulli_number(k)
    with working_precision(precision):
        sign = 1 if (k // 2) % 2 == 1 else -1
        num = mp.mpf(b.numerator) / b.denominator
        return sign * num * (2 * mp.pi) ** k / (2 * mp.factorial(k))


def principal_log(z: BigComplex) -> BigComplex:
    """Principal-branch complex logarithm (imaginary part in (-pi, pi])."""
    if z == 0:
        raise InvalidInputError("log of zero")
    return mp.log(z)


def complex_power(z: BigComplex, w: BigComplex) -> BigComplex:
    """z^w = exp(w * Log z) on the principal branch.

    Callers must ensure the principal branch is the intended one; the
    L-function assembly resolves branches explicitly instead of using this.
    """
    return mp.exp(w * principal_log(z))
