"""Residue-class prime iteration and truncated Euler-type products.

All products and sums are accumulated in the log domain over primes in
increasing order (deterministic, backend-independent), exponentiated once
at the end.  Truncation tails carry rigorous bounds: for a series whose
per-prime term is at most c * p^-k with k >= 2, the primes beyond B
contribute less than c * B^{1-k} / (k-1) by integral comparison.  A refined
density-based estimate (tail / (phi(q) log B)) is reported separately by
the CLI and never used in the rigorous bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import cache as cache_mod
from . import kernels
from .errors import InvalidInputError, NotAUnitError
from .numerics import DEFAULT_PRECISION, BigReal, working_precision
from .unitgroup import euler_phi

_SEGMENT_SPAN = 1 << 20


@dataclass
class PrimeClassIterator:
    """Primes p <= bound with p = a (mod q), ascending, streamed in
    cache-sized segments."""

    q: int
    a: int
    bound: int

    def __post_init__(self) -> None:
        if math.gcd(self.a, self.q) != 1:
            raise NotAUnitError(f"{self.a} is not a unit mod {self.q}")
        if self.bound < 2:
            raise InvalidInputError("bound must be at least 2")

    def __iter__(self):
        q, a, bound = self.q, self.a % self.q, self.bound
        lo = 2
        while lo <= bound:
            hi = min(lo + _SEGMENT_SPAN, bound + 1)
            for p in kernels.primes_range(lo, hi):
                if p % q == a:
                    yield p
            lo = hi


def primes_in_class(q: int, a: int, bound: int) -> PrimeClassIterator:
    """Iterator over primes p <= bound in the class a mod q."""
    return PrimeClassIterator(q, a, bound)


@dataclass(frozen=True)
class ClassExponentRule:
    """Exponent pattern phi(q)-1 on the class a, -1 elsewhere (p not
    dividing q)."""

    q: int
    a: int

    def exponent(self, p: int) -> int:
        if self.q % p == 0:
            raise InvalidInputError(f"{p} divides the modulus")
        return euler_phi(self.q) - 1 if p % self.q == self.a % self.q else -1


@dataclass(frozen=True)
class TailBoundedValue:
    """A truncated value with a rigorous bound on the omitted log-domain
    tail and the truncation point that produced it."""

    value: BigReal
    tail_bound: BigReal
    bound_used: int

    def __post_init__(self) -> None:
        if self.tail_bound < 0:
            raise InvalidInputError("tail bound must be nonnegative")


def direct_mertens_product(
    q: int, a: int, x: int, precision: int = DEFAULT_PRECISION
) -> BigReal:
    """prod over primes p <= x, p = a (mod q), of (1 - 1/p)."""
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    if x < 2:
        raise InvalidInputError("x must be at least 2")
    # log(1 - 1/p) = -sum_{n>=1} p^-n / n
    log_sum, _ = kernels.class_series_sum(q, a % q, 1, 1, 1, x)
    with working_precision(precision):
        return mp.exp(-log_sum)


def partial_c_product(
    q: int, a: int, x: int, precision: int = DEFAULT_PRECISION
) -> BigReal:
    """prod over p <= x, p not dividing q, of (1 - 1/p)^alpha with alpha
    from ClassExponentRule(q, a)."""
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    if x < 2:
        raise InvalidInputError("x must be at least 2")
    phi = euler_phi(q)
    class_sum, _ = kernels.class_series_sum(q, a % q, 1, 1, 1, x)
    all_sum, _ = kernels.class_series_sum(q, -1, 1, 1, 1, x)
    # sum_p alpha(p) log(1-1/p) = -phi * class_sum + all_sum
    with working_precision(precision):
        return mp.exp(all_sum - phi * class_sum)


def residue_class_product(
    q: int,
    b: int,
    t: int,
    e: int | Fraction,
    bound: int,
    precision: int = DEFAULT_PRECISION,
) -> TailBoundedValue:
    """prod over primes p <= bound, p = b (mod q), of (1 - p^-t)^e.

    Tail bound 2|e| / ((t-1) bound^{t-1}) on the log scale, from
    |log(1 - p^-t)| <= 2 p^-t and integral comparison; requires t >= 2.
    """
    if math.gcd(b, q) != 1:
        raise NotAUnitError(f"{b} is not a unit mod {q}")
    if t < 2:
        raise InvalidInputError("need t >= 2 for a convergent tail")
    if bound < 2:
        raise InvalidInputError("bound must be at least 2")
    e = Fraction(e)
    store = cache_mod.active_store()
    key = (q, str(b % q), "class-product", t, str(e), bound, precision)
    if store is not None:
        hit = store.get(key)
        if hit is not None:
            return TailBoundedValue(
                cache_mod.parse_value(hit[0], precision),
                cache_mod.parse_value(hit[1], precision),
                bound,
            )
    with working_precision(precision):
        if e == 0:
            return TailBoundedValue(mp.mpf(1), mp.mpf(0), bound)
        # log(1 - p^-t) = -t * f_{t,t}(1/p)
        f_sum, _ = kernels.class_series_sum(q, b % q, t, t, t, bound)
        e_mp = mp.mpf(e.numerator) / e.denominator
        value = mp.exp(-e_mp * t * f_sum)
        tail = 2 * abs(e_mp) / ((t - 1) * mp.mpf(bound) ** (t - 1))
        result = TailBoundedValue(value, tail, bound)
    if store is not None:
        store.put(
            key,
            cache_mod.format_value(result.value, precision),
            cache_mod.format_value(result.tail_bound, precision),
        )
    return result


def meissel_B(
    q: int, a: int, bound: int, precision: int = DEFAULT_PRECISION
) -> TailBoundedValue:
    """sum over primes p <= bound, p = a (mod q), of 1/p + log(1 - 1/p).

    Each term is accumulated through its cancellation-free series
    -sum_{m>=2} p^-m / m, so no subtractive loss occurs.  Tail bound 1/bound
    since |term(p)| <= p^-2.
    """
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    if bound < 2:
        raise InvalidInputError("bound must be at least 2")
    store = cache_mod.active_store()
    key = (q, str(a % q), "meissel-B", 0, "0", bound, precision)
    if store is not None:
        hit = store.get(key)
        if hit is not None:
            return TailBoundedValue(
                cache_mod.parse_value(hit[0], precision),
                cache_mod.parse_value(hit[1], precision),
                bound,
            )
    series, _ = kernels.class_series_sum(q, a % q, 1, 1, 2, bound)
    with working_precision(precision):
        result = TailBoundedValue(-series, 1 / mp.mpf(bound), bound)
    if store is not None:
        store.put(
            key,
            cache_mod.format_value(result.value, precision),
            cache_mod.format_value(result.tail_bound, precision),
        )
    return result


def class_f_sum(
    q: int,
    b: int,
    t: int,
    s: int,
    bound: int,
    drop_linear_term: bool = False,
    precision: int = DEFAULT_PRECISION,
) -> TailBoundedValue:
    """sum over primes p <= bound, p = b (mod q), of f(1/p) where f is the
    partial-logarithm series sum_{n = s (mod t)} x^n / n.

    With drop_linear_term (only meaningful for s = 1) the series starts at
    n = 1 + t, cancelling the exact 1/p head symbolically.  Either way every
    term is O(p^-2), giving the tail bound 2/bound on the sum.
    """
    if math.gcd(b, q) != 1:
        raise NotAUnitError(f"{b} is not a unit mod {q}")
    if not 1 <= s <= t:
        raise InvalidInputError("need 1 <= s <= t")
    if drop_linear_term and s != 1:
        raise InvalidInputError("the linear term exists only when s = 1")
    if not drop_linear_term and s == 1:
        raise InvalidInputError(
            "s = 1 class sums diverge termwise; use drop_linear_term"
        )
    n_min = 1 + t if drop_linear_term else s
    value, _ = kernels.class_series_sum(q, b % q, t, s, n_min, bound)
    with working_precision(precision):
        return TailBoundedValue(value, 2 / mp.mpf(bound), bound)


def prime_count_in_class(q: int, a: int, bound: int) -> int:
    """Number of primes p <= bound with p = a (mod q)."""
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    # the t=2 series is cheap and the kernel reports the class count
    _, count = kernels.class_series_sum(q, a % q, 2, 2, 2, bound)
    return count


def class_count_spread(q: int, bound: int) -> float:
    """Relative spread of per-class prime counts at `bound` (diagnostic)."""
    if q < 3:
        raise InvalidInputError("spread diagnostic needs q >= 3")
    counts = [
        prime_count_in_class(q, a, bound) for a in range(1, q) if math.gcd(a, q) == 1
    ]
    return (max(counts) - min(counts)) / max(counts)
