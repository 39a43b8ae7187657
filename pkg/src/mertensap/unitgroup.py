"""Exact arithmetic on the multiplicative group (Z/qZ)*.

Everything here is integer-only: factorization, totients, element orders,
solvability of b^y = a (mod q), and the order-classification sets used by
the constant assembly (units of non-maximal order, and units from which a
given residue is reachable as a power).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

from .errors import InvalidInputError, NotAUnitError

_TRIAL_LIMIT = 10**6

# Deterministic Miller-Rabin witnesses for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witnesses)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to factor {n}")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes ascending."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise InvalidInputError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise InvalidInputError("exponents must be positive")

    @property
    def n(self) -> int:
        return reduce(lambda acc, pe: acc * pe[0] ** pe[1], self.factors, 1)

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Factor n >= 1 by trial division up to 10^6, then Pollard rho."""
    if n < 1:
        raise InvalidInputError(f"cannot factor {n}; need n >= 1")
    left = n
    out: dict[int, int] = {}
    d = 2
    while d <= _TRIAL_LIMIT and d * d <= left:
        while left % d == 0:
            out[d] = out.get(d, 0) + 1
            left //= d
        d += 1 if d == 2 else 2
    stack = [left] if left > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return Factorization(tuple(sorted(out.items())))


def euler_phi(q: int) -> int:
    """Euler totient: the number of 1 <= n <= q coprime to q."""
    if q < 1:
        raise InvalidInputError(f"phi undefined for {q}")
    result = 1
    for p, e in factorize(q).factors:
        result *= (p - 1) * p ** (e - 1)
    return result


def carmichael_lambda(q: int) -> int:
    """Maximal order among the units mod q.

    Computed from the factorization q = 2^alpha * prod p_i^{a_i}: the lcm of
    phi(p_i^{a_i}) with the 2-part replaced by 2^{alpha-2} once alpha >= 3.
    """
    if q < 1:
        raise InvalidInputError(f"lambda undefined for {q}")
    parts = []
    for p, e in factorize(q).factors:
        if p == 2 and e >= 3:
            parts.append(2 ** (e - 2))
        else:
            parts.append((p - 1) * p ** (e - 1))
    return math.lcm(*parts) if parts else 1


@lru_cache(maxsize=65536)
def element_order(b: int, q: int) -> int:
    """Order of b in (Z/qZ)*: least k >= 1 with b^k = 1 (mod q)."""
    b %= q
    if math.gcd(b, q) != 1:
        raise NotAUnitError(f"{b} is not a unit mod {q}")
    order = carmichael_lambda(q)
    for p, _ in factorize(order).factors:
        while order % p == 0 and pow(b, order // p, q) == 1:
            order //= p
    return order


@dataclass(frozen=True)
class OrbitSolution:
    """Solvability record for b^y = a (mod q).

    When solvable, the solution set is exactly y = s (mod t) with t the
    order of b and 1 <= s <= t.
    """

    solvable: bool
    s: int | None = None
    t: int | None = None

    def __post_init__(self) -> None:
        if self.solvable and not (self.s and self.t and 1 <= self.s <= self.t):
            raise InvalidInputError("solvable orbit needs 1 <= s <= t")


@lru_cache(maxsize=65536)
def power_residue_class(b: int, a: int, q: int) -> OrbitSolution:
    """Solve b^y = a (mod q) by scanning the orbit of b.

    The orbit has length t = element_order(b, q), small at the moduli this
    package targets, so exhaustive exponentiation beats anything cleverer.
    """
    b %= q
    a %= q
    if math.gcd(b, q) != 1 or math.gcd(a, q) != 1:
        raise NotAUnitError(f"{b} and {a} must both be units mod {q}")
    t = element_order(b, q)
    cur = 1
    for y in range(1, t + 1):
        cur = cur * b % q
        if cur == a:
            return OrbitSolution(True, y, t)
    return OrbitSolution(False)


def units(q: int) -> list[int]:
    """All residues in [1, q] coprime to q, ascending (units({1}) = [1])."""
    if q < 1:
        raise InvalidInputError(f"no unit group mod {q}")
    if q == 1:
        return [1]
    return [n for n in range(1, q) if math.gcd(n, q) == 1]


def non_maximal_set(q: int) -> set[int]:
    """Units b != 1 whose order is strictly below carmichael_lambda(q)."""
    if q < 3:
        raise InvalidInputError("order classification needs q >= 3")
    lam = carmichael_lambda(q)
    return {b for b in units(q) if b != 1 and element_order(b, q) < lam}


def reachable_set(q: int, a: int) -> dict[int, OrbitSolution]:
    """Units b outside {1, a} from which a is reachable as a power.

    Maps each such b to its solution class (s, t) for b^y = a (mod q).
    Defined only for a != 1 (every unit trivially reaches 1).
    """
    a %= q
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    if a == 1:
        raise InvalidInputError("reachable_set requires a != 1 (mod q)")
    out: dict[int, OrbitSolution] = {}
    for b in units(q):
        if b in (1, a):
            continue
        sol = power_residue_class(b, a, q)
        if sol.solvable:
            out[b] = sol
    return out


def _primitive_root(p: int, e: int) -> int:
    """Least primitive root mod p^e for odd prime p (ascending search)."""
    pe = p**e
    phi = (p - 1) * p ** (e - 1)
    prime_divs = [ell for ell, _ in factorize(phi).factors]
    g = 2
    while True:
        if math.gcd(g, pe) == 1 and all(
            pow(g, phi // ell, pe) != 1 for ell in prime_divs
        ):
            return g
        g += 1


def _crt_lift(residue: int, mod: int, q: int) -> int:
    """The unit mod q that is `residue` mod `mod` and 1 mod q/mod."""
    other = q // mod
    if other == 1:
        return residue % q
    inv = pow(mod, -1, other)
    # x = residue + mod * k with x = 1 mod other
    k = (1 - residue) * inv % other
    return (residue + mod * k) % q


@dataclass(frozen=True)
class UnitGroupStructure:
    """(Z/qZ)* as a direct product of cyclic groups.

    `components` lists (generator, order) pairs; exponent vectors over the
    component orders enumerate the group exactly once.  Built per prime
    power of q: one primitive root for odd p^e, the pair (-1, 5) with
    orders (2, 2^{e-2}) for 2^e with e >= 3.
    """

    q: int
    phi: int
    lam: int
    components: tuple[tuple[int, int], ...]

    def element(self, exponents: tuple[int, ...]) -> int:
        out = 1
        for (g, _), e in zip(self.components, exponents):
            out = out * pow(g, e, self.q) % self.q
        return out


@lru_cache(maxsize=None)
def unit_group(q: int) -> UnitGroupStructure:
    """Cyclic decomposition of (Z/qZ)* (trivial for q in {1, 2})."""
    if q < 1:
        raise InvalidInputError(f"no unit group mod {q}")
    comps: list[tuple[int, int]] = []
    for p, e in factorize(q).factors:
        pe = p**e
        if p == 2:
            if e == 2:
                comps.append((_crt_lift(3, 4, q), 2))
            elif e >= 3:
                comps.append((_crt_lift(pe - 1, pe, q), 2))
                comps.append((_crt_lift(5, pe, q), 2 ** (e - 2)))
            # 2^1 contributes nothing
        else:
            comps.append((_crt_lift(_primitive_root(p, e), pe, q), (p - 1) * p ** (e - 1)))
    return UnitGroupStructure(
        q=q,
        phi=euler_phi(q),
        lam=carmichael_lambda(q),
        components=tuple(comps),
    )


@lru_cache(maxsize=None)
def discrete_log_table(q: int) -> dict[int, tuple[int, ...]]:
    """Exponent vector of every unit mod q over unit_group(q).components."""
    structure = unit_group(q)
    table: dict[int, tuple[int, ...]] = {1 % q: ()} if not structure.components else {}
    if not structure.components:
        return table

    def walk(idx: int, value: int, expo: list[int]) -> None:
        if idx == len(structure.components):
            table[value] = tuple(expo)
            return
        g, order = structure.components[idx]
        cur = value
        for e in range(order):
            expo.append(e)
            walk(idx + 1, cur, expo)
            expo.pop()
            cur = cur * g % q
        return

    walk(0, 1, [])
    if len(table) != structure.phi:
        raise ArithmeticError(f"cyclic decomposition of q={q} is not a bijection")
    return table
