"""Dirichlet characters mod q with exact root-of-unity values.

A character is an exponent vector against the fixed generator basis of
(Z/qZ)*; its values are exact rational rotations, so finite character sums
can be evaluated without floating point.  Integer extraction from a sum of
roots of unity goes through reduction modulo the cyclotomic polynomial when
the root order is small (<= 64), with a high-precision rounding check as
the fallback beyond that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

from .errors import InvalidInputError, NotAUnitError
from .unitgroup import (
    discrete_log_table,
    element_order,
    factorize,
    power_residue_class,
    unit_group,
)

# Above this root order the exact cyclotomic route gives way to numerics.
_EXACT_ORDER_LIMIT = 64


@dataclass(frozen=True)
class UnityRoot:
    """exp(2*pi*i * numerator/denominator), or the distinguished zero.

    Normalized so 0 <= numerator < denominator and gcd = 1; zero (the value
    of a character off the units) is kept distinct from every actual root.
    """

    numerator: int
    denominator: int
    is_zero: bool = False

    @staticmethod
    def zero() -> "UnityRoot":
        return UnityRoot(0, 1, True)

    @staticmethod
    def one() -> "UnityRoot":
        return UnityRoot(0, 1)

    @staticmethod
    def from_fraction(num: int, den: int) -> "UnityRoot":
        if den <= 0:
            raise InvalidInputError("denominator must be positive")
        frac = Fraction(num, den) % 1
        return UnityRoot(frac.numerator, frac.denominator)

    def __mul__(self, other: "UnityRoot") -> "UnityRoot":
        if self.is_zero or other.is_zero:
            return UnityRoot.zero()
        return UnityRoot.from_fraction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __pow__(self, m: int) -> "UnityRoot":
        if self.is_zero:
            return UnityRoot.zero()
        return UnityRoot.from_fraction(self.numerator * m, self.denominator)

    def conjugate(self) -> "UnityRoot":
        if self.is_zero:
            return UnityRoot.zero()
        return UnityRoot.from_fraction(-self.numerator, self.denominator)

    @property
    def is_one(self) -> bool:
        return not self.is_zero and self.numerator == 0

    @property
    def is_real(self) -> bool:
        return self.is_zero or self.denominator in (1, 2)

    def real_value(self) -> int:
        """The exact value for zero and +-1 roots; error otherwise."""
        if self.is_zero:
            return 0
        if self.denominator == 1:
            return 1
        if self.denominator == 2:
            return -1
        raise InvalidInputError(f"{self} is not rational-real")

    def to_mpc(self) -> mp.mpc:
        """Numeric value at the current mpmath working precision."""
        if self.is_zero:
            return mp.mpc(0)
        return mp.expjpi(mp.mpf(2 * self.numerator) / self.denominator)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q as an exponent vector over the generator basis."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = [o for _, o in unit_group(self.modulus).components]
        if len(self.exponents) != len(orders):
            raise InvalidInputError("exponent vector length mismatch")
        if any(not 0 <= e < o for e, o in zip(self.exponents, orders)):
            raise InvalidInputError("exponents must be reduced mod component orders")

    @property
    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def conjugate(self) -> "DirichletCharacter":
        orders = [o for _, o in unit_group(self.modulus).components]
        return DirichletCharacter(
            self.modulus, tuple((-e) % o for e, o in zip(self.exponents, orders))
        )

    def power(self, m: int) -> "DirichletCharacter":
        orders = [o for _, o in unit_group(self.modulus).components]
        return DirichletCharacter(
            self.modulus, tuple((e * m) % o for e, o in zip(self.exponents, orders))
        )

    def __call__(self, n: int) -> UnityRoot:
        return evaluate(self, n)

    def parity(self) -> int:
        """0 for even characters (chi(-1) = 1), 1 for odd."""
        return 0 if evaluate(self, -1).is_one else 1

    def order(self) -> int:
        orders = [o for _, o in unit_group(self.modulus).components]
        return math.lcm(
            *(o // math.gcd(e, o) for e, o in zip(self.exponents, orders))
        ) if self.exponents else 1


@lru_cache(maxsize=None)
def _characters_tuple(q: int) -> tuple[DirichletCharacter, ...]:
    orders = [o for _, o in unit_group(q).components]
    out: list[DirichletCharacter] = []

    def walk(idx: int, expo: list[int]) -> None:
        if idx == len(orders):
            out.append(DirichletCharacter(q, tuple(expo)))
            return
        for e in range(orders[idx]):
            expo.append(e)
            walk(idx + 1, expo)
            expo.pop()

    walk(0, [])
    return tuple(out)


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, principal first, lexicographic."""
    if q < 1:
        raise InvalidInputError(f"no characters mod {q}")
    return list(_characters_tuple(q))


def _lambda_exponent(chi: DirichletCharacter, n: int) -> int | None:
    """chi(n) encoded as k with chi(n) = exp(2*pi*i*k/lam); None off units."""
    q = chi.modulus
    structure = unit_group(q)
    n %= q
    table = discrete_log_table(q)
    if n not in table:
        return None
    dlog = table[n]
    lam = structure.lam
    k = 0
    for e, d, (_, order) in zip(chi.exponents, dlog, structure.components):
        k += e * d * (lam // order)
    return k % lam


def evaluate(chi: DirichletCharacter, n: int) -> UnityRoot:
    """chi(n) as an exact root of unity; zero off the units."""
    k = _lambda_exponent(chi, n)
    if k is None:
        return UnityRoot.zero()
    return UnityRoot.from_fraction(k, unit_group(chi.modulus).lam)


@dataclass(frozen=True)
class PrimitiveInduction:
    """Minimal conductor f and the primitive character mod f inducing chi."""

    conductor: int
    primitive_character: DirichletCharacter


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def conductor_and_primitive(chi: DirichletCharacter) -> PrimitiveInduction:
    """Find the least f | q through which chi factors, and the inducing character."""
    q = chi.modulus
    for f in _divisors(q):
        # chi factors through f iff it is trivial on units congruent to 1 mod f
        if all(
            evaluate(chi, u).is_one
            for u in range(1, q + 1)
            if u % f == 1 % f and math.gcd(u, q) == 1
        ):
            return PrimitiveInduction(f, _restrict(chi, f))
    raise ArithmeticError("conductor search fell through")  # pragma: no cover


def _restrict(chi: DirichletCharacter, f: int) -> DirichletCharacter:
    """The character mod f agreeing with chi on residues coprime to q."""
    q = chi.modulus
    structure_f = unit_group(f)
    exponents = []
    for g, order in structure_f.components:
        # shift g mod f to a representative coprime to q
        rep = g
        while math.gcd(rep, q) != 1:
            rep += f
        value = evaluate(chi, rep)
        if value.is_zero or order % value.denominator != 0:
            raise ArithmeticError("character does not factor through f")
        exponents.append(value.numerator * (order // value.denominator) % order)
    return DirichletCharacter(f, tuple(exponents))


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low to high."""
    # divide x^n - 1 by the cyclotomic polynomials of the proper divisors
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d:
            continue
        div = list(cyclotomic_coefficients(d))
        quot = [0] * (len(poly) - len(div) + 1)
        rem = list(poly)
        for i in range(len(quot) - 1, -1, -1):
            coef = rem[i + len(div) - 1] // div[-1]
            quot[i] = coef
            if coef:
                for j, c in enumerate(div):
                    rem[i + j] -= coef * c
        if any(rem):
            raise ArithmeticError("cyclotomic division left a remainder")
        poly = quot
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_matrix(n: int) -> np.ndarray:
    """Row k holds the coefficients of x^k reduced mod the n-th cyclotomic."""
    phi_coeffs = cyclotomic_coefficients(n)
    deg = len(phi_coeffs) - 1
    rows = np.zeros((n, deg), dtype=np.int64)
    rows[:deg] = np.eye(deg, dtype=np.int64)
    for k in range(deg, n):
        # x^k = x * x^{k-1}; shift then eliminate the overflow coefficient
        prev = rows[k - 1]
        shifted = np.zeros(deg + 1, dtype=np.int64)
        shifted[1:] = prev
        rows[k] = shifted[:deg] - shifted[deg] * np.asarray(phi_coeffs[:deg])
    return rows


def _root_counts_to_integer(counts: np.ndarray, order: int) -> int:
    """Exact value of sum_k counts[k] * exp(2*pi*i*k/order), which must be
    a rational integer."""
    reduced = counts @ _reduction_matrix(order)
    if any(reduced[1:]):
        raise ArithmeticError("root-of-unity sum is not a rational integer")
    return int(reduced[0])


def _char_sums_batched(q: int, a: int, b: int, m_values: list[int]) -> list[int]:
    """sum_chi conj(chi)(a) * (chi^m(b) - chi(b)) for each m, exactly.

    Accumulates integer coordinates over the lam(q)-th roots and reduces
    modulo the cyclotomic polynomial; for lam(q) > 64 falls back to
    high-precision complex summation with an integer rounding check.
    """
    if math.gcd(a, q) != 1 or math.gcd(b, q) != 1:
        raise NotAUnitError(f"{a} and {b} must be units mod {q}")
    lam = unit_group(q).lam
    chars = enumerate_characters(q)
    k_conj_a = np.array([_lambda_exponent(chi, pow(a, -1, q)) for chi in chars])
    k_b = np.array([_lambda_exponent(chi, b) for chi in chars])
    ms = np.asarray(m_values, dtype=np.int64)

    # counts[i, k] = #{chi : conj(chi)(a) * chi^m_i(b) = exp(2 pi i k / lam)}
    expo = (k_conj_a[None, :] + ms[:, None] * k_b[None, :]) % lam
    flat = (expo + lam * np.arange(len(ms))[:, None]).ravel()
    counts = np.bincount(flat, minlength=lam * len(ms)).reshape(len(ms), lam)
    base = np.bincount((k_conj_a + k_b) % lam, minlength=lam)

    if lam <= _EXACT_ORDER_LIMIT:
        base_val = _root_counts_to_integer(base, lam)
        return [
            _root_counts_to_integer(counts[i], lam) - base_val
            for i in range(len(ms))
        ]

    with mp.workdps(40):
        roots = [mp.expjpi(mp.mpf(2 * k) / lam) for k in range(lam)]
        base_c = mp.fsum(int(c) * r for c, r in zip(base, roots) if c)
        out = []
        for i in range(len(ms)):
            val = mp.fsum(int(c) * r for c, r in zip(counts[i], roots) if c) - base_c
            nearest = int(mp.nint(val.real))
            if abs(val - nearest) > mp.mpf("1e-10"):
                raise ArithmeticError("character sum failed the integer check")
            out.append(nearest)
        return out


def char_sum_Sm_direct(q: int, a: int, b: int, m: int) -> int:
    """Character sum over all chi mod q by explicit summation of exact roots."""
    return _char_sums_batched(q, a, b, [m])[0]


def char_sum_Sm_lemma(q: int, a: int, b: int, m: int) -> int:
    """The same character sum from the orbit data of b.

    The sum is -phi(q) on the a = b class off the m = 1 progression,
    phi(q) on classes that reach a when m lands in the solution class,
    and 0 otherwise.
    """
    a %= q
    b %= q
    if math.gcd(a, q) != 1 or math.gcd(b, q) != 1:
        raise NotAUnitError(f"{a} and {b} must be units mod {q}")
    phi = unit_group(q).phi
    if a == b:
        if a == 1:
            return 0
        t_a = element_order(a, q)
        return 0 if m % t_a == 1 % t_a else -phi
    sol = power_residue_class(b, a, q)
    if sol.solvable and m % sol.t == sol.s % sol.t:
        return phi
    return 0
