"""L(1, chi) for non-principal Dirichlet characters, and the product
Pi(q, a) = prod_{chi != chi0} L(1, chi)^{-conj(chi)(a)}.

Values come from the classical finite formulas for primitive characters
(log-sine sums for even chi, the weighted-residue sum with pi for odd chi,
both via Gauss sums), with the finite Euler-factor correction for
imprimitive characters.

The complex power in Pi(q, a) is ambiguous up to exp(2 pi i k conj(chi)(a));
we fix log L(1, chi) on the branch reached by the Euler-product limit
sum_p -Log(1 - chi(p)/p), which is the branch under which the defining
limit of the constant is valid.  The integer k is pinned against a
truncated Euler sum whose remaining tail must be certified below pi;
the certificate combines the rigorous quadratic tail with a conservative
fluctuation estimate for the linear character sum, and the computation
refuses to guess when the estimate is too large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from . import cache as cache_mod
from . import kernels
from .characters import (
    DirichletCharacter,
    conductor_and_primitive,
    enumerate_characters,
    evaluate,
)
from .errors import (
    BranchUndeterminedError,
    NonRealResultError,
    NotAUnitError,
    PrecisionUnachievableError,
    PrincipalCharacterError,
)
from .numerics import BigComplex, BigReal, DEFAULT_PRECISION, working_precision
from .unitgroup import factorize, units

DEFAULT_BRANCH_BOUND = 10**5

# power-sum depth: 2^-m falls below the kernel cutoff near m = 150
_POWER_SUM_DEPTH = 160


@dataclass(frozen=True)
class LValue:
    """L(1, chi) with its branch-resolved logarithm."""

    character: DirichletCharacter
    value: BigComplex
    branch_log: BigComplex
    precision: int


def gauss_sum(chi: DirichletCharacter, precision: int = DEFAULT_PRECISION) -> BigComplex:
    """sum_a chi(a) e(a/q) over a mod q, at working precision."""
    q = chi.modulus
    with working_precision(precision):
        return mp.fsum(
            (evaluate(chi, a).to_mpc() * mp.expjpi(mp.mpf(2 * a) / q) for a in units(q)),
            absolute=False,
        )


def _primitive_l_value(chi: DirichletCharacter, precision: int) -> BigComplex:
    """Finite closed form of L(1, chi) for primitive non-principal chi."""
    f = chi.modulus
    with working_precision(precision):
        tau = gauss_sum(chi, precision)
        if abs(abs(tau) - mp.sqrt(f)) > mp.mpf(10) ** (-(precision - 2)):
            raise PrecisionUnachievableError(
                f"Gauss sum modulus check failed for modulus {f}"
            )
        conj = chi.conjugate()
        if chi.parity() == 0:
            terms = [
                evaluate(conj, a).to_mpc() * mp.log(2 * mp.sinpi(mp.mpf(a) / f))
                for a in units(f)
            ]
            total = mp.fsum(terms, absolute=False)
            magnitude = mp.fsum(abs(term) for term in terms)
            if magnitude and abs(total) < magnitude * mp.mpf(10) ** (-(precision + 4)):
                raise PrecisionUnachievableError("log-sine sum cancelled to noise")
            return -tau / f * total
        weighted = mp.fsum(
            (evaluate(conj, a).to_mpc() * a for a in units(f)), absolute=False
        )
        return mp.mpc(0, 1) * mp.pi * tau / f**2 * weighted


@lru_cache(maxsize=4096)
def _l_value(chi: DirichletCharacter, precision: int) -> BigComplex:
    """L(1, chi): primitive closed form times the finite Euler correction
    over primes dividing the modulus but not the conductor."""
    if chi.is_principal:
        raise PrincipalCharacterError("L(1, chi) diverges for the principal character")
    induction = conductor_and_primitive(chi)
    f = induction.conductor
    prim = induction.primitive_character
    with working_precision(precision):
        value = _primitive_l_value(prim, precision)
        for p in factorize(chi.modulus).primes():
            if f % p != 0:
                value *= 1 - evaluate(prim, p).to_mpc() / p
        return value


@lru_cache(maxsize=64)
def _euler_checkpoints(q: int, prime_bound: int) -> tuple[tuple[int, dict], ...]:
    """Cumulative per-class prime power sums at nested checkpoints
    (bound/8, bound/4, bound/2, bound)."""
    marks = sorted({max(100, prime_bound // 8), max(100, prime_bound // 4),
                    max(100, prime_bound // 2), prime_bound})
    out = []
    cumulative: dict[int, list[mp.mpf]] | None = None
    lo = 2
    for mark in marks:
        segment = kernels.class_power_sums(q, mark, _POWER_SUM_DEPTH, p_start=lo)
        if cumulative is None:
            cumulative = segment
        else:
            cumulative = {
                b: [mp.fadd(x, y, exact=True) for x, y in zip(cumulative[b], segment[b])]
                for b in cumulative
            }
        out.append((mark, cumulative))
        lo = mark + 1
    return tuple(out)


def _euler_log_sum(chi: DirichletCharacter, power_sums: dict) -> BigComplex:
    """sum over sieved primes of -Log(1 - chi(p)/p), via the expansion
    sum_m chi(b)^m / m * PS_b(m) grouped by residue class."""
    total = mp.mpc(0)
    for b, sums in power_sums.items():
        omega = evaluate(chi, b).to_mpc()
        cur = omega
        for j, ps in enumerate(sums):
            if ps == 0:
                break
            total += cur * ps / (j + 1)
            cur *= omega
    return total


def truncated_euler_log(
    chi: DirichletCharacter,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_BRANCH_BOUND,
) -> tuple[BigComplex, BigReal]:
    """Truncated Euler logarithm sum_{p <= bound} -Log(1 - chi(p)/p) and a
    conservative estimate of the omitted tail.

    The quadratic part of the tail is rigorously below 1/bound; the linear
    character-sum part is estimated from the fluctuation of the partial
    sums over dyadic checkpoints, scaled by a safety factor.  The estimate
    is heuristic (a rigorous bound needs explicit zero-free regions) but
    deliberately conservative.
    """
    if chi.is_principal:
        raise PrincipalCharacterError("Euler logarithm needs a non-principal chi")
    checkpoints = _euler_checkpoints(chi.modulus, prime_bound)
    if len(checkpoints) < 3:
        # with fewer dyadic checkpoints the fluctuation estimate is vacuous
        raise BranchUndeterminedError(
            f"prime bound {prime_bound} leaves too few checkpoints to estimate "
            "the character-sum tail; raise prime_bound"
        )
    with working_precision(precision):
        partials = [_euler_log_sum(chi, ps) for _, ps in checkpoints]
        final = partials[-1]
        fluctuation = max(abs(s - final) for s in partials[:-1])
        tail = 4 * fluctuation + 4 / mp.mpf(prime_bound)
        return final, tail


def branch_resolved_log_l(
    chi: DirichletCharacter,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_BRANCH_BOUND,
) -> BigComplex:
    """log L(1, chi) on the Euler-product branch.

    Principal Log of the closed-form value, shifted by 2 pi i k with k
    pinned by the truncated Euler sum; raises BranchUndeterminedError when
    the tail estimate is not certified below pi."""
    value = _l_value(chi, precision)
    with working_precision(precision):
        principal = mp.log(value)
        if chi.order() <= 2:
            # real character, positive value: the Euler branch is principal
            if value.real <= 0 or abs(value.imag) > mp.mpf(10) ** (-(precision - 5)):
                raise NonRealResultError(
                    f"real character produced non-positive L(1, chi) = {value}"
                )
            return mp.mpc(mp.log(value.real), 0)
        euler, tail = truncated_euler_log(chi, precision, prime_bound)
        if tail >= mp.pi:
            raise BranchUndeterminedError(
                f"tail estimate {mp.nstr(tail, 5)} >= pi at bound {prime_bound}; "
                "raise prime_bound"
            )
        k = int(mp.nint((euler.imag - principal.imag) / (2 * mp.pi)))
        return principal + 2 * mp.pi * mp.mpc(0, 1) * k


@lru_cache(maxsize=4096)
def _branch_log_memoized(
    chi: DirichletCharacter, precision: int, prime_bound: int
) -> BigComplex:
    return branch_resolved_log_l(chi, precision, prime_bound)


def _branch_log_cached(
    chi: DirichletCharacter, precision: int, prime_bound: int
) -> BigComplex:
    """Branch-resolved log with memory memoization and optional disk cache."""
    store = cache_mod.active_store()
    if store is None:
        return _branch_log_memoized(chi, precision, prime_bound)
    key = (
        chi.modulus,
        "-".join(map(str, chi.exponents)) or "principal",
        "l-value",
        0,
        "0",
        prime_bound,
        precision,
    )
    hit = store.get(key)
    if hit is not None:
        re, im = hit[0].split(",")
        return mp.mpc(
            cache_mod.parse_value(re, precision), cache_mod.parse_value(im, precision)
        )
    result = _branch_log_memoized(chi, precision, prime_bound)
    store.put(
        key,
        cache_mod.format_value(result.real, precision)
        + ","
        + cache_mod.format_value(result.imag, precision),
        "0",
    )
    return result


def l_one(chi: DirichletCharacter, precision: int = DEFAULT_PRECISION) -> LValue:
    """L(1, chi) for non-principal chi, with the Euler-branch logarithm."""
    value = _l_value(chi, precision)
    branch = _branch_log_cached(chi, precision, DEFAULT_BRANCH_BOUND)
    return LValue(chi, value, branch, precision)


def capital_pi(
    q: int,
    a: int,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_BRANCH_BOUND,
) -> BigReal:
    """prod over non-principal chi mod q of L(1, chi)^{-conj(chi)(a)},
    evaluated as exp of the branch-resolved logarithm sum.

    Conjugate characters contribute conjugate terms, so the exponent sum is
    real; a residual imaginary part beyond 10^-(precision-5) signals a
    branch or character bug and raises NonRealResultError."""
    if q < 3:
        raise PrincipalCharacterError(f"no non-principal characters mod {q}")
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    with working_precision(precision):
        exponent = mp.mpc(0)
        for chi in enumerate_characters(q):
            if chi.is_principal:
                continue
            weight = evaluate(chi.conjugate(), a).to_mpc()
            exponent -= weight * _branch_log_cached(chi, precision, prime_bound)
        if abs(exponent.imag) > mp.mpf(10) ** (-(precision - 5)):
            raise NonRealResultError(
                f"Pi({q}, {a}) exponent has imaginary residue {mp.nstr(exponent.imag, 5)}"
            )
        result = mp.exp(exponent.real)
        if result <= 0:
            raise NonRealResultError(f"Pi({q}, {a}) must be positive")
        return result
