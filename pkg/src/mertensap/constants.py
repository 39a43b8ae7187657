"""Assembly of the Mertens-progression constants c(q, a) and C(q, a).

The constant behind prod_{p <= x, p = a (q)} (1 - 1/p) ~ C(q,a) (log x)^{-1/phi(q)}
satisfies C(q,a)^phi = exp(-gamma) (q/phi) c(q,a), and c(q,a) factors into
L-function data (Pi(q,a)), zeta values, and rapidly convergent residue-class
products.  Two assembly routes are implemented:

* a = 1: zeta(lam)^{phi/lam} * Pi(q,1) * [p | q factor] * [class-1 product]
  * [mixed products over units of non-maximal order], where lam is the
  maximal element order; grouping the maximal-order classes into the zeta
  factor is what makes the product converge fast.  An ungrouped per-class
  strategy is kept behind a flag purely as a cross-check.
* a != 1: Pi(q,a) * exp(phi * B(q,a)) * [partial-logarithm series factors
  over the classes that reach a] * [the a-class series with its 1/p head
  cancelled symbolically], with B the Meissel-type sum over p = a (q).

Every truncated factor carries a rigorous log-domain tail bound; the bounds
are summed into a first-order error for C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from . import kernels
from .errors import (
    IdentityViolationError,
    InvalidInputError,
    NonRealResultError,
    NotAUnitError,
)
from .characters import enumerate_characters, evaluate
from .lfunctions import DEFAULT_BRANCH_BOUND, capital_pi
from .numerics import (
    DEFAULT_PRECISION,
    BigReal,
    euler_gamma,
    working_precision,
    zeta_even,
)
from .primes import (
    TailBoundedValue,
    class_f_sum,
    direct_mertens_product,
    meissel_B,
    partial_c_product,
    residue_class_product,
)
from .unitgroup import (
    element_order,
    euler_phi,
    factorize,
    non_maximal_set,
    reachable_set,
    unit_group,
    units,
)

DEFAULT_PRIME_BOUND = 10**7

_CLOSED_FORMS = {"tt", (2, 1), (4, 1), (4, 2), (4, 3)}


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of the partial-logarithm series sum_{n = s (t)} x^n / n."""

    t: int
    s: int
    target_error: BigReal = mp.mpf("1e-30")

    def __post_init__(self) -> None:
        if not (self.t >= 1 and 1 <= self.s <= self.t):
            raise InvalidInputError("need 1 <= s <= t")

    @property
    def has_closed_form(self) -> bool:
        return self.s == self.t or (self.t, self.s) in _CLOSED_FORMS


def _f_series(t: int, s: int, x: BigReal, target_error: BigReal) -> BigReal:
    acc = mp.mpf(0)
    term = abs(x) ** s
    n = s
    xt = abs(x) ** t
    # remainder after the term at index M is below x^{M+1} / ((M+1)(1-x))
    while term * abs(x) / ((n + 1) * (1 - abs(x))) >= target_error:
        n += t
        term *= xt
    top = n
    acc = mp.mpf(0)
    for n in range(top, s - 1, -t):  # sum small-to-large for stability
        acc += x**n / n
    return acc


def _f_closed(t: int, s: int, x: BigReal) -> BigReal:
    if s == t:
        return -mp.log(1 - x**t) / t
    key = (t, s)
    if key == (2, 1):
        return mp.log((1 + x) / (1 - x)) / 2
    if key == (4, 1):
        return mp.log((1 + x) / (1 - x)) / 4 + mp.atan(x) / 2
    if key == (4, 2):
        return mp.log((1 + x**2) / (1 - x**2)) / 4
    if key == (4, 3):
        return mp.log((1 + x) / (1 - x)) / 4 - mp.atan(x) / 2
    raise InvalidInputError(f"no closed form for (t, s) = {key}")


def f_ts(
    t: int,
    s: int,
    x: BigReal,
    target_error: BigReal = mp.mpf("1e-30"),
    method: str = "auto",
) -> BigReal:
    """The partial-logarithm series sum_{n >= 1, n = s (mod t)} x^n / n.

    The series is summed until the geometric remainder bound
    x^{M+1} / ((M+1)(1-x)) drops below target_error.  For the handful of
    (t, s) with an elementary closed form, method="auto" evaluates the
    closed form and cross-checks it against the series; "series" and
    "closed" force one route.
    """
    spec = SeriesSpec(t, s, target_error)
    x = mp.mpf(x)
    if abs(x) >= 1:
        raise InvalidInputError("series requires |x| < 1")
    if method not in ("auto", "series", "closed"):
        raise InvalidInputError(f"unknown method {method!r}")
    if method == "closed" or (method == "auto" and spec.has_closed_form):
        closed = _f_closed(t, s, x)
        if method == "auto":
            series = _f_series(t, s, x, target_error)
            if abs(closed - series) > target_error:
                raise IdentityViolationError(
                    f"closed form and series disagree for f_({t},{s})({x})"
                )
        return closed
    return _f_series(t, s, x, target_error)


@dataclass
class MertensResult:
    """c(q, a) and C(q, a) with the labeled factors of the assembly.

    `components` maps factor labels to truncated values; each tail bound
    lives on the log scale of c.  `total_error` is the first-order bound on
    |Delta C| obtained by pushing the summed log tails through the
    exponential and the phi-th root.  The `meissel_B` component stores the
    factor exp(phi * B(q, a)), so B itself is log(value) / phi.
    """

    q: int
    a: int
    c_value: BigReal
    C_value: BigReal
    method: str
    components: dict[str, TailBoundedValue] = field(default_factory=dict)
    total_error: BigReal = mp.mpf(0)
    precision: int = DEFAULT_PRECISION
    prime_bound: int = DEFAULT_PRIME_BOUND

    @property
    def phi(self) -> int:
        return euler_phi(self.q)

    @property
    def lam(self) -> int:
        return unit_group(self.q).lam

    def heuristic_error(self) -> BigReal:
        """Density-refined error estimate: the rigorous bound divided by
        phi(q) log(bound).  Heuristic; never used in certificates."""
        with working_precision(self.precision):
            return self.total_error / (self.phi * mp.log(self.prime_bound))

    def root_consistency_residual(self) -> BigReal:
        """|C^phi - exp(-gamma) (q/phi) c|, a pure algebra check."""
        with working_precision(self.precision):
            lhs = self.C_value**self.phi
            rhs = (
                mp.exp(-euler_gamma(self.precision)) * mp.mpf(self.q) / self.phi * self.c_value
            )
            return abs(lhs - rhs)


def _validate_qa(q: int, a: int) -> int:
    if q < 3:
        raise InvalidInputError("q must be >= 3 (the unit group mod 1, 2 is trivial)")
    if math.gcd(a, q) != 1:
        raise NotAUnitError(f"{a} is not a unit mod {q}")
    return a % q


def _finish(
    q: int,
    a: int,
    components: dict[str, TailBoundedValue],
    precision: int,
    prime_bound: int,
) -> MertensResult:
    """Multiply the labeled factors into c, convert to C, propagate tails."""
    phi = euler_phi(q)
    with working_precision(precision):
        log_c = mp.fsum(mp.log(comp.value) for comp in components.values())
        c_value = mp.exp(log_c)
        log_tail = mp.fsum(comp.tail_bound for comp in components.values())
        C_value = mp.exp(
            (log_c - euler_gamma(precision) + mp.log(mp.mpf(q) / phi)) / phi
        )
        total_error = C_value * log_tail / phi
    return MertensResult(
        q=q,
        a=a,
        c_value=c_value,
        C_value=C_value,
        method="identity",
        components=components,
        total_error=total_error,
        precision=precision,
        prime_bound=prime_bound,
    )


def c_q1(
    q: int,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    strategy: str = "grouped",
) -> MertensResult:
    """The a = 1 constant via the maximal-order grouping (default) or the
    ungrouped per-class product (cross-check only)."""
    _validate_qa(q, 1)
    if strategy not in ("grouped", "per-class"):
        raise InvalidInputError(f"unknown strategy {strategy!r}")
    structure = unit_group(q)
    phi, lam = structure.phi, structure.lam
    components: dict[str, TailBoundedValue] = {}
    with working_precision(precision):
        components["Pi"] = TailBoundedValue(
            capital_pi(q, 1, precision), mp.mpf(0), prime_bound
        )
        if strategy == "per-class":
            for b in units(q):
                if b == 1:
                    continue
                t_b = element_order(b, q)
                components[f"class_{b}_product"] = residue_class_product(
                    q, b, t_b, Fraction(-phi, t_b), prime_bound, precision
                )
            return _finish(q, 1, components, precision, prime_bound)

        components["zeta_power"] = TailBoundedValue(
            zeta_even(lam, precision) ** Fraction(phi, lam), mp.mpf(0), prime_bound
        )
        divisor_factor = mp.mpf(1)
        for p in factorize(q).primes():
            divisor_factor *= (1 - mp.mpf(p) ** (-lam)) ** Fraction(phi, lam)
        components["prime_divisor_factor"] = TailBoundedValue(
            divisor_factor, mp.mpf(0), prime_bound
        )
        components["class_1_product"] = residue_class_product(
            q, 1, lam, Fraction(phi, lam), prime_bound, precision
        )
        for b in sorted(non_maximal_set(q)):
            t_b = element_order(b, q)
            order_part = residue_class_product(
                q, b, t_b, Fraction(-phi, t_b), prime_bound, precision
            )
            max_part = residue_class_product(
                q, b, lam, Fraction(phi, lam), prime_bound, precision
            )
            components[f"class_{b}_mixed"] = TailBoundedValue(
                order_part.value * max_part.value,
                order_part.tail_bound + max_part.tail_bound,
                prime_bound,
            )
    return _finish(q, 1, components, precision, prime_bound)


def c_qa(
    q: int,
    a: int,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_PRIME_BOUND,
) -> MertensResult:
    """The a != 1 constant: Pi(q,a), the Meissel-type sum over the a class,
    partial-logarithm series over the classes that reach a, and the a-class
    series with its exact 1/p head removed."""
    a = _validate_qa(q, a)
    if a == 1:
        raise InvalidInputError("a = 1 (mod q) is handled by c_q1")
    phi = euler_phi(q)
    components: dict[str, TailBoundedValue] = {}
    with working_precision(precision):
        components["Pi"] = TailBoundedValue(
            capital_pi(q, a, precision), mp.mpf(0), prime_bound
        )
        for b, sol in sorted(reachable_set(q, a).items()):
            f_part = class_f_sum(q, b, sol.t, sol.s, prime_bound, precision=precision)
            components[f"class_{b}_f_{sol.t}_{sol.s}"] = TailBoundedValue(
                mp.exp(phi * f_part.value), phi * f_part.tail_bound, prime_bound
            )
        b_sum = meissel_B(q, a, prime_bound, precision)
        components["meissel_B"] = TailBoundedValue(
            mp.exp(phi * b_sum.value), phi * b_sum.tail_bound, prime_bound
        )
        t_a = element_order(a, q)
        a_series = class_f_sum(
            q, a, t_a, 1, prime_bound, drop_linear_term=True, precision=precision
        )
        components["class_a_f_series"] = TailBoundedValue(
            mp.exp(phi * a_series.value), phi * a_series.tail_bound, prime_bound
        )
    return _finish(q, a, components, precision, prime_bound)


def big_C(
    q: int,
    a: int,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_PRIME_BOUND,
) -> MertensResult:
    """C(q, a), taking the positive real phi-th root of
    exp(-gamma) (q/phi) c(q, a)."""
    a = _validate_qa(q, a)
    if a == 1:
        return c_q1(q, precision, prime_bound)
    return c_qa(q, a, precision, prime_bound)


def verify_main_product(
    q: int, a: int, x: int, precision: int = DEFAULT_PRECISION
) -> tuple[BigReal, BigReal]:
    """Both sides of the finite orthogonality identity at truncation x.

    LHS: partial_c_product(q, a, x) times prod_{chi != chi0} prod_{p <= x}
    (1 - chi(p)/p)^{-conj(chi)(a)}.  RHS: the same factors regrouped per
    prime.  All complex powers go through the principal Log of each factor
    (safe: every factor has positive real part since |chi(p)/p| <= 1/2).
    Raises IdentityViolationError if the sides differ beyond tolerance.
    """
    a = _validate_qa(q, a)
    if x < 2:
        raise InvalidInputError("x must be at least 2")
    with working_precision(precision):
        twists = [
            (chi, evaluate(chi.conjugate(), a).to_mpc())
            for chi in enumerate_characters(q)
            if not chi.is_principal
        ]
        primes = [p for p in kernels.primes_range(2, x + 1) if q % p != 0]

        lhs_log = mp.mpc(mp.log(partial_c_product(q, a, x, precision)))
        rhs_log = mp.mpc(0)
        for p in primes:
            log_real = mp.log(1 - mp.mpf(1) / p)
            for chi, w in twists:
                chi_p = evaluate(chi, p).to_mpc()
                log_twist = mp.log(1 - chi_p / p)
                lhs_log -= w * log_twist
                rhs_log += w * chi_p * log_real - w * log_twist

        real_tol = mp.mpf(10) ** (-(precision - 5))
        if abs(lhs_log.imag) > real_tol or abs(rhs_log.imag) > real_tol:
            raise NonRealResultError("main-product sides are not real")
        lhs = mp.exp(lhs_log.real)
        rhs = mp.exp(rhs_log.real)
        if abs(lhs - rhs) > mp.mpf(10) ** (-(precision - 8)):
            raise IdentityViolationError(
                f"main product identity violated at q={q}, a={a}, x={x}: "
                f"|lhs-rhs| = {mp.nstr(abs(lhs - rhs), 5)}"
            )
        return lhs, rhs


def complement_check(
    q: int,
    precision: int = DEFAULT_PRECISION,
    prime_bound: int = DEFAULT_PRIME_BOUND,
) -> BigReal:
    """|prod over units a of C(q, a) - exp(-gamma) q / phi(q)|.

    The limit identity follows from the defining product of C because the
    class exponents alpha(p; q, a) sum to zero over a for p not dividing q;
    at a finite prime bound the residual reflects the truncation tails.
    """
    if q < 3:
        raise InvalidInputError("q must be >= 3")
    with working_precision(precision):
        prod = mp.mpf(1)
        for a in units(q):
            prod *= big_C(q, a, precision, prime_bound).C_value
        target = mp.exp(-euler_gamma(precision)) * mp.mpf(q) / euler_phi(q)
        return abs(prod - target)


def asymptotic_probe(
    q: int, a: int, x_list: list[int], precision: int = DEFAULT_PRECISION
) -> list[tuple[int, BigReal]]:
    """Direct estimates P(x; q, a) (log x)^{1/phi} of C(q, a) along x_list."""
    a = _validate_qa(q, a)
    if list(x_list) != sorted(x_list):
        raise InvalidInputError("x_list must be increasing")
    phi = euler_phi(q)
    out = []
    with working_precision(precision):
        for x in x_list:
            value = direct_mertens_product(q, a, x, precision)
            out.append((x, value * mp.log(x) ** (mp.mpf(1) / phi)))
    return out
