"""Classical closed forms for small moduli, used as golden cross-checks.

These evaluate the hand-derived expressions for C(q, 1)^phi(q) at q in
{4, 6, 8, 24, 5, 15} (Uchiyama's, Grosswald's, and Williams's formulas and
the two quartic-character cases), and the elementary expressions for
Pi(q, 1) at q in {8, 5, 24, 15}.  The residue-class products are evaluated
through the same truncated machinery as the generic pipeline, so comparing
the two isolates the identity algebra from the truncation error.
"""

from __future__ import annotations

import mpmath as mp

from .errors import InvalidInputError
from .numerics import DEFAULT_PRECISION, BigReal, euler_gamma, working_precision
from .primes import residue_class_product

PI_CLOSED_FORM_MODULI = (8, 5, 24, 15)
C_CLOSED_FORM_MODULI = (4, 6, 8, 24, 5, 15)


def pi_closed_form(q: int, precision: int = DEFAULT_PRECISION) -> BigReal:
    """Elementary expression for Pi(q, 1), available for q in {8, 5, 24, 15}."""
    with working_precision(precision):
        if q == 8:
            return 32 / mp.pi**2 / mp.log(3 + 2 * mp.sqrt(2))
        if q == 5:
            golden = (1 + mp.sqrt(5)) / 2
            return 25 * mp.sqrt(5) / mp.pi**2 / (4 * mp.log(golden))
        if q == 24:
            return 486 / (
                mp.pi**4
                * mp.log(2 + mp.sqrt(3))
                * mp.log(1 + mp.sqrt(2))
                * mp.log(5 + 2 * mp.sqrt(6))
            )
        if q == 15:
            golden = (1 + mp.sqrt(5)) / 2
            inverse = (
                mp.mpf(2) ** 9
                * mp.pi**4
                / (3 * mp.mpf(15) ** 4)
                * (
                    mp.log(mp.sinpi(mp.mpf(1) / 15) / mp.sinpi(mp.mpf(4) / 15)) ** 2
                    + mp.log(mp.sinpi(mp.mpf(7) / 15) / mp.sinpi(mp.mpf(2) / 15)) ** 2
                )
                * mp.log(golden)
            )
            return 1 / inverse
    raise InvalidInputError(f"no closed form for Pi({q}, 1)")


def c_power_closed_form(
    q: int, bound: int, precision: int = DEFAULT_PRECISION
) -> BigReal:
    """C(q, 1)^phi(q) by the classical formula for q in {4, 6, 8, 24, 5, 15},
    with class products truncated at `bound`."""
    with working_precision(precision):
        gamma_factor = mp.exp(-euler_gamma(precision))
        if q == 4:
            return (
                mp.pi * gamma_factor * residue_class_product(4, 1, 2, 1, bound, precision).value
            )
        if q == 6:
            return (
                2 * mp.pi * mp.sqrt(3) / 3
                * gamma_factor
                * residue_class_product(6, 1, 2, 1, bound, precision).value
            )
        if q == 8:
            return (
                mp.pi**2 * gamma_factor / mp.log(3 + 2 * mp.sqrt(2))
                * residue_class_product(8, 1, 2, 2, bound, precision).value
            )
        if q == 24:
            return (
                2 * mp.pi**4 * gamma_factor
                / (
                    9
                    * mp.log(2 + mp.sqrt(3))
                    * mp.log(1 + mp.sqrt(2))
                    * mp.log(5 + 2 * mp.sqrt(6))
                )
                * residue_class_product(24, 1, 2, 4, bound, precision).value
            )
        if q == 5:
            golden = (1 + mp.sqrt(5)) / 2
            return (
                13 * mp.sqrt(5) * mp.pi**2 * gamma_factor / (150 * mp.log(golden))
                * residue_class_product(5, 1, 4, 1, bound, precision).value
                * residue_class_product(5, 4, 2, -2, bound, precision).value
                * residue_class_product(5, 4, 4, 1, bound, precision).value
            )
        if q == 15:
            mixed = mp.mpf(1)
            for b in (4, 11, 14):
                mixed *= (
                    residue_class_product(15, b, 2, -4, bound, precision).value
                    * residue_class_product(15, b, 4, 2, bound, precision).value
                )
            return (
                mp.mpf(15) / 8
                * mp.pi**8 / 8100
                * (mp.mpf(3328) / 3375) ** 2
                * gamma_factor
                * pi_closed_form(15, precision)
                * residue_class_product(15, 1, 4, 2, bound, precision).value
                * mixed
            )
    raise InvalidInputError(f"no closed form for C({q}, 1)")
