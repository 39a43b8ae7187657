"""Constant assembly: partial-logarithm series, both c(q, a) routes, the
finite orthogonality identity, and the complement product."""

import json

import mpmath as mp
import pytest

from mertensap.closed_forms import c_power_closed_form, pi_closed_form
from mertensap.constants import (
    MertensResult,
    SeriesSpec,
    asymptotic_probe,
    big_C,
    c_q1,
    c_qa,
    complement_check,
    f_ts,
    verify_main_product,
)
from mertensap.errors import IdentityViolationError, InvalidInputError, NotAUnitError
from mertensap.kernels import primes_range
from mertensap.lfunctions import capital_pi
from mertensap.numerics import euler_gamma, working_precision
from mertensap.primes import meissel_B
from mertensap.unitgroup import euler_phi

# Independent oracle (standalone sieve + mpmath @ 50 digits):
# sqrt(pi exp(-gamma) prod_{p <= 1e7, p = 1 (4)} (1 - p^-2))
ORACLE_C_4_1_AT_1E7 = "1.292304159021742463999508518218911415278"


class TestFTS:
    @pytest.mark.parametrize("x_str", ["0.5", "1/3", "1/7"])
    def test_f22_is_half_log(self, x_str):
        with working_precision(30):
            x = mp.mpf(1) / 3 if x_str == "1/3" else (mp.mpf(1) / 7 if x_str == "1/7" else mp.mpf("0.5"))
            series = f_ts(2, 1, x, mp.mpf("1e-30"), method="series")
            closed = mp.log((1 + x) / (1 - x)) / 2
            assert abs(series - closed) < mp.mpf("1e-25")

    def test_ftt_is_log_form(self):
        with working_precision(30):
            for t in range(1, 7):
                for x in (mp.mpf("0.5"), mp.mpf(1) / 3, mp.mpf(1) / 7):
                    series = f_ts(t, t, x, mp.mpf("1e-30"), method="series")
                    assert abs(series + mp.log(1 - x**t) / t) < mp.mpf("1e-25")

    def test_quartic_triple(self):
        with working_precision(30):
            x = mp.mpf(1) / 3
            atan_half = mp.atan(x) / 2
            log_quarter = mp.log((1 + x) / (1 - x)) / 4
            assert abs(f_ts(4, 1, x) - (log_quarter + atan_half)) < mp.mpf("1e-25")
            assert abs(f_ts(4, 3, x) - (log_quarter - atan_half)) < mp.mpf("1e-25")
            assert abs(f_ts(4, 2, x) - mp.log((1 + x**2) / (1 - x**2)) / 4) < mp.mpf("1e-25")

    def test_integral_form_quadrature(self):
        with working_precision(30):
            for t, s in ((4, 3), (3, 2), (5, 1)):
                x = mp.mpf("0.5")
                series = f_ts(t, s, x, mp.mpf("1e-30"), method="series")
                quad = mp.quad(lambda u: u ** (s - 1) / (1 - u**t), [0, x])
                assert abs(series - quad) < mp.mpf("1e-12")

    def test_sum_over_residues_recovers_full_log(self):
        with working_precision(30):
            t, x = 5, mp.mpf(1) / 7
            total = mp.fsum(
                f_ts(t, s, x, mp.mpf("1e-32"), method="series") for s in range(1, t + 1)
            )
            assert abs(total + mp.log(1 - x)) < mp.mpf("1e-28")

    def test_auto_cross_checks(self):
        with working_precision(30):
            assert abs(
                f_ts(2, 1, mp.mpf("0.5"), method="auto")
                - f_ts(2, 1, mp.mpf("0.5"), method="series")
            ) < mp.mpf("1e-28")

    def test_spec_flags(self):
        assert SeriesSpec(2, 1).has_closed_form
        assert SeriesSpec(4, 2).has_closed_form
        assert SeriesSpec(6, 6).has_closed_form
        assert not SeriesSpec(5, 2).has_closed_form

    def test_domain_errors(self):
        with pytest.raises(InvalidInputError):
            f_ts(4, 5, mp.mpf("0.5"))
        with pytest.raises(InvalidInputError):
            f_ts(4, 2, mp.mpf("1.0"))
        with pytest.raises(InvalidInputError):
            f_ts(4, 2, mp.mpf("0.5"), method="wat")


def independent_c54(bound: int) -> mp.mpf:
    """c(5, 4) assembled per-prime from the explicit product form:
    Pi * exp(4 B) * prod_{p=2,3 (5)} (1+p^-2)/(1-p^-2)
    * prod_{p=4 (5)} ((1+1/p)/(1-1/p))^2 exp(-4/p)."""
    value = capital_pi(5, 4, 30) * mp.exp(4 * meissel_B(5, 4, bound).value)
    for p in primes_range(2, bound + 1):
        r = p % 5
        x = 1 / mp.mpf(p)
        if r in (2, 3):
            value *= (1 + x**2) / (1 - x**2)
        elif r == 4:
            value *= ((1 + x) / (1 - x)) ** 2 * mp.exp(-4 * x)
    return value


def independent_c52(bound: int) -> mp.mpf:
    """c(5, 2) from the closed partial-logarithm forms per prime."""
    value = capital_pi(5, 2, 30) * mp.exp(4 * meissel_B(5, 2, bound).value)
    for p in primes_range(2, bound + 1):
        r = p % 5
        x = 1 / mp.mpf(p)
        if r == 3:
            value *= mp.exp(4 * (mp.log((1 + x) / (1 - x)) / 4 - mp.atan(x) / 2))
        elif r == 2:
            value *= mp.exp(4 * (mp.log((1 + x) / (1 - x)) / 4 + mp.atan(x) / 2 - x))
    return value


class TestCqa:
    def test_c54_against_explicit_product(self):
        bound = 10**4
        with working_precision(30):
            result = c_qa(5, 4, 30, bound)
            assert abs(result.c_value - independent_c54(bound)) < mp.mpf("1e-24")

    def test_c52_against_explicit_product(self):
        bound = 10**4
        with working_precision(30):
            result = c_qa(5, 2, 30, bound)
            assert abs(result.c_value - independent_c52(bound)) < mp.mpf("1e-24")

    def test_c52_component_labels(self):
        result = c_qa(5, 2, 30, 10**3)
        assert "class_3_f_4_3" in result.components
        assert "class_a_f_series" in result.components
        assert "meissel_B" in result.components

    def test_rejects_a_equal_one(self):
        with pytest.raises(InvalidInputError):
            c_qa(5, 1, 30, 10**3)

    def test_rejects_non_unit(self):
        with pytest.raises(NotAUnitError):
            c_qa(8, 6, 30, 10**3)


class TestCq1:
    @pytest.mark.parametrize("q", [4, 6, 8, 24, 5, 15])
    def test_matches_classical_closed_form(self, q):
        bound = 10**5
        with working_precision(30):
            result = c_q1(q, 30, bound)
            closed = c_power_closed_form(q, bound, 30)
            assert abs(result.C_value ** euler_phi(q) - closed) < mp.mpf("1e-12")

    def test_grouped_vs_per_class_strategies(self):
        bound = 10**5
        with working_precision(30):
            for q in (5, 8, 15):
                grouped = c_q1(q, 30, bound, strategy="grouped")
                per_class = c_q1(q, 30, bound, strategy="per-class")
                combined_tail = sum(
                    c.tail_bound for c in grouped.components.values()
                ) + sum(c.tail_bound for c in per_class.components.values())
                assert abs(mp.log(grouped.c_value) - mp.log(per_class.c_value)) < combined_tail

    def test_unknown_strategy_rejected(self):
        with pytest.raises(InvalidInputError):
            c_q1(5, 30, 10**3, strategy="magic")

    def test_c15_component_map_matches_term_by_term(self):
        # each labeled factor must equal the matching factor of the
        # hand-derived q = 15 expression
        bound = 10**4
        with working_precision(30):
            result = c_q1(15, 30, bound)
            comp = result.components
            assert abs(comp["zeta_power"].value - (mp.pi**4 / 90) ** 2) < mp.mpf("1e-25")
            assert abs(
                comp["prime_divisor_factor"].value - (mp.mpf(3328) / 3375) ** 2
            ) < mp.mpf("1e-25")
            assert abs(comp["Pi"].value - pi_closed_form(15, 30)) < mp.mpf("1e-15")
            for b in (4, 11, 14):
                expected = mp.fprod(
                    (1 + mp.mpf(p) ** -2) ** 2 / (1 - mp.mpf(p) ** -2) ** 2
                    for p in primes_range(2, bound + 1)
                    if p % 15 == b
                )
                assert abs(comp[f"class_{b}_mixed"].value - expected) < mp.mpf("1e-24")


class TestBigC:
    def test_against_independent_uchiyama_oracle(self):
        with working_precision(40):
            result = big_C(4, 1, 30, 10**7)
            assert abs(result.C_value - mp.mpf(ORACLE_C_4_1_AT_1E7)) < mp.mpf("1e-28")

    def test_dispatch(self):
        assert big_C(5, 1, 30, 10**3).components.keys() == c_q1(5, 30, 10**3).components.keys()
        assert big_C(5, 11, 30, 10**3).a == 1  # 11 = 1 (mod 5) routes to c_q1

    def test_root_consistency(self):
        with working_precision(30):
            for q, a in ((4, 3), (5, 2), (15, 2), (24, 1)):
                result = big_C(q, a, 30, 10**4)
                assert result.root_consistency_residual() < mp.mpf("1e-25")

    def test_error_bounds_scale_with_bound(self):
        with working_precision(30):
            coarse = big_C(4, 3, 30, 10**3)
            fine = big_C(4, 3, 30, 10**5)
            assert fine.total_error < coarse.total_error
            assert abs(fine.C_value - coarse.C_value) < coarse.total_error
            assert fine.heuristic_error() < fine.total_error

    def test_rejects_degenerate_moduli(self):
        for q in (1, 2):
            with pytest.raises(InvalidInputError):
                big_C(q, 1, 30, 10**3)


class TestMainProduct:
    def test_hand_checkable_three_primes(self):
        # q = 4, x = 10: primes 3, 5, 7 and the single character twist
        with working_precision(30):
            lhs, rhs = verify_main_product(4, 1, 10, 30)
            by_hand = mp.mpf(1)
            for p, chi_p in ((3, -1), (5, 1), (7, -1)):
                # alpha exponent factor times the twisted Euler factor
                alpha = 1 if p % 4 == 1 else -1
                by_hand *= (1 - mp.mpf(1) / p) ** alpha / (1 - mp.mpf(chi_p) / p)
            assert abs(lhs - by_hand) < mp.mpf("1e-25")
            assert abs(lhs - rhs) < mp.mpf("1e-25")

    @pytest.mark.parametrize("q,a", [(5, 2), (15, 4), (8, 7), (3, 2)])
    def test_identity_at_thousand(self, q, a):
        with working_precision(30):
            lhs, rhs = verify_main_product(q, a, 1000, 30)
            assert abs(lhs - rhs) < mp.mpf("1e-22")

    def test_rejects_bad_inputs(self):
        with pytest.raises(NotAUnitError):
            verify_main_product(4, 2, 100, 30)
        with pytest.raises(InvalidInputError):
            verify_main_product(4, 1, 1, 30)


class TestComplement:
    def test_pair_identity_mod4(self):
        # C(4,1) C(4,3) approaches 2 exp(-gamma)
        with working_precision(30):
            bound = 10**5
            prod = big_C(4, 1, 30, bound).C_value * big_C(4, 3, 30, bound).C_value
            assert abs(prod - 2 * mp.exp(-euler_gamma(30))) < mp.mpf("1e-5")

    def test_residual_shrinks_with_bound(self):
        with working_precision(30):
            coarse = complement_check(4, 30, 10**3)
            fine = complement_check(4, 30, 10**5)
            assert fine < coarse

    @pytest.mark.parametrize("q", [4, 5, 6, 8])
    def test_residual_small_at_1e5(self, q):
        with working_precision(30):
            assert complement_check(q, 30, 10**5) < mp.mpf("1e-4")


class TestAsymptoticProbe:
    def test_probe_converges_to_constant(self):
        with working_precision(30):
            C = big_C(4, 1, 30, 10**6).C_value
            probe = asymptotic_probe(4, 1, [10**4, 10**5, 10**6], 30)
            devs = [abs(v - C) for _, v in probe]
            assert devs[0] > devs[1] > devs[2]
            assert devs[-1] < mp.mpf("0.1") * C

    def test_small_x_sanity(self):
        with working_precision(30):
            (x, value), = asymptotic_probe(4, 3, [10], 30)
            expected = (1 - mp.mpf(1) / 3) * (1 - mp.mpf(1) / 7) * mp.sqrt(mp.log(10))
            assert abs(value - expected) < mp.mpf("1e-25")

    def test_rejects_unsorted(self):
        with pytest.raises(InvalidInputError):
            asymptotic_probe(4, 1, [100, 10], 30)
