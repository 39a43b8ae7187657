"""Unit-group arithmetic against brute-force oracles."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mertensap.errors import InvalidInputError, NotAUnitError
from mertensap.unitgroup import (
    Factorization,
    carmichael_lambda,
    discrete_log_table,
    element_order,
    euler_phi,
    factorize,
    non_maximal_set,
    power_residue_class,
    reachable_set,
    unit_group,
    units,
)


def oracle_is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def oracle_order(b: int, q: int) -> int:
    cur = b % q
    k = 1
    while cur != 1:
        cur = cur * b % q
        k += 1
    return k


class TestFactorize:
    def test_examples(self):
        assert factorize(24).factors == ((2, 3), (3, 1))
        assert factorize(1).factors == ()
        assert factorize(97).factors == ((97, 1),)

    def test_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            factorize(0)

    @given(st.integers(min_value=1, max_value=10**6))
    def test_reconstructs_and_primes_pass_primality(self, n):
        f = factorize(n)
        assert f.n == n
        assert all(oracle_is_prime(p) for p, _ in f.factors)
        assert [p for p, _ in f.factors] == sorted({p for p, _ in f.factors})

    def test_large_semiprime_via_rho(self):
        p, q = 10_000_019, 10_000_079
        assert factorize(p * q).factors == ((p, 1), (q, 1))

    def test_invariant_enforced(self):
        with pytest.raises(InvalidInputError):
            Factorization(((3, 1), (2, 1)))


class TestTotients:
    def test_phi_examples(self):
        assert euler_phi(24) == 8
        assert euler_phi(1) == 1
        assert euler_phi(15) == 8

    def test_phi_against_gcd_count(self):
        for q in range(1, 201):
            assert euler_phi(q) == sum(1 for n in range(1, q + 1) if math.gcd(n, q) == 1)

    def test_lambda_examples(self):
        assert carmichael_lambda(24) == 2
        assert carmichael_lambda(15) == 4
        assert carmichael_lambda(8) == 2

    def test_lambda_is_max_order(self):
        for q in range(3, 201):
            assert carmichael_lambda(q) == max(oracle_order(b, q) for b in units(q))

    def test_rejects_zero(self):
        with pytest.raises(InvalidInputError):
            euler_phi(0)
        with pytest.raises(InvalidInputError):
            carmichael_lambda(0)


class TestElementOrder:
    def test_examples(self):
        assert element_order(2, 5) == 4
        assert element_order(1, 7) == 1
        assert element_order(1, 24) == 1
        assert element_order(7, 24) == 2

    def test_against_exhaustive(self):
        for q in range(3, 101):
            for b in units(q):
                assert element_order(b, q) == oracle_order(b, q)

    def test_divides_lambda_divides_phi(self):
        for q in range(3, 201):
            lam, phi = carmichael_lambda(q), euler_phi(q)
            assert phi % lam == 0
            for b in units(q):
                assert lam % element_order(b, q) == 0

    def test_rejects_non_unit(self):
        with pytest.raises(NotAUnitError):
            element_order(6, 24)


class TestPowerResidueClass:
    def test_paper_examples(self):
        sol = power_residue_class(3, 2, 5)
        assert (sol.solvable, sol.s, sol.t) == (True, 3, 4)
        sol = power_residue_class(2, 4, 5)
        assert (sol.solvable, sol.s, sol.t) == (True, 2, 4)
        assert not power_residue_class(7, 5, 24).solvable

    def test_b_equals_a_gives_s_one(self):
        for q in (5, 8, 15, 24):
            for a in units(q):
                sol = power_residue_class(a, a, q)
                assert sol.solvable and sol.s == 1

    def test_solvable_matches_exhaustive_search(self):
        for q in range(3, 101):
            for b in units(q):
                t = element_order(b, q)
                orbit = set()
                cur = 1
                for _ in range(t):
                    cur = cur * b % q
                    orbit.add(cur)
                for a in units(q):
                    sol = power_residue_class(b, a, q)
                    assert sol.solvable == (a in orbit)
                    if sol.solvable:
                        assert pow(b, sol.s, q) == a
                        assert sol.t == t
                        assert 1 <= sol.s <= sol.t

    def test_rejects_non_unit(self):
        with pytest.raises(NotAUnitError):
            power_residue_class(2, 3, 4)


class TestClassificationSets:
    def test_non_maximal_examples(self):
        assert non_maximal_set(5) == {4}
        assert non_maximal_set(8) == set()
        assert non_maximal_set(15) == {4, 11, 14}

    def test_counting_identity(self):
        # |A(q)| + 1 + #{maximal order} = phi(q)
        for q in range(3, 201):
            lam = carmichael_lambda(q)
            maximal = sum(1 for b in units(q) if element_order(b, q) == lam)
            assert len(non_maximal_set(q)) + 1 + maximal == euler_phi(q)

    def test_non_maximal_rejects_small_q(self):
        with pytest.raises(InvalidInputError):
            non_maximal_set(2)

    def test_reachable_examples(self):
        reach = reachable_set(5, 4)
        assert set(reach) == {2, 3}
        assert (reach[2].s, reach[2].t) == (2, 4)
        assert (reach[3].s, reach[3].t) == (2, 4)
        reach = reachable_set(5, 2)
        assert set(reach) == {3}
        assert (reach[3].s, reach[3].t) == (3, 4)
        assert reachable_set(8, 3) == {}

    def test_reachable_rejects_a_equal_one(self):
        with pytest.raises(InvalidInputError):
            reachable_set(8, 1)


class TestUnitGroupStructure:
    def test_component_orders_multiply_to_phi(self):
        for q in range(3, 201):
            s = unit_group(q)
            prod = math.prod(o for _, o in s.components)
            assert prod == s.phi
            assert math.lcm(*(o for _, o in s.components)) == s.lam
            for g, o in s.components:
                assert element_order(g, q) == o

    def test_exponent_map_is_bijection(self):
        for q in range(3, 201):
            table = discrete_log_table(q)
            assert set(table) == set(units(q) if q > 2 else {1})
            s = unit_group(q)
            for u, expo in table.items():
                assert s.element(expo) == u
