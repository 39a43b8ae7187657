"""Compiled and fallback kernels must agree bit-for-bit on sieves and to
double-double accuracy on series."""

import mpmath as mp
import pytest

from mertensap import kernels

needs_compiled = pytest.mark.skipif(
    "compiled" not in kernels.available_backends(),
    reason="compiled extension not built",
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


class TestSieve:
    def test_primes_small(self):
        assert kernels.primes_range(2, 50) == SMALL_PRIMES
        assert kernels.primes_range(2, 2) == []
        assert kernels.primes_range(2, 3) == [2]
        assert kernels.primes_range(48, 50) == []

    def test_known_counts(self):
        assert len(kernels.primes_range(2, 10**6 + 1)) == 78498

    def test_subranges_stitch(self):
        whole = kernels.primes_range(2, 10**5)
        parts = []
        for lo in range(2, 10**5, 17000):
            parts.extend(kernels.primes_range(lo, min(lo + 17000, 10**5)))
        assert parts == whole

    @needs_compiled
    def test_bitmaps_identical(self):
        for limit in (100, 65537, 10**5):
            a = kernels.fallback.build_odd_bitmap(limit)
            b = kernels.compiled.build_odd_bitmap(limit)
            assert bytes(a) == bytes(b)

    @needs_compiled
    def test_primes_equal_across_backends(self):
        assert kernels.primes_range(2, 10**4, backend="compiled") == kernels.primes_range(
            2, 10**4, backend="fallback"
        )


class TestSeriesSum:
    def test_hand_value(self):
        # sum over p in {5, 13} of -log(1 - 1/p^2) / 2, via the t = s = 2 series
        value, count = kernels.class_series_sum(4, 1, 2, 2, 2, 13)
        with mp.workdps(40):
            expected = -(mp.log(1 - mp.mpf(5) ** -2) + mp.log(1 - mp.mpf(13) ** -2)) / 2
            assert abs(value - expected) < mp.mpf("1e-30")
        assert count == 2

    def test_all_classes_mode(self):
        # b = -1 accumulates over every p not dividing q
        value, count = kernels.class_series_sum(4, -1, 1, 1, 1, 10)
        with mp.workdps(40):
            expected = -mp.fsum(mp.log(1 - 1 / mp.mpf(p)) for p in (3, 5, 7))
            assert abs(value - expected) < mp.mpf("1e-30")
        assert count == 3

    def test_p_start_window(self):
        full, _ = kernels.class_series_sum(4, 1, 2, 2, 2, 1000)
        head, _ = kernels.class_series_sum(4, 1, 2, 2, 2, 100)
        tail, _ = kernels.class_series_sum(4, 1, 2, 2, 2, 1000, p_start=101)
        with mp.workdps(40):
            assert abs(full - head - tail) < mp.mpf("1e-32")

    @needs_compiled
    @pytest.mark.parametrize(
        "q,b,t,s,n_min",
        [
            (4, 1, 2, 2, 2),     # class product series
            (4, 3, 1, 1, 2),     # Meissel series
            (5, 2, 4, 2, 2),     # partial-log class series
            (5, 4, 2, 1, 3),     # linear-term-dropped series
            (3, -1, 1, 1, 1),    # full Mertens log over p not dividing q
        ],
    )
    def test_backend_agreement(self, q, b, t, s, n_min):
        a, ca = kernels.class_series_sum(q, b, t, s, n_min, 10**5, backend="compiled")
        f, cf = kernels.class_series_sum(q, b, t, s, n_min, 10**5, backend="fallback")
        assert ca == cf
        with mp.workdps(45):
            assert abs(a - f) < mp.mpf("1e-27")


class TestPowerSums:
    def test_hand_values(self):
        table = kernels.class_power_sums(4, 20, 6)
        with mp.workdps(40):
            # class 1: {5, 13, 17}; class 3: {3, 7, 11, 19}
            for m in range(1, 7):
                expected = mp.fsum(mp.mpf(p) ** -m for p in (5, 13, 17))
                assert abs(table[1][m - 1] - expected) < mp.mpf("1e-30")
                expected = mp.fsum(mp.mpf(p) ** -m for p in (3, 7, 11, 19))
                assert abs(table[3][m - 1] - expected) < mp.mpf("1e-30")

    def test_only_unit_classes_reported(self):
        table = kernels.class_power_sums(4, 100, 4)
        assert set(table) == {1, 3}

    @needs_compiled
    def test_backend_agreement(self):
        a = kernels.class_power_sums(5, 10**4, 32, backend="compiled")
        b = kernels.class_power_sums(5, 10**4, 32, backend="fallback")
        assert set(a) == set(b)
        with mp.workdps(45):
            worst = max(abs(x - y) for k in a for x, y in zip(a[k], b[k]))
            assert worst < mp.mpf("1e-27")


def test_backend_name_reports():
    assert kernels.backend_name() in ("compiled", "fallback")


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.primes_range(2, 10, backend="bogus")
