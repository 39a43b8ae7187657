"""Kernel dispatch: compiled double-double core with pure-Python fallback.

The compiled extension is selected at import when available (set
MERTENSAP_FORCE_FALLBACK=1 to override); both backends share the bitmap
layout, call signatures, and deterministic increasing-p summation order,
so swapping them changes throughput only.

Sieved bitmaps are cached module-wide and grown on demand.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

import mpmath as mp

from . import fallback

try:  # pragma: no cover - exercised through backend tests
    from . import _core as compiled
except ImportError:  # pragma: no cover
    compiled = None

if os.environ.get("MERTENSAP_FORCE_FALLBACK"):
    _active = fallback
else:
    _active = compiled if compiled is not None else fallback

_BITMAP_CHUNK = 1 << 20


def backend_name() -> str:
    return "compiled" if _active is compiled else "fallback"


def available_backends() -> dict[str, object]:
    out = {"fallback": fallback}
    if compiled is not None:
        out["compiled"] = compiled
    return out


def _backend(name: str | None):
    if name is None:
        return _active
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}") from None


_bitmap_limit = 0
_bitmap: bytearray | None = None


def _ensure_bitmap(limit: int) -> bytearray:
    global _bitmap_limit, _bitmap
    if _bitmap is None or limit > _bitmap_limit:
        target = max(limit, 1 << 16)
        target = ((target // _BITMAP_CHUNK) + 1) * _BITMAP_CHUNK
        _bitmap = _active.build_odd_bitmap(target)
        _bitmap_limit = target
    return _bitmap


@lru_cache(maxsize=256)
def _unit_mask(q: int) -> bytes:
    return bytes(1 if math.gcd(r, q) == 1 else 0 for r in range(q))


def _to_mpf(hi, lo) -> mp.mpf:
    # convert at high precision so the result is exact no matter what the
    # ambient mpmath context is (doubles carry 53 bits, fallback mpfs ~150)
    with mp.workdps(60):
        return mp.fadd(mp.mpf(hi), mp.mpf(lo), exact=True)


def primes_range(lo: int, hi: int, backend: str | None = None) -> list[int]:
    """Primes p with lo <= p < hi, ascending."""
    if hi <= lo:
        return []
    bits = _ensure_bitmap(hi)
    return _backend(backend).primes_list(bits, _bitmap_limit, lo, hi)


def class_series_sum(
    q: int,
    b: int,
    t: int,
    s: int,
    n_min: int,
    bound: int,
    p_start: int = 2,
    backend: str | None = None,
) -> tuple[mp.mpf, int]:
    """sum over primes p in [p_start, bound], p = b (mod q), of
    sum_{n >= n_min, n = s (mod t)} p^-n / n.

    b = -1 selects all primes not dividing q.  Returns (value, prime count);
    the value is exact double-double (or better) converted to mpf.
    """
    bits = _ensure_bitmap(bound)
    hi, lo, count = _backend(backend).series_sum(
        bits, _bitmap_limit, p_start, bound + 1, q, b, _unit_mask(q), t, s, n_min
    )
    return _to_mpf(hi, lo), count


def class_power_sums(
    q: int,
    bound: int,
    m_max: int,
    p_start: int = 2,
    backend: str | None = None,
) -> dict[int, list[mp.mpf]]:
    """Prime power sums sum_{p = b (q), p <= bound} p^-m for every unit
    class b and m = 1..m_max, from one sieve pass."""
    bits = _ensure_bitmap(bound)
    his, los = _backend(backend).power_sums(
        bits, _bitmap_limit, p_start, bound + 1, q, _unit_mask(q), m_max
    )
    mask = _unit_mask(q)
    return {
        b: [_to_mpf(his[b * m_max + j], los[b * m_max + j]) for j in range(m_max)]
        for b in range(q)
        if mask[b]
    }
