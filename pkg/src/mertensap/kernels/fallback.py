"""Pure-Python kernels, used when the compiled extension is unavailable.

Same bitmap layout and call signatures as the compiled core; series are
accumulated with mpmath at 45 digits instead of double-double, so results
agree with the compiled path to well below every caller tolerance.  Expect
roughly two orders of magnitude less throughput.
"""

from __future__ import annotations

import math

import mpmath as mp

_FALLBACK_DPS = 45
_TERM_CUTOFF = mp.mpf("1e-45")

# bit positions set per byte value, for fast bitmap scans
_BYTE_BITS = [[b for b in range(8) if v >> b & 1] for v in range(256)]


def build_odd_bitmap(limit: int) -> bytearray:
    """Bitmap over odd n in [1, limit]; bit (n-1)/2 set iff n is prime."""
    limit = max(limit, 2)
    nbits = (limit + 1) // 2
    flags = bytearray([1]) * nbits  # flags[i] <-> n = 2i+1
    flags[0] = 0
    root = math.isqrt(limit)
    for p in range(3, root + 1, 2):
        if flags[(p - 1) >> 1]:
            start = (p * p - 1) >> 1
            flags[start::p] = bytearray(len(range(start, nbits, p)))
    out = bytearray((nbits + 7) // 8)
    for i, v in enumerate(flags):
        if v:
            out[i >> 3] |= 1 << (i & 7)
    return out


def primes_list(bits, limit: int, lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p < hi, ascending."""
    if hi > limit + 1:
        raise ValueError("range exceeds the sieved bitmap")
    out = [2] if lo <= 2 < hi else []
    start_bit = max(lo, 3) // 2  # index of first odd >= max(lo, 3)
    end_bit = hi // 2
    for byte_idx in range(start_bit >> 3, (end_bit + 7) >> 3):
        v = bits[byte_idx]
        if not v:
            continue
        base = byte_idx << 3
        for b in _BYTE_BITS[v]:
            i = base + b
            if start_bit <= i < end_bit:
                out.append(2 * i + 1)
    return out


def _prime_series(p: int, t: int, s: int, n_min: int) -> mp.mpf:
    """sum over n >= n_min, n = s (mod t), of p^-n / n."""
    if t == 1:
        n0 = n_min
    else:
        n0 = s if s >= n_min else s + ((n_min - s + t - 1) // t) * t
    x = 1 / mp.mpf(p)
    xt = x**t
    cur = x**n0
    acc = mp.mpf(0)
    n = n0
    while cur > _TERM_CUTOFF:
        acc += cur / n
        cur *= xt
        n += t
    return acc


def _class_match(p: int, q: int, b: int, unit_mask) -> bool:
    r = p % q
    return r == b if b >= 0 else bool(unit_mask[r])


def series_sum(bits, limit: int, p_lo: int, p_hi: int,
               q: int, b: int, unit_mask,
               t: int, s: int, n_min: int):
    """Mirror of the compiled series_sum; returns (mpf, 0.0, count)."""
    with mp.workdps(_FALLBACK_DPS):
        acc = mp.mpf(0)
        count = 0
        for p in primes_list(bits, limit, p_lo, p_hi):
            if _class_match(p, q, b, unit_mask):
                acc += _prime_series(p, t, s, n_min)
                count += 1
        return acc, 0.0, count


def power_sums(bits, limit: int, p_lo: int, p_hi: int,
               q: int, unit_mask, m_max: int):
    """Mirror of the compiled power_sums; returns (values, zeros) with
    mpf entries in the flat [b * m_max + (m-1)] layout."""
    with mp.workdps(_FALLBACK_DPS):
        acc = [mp.mpf(0)] * (q * m_max)
        for p in primes_list(bits, limit, p_lo, p_hi):
            r = p % q
            if not unit_mask[r]:
                continue
            x = 1 / mp.mpf(p)
            cur = x
            base = r * m_max
            m = 0
            while m < m_max and cur > _TERM_CUTOFF:
                acc[base + m] += cur
                cur *= x
                m += 1
        return acc, [0.0] * (q * m_max)
