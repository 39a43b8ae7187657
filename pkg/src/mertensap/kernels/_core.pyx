# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sieve and series kernels.

Primes are sieved into an odd-number bitmap (bit i <-> n = 2i+1) built in
cache-sized segments.  Per-prime power series are accumulated in
double-double arithmetic (~31 significant digits), which keeps the absolute
error of million-term sums far below the 1e-25 tolerances the callers
certify against.

Do not compile with -ffast-math: the error-free transforms below rely on
IEEE rounding.
"""

from libc.math cimport fma
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cdef double _TERM_CUTOFF = 1e-45


cdef struct dd:
    double hi
    double lo


cdef inline dd dd_make(double hi, double lo) noexcept:
    cdef dd r
    r.hi = hi
    r.lo = lo
    return r


cdef inline dd two_sum(double a, double b) noexcept:
    cdef double s = a + b
    cdef double bb = s - a
    return dd_make(s, (a - (s - bb)) + (b - bb))


cdef inline dd quick_two_sum(double a, double b) noexcept:
    # requires |a| >= |b|
    cdef double s = a + b
    return dd_make(s, b - (s - a))


cdef inline dd two_diff(double a, double b) noexcept:
    cdef double s = a - b
    cdef double bb = s - a
    return dd_make(s, (a - (s - bb)) - (b + bb))


cdef inline dd two_prod(double a, double b) noexcept:
    cdef double p = a * b
    return dd_make(p, fma(a, b, -p))


cdef inline dd dd_add(dd a, dd b) noexcept:
    cdef dd s = two_sum(a.hi, b.hi)
    cdef dd t = two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return quick_two_sum(s.hi, s.lo)


cdef inline dd dd_neg(dd a) noexcept:
    return dd_make(-a.hi, -a.lo)


cdef inline dd dd_sub(dd a, dd b) noexcept:
    return dd_add(a, dd_neg(b))


cdef inline dd dd_mul(dd a, dd b) noexcept:
    cdef dd p = two_prod(a.hi, b.hi)
    p.lo += a.hi * b.lo + a.lo * b.hi
    return quick_two_sum(p.hi, p.lo)


cdef inline dd dd_mul_d(dd a, double b) noexcept:
    cdef dd p = two_prod(a.hi, b)
    p.lo += a.lo * b
    return quick_two_sum(p.hi, p.lo)


cdef inline dd dd_div_d(dd a, double b) noexcept:
    cdef double q1 = a.hi / b
    cdef dd p = two_prod(q1, b)
    cdef dd s = two_diff(a.hi, p.hi)
    cdef double e = s.lo + a.lo - p.lo
    cdef double q2 = (s.hi + e) / b
    return quick_two_sum(q1, q2)


cdef inline dd dd_inv_d(double b) noexcept:
    return dd_div_d(dd_make(1.0, 0.0), b)


cdef inline dd dd_pow_int(dd base, long long n) noexcept:
    # n >= 1; returns base**n, underflowing harmlessly to zero
    cdef dd acc = dd_make(1.0, 0.0)
    cdef dd cur = base
    while n > 0:
        if n & 1:
            acc = dd_mul(acc, cur)
        n >>= 1
        if n:
            cur = dd_mul(cur, cur)
        if acc.hi == 0.0:
            return acc
    return acc


# ---------------------------------------------------------------------------
# sieve
# ---------------------------------------------------------------------------

cdef long long _SEGMENT_BITS = 1 << 20  # 128 KiB of bitmap per segment


def build_odd_bitmap(long long limit):
    """Bitmap over odd n in [1, limit]; bit (n-1)/2 set iff n is prime."""
    if limit < 2:
        limit = 2
    cdef long long nbits = (limit + 1) // 2
    cdef long long nbytes = (nbits + 7) // 8
    out = bytearray(b"\xff") * nbytes
    cdef unsigned char[:] bits = out
    # clear spare bits beyond nbits so byte-level scans stay clean
    cdef long long i
    for i in range(nbits, nbytes * 8):
        bits[i >> 3] &= ~(1 << (i & 7))
    bits[0] &= 0xfe  # n = 1

    # base primes up to sqrt(limit) by a plain byte sieve
    cdef long long root = 1
    while (root + 1) * (root + 1) <= limit:
        root += 1
    cdef unsigned char *small = <unsigned char *> malloc(root + 1)
    if small == NULL:
        raise MemoryError()
    memset(small, 1, root + 1)
    cdef long long p, m
    for p in range(2, root + 1):
        if small[p]:
            for m in range(p * p, root + 1, p):
                small[m] = 0

    cdef long long seg_lo = 0, seg_hi, n0, idx, step
    while seg_lo < nbits:
        seg_hi = seg_lo + _SEGMENT_BITS
        if seg_hi > nbits:
            seg_hi = nbits
        for p in range(3, root + 1):
            if not small[p]:
                continue
            # first odd multiple of p at or past max(p^2, 2*seg_lo + 1)
            n0 = 2 * seg_lo + 1
            if n0 < p * p:
                n0 = p * p
            else:
                n0 = ((n0 + p - 1) // p) * p
                if n0 % 2 == 0:
                    n0 += p
            idx = (n0 - 1) >> 1
            step = p
            while idx < seg_hi:
                bits[idx >> 3] &= ~(1 << (idx & 7))
                idx += step
        seg_lo = seg_hi
    free(small)
    return out


def primes_list(const unsigned char[:] bits, long long limit,
                long long lo, long long hi):
    """Primes p with lo <= p < hi, ascending (hi must not exceed limit+1)."""
    out = []
    if hi > limit + 1:
        raise ValueError("range exceeds the sieved bitmap")
    if lo <= 2 < hi:
        out.append(2)
    cdef long long n = lo
    if n < 3:
        n = 3
    if n % 2 == 0:
        n += 1
    cdef long long i = (n - 1) >> 1
    cdef long long end = hi // 2  # indices with 2i+1 < hi
    while i < end:
        if bits[i >> 3] & (1 << (i & 7)):
            out.append(2 * i + 1)
        i += 1
    return out


# ---------------------------------------------------------------------------
# per-class series accumulation
# ---------------------------------------------------------------------------

cdef inline dd _prime_series(long long p, long long t, long long s,
                             long long n_min) noexcept:
    """sum over n >= n_min, n = s (mod t), of p^-n / n, in double-double."""
    cdef long long n0
    if t == 1:
        n0 = n_min
    else:
        n0 = s
        if n0 < n_min:
            n0 += ((n_min - s + t - 1) // t) * t
    cdef dd x = dd_inv_d(<double> p)
    cdef dd xt = dd_pow_int(x, t)
    cdef dd cur = dd_pow_int(x, n0)
    cdef dd acc = dd_make(0.0, 0.0)
    cdef long long n = n0
    while cur.hi > _TERM_CUTOFF:
        acc = dd_add(acc, dd_div_d(cur, <double> n))
        cur = dd_mul(cur, xt)
        n += t
    return acc


def series_sum(const unsigned char[:] bits, long long limit,
               long long p_lo, long long p_hi,
               long long q, long long b, const unsigned char[:] unit_mask,
               long long t, long long s, long long n_min):
    """Accumulate sum_p sum_{n >= n_min, n = s mod t} p^-n / n over primes
    p in [p_lo, p_hi) with p = b (mod q); b = -1 selects every p not
    dividing q.  Returns (hi, lo, count)."""
    if p_hi > limit + 1:
        raise ValueError("range exceeds the sieved bitmap")
    cdef dd acc = dd_make(0.0, 0.0)
    cdef long long count = 0
    cdef long long r
    if p_lo <= 2 < p_hi:
        r = 2 % q
        if (b >= 0 and r == b) or (b < 0 and unit_mask[r]):
            acc = dd_add(acc, _prime_series(2, t, s, n_min))
            count += 1
    cdef long long n = p_lo
    if n < 3:
        n = 3
    if n % 2 == 0:
        n += 1
    cdef long long i = (n - 1) >> 1
    cdef long long end = p_hi // 2
    cdef long long p
    while i < end:
        if bits[i >> 3] & (1 << (i & 7)):
            p = 2 * i + 1
            r = p % q
            if (b >= 0 and r == b) or (b < 0 and unit_mask[r]):
                acc = dd_add(acc, _prime_series(p, t, s, n_min))
                count += 1
        i += 1
    return acc.hi, acc.lo, count


def power_sums(const unsigned char[:] bits, long long limit,
               long long p_lo, long long p_hi,
               long long q, const unsigned char[:] unit_mask, int m_max):
    """Per-class prime power sums PS[b][m] = sum_{p = b (q)} p^-m for
    m = 1..m_max over primes in [p_lo, p_hi).  Returns flat (his, los)
    lists of length q * m_max indexed [b * m_max + (m - 1)]."""
    if p_hi > limit + 1:
        raise ValueError("range exceeds the sieved bitmap")
    cdef long long cells = q * m_max
    cdef dd *acc = <dd *> malloc(cells * sizeof(dd))
    if acc == NULL:
        raise MemoryError()
    memset(acc, 0, cells * sizeof(dd))

    cdef long long i, n, p, r, base
    cdef int m
    cdef dd x, cur

    cdef long long start = p_lo
    if start <= 2 < p_hi:
        r = 2 % q
        if unit_mask[r]:
            x = dd_inv_d(2.0)
            cur = x
            base = r * m_max
            m = 0
            while m < m_max and cur.hi > _TERM_CUTOFF:
                acc[base + m] = dd_add(acc[base + m], cur)
                cur = dd_mul(cur, x)
                m += 1
    n = p_lo
    if n < 3:
        n = 3
    if n % 2 == 0:
        n += 1
    i = (n - 1) >> 1
    cdef long long end = p_hi // 2
    while i < end:
        if bits[i >> 3] & (1 << (i & 7)):
            p = 2 * i + 1
            r = p % q
            if unit_mask[r]:
                x = dd_inv_d(<double> p)
                cur = x
                base = r * m_max
                m = 0
                while m < m_max and cur.hi > _TERM_CUTOFF:
                    acc[base + m] = dd_add(acc[base + m], cur)
                    cur = dd_mul(cur, x)
                    m += 1
        i += 1
    his = [0.0] * cells
    los = [0.0] * cells
    for i in range(cells):
        his[i] = acc[i].hi
        los[i] = acc[i].lo
    free(acc)
    return his, los
