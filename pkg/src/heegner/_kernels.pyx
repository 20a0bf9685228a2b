# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled supersingularity kernels; mirrors _kernels_py exactly.

All moduli fit in 24 bits (the verification effort bound is 1e7), so 64-bit
intermediates never overflow.
"""

__all__ = [
    "hasse_nonzero_fq",
    "hasse_nonzero_fq2",
    "count_points_fq",
    "supersingular_census_fq2",
]

from libc.stdlib cimport free, malloc


cdef unsigned long long _e_final_fq(unsigned long long q, unsigned long long a,
                                    unsigned long long b) nogil:
    cdef unsigned long long m = (q - 1) // 2
    cdef unsigned long long b2 = b * b % q
    cdef unsigned long long e2 = 0, e1 = 0, e0 = 1, enext, c1, s
    cdef unsigned long long n
    for n in range(q - 1):
        c1 = (3 * m + 2 + q - n % q) % q * (n % q * ((n + q - 1) % q) % q) % q
        s = (m + q - n % q) % q
        enext = (c1 * b2 % q * e2 + a * s % q * e0) % q
        e2 = e1
        e1 = e0
        e0 = enext
    return e0


def hasse_nonzero_fq(q, a, b):
    """True iff the Hasse coefficient of y^2 = x^3 + a x + b over F_q is nonzero."""
    cdef unsigned long long qq = q
    cdef unsigned long long aa = a % q
    cdef unsigned long long bb = b % q
    if bb == 0 and aa == 0:
        raise ValueError("singular curve")
    if bb == 0:
        return ((qq - 1) // 2) % 2 == 0
    if aa == 0:
        return (qq - 1) % 3 == 0
    return _e_final_fq(qq, aa, bb) != 0


cdef struct F2:
    unsigned long long c0
    unsigned long long c1


cdef inline F2 _mul2(F2 x, F2 y, unsigned long long q, unsigned long long m) nogil:
    cdef F2 out
    out.c0 = (x.c0 * y.c0 + m * (x.c1 * y.c1 % q)) % q
    out.c1 = (x.c0 * y.c1 + x.c1 * y.c0) % q
    return out


cdef bint _hasse_nonzero_fq2_c(unsigned long long q, unsigned long long m2,
                               F2 a, F2 b) nogil:
    cdef unsigned long long mm = (q - 1) // 2
    cdef F2 b2s = _mul2(b, b, q, m2)
    cdef F2 e2, e1, e0, enext, t, u
    cdef unsigned long long n, c1, s
    e2.c0 = 0; e2.c1 = 0
    e1.c0 = 0; e1.c1 = 0
    e0.c0 = 1; e0.c1 = 0
    for n in range(q - 1):
        c1 = (3 * mm + 2 + q - n % q) % q * (n % q * ((n + q - 1) % q) % q) % q
        s = (mm + q - n % q) % q
        t = _mul2(b2s, e2, q, m2)
        u = _mul2(a, e0, q, m2)
        enext.c0 = (c1 * t.c0 + s * u.c0) % q
        enext.c1 = (c1 * t.c1 + s * u.c1) % q
        e2 = e1
        e1 = e0
        e0 = enext
    return e0.c0 != 0 or e0.c1 != 0


def hasse_nonzero_fq2(q, m2, a0, a1, b0, b1):
    """Hasse coefficient test over F_q(t), t^2 = m2."""
    cdef unsigned long long qq = q
    cdef F2 a, b
    a.c0 = a0 % q; a.c1 = a1 % q
    b.c0 = b0 % q; b.c1 = b1 % q
    cdef unsigned long long mm2 = m2 % q
    if a.c0 == 0 and a.c1 == 0 and b.c0 == 0 and b.c1 == 0:
        raise ValueError("singular curve")
    if b.c0 == 0 and b.c1 == 0:
        return ((qq - 1) // 2) % 2 == 0
    if a.c0 == 0 and a.c1 == 0:
        return (qq - 1) % 3 == 0
    return _hasse_nonzero_fq2_c(qq, mm2, a, b)


def count_points_fq(q, a, b):
    """#E(F_q) for y^2 = x^3 + a x + b by summing quadratic characters."""
    cdef unsigned long long qq = q
    cdef unsigned long long aa = a % q, bb = b % q
    cdef long long total = qq + 1
    cdef unsigned long long x, v
    cdef signed char *chi = <signed char *> malloc(qq)
    if chi == NULL:
        raise MemoryError()
    try:
        for x in range(qq):
            chi[x] = -1
        chi[0] = 0
        for x in range(1, qq):
            chi[x * x % qq] = 1
        for x in range(qq):
            v = (x * x % qq * x + aa * x + bb) % qq
            total += chi[v]
        return total
    finally:
        free(chi)


cdef unsigned long long _pow_mod(unsigned long long base, unsigned long long e,
                                 unsigned long long q) nogil:
    cdef unsigned long long out = 1
    base %= q
    while e:
        if e & 1:
            out = out * base % q
        base = base * base % q
        e >>= 1
    return out


def supersingular_census_fq2(q):
    """Number of supersingular j-invariants in F_(q^2)."""
    cdef unsigned long long qq = q
    cdef unsigned long long m2 = 0, cand
    for cand in range(2, qq):
        if _pow_mod(cand, (qq - 1) // 2, qq) == qq - 1:
            m2 = cand
            break
    if m2 == 0:
        raise ValueError("no quadratic nonresidue")
    cdef unsigned long long j0, j1, d0, d1, norm, ninv, i0, i1
    cdef F2 jj, inv, k, a, b
    cdef unsigned long long count = 0
    for j1 in range(qq):
        for j0 in range(qq):
            if j0 == 0 and j1 == 0:
                a.c0 = 0; a.c1 = 0; b.c0 = 1; b.c1 = 0
            elif j1 == 0 and j0 == 1728 % qq:
                a.c0 = 1; a.c1 = 0; b.c0 = 0; b.c1 = 0
            else:
                d0 = (1728 % qq + qq - j0) % qq
                d1 = (qq - j1) % qq
                norm = (d0 * d0 + qq * qq - m2 * (d1 * d1 % qq) % qq) % qq
                ninv = _pow_mod(norm, qq - 2, qq)
                i0 = d0 * ninv % qq
                i1 = (qq - d1) * ninv % qq
                jj.c0 = j0; jj.c1 = j1
                inv.c0 = i0; inv.c1 = i1
                k = _mul2(jj, inv, qq, m2)
                a.c0 = 3 * k.c0 % qq; a.c1 = 3 * k.c1 % qq
                b.c0 = 2 * k.c0 % qq; b.c1 = 2 * k.c1 % qq
            if b.c0 == 0 and b.c1 == 0:
                if (((qq - 1) // 2) % 2) == 0:
                    continue
            elif a.c0 == 0 and a.c1 == 0:
                if (qq - 1) % 3 == 0:
                    continue
            elif _hasse_nonzero_fq2_c(qq, m2, a, b):
                continue
            count += 1
    return count
