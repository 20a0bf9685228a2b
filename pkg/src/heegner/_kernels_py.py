"""Pure-Python fallback for the supersingularity hot kernels.

The Hasse invariant of y^2 = x^3 + a x + b in characteristic q is the
coefficient of x^(q-1) in f^m, m = (q-1)/2.  From f g' = m f' g for g = f^m
the coefficients satisfy b (n+1) c_(n+1) = (3m - n + 2) c_(n-2) + a (m - n) c_n;
substituting c_n = b^(m-n) e_n / n! removes the division, so the coefficient
vanishes iff e_(q-1) = 0 after a single O(q) sweep.  Curves with a b = 0
(j = 0 or 1728) reduce to a binomial-coefficient criterion instead.

The compiled twin in _kernels.pyx implements the same functions; consistency
of both is part of the test suite.
"""

from __future__ import annotations

__all__ = [
    "hasse_nonzero_fq",
    "hasse_nonzero_fq2",
    "count_points_fq",
    "supersingular_census_fq2",
]


def _hasse_e_final_fq(q: int, a: int, b: int) -> int:
    m = (q - 1) // 2
    b2 = b * b % q
    e_nm2, e_nm1, e_n = 0, 0, 1  # e_(-2), e_(-1), e_0
    for n in range(q - 1):
        c1 = (3 * m - n + 2) % q * (n * (n - 1) % q) % q
        e_next = (c1 * b2 % q * e_nm2 + a * ((m - n) % q) % q * e_n) % q
        e_nm2, e_nm1, e_n = e_nm1, e_n, e_next
    return e_n


def hasse_nonzero_fq(q: int, a: int, b: int) -> bool:
    """True iff the Hasse coefficient of y^2 = x^3 + a x + b over F_q is nonzero."""
    a %= q
    b %= q
    if b == 0 and a == 0:
        raise ValueError("singular curve")
    if b == 0:
        # f^m = x^m (x^2 + a)^m: coefficient C(m, m/2) a^(m/2), m = (q-1)/2
        m = (q - 1) // 2
        return m % 2 == 0
    if a == 0:
        # f^m = (x^3 + b)^m: nonzero coefficient iff 3 | q - 1
        return (q - 1) % 3 == 0
    return _hasse_e_final_fq(q, a, b) != 0


def _mul2(x0, x1, y0, y1, q, m):
    return (x0 * y0 + m * x1 * y1) % q, (x0 * y1 + x1 * y0) % q


def hasse_nonzero_fq2(q: int, m2: int, a0: int, a1: int, b0: int, b1: int) -> bool:
    """Hasse coefficient test over F_q(t), t^2 = m2, for curve coefficients
    a = a0 + a1 t and b = b0 + b1 t."""
    a0 %= q
    a1 %= q
    b0 %= q
    b1 %= q
    m2 %= q
    if (a0, a1) == (0, 0) and (b0, b1) == (0, 0):
        raise ValueError("singular curve")
    mm = (q - 1) // 2
    if (b0, b1) == (0, 0):
        return mm % 2 == 0
    if (a0, a1) == (0, 0):
        return (q - 1) % 3 == 0
    c20, c21 = _mul2(b0, b1, b0, b1, q, m2)
    e2 = (0, 0)
    e1 = (0, 0)
    e0 = (1, 0)
    for n in range(q - 1):
        c1 = (3 * mm - n + 2) % q * (n * (n - 1) % q) % q
        t0, t1 = _mul2(c20, c21, e2[0], e2[1], q, m2)
        t0, t1 = c1 * t0 % q, c1 * t1 % q
        s = (mm - n) % q
        u0, u1 = _mul2(a0, a1, e0[0], e0[1], q, m2)
        u0, u1 = s * u0 % q, s * u1 % q
        e_next = ((t0 + u0) % q, (t1 + u1) % q)
        e2, e1, e0 = e1, e0, e_next
    return e0 != (0, 0)


def count_points_fq(q: int, a: int, b: int) -> int:
    """#E(F_q) for y^2 = x^3 + a x + b by summing quadratic characters."""
    # chi table: chi[v] = 1 if v is a nonzero square, else -1 (chi[0] = 0)
    chi = [-1] * q
    chi[0] = 0
    for x in range(1, q):
        chi[x * x % q] = 1
    total = q + 1
    for x in range(q):
        total += chi[(x * x % q * x + a * x + b) % q]
    return total


def _curve_from_j_fq2(q, m2, j0, j1):
    """Coefficients (a, b) as pairs for a curve with invariant j0 + j1 t."""
    if (j0, j1) == (0, 0):
        return (0, 0), (1, 0)
    if (j0 - 1728) % q == 0 and j1 == 0:
        return (1, 0), (0, 0)
    d0, d1 = (1728 - j0) % q, (-j1) % q
    # k = j / (1728 - j); invert via the norm
    norm = (d0 * d0 - m2 * d1 * d1) % q
    ninv = pow(norm, q - 2, q)
    i0, i1 = d0 * ninv % q, (-d1) * ninv % q
    k0, k1 = _mul2(j0, j1, i0, i1, q, m2)
    return (3 * k0 % q, 3 * k1 % q), (2 * k0 % q, 2 * k1 % q)


def _nonresidue(q: int) -> int:
    for m2 in range(2, q):
        if pow(m2, (q - 1) // 2, q) == q - 1:
            return m2
    raise ValueError(f"no quadratic nonresidue mod {q}")


def supersingular_census_fq2(q: int) -> int:
    """Number of supersingular j-invariants in F_(q^2)."""
    m2 = _nonresidue(q)
    count = 0
    for j1 in range(q):
        for j0 in range(q):
            (a0, a1), (b0, b1) = _curve_from_j_fq2(q, m2, j0, j1)
            if not hasse_nonzero_fq2(q, m2, a0, a1, b0, b1):
                count += 1
    return count
