"""High-precision evaluation of eta, theta series and the Hauptmoduls j_p.

All evaluations are mpmath-based with an explicit ``bits`` argument; series
are truncated once dropped terms fall below 2^-(bits+32), and the CM-point
entry points first move tau to the highest point of its Gamma_0(p)+ orbit so
that q-series converge quickly even for deep Heegner representatives.

Supported levels: p in {3, 5, 7, 13} via eta quotients, p = 11 and 19 via
theta quotients, and p = 23 via the ratio of weight-one class theta series of
discriminant -23 (normalized to a simple pole of residue 1 and vanishing
constant term; used only for the empirical mod-23 study).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mpc, mpf

from .quadforms import QuadForm, fundamental_unit

__all__ = [
    "GUARD_BITS",
    "MIN_IM",
    "CMPoint",
    "eta",
    "theta",
    "theta_star",
    "j_p0",
    "j_p",
    "classical_j",
    "torsion_to_tau",
    "reduce_tau",
    "tau_from_form",
    "jp_at_form",
    "arc_point",
    "jp_arc_interval",
]

GUARD_BITS = 32
MIN_IM = 0.05

ETA_QUOTIENT_P = (3, 5, 7, 13)
ALL_P = (3, 5, 7, 11, 13, 19, 23)


def _level_min_im(p: int) -> float:
    # reduced points of Gamma_0(p)+ can sit as low as sqrt(3)/(2p); allow a
    # margin below that for the internal reduced-evaluation path
    return min(MIN_IM, 0.8 * math.sqrt(3) / (2 * p))


def _require_upper(tau, min_im=MIN_IM):
    if mpmath.im(tau) <= 0:
        raise ValueError("tau must lie in the upper half plane")
    if mpmath.im(tau) < min_im:
        raise ValueError(
            f"Im(tau) = {float(mpmath.im(tau)):.4g} below evaluation cutoff {min_im}"
        )


def _series_length(bits: int, im: float, period: float = 1.0) -> int:
    """Largest exponent needed so dropped terms are < 2^-(bits+guard).

    ``period`` scales for series in q^(1/period) (theta_star uses period 2).
    """
    return int((bits + GUARD_BITS) * math.log(2) * period / (2 * math.pi * im)) + 1


def eta(tau, bits: int, min_im: float = MIN_IM):
    """Dedekind eta via the sparse pentagonal-number series."""
    _require_upper(tau, min_im)
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        nmax = _series_length(bits, float(mpmath.im(tau)))
        q = mpmath.expjpi(2 * tau)
        q2 = q * q
        q3 = q2 * q
        total = mpmath.mpc(1)
        a = q  # q^(k(3k-1)/2)
        qp = q  # q^k
        q2p = q3  # q^(2k+1)
        k = 1
        sign = -1
        while k * (3 * k - 1) // 2 <= nmax:
            b = a * qp  # q^(k(3k+1)/2)
            total += sign * (a + b)
            a = b * q2p
            qp *= q
            q2p *= q2
            sign = -sign
            k += 1
        return mpmath.expjpi(tau / 12) * total


def _theta_counts(a: int, b: int, c: int, nmax: int) -> list[int]:
    """Representation numbers r(n) of a x^2 + b x y + c y^2 for n <= nmax."""
    disc = 4 * a * c - b * b
    if a <= 0 or disc <= 0:
        raise ValueError(f"theta exponent form ({a}, {b}, {c}) must be positive definite")
    counts = [0] * (nmax + 1)
    counts[0] = 1
    # y = 0 row: values a x^2, x > 0, doubled by (x, y) -> (-x, -y)
    x = 1
    while a * x * x <= nmax:
        counts[a * x * x] += 2
        x += 1
    ymax = math.isqrt(4 * a * nmax // disc)
    for y in range(1, ymax + 1):
        w2 = 4 * a * nmax - disc * y * y
        if w2 < 0:
            break
        w = math.isqrt(w2)
        xlo = -((b * y + w) // (2 * a))
        xhi = (w - b * y) // (2 * a)
        for x in range(xlo, xhi + 1):
            n = a * x * x + b * x * y + c * y * y
            if n <= nmax:
                counts[n] += 2
    return counts


def _horner(counts, q):
    total = mpmath.mpc(0)
    for coeff in reversed(counts):
        total = total * q + coeff
    return total


def theta(a: int, b: int, c: int, tau, bits: int, min_im: float = MIN_IM):
    """Lattice sum of q^(a x^2 + b x y + c y^2) over x, y in Z."""
    _require_upper(tau, min_im)
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        nmax = _series_length(bits, float(mpmath.im(tau)))
        counts = _theta_counts(a, b, c, nmax)
        q = mpmath.expjpi(2 * tau)
        return _horner(counts, q)


def theta_star(tau, bits: int, min_im: float = MIN_IM):
    """Signed sum of (-1)^m q^((m^2 + m n + 5 n^2)/2) over m + n odd."""
    _require_upper(tau, min_im)
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        # series in u = q^(1/2); exponents m^2 + m n + 5 n^2 are odd integers
        nmax = _series_length(bits, float(mpmath.im(tau)), period=2)
        counts = [0] * (nmax + 1)
        m = 1
        while m * m <= nmax:  # n = 0 needs m odd
            counts[m * m] += 2 * (-1 if m % 2 else 1)
            m += 2
        ymax = math.isqrt(4 * nmax // 19)
        for n in range(1, ymax + 1):
            w2 = 4 * nmax - 19 * n * n
            if w2 < 0:
                break
            w = math.isqrt(w2)
            mlo = -((n + w) // 2)
            mhi = (w - n) // 2
            for m in range(mlo, mhi + 1):
                if (m + n) % 2 == 0:
                    continue
                k = m * m + m * n + 5 * n * n
                if k <= nmax:
                    counts[k] += 2 * (-1 if m % 2 else 1)
        u = mpmath.expjpi(tau)
        return _horner(counts, u)


def _wp_constant(p: int):
    # w_p maps j_p0 to p^(12/(p-1)) / j_p0
    return mpmath.mpf(p) ** (12 // (p - 1))


def j_p0(tau, p: int, bits: int, reduce: bool = True):
    """Eta-quotient Hauptmodul of X_0(p) for p in {3, 5, 7, 13}."""
    if p not in ETA_QUOTIENT_P:
        raise ValueError(f"j_p0 defined for p in {ETA_QUOTIENT_P}")
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        parity = 0
        floor = MIN_IM
        if reduce:
            tau, parity = reduce_tau(tau, p, bits)
            floor = _level_min_im(p)
        value = _jp0_raw(tau, p, bits, floor)
        if parity:
            value = _wp_constant(p) / value
        return value


def _jp0_raw(tau, p: int, bits: int, floor: float):
    exponent = 24 // (p - 1)
    return (eta(tau, bits, floor) / eta(p * tau, bits, floor)) ** exponent


def j_p(tau, p: int, bits: int, reduce: bool = True):
    """Hauptmodul of X_0*(p), invariant under Gamma_0(p) and tau -> -1/(p tau)."""
    if p not in ALL_P:
        raise ValueError(f"j_p defined for p in {ALL_P}")
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        floor = MIN_IM
        if reduce:
            tau, _ = reduce_tau(tau, p, bits)
            floor = _level_min_im(p)
        if p in ETA_QUOTIENT_P:
            u = _jp0_raw(tau, p, bits, floor)
            return u + _wp_constant(p) / u
        if p == 11:
            num = theta(1, 1, 3, tau, bits, floor)
            den = eta(tau, bits, floor) * eta(11 * tau, bits, floor)
            return (num / den) ** 2
        if p == 19:
            # theta* = -2 q^(1/2) (1 + ...), so the square of the printed
            # quotient has residue 1/4; rescale to a residue-1 Hauptmodul
            # (pinned by the supersingular basis {0, 8} mod 19)
            quotient = theta(1, 1, 5, tau, bits, floor) / theta_star(tau, bits, floor)
            return 4 * quotient**2
        # p = 23: ratio of the weight-1 class theta series of discriminant
        # -23, normalized to residue 1 and vanishing constant term
        a = theta(1, 1, 6, tau, bits, floor)
        b = theta(2, 1, 3, tau, bits, floor)
        return (3 * b - a) / (a - b)


def classical_j(tau, bits: int):
    """Classical j-invariant as E4(tau)^3 / eta(tau)^24."""
    _require_upper(tau)
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        nmax = _series_length(bits, float(mpmath.im(tau)))
        sigma3 = [0] * (nmax + 1)
        for d in range(1, nmax + 1):
            d3 = d * d * d
            for m in range(d, nmax + 1, d):
                sigma3[m] += d3
        sigma3[0] = 0
        q = mpmath.expjpi(2 * tau)
        e4 = 1 + 240 * q * _horner(sigma3[1:], q)
        return e4**3 / eta(tau, bits) ** 24


def torsion_to_tau(tau_E, k: int | None, p: int, bits: int | None = None):
    """Modular coordinate of (C/<1, tau_E>, kernel) under z <-> (C/<1,z>, <1/p>).

    ``k = None`` selects the kernel <1/p>, giving z = tau_E; an integer
    0 <= k < p selects <(tau_E + k)/p>, giving z = -1/(tau_E + k).  The
    division runs at ``bits`` precision when given, else at the ambient one.
    """
    with mpmath.workprec((bits + GUARD_BITS) if bits else mpmath.mp.prec):
        tau_E = mpc(tau_E)
        if mpmath.im(tau_E) <= 0:
            raise ValueError("tau_E must lie in the upper half plane")
        if k is None:
            return tau_E
        if not 0 <= k < p:
            raise ValueError(f"torsion index k = {k} out of range for p = {p}")
        return -1 / (tau_E + k)


def reduce_tau(tau, p: int, bits: int, max_moves: int = 500):
    """Move tau to the highest point of its Gamma_0(p)+ orbit.

    Applies integer translations, the Fricke involution tau -> -1/(p tau) and
    Gamma_0(p) elements with lower row (c, d), c = 0 mod p, whenever they
    strictly increase Im(tau).  Returns (tau', parity) where parity counts
    Fricke applications mod 2 (translations and Gamma_0(p) moves leave any
    Gamma_0(p)-invariant unchanged; odd parity composes one w_p).
    """
    with mpmath.workprec(bits + GUARD_BITS):
        tau = mpc(tau)
        if mpmath.im(tau) <= 0:
            raise ValueError("tau must lie in the upper half plane")
        eps = mpf(1) - mpf(2) ** -20
        parity = 0
        for _ in range(max_moves):
            shift = int(mpmath.nint(mpmath.re(tau)))
            tau -= shift
            norm = mpmath.re(tau) ** 2 + mpmath.im(tau) ** 2
            if p * norm < eps:
                tau = -1 / (p * tau)
                parity ^= 1
                continue
            t = float(mpmath.im(tau))
            moved = False
            c = p
            while c * t < 1 and not moved:
                d0 = int(mpmath.nint(-c * mpmath.re(tau)))
                for d in (d0, d0 - 1, d0 + 1):
                    if math.gcd(c, d) != 1:
                        continue
                    den = c * tau + d
                    if mpmath.re(den) ** 2 + mpmath.im(den) ** 2 < eps:
                        g, x, y = _xgcd(c, d)
                        tau = (y * tau - x) / den
                        moved = True
                        break
                c += p
            if not moved:
                return tau, parity
        raise ArithmeticError("tau reduction did not terminate")


def _xgcd(a, b):
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def tau_from_form(form: QuadForm, bits: int):
    """CM point (-b + i sqrt(|D|)) / (2a) of a positive definite form."""
    with mpmath.workprec(bits + GUARD_BITS):
        D = form.discriminant()
        if D >= 0:
            raise ValueError("form must be positive definite")
        return (mpf(-form.b) + mpmath.sqrt(mpf(-D)) * 1j) / (2 * form.a)


@dataclass(frozen=True)
class CMPoint:
    """An upper-half-plane CM point tagged with its source form."""

    form: QuadForm
    D: int
    tau: object

    @classmethod
    def from_form(cls, form: QuadForm, bits: int) -> "CMPoint":
        return cls(form, form.discriminant(), tau_from_form(form, bits))


def jp_at_form(form: QuadForm, p: int, bits: int):
    """j_p at the CM point of a form with p | a (a Heegner representative)."""
    if form.a % p != 0:
        raise ValueError(f"form {form} is not a Heegner representative for p = {p}")
    tau = tau_from_form(form, bits)
    return j_p(tau, p, bits)


def arc_point(p: int, re, bits: int):
    """The point of the arc |tau| = 1/sqrt(p) with given real part."""
    with mpmath.workprec(bits + GUARD_BITS):
        re = mpf(re)
        im2 = mpf(1) / p - re * re
        if im2 <= 0:
            raise ValueError("real part outside the circle of radius 1/sqrt(p)")
        return re + mpmath.sqrt(im2) * 1j


@lru_cache(maxsize=None)
def jp_arc_interval(p: int, bits: int = 256) -> tuple[float, float]:
    """Endpoints of the real interval j_p(S) for p = 3 mod 4.

    S is the arc |tau| = 1/sqrt(p), -d/c < Re(tau) < 0; j_p increases
    clockwise along it, so the infimum sits at Re = -d/c and the supremum at
    tau = i/sqrt(p).  Returned as floats (the interval test tolerance is
    2^-16, far above float error).
    """
    c, d = fundamental_unit(p)
    with mpmath.workprec(bits + GUARD_BITS):
        top = j_p(mpmath.mpc(0, 1) / mpmath.sqrt(p), p, bits)
        left = j_p(arc_point(p, mpf(-d) / c, bits), p, bits)
        return float(mpmath.re(left)), float(mpmath.re(top))
