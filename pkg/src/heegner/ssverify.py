"""Independent supersingularity verification.

A quadratic-surd j-invariant is reduced modulo a prime q (into F_q or F_q^2
according to the splitting of its radicand) and the reduction is tested by
the Hasse-invariant criterion: y^2 = f(x) is supersingular iff the
coefficient of x^(q-1) in f^((q-1)/2) vanishes.  Verification is bounded by
an explicit effort limit (default 1e7) beyond which primes are reported as
unverified rather than trusted.

Also home to the norm computation showing that rational points of the level-3
curve have N(j - 1728) a perfect square, and the exact h -> j lift that
enables end-to-end verification for p = 3.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .intmath import FactorBudget, is_prime, kronecker, squarefree_part
from .kernels import hasse_nonzero_fq, hasse_nonzero_fq2

__all__ = [
    "QuadSurd",
    "Fq2",
    "BadReductionError",
    "EffortBoundExceeded",
    "VERIFY_EFFORT_BOUND",
    "reduce_mod",
    "sqrt_mod",
    "is_supersingular_j",
    "verify_certificate",
    "norm_square_check",
    "lift_j_from_h_level3",
]

VERIFY_EFFORT_BOUND = 10**7


class BadReductionError(ValueError):
    """q divides the denominator of the surd representation."""


class EffortBoundExceeded(RuntimeError):
    """q exceeds the verification effort bound."""


@dataclass(frozen=True)
class QuadSurd:
    """(u + v*sqrt(m)) / w with w > 0, gcd(u, v, w) = 1 and m squarefree."""

    u: int
    v: int
    w: int
    m: int

    def __post_init__(self):
        if self.w <= 0:
            raise ValueError("denominator must be positive")
        if math.gcd(math.gcd(self.u, self.v), self.w) != 1:
            raise ValueError("representation not in lowest terms")

    @classmethod
    def make(cls, u: int, v: int, w: int, m: int,
             budget: FactorBudget | None = None) -> "QuadSurd":
        """Canonicalize: positive w, square part of m folded into v, gcd 1."""
        if w == 0:
            raise ZeroDivisionError("denominator is zero")
        if w < 0:
            u, v, w = -u, -v, -w
        if v == 0:
            m = 1
        elif m == 0:
            v, m = 0, 1
        else:
            m, s = squarefree_part(m, budget)
            v *= s
        if v == 0:
            m = 1
        g = math.gcd(math.gcd(u, v), w)
        return cls(u // g, v // g, w // g, m)

    @classmethod
    def from_rational(cls, h: Fraction) -> "QuadSurd":
        h = Fraction(h)
        return cls.make(h.numerator, 0, h.denominator, 1)

    _PATTERN = re.compile(
        r"^\(?\s*(?P<u>[+-]?\d+)?\s*"
        r"(?:(?P<sign>[+-]?)\s*(?:(?P<v>\d+)\s*\*\s*)?sqrt\(\s*(?P<m>-?\d+)\s*\))?"
        r"\s*\)?\s*(?:/\s*(?P<w>\d+))?$"
    )

    @classmethod
    def from_string(cls, text: str) -> "QuadSurd":
        """Parse "(u + v*sqrt(m))/w"; the surd and denominator are optional."""
        match = cls._PATTERN.match(text.strip().replace(" ", ""))
        if not match or (match.group("u") is None and match.group("m") is None):
            raise ValueError(f"cannot parse quadratic surd {text!r}")
        u = int(match.group("u") or 0)
        if match.group("m") is not None:
            v = int(match.group("v") or 1)
            if match.group("sign") == "-":
                v = -v
            m = int(match.group("m"))
        else:
            v, m = 0, 1
        w = int(match.group("w") or 1)
        return cls.make(u, v, w, m)

    def __str__(self) -> str:
        if self.v == 0:
            return f"{self.u}/{self.w}"
        sign = "+" if self.v >= 0 else "-"
        return f"({self.u}{sign}{abs(self.v)}*sqrt({self.m}))/{self.w}"

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.u, -self.v, self.w, self.m)


@dataclass(frozen=True)
class Fq2:
    """c0 + c1*t in F_q(t), t^2 = m (m a quadratic nonresidue mod q)."""

    q: int
    m: int
    c0: int
    c1: int

    def is_rational(self) -> bool:
        return self.c1 == 0


def sqrt_mod(a: int, q: int) -> int:
    """A square root of a modulo an odd prime q (Tonelli-Shanks)."""
    a %= q
    if a == 0:
        return 0
    if kronecker(a, q) != 1:
        raise ValueError(f"{a} is not a square mod {q}")
    if q % 4 == 3:
        return pow(a, (q + 1) // 4, q)
    # Tonelli-Shanks
    s, d = 0, q - 1
    while d % 2 == 0:
        d //= 2
        s += 1
    z = 2
    while kronecker(z, q) != -1:
        z += 1
    m_, c, t, r = s, pow(z, d, q), pow(a, d, q), pow(a, (d + 1) // 2, q)
    while t != 1:
        t2, i = t * t % q, 1
        while t2 != 1:
            t2 = t2 * t2 % q
            i += 1
        b = pow(c, 1 << (m_ - i - 1), q)
        m_, c = i, b * b % q
        t, r = t * c % q, r * b % q
    return r


def reduce_mod(j: QuadSurd, q: int) -> list[int] | Fq2:
    """Reduction of j modulo q: residues in F_q, or an element of F_q^2.

    Split m gives the two conjugate residues, ramified m a single one, inert
    m an element of F_q(sqrt(m)).
    """
    if not is_prime(q) or q == 2:
        raise ValueError(f"q = {q} must be an odd prime")
    if j.w % q == 0:
        raise BadReductionError(f"{q} divides the denominator of {j}")
    winv = pow(j.w, -1, q)
    if j.v % q == 0:
        return [j.u * winv % q]
    symbol = kronecker(j.m, q)
    if symbol == 0:
        return [j.u * winv % q]
    if symbol == 1:
        s = sqrt_mod(j.m, q)
        return sorted({(j.u + j.v * s) * winv % q, (j.u - j.v * s) * winv % q})
    return Fq2(q, j.m % q, j.u * winv % q, j.v * winv % q)


def _curve_from_j_fq(j0: int, q: int) -> tuple[int, int]:
    j0 %= q
    if j0 == 0:
        return 0, 1
    if (j0 - 1728) % q == 0:
        return 1, 0
    k = j0 * pow((1728 - j0) % q, -1, q) % q
    return 3 * k % q, 2 * k % q


def _curve_from_j_fq2(el: Fq2) -> tuple[tuple[int, int], tuple[int, int]]:
    q, m = el.q, el.m
    if (el.c0, el.c1) == (0, 0):
        return (0, 0), (1, 0)
    if el.c1 == 0 and (el.c0 - 1728) % q == 0:
        return (1, 0), (0, 0)
    d0, d1 = (1728 - el.c0) % q, (-el.c1) % q
    norm = (d0 * d0 - m * d1 * d1) % q
    ninv = pow(norm, -1, q)
    i0, i1 = d0 * ninv % q, (-d1) * ninv % q
    k0 = (el.c0 * i0 + m * el.c1 * i1) % q
    k1 = (el.c0 * i1 + el.c1 * i0) % q
    return (3 * k0 % q, 3 * k1 % q), (2 * k0 % q, 2 * k1 % q)


def is_supersingular_j(j0: int | Fq2, q: int,
                       effort_bound: int = VERIFY_EFFORT_BOUND) -> bool:
    """Hasse-invariant supersingularity test of a j-invariant over F_q or F_q^2.

    Twists share the same answer, so any curve with the given invariant may
    be used; we take y^2 = x^3 + 3k x + 2k with k = j/(1728 - j) and the
    standard special curves at j = 0 and 1728.
    """
    if q in (2, 3):
        raise ValueError("supersingularity test defined for q >= 5")
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if q > effort_bound:
        raise EffortBoundExceeded(f"q = {q} exceeds effort bound {effort_bound}")
    if isinstance(j0, Fq2) and not j0.is_rational():
        (a0, a1), (b0, b1) = _curve_from_j_fq2(j0)
        return not hasse_nonzero_fq2(q, j0.m, a0, a1, b0, b1)
    if isinstance(j0, Fq2):
        j0 = j0.c0
    a, b = _curve_from_j_fq(j0, q)
    return not hasse_nonzero_fq(q, a, b)


def verify_certificate(cert, j: QuadSurd,
                       effort_bound: int = VERIFY_EFFORT_BOUND) -> dict[int, str]:
    """Per-prime verification statuses for the selected primes of a search
    certificate, given the j-invariant corresponding to its h.

    Every residue of j mod q must give the same verdict (conjugate curves are
    supersingular together); disagreement raises.
    """
    statuses: dict[int, str] = {}
    for q in cert.selected:
        if q in (2, 3):
            statuses[q] = "unverified-small"
            continue
        if q > effort_bound:
            statuses[q] = "unverified-large"
            continue
        try:
            residues = reduce_mod(j, q)
        except BadReductionError:
            statuses[q] = "bad-reduction"
            continue
        if isinstance(residues, Fq2):
            verdicts = [is_supersingular_j(residues, q, effort_bound)]
        else:
            verdicts = [is_supersingular_j(r, q, effort_bound) for r in residues]
        if len(set(verdicts)) != 1:
            raise ArithmeticError(
                f"conjugate residues disagree at q = {q}: internal error"
            )
        statuses[q] = "supersingular" if verdicts[0] else "ordinary"
    return statuses


# --- the level-3 lift and norm computation -----------------------------------


class _QuadExt:
    """x + y*sqrt(delta) with Fraction components over a fixed delta."""

    __slots__ = ("x", "y", "delta")

    def __init__(self, x, y, delta):
        self.x, self.y, self.delta = Fraction(x), Fraction(y), delta

    def __add__(self, other):
        if isinstance(other, _QuadExt):
            return _QuadExt(self.x + other.x, self.y + other.y, self.delta)
        return _QuadExt(self.x + other, self.y, self.delta)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, _QuadExt):
            return _QuadExt(
                self.x * other.x + self.delta * self.y * other.y,
                self.x * other.y + self.y * other.x,
                self.delta,
            )
        return _QuadExt(self.x * other, self.y * other, self.delta)

    __rmul__ = __mul__

    def __truediv__(self, other):
        n = other.norm()
        conj = _QuadExt(other.x, -other.y, self.delta)
        return (self * conj) * Fraction(1, 1) * Fraction(n.denominator, n.numerator)

    def norm(self) -> Fraction:
        return self.x * self.x - self.delta * self.y * self.y


def _j30_minpoly_norm(h: Fraction, poly_low: Fraction, poly_lin: Fraction) -> Fraction:
    """Norm of lin*t + low over Q[t]/(t^2 - h t + 729)."""
    return poly_lin * poly_lin * 729 + poly_lin * poly_low * h + poly_low * poly_low


def norm_square_check(h, p: int = 3) -> tuple[Fraction, bool]:
    """N(j - 1728) for the curve pair with level-3 invariant h; perfect square?

    Requires a non-real lift: the two values of the eta quotient are the
    roots of t^2 - h t + 729, complex exactly when h^2 < 4*729.
    """
    if p != 3:
        raise ValueError("norm computation implemented for p = 3 only")
    h = Fraction(h)
    if h * h >= 2916:
        raise ValueError(
            f"h = {h} has real eta-quotient values (h^2 >= 2916): real case not handled"
        )
    # reduce t^2 - 486 t - 19683 modulo t^2 - h t + 729: (h - 486) t - 20412
    num_norm = _j30_minpoly_norm(h, Fraction(-20412), h - 486)
    norm = num_norm * num_norm / Fraction(729) ** 3
    num, den = norm.numerator, norm.denominator
    is_sq = num >= 0 and math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den
    return norm, is_sq


def lift_j_from_h_level3(h) -> QuadSurd:
    """The j-invariant of the curve pair with level-3 invariant h (non-real case).

    The eta-quotient value satisfies t^2 - h t + 729 = 0 and
    j - 1728 = (t^2 - 486 t - 19683)^2 / t^3.
    """
    h = Fraction(h)
    if h * h >= 2916:
        raise ValueError("real case not handled (h^2 >= 2916)")
    n, d = h.numerator, h.denominator
    m0 = n * n - 2916 * d * d  # (sqrt of) discriminant of the lift, negative
    delta = Fraction(m0, d * d)
    t = _QuadExt(h / 2, Fraction(1, 2), delta)  # (h + sqrt(delta)) / 2
    g = t * t - 486 * t - 19683
    j = g * g / (t * t * t) + 1728
    # express j = x + y*sqrt(delta) as (u + v*sqrt(m0)) / w with integer parts
    x, y = j.x, j.y
    y_scaled = y / d  # j = x + (y/d) sqrt(m0)
    w = math.lcm(x.denominator, y_scaled.denominator)
    return QuadSurd.make(int(x * w), int(y_scaled * w), w, m0)
