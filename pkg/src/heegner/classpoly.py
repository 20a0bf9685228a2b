"""Class polynomials P_D(X) from Heegner-point evaluations.

The primary construction multiplies one linear factor per Atkin-Lehner pair
of ideal classes (degree h/2) and certifies the integer rounding: the
coefficient residual must stay below 2^-20 and the rounded polynomial must
re-vanish at every evaluated Heegner value.  On failure the working precision
doubles, capped at 2^16 bits.  A second route squares down the full h-class
product through an exact integer polynomial square root and is used as a
cross-check in the tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .hauptmodul import GUARD_BITS, jp_at_form
from .quadforms import (
    Discriminant,
    al_pair_classes,
    enumerate_classes,
    heegner_rep,
)

__all__ = [
    "ClassPolynomial",
    "PrecisionExhaustedError",
    "build_PD",
    "build_PD_via_square_root",
    "build_Pl",
    "evaluate",
    "real_roots",
    "count_real_roots",
    "count_roots_in",
    "int_poly_sqrt",
]

ROUNDING_TOLERANCE = 2.0**-20
MAX_BITS = 1 << 16


class PrecisionExhaustedError(ArithmeticError):
    """Rounding could not be certified within the precision cap."""


@dataclass(frozen=True)
class ClassPolynomial:
    """Monic integer polynomial of degree h(D)/2 (or a product of two)."""

    p: int
    D: int | tuple[int, int]
    coefficients: tuple[int, ...]  # ascending, leading coefficient 1
    rounding_residual: float

    def __post_init__(self):
        if self.coefficients[-1] != 1:
            raise ValueError("class polynomial must be monic")
        if self.rounding_residual >= ROUNDING_TOLERANCE:
            raise ValueError("rounding residual above certification threshold")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, h: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * h + c
        return acc

    def to_json(self) -> str:
        D = list(self.D) if isinstance(self.D, tuple) else self.D
        return json.dumps(
            {"p": self.p, "D": D, "coefficients": [str(c) for c in self.coefficients]}
        )

    @classmethod
    def from_json(cls, text: str) -> "ClassPolynomial":
        data = json.loads(text)
        D = data["D"]
        if isinstance(D, list):
            D = tuple(D)
        return cls(
            p=data["p"],
            D=D,
            coefficients=tuple(int(c) for c in data["coefficients"]),
            rounding_residual=0.0,
        )

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            x = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            terms.append(f"{c}" if i == 0 else (x if c == 1 else f"{c}*{x}"))
        return " + ".join(terms).replace("+ -", "- ")


def _as_disc(D, p=None) -> Discriminant:
    if isinstance(D, Discriminant):
        return D
    if p is None:
        raise ValueError("p is required when D is given as an integer")
    return Discriminant.from_D(int(D), p)


def _initial_bits(D: int, rep_as) -> int:
    # height heuristic: 64 + 3.5 * pi * sqrt(|D|) * sum(1/a) / ln 2
    estimate = 3.5 * math.pi * math.sqrt(-D) * sum(1.0 / a for a in rep_as) / math.log(2)
    return 64 + int(estimate) + 1


def _product_of_linear_factors(roots):
    coeffs = [mpmath.mpc(1)]
    for r in roots:
        coeffs = [mpmath.mpc(0)] + coeffs
        for k in range(len(coeffs) - 1):
            coeffs[k] -= r * coeffs[k + 1]
    return coeffs


def _certify_round(coeffs):
    """Round complex coefficients to integers; (ints, residual)."""
    ints = []
    residual = mpmath.mpf(0)
    for x in coeffs:
        re, im = mpmath.re(x), mpmath.im(x)
        n = mpmath.nint(re)
        residual = max(residual, abs(im), abs(re - n))
        ints.append(int(n))
    return ints, float(residual)


def build_PD(D, p: int | None = None, bits: int | None = None) -> ClassPolynomial:
    """The class polynomial P_D(X), one root per Atkin-Lehner class pair."""
    disc = _as_disc(D, p)
    group = enumerate_classes(disc.D)
    pairs = al_pair_classes(group, disc.p)
    reps = []
    for f, g in pairs:
        hf, hg = heegner_rep(f, disc.p), heegner_rep(g, disc.p)
        reps.append(hf if hf.a <= hg.a else hg)
    work = bits if bits is not None else _initial_bits(disc.D, [r.a for r in reps])
    while work <= MAX_BITS:
        roots = [jp_at_form(rep, disc.p, work) for rep in reps]
        with mpmath.workprec(work + GUARD_BITS):
            coeffs = _product_of_linear_factors(roots)
            ints, residual = _certify_round(coeffs)
            if residual < ROUNDING_TOLERANCE and _revanishes(ints, roots, work):
                return ClassPolynomial(disc.p, disc.D, tuple(ints), residual)
        work *= 2
    raise PrecisionExhaustedError(
        f"could not certify P_D for D = {disc.D} within {MAX_BITS} bits"
    )


def _revanishes(ints, roots, bits) -> bool:
    threshold = mpmath.mpf(2) ** -(bits // 4)
    for r in roots:
        acc = mpmath.mpc(0)
        for c in reversed(ints):
            acc = acc * r + c
        if abs(acc) >= threshold:
            return False
    return True


def build_PD_via_square_root(D, p: int | None = None, bits: int | None = None) -> ClassPolynomial:
    """Alternate construction: full h-class product, then exact integer sqrt.

    Validates the pairing route; the two must agree coefficient for
    coefficient.
    """
    disc = _as_disc(D, p)
    group = enumerate_classes(disc.D)
    reps = [heegner_rep(f, disc.p) for f in group.classes]
    work = bits if bits is not None else 2 * _initial_bits(disc.D, [r.a for r in reps])
    while work <= 2 * MAX_BITS:
        roots = [jp_at_form(rep, disc.p, work) for rep in reps]
        with mpmath.workprec(work + GUARD_BITS):
            coeffs = _product_of_linear_factors(roots)
            ints, residual = _certify_round(coeffs)
            if residual < ROUNDING_TOLERANCE:
                root_ints = int_poly_sqrt(ints)
                if root_ints is not None:
                    return ClassPolynomial(disc.p, disc.D, tuple(root_ints), residual)
        work *= 2
    raise PrecisionExhaustedError(
        f"square-root route failed for D = {disc.D} within {2 * MAX_BITS} bits"
    )


def int_poly_sqrt(coeffs) -> tuple[int, ...] | None:
    """G with G^2 = F for monic integer F of even degree, or None."""
    n = len(coeffs) - 1
    if n % 2 or coeffs[-1] != 1:
        return None
    m = n // 2
    g = [0] * (m + 1)
    g[m] = 1
    for k in range(1, m + 1):
        # coefficient of X^(2m - k) in G^2 equals coeffs[2m - k]
        acc = 0
        for i in range(m - k + 1, m):
            j = 2 * m - k - i
            if m - k < j <= m:
                acc += g[i] * g[j]
        num = coeffs[2 * m - k] - acc
        if num % 2:
            return None
        g[m - k] = num // 2
    # verify the full square
    square = [0] * (n + 1)
    for i in range(m + 1):
        for j in range(m + 1):
            square[i + j] += g[i] * g[j]
    if square != list(coeffs):
        return None
    return tuple(g)


def build_Pl(ell: int, p: int, bits: int | None = None,
             parts: tuple[ClassPolynomial, ClassPolynomial] | None = None) -> ClassPolynomial:
    """Product polynomial P_l = P_{-pl} * P_{-4pl} for p = 5 or 13.

    Pass already-built factors through ``parts`` to avoid rebuilding them.
    """
    if p not in (5, 13):
        raise ValueError("product polynomials are used for p = 5 and 13")
    if parts is None:
        odd = build_PD(Discriminant(p, ell, "-pl"), bits=bits)
        even = build_PD(Discriminant(p, ell, "-4pl"), bits=bits)
    else:
        odd, even = parts
        if odd.D != -p * ell or even.D != -4 * p * ell:
            raise ValueError("parts do not match the requested discriminants")
    coeffs = _int_poly_mul(odd.coefficients, even.coefficients)
    residual = max(odd.rounding_residual, even.rounding_residual)
    return ClassPolynomial(p, (odd.D, even.D), tuple(coeffs), residual)


def _int_poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def evaluate(P: ClassPolynomial, h: Fraction) -> Fraction:
    """Exact rational value P(h)."""
    return P.evaluate(Fraction(h))


# --- real-root machinery (Sturm sequences over Z) ---------------------------


def _int_derivative(f):
    return [i * c for i, c in enumerate(f)][1:]


def _content(f):
    g = 0
    for c in f:
        g = math.gcd(g, abs(c))
    return g or 1


def _pseudo_rem_signed(a, b):
    """Remainder of a by b scaled by a positive constant (sign-faithful).

    Each elimination step replaces r by lc(b)*r - top*X^s*b, so the result is
    lc(b)^k * rem(a, b); the sign is corrected when lc(b)^k < 0.
    """
    db = len(b) - 1
    lead = b[-1]
    r = list(a)
    steps = 0
    while r and len(r) - 1 >= db:
        top = r[-1]
        shift = len(r) - 1 - db
        r = [lead * c for c in r]
        for i, bc in enumerate(b):
            r[shift + i] -= top * bc
        while r and r[-1] == 0:
            r.pop()
        steps += 1
    if lead < 0 and steps % 2:
        r = [-c for c in r]
    return r


def sturm_chain(f):
    """Sturm chain of an integer polynomial, entries scaled by positive ints."""
    f = list(f)
    chain = [f, _int_derivative(f)]
    while len(chain[-1]) > 1:
        r = _pseudo_rem_signed(chain[-2], chain[-1])
        if not r:
            break
        r = [-c for c in r]
        cont = _content(r)
        chain.append([c // cont for c in r])
    return chain


def _sign_at(f, x: Fraction) -> int:
    n = len(f) - 1
    u, v = x.numerator, x.denominator
    acc = 0
    upow = 1
    vpow = v**n
    for c in f:
        acc += c * upow * vpow
        upow *= u
        if vpow != 1:
            vpow //= v
    return (acc > 0) - (acc < 0)


def _sign_at_infinity(f, positive: bool) -> int:
    lead = f[-1]
    if positive or (len(f) - 1) % 2 == 0:
        return (lead > 0) - (lead < 0)
    return (lead < 0) - (lead > 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_real_roots(P: ClassPolynomial) -> int:
    chain = sturm_chain(list(P.coefficients))
    v_neg = _variations([_sign_at_infinity(f, False) for f in chain])
    v_pos = _variations([_sign_at_infinity(f, True) for f in chain])
    return v_neg - v_pos


def count_roots_in(P: ClassPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]; endpoints must not be roots."""
    chain = sturm_chain(list(P.coefficients))
    v_lo = _variations([_sign_at(f, Fraction(lo)) for f in chain])
    v_hi = _variations([_sign_at(f, Fraction(hi)) for f in chain])
    return v_lo - v_hi


def real_roots(P: ClassPolynomial, width: Fraction = Fraction(1, 1 << 32)):
    """Isolating intervals of width <= 2^-32 for all real roots of P."""
    chain = sturm_chain(list(P.coefficients))

    def var_at(x):
        return _variations([_sign_at(f, x) for f in chain])

    bound = 1 + max(abs(c) for c in P.coefficients)
    total = count_real_roots(P)
    out = []
    stack = [(Fraction(-bound), Fraction(bound), var_at(Fraction(-bound)), var_at(Fraction(bound)))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        vmid = var_at(mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort()
    assert len(out) == total
    return out
