"""Supersingular prime search for rational points on X_0*(p).

The procedure: sieve primes l that are admissible for p, demand quadratic
character 1 at every avoided prime, build the class polynomial (discriminant
-4pl for p = 3 mod 4, the product P_l for p = 5 and 13), require a negative
value at h, and harvest the numerator primes q with (q | pl) != 1.  Each
accepted l also has its mod-l and mod-p squareness witnessed at runtime, not
only in the test suite.

Verification of harvested primes runs through ssverify when the j-invariant
is available (the level-3 lift); otherwise primes are reported unverified.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .classpoly import ClassPolynomial, build_PD, build_Pl, evaluate
from .intmath import FactorBudget, Factorization, factorize, is_prime, kronecker
from .modpoly import (
    FPoly,
    is_perfect_square,
    is_square_times_linear,
    mod_p_square_check,
    supersingular_jp_residues,
)
from .quadforms import SEARCH_P, Discriminant
from .hauptmodul import jp_arc_interval
from .ssverify import (
    VERIFY_EFFORT_BOUND,
    lift_j_from_h_level3,
    verify_certificate,
)

__all__ = [
    "SearchCertificate",
    "RealJCaseError",
    "SupersingularAtPError",
    "ell_admissible",
    "sigma_condition",
    "find_ell",
    "extract_primes",
    "search",
]

INTERIOR_MARGIN = 2.0**-16

LINEAR_SHAPE_ROOT = {5: -22, 13: -6}


class RealJCaseError(ValueError):
    """h lies outside j_p(S): the real-j case, covered elsewhere, not searched."""


class SupersingularAtPError(ValueError):
    """h reduces to a supersingular j_p-invariant mod p (theorem hypothesis)."""


@dataclass(frozen=True)
class SearchCertificate:
    """Full provenance of one supersingular-prime discovery."""

    p: int
    h: Fraction
    sigma: tuple[int, ...]
    ell: int
    D: int | tuple[int, int]
    value: Fraction
    factorization: Factorization
    candidates: tuple[tuple[int, int], ...]
    selected: tuple[int, ...]
    verification: dict[int, str]

    def check(self) -> None:
        """Machine-checkable invariants, independent of the search run."""
        if self.value >= 0:
            raise AssertionError("certificate value is not negative")
        den = self.value.denominator
        if math.isqrt(den) ** 2 != den:
            raise AssertionError("value denominator is not a perfect square")
        pl = self.p * self.ell
        num = self.value.numerator
        for q in self.selected:
            if kronecker(q, pl) == 1:
                raise AssertionError(f"selected prime {q} is a square mod {pl}")
            if q in self.sigma or q == self.p:
                raise AssertionError(f"selected prime {q} is excluded")
            if num % q != 0:
                raise AssertionError(f"selected prime {q} does not divide the numerator")

    def to_json(self) -> str:
        data = {
            "p": self.p,
            "h": f"{self.h.numerator}/{self.h.denominator}",
            "sigma": [str(v) for v in self.sigma],
            "ell": self.ell,
            "D": list(self.D) if isinstance(self.D, tuple) else self.D,
            "value": {
                "num": str(self.value.numerator),
                "den": str(self.value.denominator),
            },
            "factors": [
                {"prime": str(q), "exponent": e} for q, e in self.factorization.factors
            ],
            "selected": [str(q) for q in self.selected],
            "kronecker": [{"q": str(q), "symbol": s} for q, s in self.candidates],
            "verified": [
                {"q": str(q), "status": status}
                for q, status in self.verification.items()
            ],
        }
        if not self.factorization.complete:
            data["unfactored"] = str(self.factorization.cofactor)
        return json.dumps(data)


def ell_admissible(p: int, ell: int) -> bool:
    """The congruence and splitting conditions on l for level p."""
    if not is_prime(ell) or ell == p or ell == 2:
        return False
    if p % 4 == 3:
        return ell % 4 == 1 and kronecker(-p, ell) == 1
    # p = 5, 13: printed residue lists, cross-checked against the splitting rule
    if p == 5:
        in_list = ell % 20 in (3, 7)
    elif p == 13:
        in_list = ell % 52 in (7, 11, 15, 19, 31, 47)
    else:
        raise ValueError(f"unsupported p = {p}")
    rule = ell % 4 == 3 and kronecker(-p, ell) == 1
    if in_list != rule:
        raise ArithmeticError(f"admissibility table disagrees with rule at l = {ell}")
    return in_list


def sigma_condition(ell: int, p: int, sigma) -> bool:
    """(v | pl) = 1 for every avoided prime v, except possibly v = p."""
    pl = p * ell
    return all(kronecker(v, pl) == 1 for v in sigma if v != p)


def _interior_check(p: int, h: Fraction) -> None:
    lo, hi = jp_arc_interval(p)
    if not (lo + INTERIOR_MARGIN < float(h) < hi - INTERIOR_MARGIN):
        raise RealJCaseError(
            f"h = {h} is not interior to j_{p}(S) = ({lo:.6f}, {hi:.6f}): "
            "real-j case - covered by the real-field result, not searched"
        )


def find_ell(p: int, h: Fraction, sigma, ell_bound: int,
             bits: int | None = None, start_after: int = 0):
    """Smallest admissible l <= ell_bound with the sigma condition and a
    negative polynomial value at h.

    Returns (ell, D, polynomial, value, parts) where parts carries the two
    product factors for p = 5, 13; None when the bound is exhausted.
    """
    h = Fraction(h)
    if p % 4 == 3:
        _interior_check(p, h)
    ell = max(start_after, 2)
    while True:
        ell += 1
        if ell > ell_bound:
            return None
        if not ell_admissible(p, ell):
            continue
        if not sigma_condition(ell, p, sigma):
            continue
        if p % 4 == 3:
            poly = build_PD(Discriminant(p, ell, "-4pl"), bits=bits)
            parts = None
        else:
            odd = build_PD(Discriminant(p, ell, "-pl"), bits=bits)
            even = build_PD(Discriminant(p, ell, "-4pl"), bits=bits)
            parts = (odd, even)
            poly = build_Pl(ell, p, parts=parts)
        value = evaluate(poly, h)
        if value < 0:
            return ell, poly.D, poly, value, parts


def _runtime_squareness(p: int, ell: int, poly: ClassPolynomial, parts) -> None:
    """The mod-l and mod-p square statements, enforced on the search path."""
    f_mod_ell = FPoly.from_coeffs(poly.coefficients, ell)
    if p % 4 == 3:
        if is_perfect_square(f_mod_ell) is None:
            raise ArithmeticError(f"P_D mod {ell} is not a perfect square (p={p})")
        companion = build_PD(Discriminant(p, ell, "-pl")) if p == 11 else None
        ok, _witness = mod_p_square_check(poly, companion)
    else:
        root = LINEAR_SHAPE_ROOT[p]
        for part in parts:
            g = FPoly.from_coeffs(part.coefficients, ell)
            if is_square_times_linear(g, root) is None:
                raise ArithmeticError(
                    f"P_D mod {ell} lacks the (X - ({root})) R^2 shape (p={p})"
                )
        ok, _witness = mod_p_square_check(poly)
    if not ok:
        raise ArithmeticError(f"polynomial is not a perfect square mod {p}")


def extract_primes(value: Fraction, p: int, ell: int, sigma,
                   budget: FactorBudget | None = None):
    """Numerator primes q with (q | pl) != 1, q != p, q outside sigma.

    Returns (selected, candidates, factorization, skip) where ``skip`` is set
    when an unfactored cofactor leaves no usable prime; an empty selection
    from a complete factorization contradicts the square/negativity argument
    and raises.
    """
    if value >= 0:
        raise ValueError("extraction requires a negative value")
    den = value.denominator
    if math.isqrt(den) ** 2 != den:
        raise ArithmeticError(f"denominator {den} is not a perfect square")
    fac = factorize(value.numerator, budget)
    pl = p * ell
    candidates = tuple((q, kronecker(q, pl)) for q in fac.primes())
    selected = tuple(
        q for q, s in candidates if s != 1 and q != p and q not in sigma
    )
    if not selected:
        if not fac.complete:
            return (), candidates, fac, True
        raise ArithmeticError(
            "no admissible prime factor in a certified negative square value: "
            "internal consistency failure"
        )
    return selected, candidates, fac, False


def search(p: int, h, sigma=(), count: int = 1, ell_bound: int = 500,
           bits: int | None = None, budget: FactorBudget | None = None,
           effort_bound: int = VERIFY_EFFORT_BOUND,
           auto_avoid: bool = True) -> list[SearchCertificate]:
    """Certified supersingular primes for the point h on X_0*(p).

    Iterates find_ell/extract_primes, augmenting the avoided set with each
    found prime, until ``count`` distinct primes are collected or the l bound
    is exhausted (partial results are returned in that case).
    """
    if p not in SEARCH_P:
        raise ValueError(f"search supports p in {SEARCH_P}")
    h = Fraction(h)
    _check_not_supersingular(p, h)
    avoided = set(int(v) for v in sigma)
    if auto_avoid:
        # primes of bad reduction are invisible from h alone; always avoid 2
        # and the denominator primes of h
        avoided.add(2)
        if h.denominator > 1:
            avoided.update(factorize(h.denominator).primes())
    certificates: list[SearchCertificate] = []
    found: list[int] = []
    last_ell = 0
    while len(found) < count:
        current = tuple(sorted(avoided | set(found)))
        result = find_ell(p, h, current, ell_bound, bits=bits, start_after=last_ell)
        if result is None:
            break
        ell, D, poly, value, parts = result
        last_ell = ell
        _runtime_squareness(p, ell, poly, parts)
        selected, candidates, fac, skip = extract_primes(value, p, ell, current, budget)
        if skip:
            continue
        if p == 3:
            statuses = verify_certificate(
                _Selected(selected), lift_j_from_h_level3(h), effort_bound
            )
        else:
            statuses = {q: "unverified-no-invariant" for q in selected}
        cert = SearchCertificate(
            p=p,
            h=h,
            sigma=current,
            ell=ell,
            D=D,
            value=value,
            factorization=fac,
            candidates=candidates,
            selected=selected,
            verification=statuses,
        )
        cert.check()
        certificates.append(cert)
        found.extend(selected)
    return certificates


@dataclass(frozen=True)
class _Selected:
    selected: tuple[int, ...]


def _check_not_supersingular(p: int, h: Fraction) -> None:
    if h.denominator % p == 0:
        return  # h reduces to the cusp mod p, not a supersingular invariant
    residue = h.numerator * pow(h.denominator, -1, p) % p
    if residue in supersingular_jp_residues(p):
        raise SupersingularAtPError(
            f"h = {h} = {residue} mod {p} is a supersingular j_{p}-invariant: "
            "the theorem hypothesis excludes this point"
        )
