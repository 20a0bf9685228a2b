import pytest

from heegner.classpoly import build_PD
from heegner.intmath import is_prime
from heegner.quadforms import Discriminant
from heegner.sssearch import ell_admissible


def admissible_pairs(bound=300):
    """Every admissible (p, l) with l < bound across the six levels."""
    pairs = []
    for p in (3, 5, 7, 11, 13, 19):
        for ell in range(3, bound):
            if is_prime(ell) and ell != p and ell_admissible(p, ell):
                pairs.append((p, ell))
    return pairs


@pytest.fixture(scope="session")
def sweep_polys():
    """Both class polynomials for every admissible (p, l), l < 300."""
    out = {}
    for p, ell in admissible_pairs():
        out[p, ell] = {
            "-pl": build_PD(Discriminant(p, ell, "-pl")),
            "-4pl": build_PD(Discriminant(p, ell, "-4pl")),
        }
    return out
