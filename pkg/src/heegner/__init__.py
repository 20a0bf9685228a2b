"""Heegner-point class polynomials on X_0*(p) and supersingular prime search.

Construct the class polynomials P_D(X) attached to Heegner points of
discriminant -pl and -4pl on the Atkin-Lehner quotients X_0*(p) for
p in {3, 5, 7, 11, 13, 19}, search for supersingular primes of the elliptic
curves parametrized by rational points, and verify the findings
independently through the Hasse-invariant criterion.
"""

from .classpoly import (
    ClassPolynomial,
    PrecisionExhaustedError,
    build_PD,
    build_Pl,
    evaluate,
    real_roots,
)
from .intmath import FactorBudget, Factorization, factorize, is_prime, kronecker
from .kernels import HAVE_COMPILED
from .modpoly import (
    FPoly,
    T2Data,
    brandt_table,
    epsilon_split,
    is_perfect_square,
    is_square_times_linear,
    mod_p_square_check,
    squarefree_decomposition,
    supersingular_jp_residues,
)
from .quadforms import (
    Discriminant,
    FormClassGroup,
    PellData,
    QuadForm,
    bounded_root_form,
    class_number,
    compose,
    enumerate_classes,
    fundamental_unit,
    heegner_rep,
    p_ideal_class,
    reduce_form,
)
from .hauptmodul import (
    CMPoint,
    classical_j,
    eta,
    j_p,
    j_p0,
    jp_arc_interval,
    theta,
    theta_star,
    torsion_to_tau,
)
from .sssearch import (
    RealJCaseError,
    SearchCertificate,
    SupersingularAtPError,
    ell_admissible,
    extract_primes,
    find_ell,
    search,
    sigma_condition,
)
from .ssverify import (
    QuadSurd,
    is_supersingular_j,
    lift_j_from_h_level3,
    norm_square_check,
    reduce_mod,
    verify_certificate,
)

__version__ = "0.1.0"
