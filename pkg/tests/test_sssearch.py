from fractions import Fraction

import pytest

from heegner.intmath import is_prime, kronecker
from heegner.sssearch import (
    RealJCaseError,
    SupersingularAtPError,
    ell_admissible,
    extract_primes,
    find_ell,
    search,
    sigma_condition,
)

H11 = Fraction(21, 2)


class TestAdmissibility:
    def test_known_choices(self):
        assert ell_admissible(11, 5)
        assert ell_admissible(11, 37)
        assert ell_admissible(5, 3)

    def test_rejected(self):
        assert not ell_admissible(11, 13)  # 13 = 2 mod 11 is a nonresidue
        assert not ell_admissible(11, 11)
        assert not ell_admissible(5, 4)

    def test_residue_lists_match_splitting_rule(self):
        # ell_admissible raises internally if the printed lists for p = 5, 13
        # ever disagree with the congruence + splitting rule
        for p in (5, 13):
            for ell in range(3, 300):
                if is_prime(ell) and ell != p:
                    ell_admissible(p, ell)

    def test_p5_list_is_mod_20(self):
        admissible = [ell for ell in range(3, 300)
                      if is_prime(ell) and ell_admissible(5, ell)]
        assert all(ell % 20 in (3, 7) for ell in admissible)
        assert admissible[:4] == [3, 7, 23, 43]

    def test_p13_list_is_mod_52(self):
        admissible = [ell for ell in range(3, 300)
                      if is_prime(ell) and ell_admissible(13, ell)]
        assert all(ell % 52 in (7, 11, 15, 19, 31, 47) for ell in admissible)


class TestSigmaCondition:
    def test_empty(self):
        assert sigma_condition(5, 11, ())

    def test_2309_blocks_5_allows_37(self):
        assert not sigma_condition(5, 11, (2309,))
        assert sigma_condition(37, 11, (2309,))
        assert kronecker(2309, 407) == 1

    def test_p_itself_exempt(self):
        assert sigma_condition(5, 11, (11,))


class TestFindEll:
    def test_first_leg_at_h_21_over_2(self):
        ell, D, poly, value, _ = find_ell(11, H11, (2,), 500)
        assert (ell, D) == (5, -220)
        assert value == Fraction(-2309, 4)

    def test_second_leg_avoiding_2309(self):
        ell, D, poly, value, _ = find_ell(11, H11, (2, 2309), 500)
        assert (ell, D) == (37, -1628)
        assert value == Fraction(-(7**2) * 151 * 452233314041, 256)

    def test_negativity_skip(self):
        # h = 13/10 lies left of the bounded root 1.6049 of P_-220, so l = 5
        # fails the sign condition and the search moves on
        ell, _, _, value, _ = find_ell(11, Fraction(13, 10), (2,), 200)
        assert ell == 53 and value < 0

    def test_bound_exhaustion(self):
        assert find_ell(11, H11, (2,), 3) is None

    def test_real_j_case_rejected(self):
        # 80 is right of every root of P_-220 and outside j_11(S)
        with pytest.raises(RealJCaseError):
            find_ell(11, Fraction(80), (), 100)


class TestExtractPrimes:
    def test_first_value(self):
        selected, candidates, fac, skip = extract_primes(
            Fraction(-2309, 4), 11, 5, (2,)
        )
        assert selected == (2309,) and not skip
        assert dict(candidates)[2309] == -1

    def test_second_value(self):
        value = Fraction(-(7**2) * 151 * 452233314041, 256)
        selected, candidates, fac, skip = extract_primes(value, 11, 37, (2, 2309))
        assert set(selected) == {7, 151}
        assert dict(candidates)[452233314041] == 1  # residue, not selected

    def test_degenerate_unit_numerator(self):
        with pytest.raises(ArithmeticError):
            extract_primes(Fraction(-1, 1), 11, 5, ())

    def test_rejects_positive(self):
        with pytest.raises(ValueError):
            extract_primes(Fraction(5, 4), 11, 5, ())


class TestSearch:
    def test_end_to_end_at_h_21_over_2(self):
        certs = search(11, H11, count=3)
        assert [c.ell for c in certs] == [5, 37]
        assert certs[0].selected == (2309,)
        assert certs[0].value == Fraction(-2309, 4)
        assert set(certs[1].selected) == {7, 151}
        assert certs[1].value == Fraction(-(7**2) * 151 * 452233314041, 256)
        for c in certs:
            c.check()

    def test_supersingular_at_p_guard(self):
        with pytest.raises(SupersingularAtPError):
            search(11, Fraction(10), count=1)  # 10 is supersingular mod 11

    def test_h_21_over_2_is_not_supersingular_mod_11(self):
        # 21/2 = 5 mod 11... which IS supersingular-adjacent: check the guard
        # distinguishes: j_11 supersingular values mod 11 are {0, 10}
        assert H11.numerator * pow(2, -1, 11) % 11 == 5
        certs = search(11, H11, count=1)
        assert certs

    def test_sigma_augmentation_never_repeats(self):
        first = search(11, H11, count=1)[0]
        again = search(11, H11, sigma=first.selected, count=1)[0]
        assert not set(first.selected) & set(again.selected)

    def test_determinism(self):
        a = [c.to_json() for c in search(11, H11, count=3)]
        b = [c.to_json() for c in search(11, H11, count=3)]
        assert a == b

    def test_bound_exhaustion_partial(self):
        certs = search(11, H11, count=5, ell_bound=40)
        found = sum(len(c.selected) for c in certs)
        assert 0 < found < 5

    def test_level3_with_verification(self):
        certs = search(3, Fraction(-52), count=1)
        assert certs[0].selected == (29,)
        assert certs[0].verification == {29: "supersingular"}

    def test_level5(self):
        certs = search(5, Fraction(1), count=1)
        assert certs[0].ell == 3
        assert certs[0].D == (-15, -60)
        assert certs[0].selected == (13,)
        assert certs[0].verification[13] == "unverified-no-invariant"
        certs[0].check()

    def test_level13(self):
        certs = search(13, Fraction(3), count=1)
        assert certs[0].ell == 11
        assert set(certs[0].selected) == {5, 37, 43, 89, 421}
        certs[0].check()

    def test_rejects_unsupported_p(self):
        with pytest.raises(ValueError):
            search(23, Fraction(1), count=1)

    def test_certificate_json_schema(self):
        import json

        cert = search(11, H11, count=1)[0]
        data = json.loads(cert.to_json())
        assert set(data) >= {
            "p", "h", "sigma", "ell", "D", "value", "factors", "selected",
            "kronecker", "verified",
        }
        assert data["value"] == {"num": "-2309", "den": "4"}
        assert data["selected"] == ["2309"]
        assert data["h"] == "21/2"


def test_cusp_denominator_h_allowed():
    # h with denominator divisible by p reduces to the cusp mod p and cannot
    # be supersingular there; the guard must not reject it
    certs = search(11, Fraction(21, 11), count=1, ell_bound=120)
    for c in certs:
        c.check()


def test_runtime_squareness_is_wired(monkeypatch):
    # the mod-l square witness runs on the live search path, not only in
    # tests: breaking it must abort the search
    import heegner.sssearch as mod

    monkeypatch.setattr(mod, "is_perfect_square", lambda f: None)
    with pytest.raises(ArithmeticError):
        search(11, H11, count=1)


def test_level7_and_level19_search():
    certs7 = search(7, Fraction(2), count=1, ell_bound=300)
    assert certs7[0].ell == 113
    assert 1531 in certs7[0].selected
    certs19 = search(19, Fraction(2), count=1, ell_bound=300)
    assert certs19[0].ell == 61
    assert set(certs19[0].selected) == {7, 13, 103, 317}
    for c in certs7 + certs19:
        c.check()


def test_level3_fully_verified_chain():
    # two certificates whose primes all verify through the Hasse criterion
    certs = search(3, Fraction(20), count=4, ell_bound=60)
    assert [(c.ell, c.selected) for c in certs] == [(13, (17,)), (37, (53, 71, 719))]
    for c in certs:
        assert all(s == "supersingular" for s in c.verification.values())


def test_level3_large_verified_prime():
    # the found prime sits near the verification bound and still verifies
    certs = search(3, Fraction(-40), count=1)
    assert certs[0].selected == (6175217,)
    assert certs[0].verification == {6175217: "supersingular"}


def test_unfactored_cofactor_skips_to_next_ell(monkeypatch):
    import heegner.sssearch as mod
    from heegner.intmath import Factorization, factorize as real_factorize

    def flaky(n, budget=None):
        if abs(n) == 2309:  # pretend the l = 5 numerator resists factoring
            return Factorization(sign=-1 if n < 0 else 1, factors=(), cofactor=abs(n))
        return real_factorize(n, budget)

    monkeypatch.setattr(mod, "factorize", flaky)
    certs = search(11, H11, count=1)
    # the l = 5 harvest was skipped, the search moved on to l = 37
    assert certs[0].ell == 37
