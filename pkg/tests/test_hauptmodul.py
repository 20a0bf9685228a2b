import math
import random

import mpmath
import pytest

from heegner.hauptmodul import (
    MIN_IM,
    arc_point,
    classical_j,
    eta,
    j_p,
    j_p0,
    jp_arc_interval,
    reduce_tau,
    tau_from_form,
    theta,
    theta_star,
    torsion_to_tau,
)
from heegner.quadforms import QuadForm, fundamental_unit

BITS = 256


def err(x, y):
    return float(abs(mpmath.mpc(x) - mpmath.mpc(y)))


def tol(bits, slack=16):
    return 2.0 ** (-bits + slack)


class TestEta:
    def test_eta_at_i_closed_form(self):
        with mpmath.workprec(BITS + 64):
            reference = mpmath.gamma(mpmath.mpf(1) / 4) / (2 * mpmath.pi ** mpmath.mpf(0.75))
            assert err(eta(1j, BITS), reference) < tol(BITS)

    def test_translation_multiplier(self):
        with mpmath.workprec(BITS + 64):
            taus = [mpmath.mpc("0.3", "1.0"), mpmath.mpc("-0.41", "0.27")]
            for tau in taus:
                lhs = eta(tau + 1, BITS)
                rhs = mpmath.expjpi(mpmath.mpf(1) / 12) * eta(tau, BITS)
                assert err(lhs, rhs) < tol(BITS)

    def test_two_precision_consistency(self):
        with mpmath.workprec(4 * BITS):
            coarse = eta(2j, BITS) / eta(1j, BITS)
            fine = eta(2j, 2 * BITS) / eta(1j, 2 * BITS)
            assert err(coarse, fine) < tol(BITS, 8)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(ValueError):
            eta(mpmath.mpc(0, -1), BITS)

    def test_rejects_near_real_axis(self):
        with pytest.raises(ValueError):
            eta(mpmath.mpc(0, MIN_IM / 2), BITS)


def brute_theta(a, b, c, tau, bits, radius=200, cutoff=4000):
    """Direct double sum, grouped by exponent; independent oracle."""
    with mpmath.workprec(bits + 64):
        q = mpmath.expjpi(2 * mpmath.mpc(tau))
        counts = {}
        for x in range(-radius, radius + 1):
            for y in range(-radius, radius + 1):
                n = a * x * x + b * x * y + c * y * y
                if n <= cutoff:
                    counts[n] = counts.get(n, 0) + 1
        return sum(r * q**n for n, r in sorted(counts.items()))


class TestTheta:
    def test_limit_at_high_points(self):
        v = theta(1, 1, 3, mpmath.mpc(0, 40), 64)
        assert err(v, 1) < 1e-60

    def test_against_brute_double_sum(self):
        v = theta(1, 1, 3, 1j, 128)
        ref = brute_theta(1, 1, 3, 1j, 128)
        assert err(v, ref) < tol(128)

    def test_symmetry_doubling(self):
        # computed sum equals 1 + 2 * (half-lattice sum)
        with mpmath.workprec(192):
            tau = mpmath.mpc("0.21", "0.9")
            q = mpmath.expjpi(2 * tau)
            half = mpmath.mpc(0)
            for y in range(0, 60):
                for x in range(-60, 60):
                    if y == 0 and x <= 0:
                        continue
                    half += q ** (x * x + x * y + 3 * y * y)
            assert err(theta(1, 1, 3, tau, 128), 1 + 2 * half) < tol(128)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            theta(1, 5, 1, 1j, 64)


def brute_theta_star(tau, bits, radius=120):
    with mpmath.workprec(bits + 64):
        u = mpmath.expjpi(mpmath.mpc(tau))
        total = mpmath.mpc(0)
        for m in range(-radius, radius + 1):
            for n in range(-radius, radius + 1):
                if (m + n) % 2 == 0:
                    continue
                k = m * m + m * n + 5 * n * n
                if k <= 3000:
                    total += (-1) ** m * u**k
        return total


class TestThetaStar:
    def test_against_brute_sum(self):
        v = theta_star(2j, 128)
        assert err(v, brute_theta_star(2j, 128)) < tol(128)

    def test_even_parity_terms_vanish(self):
        # structural: the series in u = q^(1/2) has only odd exponents, so
        # u -> -u flips the overall sign: theta*(tau + 1) = -theta*(tau)
        with mpmath.workprec(192):
            tau = mpmath.mpc("0.17", "0.81")
            assert err(theta_star(tau + 1, 128), -theta_star(tau, 128)) < tol(128)

    def test_j19_real_on_imaginary_axis(self):
        for t in ("0.5", "1.0", "2.0"):
            v = j_p(mpmath.mpc(0, mpmath.mpf(t)), 19, BITS, reduce=False)
            assert abs(float(mpmath.im(v))) < tol(BITS)


class TestJp0:
    @pytest.mark.parametrize("p,const", [(3, 729), (5, 125), (7, 49), (13, 13)])
    def test_fricke_constant(self, p, const):
        with mpmath.workprec(BITS + 64):
            tau = mpmath.mpc("0.2312", "0.8781")
            prod = j_p0(tau, p, BITS, reduce=False) * j_p0(-1 / (p * tau), p, BITS, reduce=False)
            assert err(prod, const) < tol(BITS, 24)

    def test_j50_at_i(self):
        # 125 * (2 + sqrt(5)); the other normalization printed elsewhere is
        # inconsistent with the j_5 column and is not used
        with mpmath.workprec(BITS + 64):
            expected = 125 * (2 + mpmath.sqrt(5))
            assert err(j_p0(1j, 5, BITS), expected) < tol(BITS)

    def test_j130_at_torsion_point(self):
        # kernel <(2+3i)/13> = <(i+5)/13>
        z = torsion_to_tau(1j, 5, 13, BITS)
        v = j_p0(z, 13, BITS)
        assert min(err(v, mpmath.mpc(-3, 2)), err(v, mpmath.mpc(-3, -2))) < tol(BITS)

    def test_rejects_theta_levels(self):
        with pytest.raises(ValueError):
            j_p0(1j, 11, BITS)


class TestJp:
    def test_j5_torsion_table(self):
        with mpmath.workprec(BITS + 64):
            s5 = mpmath.sqrt(5)
            table = {
                None: 248 + 126 * s5,
                0: 248 + 126 * s5,
                1: 248 - 126 * s5,
                2: -22,
                3: -22,
                4: 248 - 126 * s5,
            }
            for k, expected in table.items():
                z = torsion_to_tau(1j, k, 5)
                assert err(j_p(z, 5, BITS), expected) < tol(BITS), k

    def test_j13_anchor(self):
        z = torsion_to_tau(1j, 5, 13, BITS)
        assert err(j_p(z, 13, BITS), -6) < tol(BITS)
        z2 = torsion_to_tau(1j, 8, 13, BITS)  # <(3+2i)/13>
        assert err(j_p(z2, 13, BITS), -6) < tol(BITS)

    def test_j11_heegner_values_solve_known_quadratic(self):
        # the two Heegner values of D = -220 are the roots of X^2 - 77X + 121
        va = j_p(tau_from_form(QuadForm(11, 0, 5), BITS), 11, BITS)
        vb = j_p(tau_from_form(QuadForm(77, 44, 7), BITS), 11, BITS)
        assert err(va + vb, 77) < tol(BITS, 40)
        assert err(va * vb, 121) < tol(BITS, 40)

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 19, 23])
    def test_atkin_lehner_invariance(self, p):
        # sample near the circle |tau| = 1/sqrt(p) so both tau and -1/(p tau)
        # stay above the series evaluation cutoff
        with mpmath.workprec(BITS + 64):
            rng = random.Random(p)
            for _ in range(3):
                radius = rng.uniform(0.9, 1.1) / math.sqrt(p)
                angle = rng.uniform(1.2, 1.9)
                tau = radius * mpmath.mpc(math.cos(angle), math.sin(angle))
                a = j_p(tau, p, BITS, reduce=False)
                b = j_p(-1 / (p * tau), p, BITS, reduce=False)
                assert err(a, b) < tol(BITS) * max(1.0, float(abs(a)))

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 19, 23])
    def test_real_on_arcs(self, p):
        with mpmath.workprec(BITS + 64):
            points = [mpmath.mpc(0, "0.71"), mpmath.mpc("-0.5", "0.83")]
            if p % 4 == 3 and p != 23:
                c, d = fundamental_unit(p)
                points.append(arc_point(p, mpmath.mpf(-d) / (2 * c), BITS))
            for tau in points:
                v = j_p(tau, p, BITS)
                assert abs(float(mpmath.im(v))) < tol(BITS, 32) * max(1.0, float(abs(v)))

    @pytest.mark.parametrize("p", [11, 19])
    def test_monotone_increasing_clockwise_on_arc(self, p):
        c, d = fundamental_unit(p)
        values = []
        for i in range(50):
            # clockwise: from the left endpoint (Re = -d/c) towards Re = 0
            re = -mpmath.mpf(d) / c * (1 - (i + 1) / 51)
            values.append(float(mpmath.re(j_p(arc_point(p, re, 128), p, 128))))
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_precision_doubling(self):
        for p in (5, 11, 19):
            tau = mpmath.mpc("0.123", "0.631")
            coarse = j_p(tau, p, 128)
            fine = j_p(tau, p, 256)
            assert err(coarse, fine) < tol(128, 16) * max(1.0, float(abs(fine)))


class TestReduceTau:
    def test_preserves_jp(self):
        with mpmath.workprec(BITS + 64):
            rng = random.Random(9)
            for p in (5, 11, 19):
                tau = mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.3, 0.8))
                reduced, _parity = reduce_tau(tau, p, BITS)
                assert mpmath.im(reduced) >= mpmath.im(tau) - 1e-50
                a = j_p(tau, p, BITS, reduce=False)
                b = j_p(reduced, p, BITS, reduce=False)
                assert err(a, b) < tol(BITS, 24) * max(1.0, float(abs(a)))

    def test_climbs_from_deep_points(self):
        # left endpoint of the arc S for p = 19 starts at Im = 1/(c sqrt(p))
        c, d = fundamental_unit(19)
        tau = arc_point(19, mpmath.mpf(-d) / c, BITS)
        assert float(mpmath.im(tau)) < 0.002
        reduced, _ = reduce_tau(tau, 19, BITS)
        assert float(mpmath.im(reduced)) > 0.03


class TestClassicalJ:
    def test_special_values(self):
        assert err(classical_j(1j, BITS), 1728) < tol(BITS, 32)
        with mpmath.workprec(BITS + 64):
            rho = mpmath.mpc(-1, mpmath.sqrt(3)) / 2
            # triple zero at rho: admit cube-root loss of the working accuracy
            assert abs(classical_j(rho, BITS)) < tol(BITS // 3)

    def test_level3_identity(self):
        # j - 1728 = (j30^2 - 486 j30 - 19683)^2 / j30^3 at random points
        rng = random.Random(31)
        with mpmath.workprec(BITS + 64):
            for _ in range(5):
                tau = mpmath.mpc(rng.uniform(-0.45, 0.45), rng.uniform(0.6, 1.3))
                j = classical_j(tau, BITS)
                t = j_p0(tau, 3, BITS, reduce=False)
                rhs = (t**2 - 486 * t - 19683) ** 2 / t**3
                assert err(j - 1728, rhs) < tol(BITS, 24) * max(1.0, float(abs(j)))


class TestTorsionToTau:
    def test_identity_kernel(self):
        assert torsion_to_tau(1j, None, 5) == mpmath.mpc(0, 1)

    def test_inversion_kernel(self):
        z = torsion_to_tau(1j, 2, 5)
        assert err(z, -1 / mpmath.mpc(2, 1)) < 1e-15

    def test_range_check(self):
        with pytest.raises(ValueError):
            torsion_to_tau(1j, 5, 5)
        with pytest.raises(ValueError):
            torsion_to_tau(mpmath.mpc(0, -1), None, 5)


def test_arc_interval_contains_bounded_roots():
    # the worked search at h = 21/2 needs its h interior to j_11(S)
    lo, hi = jp_arc_interval(11)
    assert lo < 1.605 < hi and lo < 10.5 < hi
    assert not (lo < 80 < hi)


def test_arc_interval_regression_values():
    # the endpoints are values at elliptic points; the small-level ones are
    # exact integers
    cases = {3: (-54.0, 54.0), 7: (-14.0, 14.0)}
    for p, (lo, hi) in cases.items():
        got_lo, got_hi = jp_arc_interval(p)
        assert abs(got_lo - lo) < 1e-12 and abs(got_hi - hi) < 1e-12, p
    lo11, hi11 = jp_arc_interval(11)
    assert abs(lo11) < 1e-12 and abs(hi11 - 16.8275008141) < 1e-8
    lo19, hi19 = jp_arc_interval(19)
    assert abs(lo19) < 1e-12 and abs(hi19 - 4 * 2.6672450358) < 1e-8
