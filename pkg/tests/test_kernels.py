import random

import pytest

from heegner.kernels import HAVE_COMPILED, implementations

from oracles import hasse_coefficient_by_power, point_count

IMPLS = list(implementations().items())


@pytest.fixture(params=[name for name, _ in IMPLS])
def impl(request):
    return dict(IMPLS)[request.param]


class TestHasseFq:
    def test_against_literal_power(self, impl):
        rng = random.Random(2)
        for q in (5, 7, 11, 37, 101, 151):
            for _ in range(12):
                a, b = rng.randrange(q), rng.randrange(q)
                if a == 0 and b == 0:
                    continue
                expected = hasse_coefficient_by_power(q, a, b) != 0
                assert impl.hasse_nonzero_fq(q, a, b) == expected, (q, a, b)

    def test_special_curves(self, impl):
        # j = 1728 (b = 0): supersingular iff q = 3 mod 4
        # j = 0 (a = 0): supersingular iff q = 2 mod 3
        for q in (5, 7, 11, 13, 17, 19, 23, 2309):
            assert (not impl.hasse_nonzero_fq(q, 1, 0)) == (q % 4 == 3)
            assert (not impl.hasse_nonzero_fq(q, 0, 1)) == (q % 3 == 2)

    def test_singular_rejected(self, impl):
        with pytest.raises(ValueError):
            impl.hasse_nonzero_fq(7, 0, 0)


class TestHasseFq2:
    def test_rational_inputs_match_fq(self, impl):
        rng = random.Random(3)
        for q in (13, 37, 151):
            m2 = next(m for m in range(2, q) if pow(m, (q - 1) // 2, q) == q - 1)
            for _ in range(10):
                a, b = rng.randrange(q), rng.randrange(q)
                if a == 0 and b == 0:
                    continue
                assert impl.hasse_nonzero_fq2(q, m2, a, 0, b, 0) == impl.hasse_nonzero_fq(
                    q, a, b
                )


class TestPointCount:
    def test_against_oracle(self, impl):
        rng = random.Random(5)
        for q in (5, 7, 11, 13, 37):
            for _ in range(8):
                a, b = rng.randrange(q), rng.randrange(q)
                assert impl.count_points_fq(q, a, b) == point_count(q, a, b)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernels unavailable")
class TestImplementationsAgree:
    def test_large_q_agreement(self):
        # exercise 64-bit intermediates near the verification effort bound
        impls = implementations()
        q = 1000003
        results = {name: mod.hasse_nonzero_fq(q, 3, 2) for name, mod in impls.items()}
        assert len(set(results.values())) == 1
        m2 = next(m for m in range(2, q) if pow(m, (q - 1) // 2, q) == q - 1)
        results2 = {
            name: mod.hasse_nonzero_fq2(q, m2, 3, 1, 2, 1) for name, mod in impls.items()
        }
        assert len(set(results2.values())) == 1

    def test_fq_random(self):
        impls = implementations()
        rng = random.Random(7)
        for q in (101, 2309, 10007):
            for _ in range(25):
                a, b = rng.randrange(q), rng.randrange(q)
                if a == 0 and b == 0:
                    continue
                results = {
                    name: mod.hasse_nonzero_fq(q, a, b) for name, mod in impls.items()
                }
                assert len(set(results.values())) == 1, (q, a, b, results)

    def test_census_small(self):
        impls = implementations()
        for q in (5, 13, 31, 61):
            counts = {name: mod.supersingular_census_fq2(q) for name, mod in impls.items()}
            assert len(set(counts.values())) == 1, (q, counts)
