import math
import random

import pytest

from torgrowth.lattices import (
    Direction,
    SearchBudgetExceeded,
    Subgroup,
    converging_k_sequence,
    coordinate_order,
    direction_of,
    gamma_sj,
    lawton_norm,
    min_norm,
    min_norm_sq,
    perp,
    quotient,
)


class TestQuotient:
    def test_two_by_two(self):
        A = quotient(Subgroup(2, ((2, 0), (0, 2))))
        assert A.invariant_factors == (2, 2)
        assert A.order == 4

    def test_skew(self):
        A = quotient(Subgroup(2, ((1, -1), (1, 1))))
        assert A.invariant_factors == (2,)
        assert A.order == 2

    def test_cyclic(self):
        assert quotient(Subgroup.cyclic(5)).invariant_factors == (5,)

    def test_rank_deficient_rejected(self):
        with pytest.raises(ValueError):
            quotient(Subgroup(2, ((1, 1),)))

    def test_projection_surjective_kernel_gamma(self):
        rng = random.Random(20)
        for _ in range(30):
            n = rng.choice([1, 2, 3])
            while True:
                gens = tuple(
                    tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(n)
                )
                try:
                    G = Subgroup(n, gens)
                    A = quotient(G)
                    break
                except ValueError:
                    continue
            seen = set()
            for _ in range(60):
                v = [rng.randint(-8, 8) for _ in range(n)]
                a = A.project(v)
                seen.add(a)
                assert (a == A.identity()) == G.contains(v)
            for a in A.elements():
                assert A.project(A.section(a)) == a
            assert len(A.elements()) == A.order

    def test_order_equals_det(self):
        rng = random.Random(21)
        for _ in range(50):
            n = rng.choice([1, 2, 3])
            gens = tuple(tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(n))
            from torgrowth.intlinalg import bareiss_det

            d = abs(bareiss_det([[g[i] for g in gens] for i in range(n)]))
            G = Subgroup(n, gens)
            if d == 0:
                with pytest.raises(ValueError):
                    quotient(G)
            else:
                assert quotient(G).order == d


class TestMinNorm:
    def test_rectangular(self):
        assert min_norm(Subgroup(2, ((5, 0), (0, 7)))) == 5

    def test_rank_one(self):
        assert min_norm(Subgroup(2, ((3, 4),))) == 5

    def test_skew_lattice(self):
        assert min_norm_sq(Subgroup(2, ((2, 1), (1, 2)))) == 2

    def test_bounded_by_generators(self):
        rng = random.Random(22)
        for _ in range(80):
            n = rng.choice([1, 2, 3])
            gens = tuple(tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(rng.randint(1, 3)))
            if all(not any(g) for g in gens):
                continue
            v = min_norm_sq(Subgroup(n, gens))
            assert v <= min(sum(x * x for x in g) for g in gens if any(g))

    def test_zero_lattice(self):
        with pytest.raises(ValueError):
            min_norm(Subgroup(2, ((0, 0),)))

    def test_dimension_guard(self):
        with pytest.raises(ValueError):
            min_norm(Subgroup(5, (tuple([1, 0, 0, 0, 0]),)))


class TestCoordinateOrder:
    def test_rectangular(self):
        A = quotient(Subgroup(2, ((5, 0), (0, 7))))
        assert coordinate_order(A, 0) == 5
        assert coordinate_order(A, 1) == 7

    def test_skew(self):
        A = quotient(Subgroup(2, ((1, -1), (1, 1))))
        assert coordinate_order(A, 0) == 2

    def test_cyclic(self):
        assert coordinate_order(quotient(Subgroup.cyclic(9)), 0) == 9

    def test_bad_index(self):
        with pytest.raises(ValueError):
            coordinate_order(quotient(Subgroup.cyclic(3)), 1)


class TestPerp:
    def test_examples(self):
        assert perp((1, 1)).contains((1, -1))
        assert perp((2, 3)).contains((3, -2))
        p = perp((1, 1, 1))
        assert p.rank() == 2 and p.contains((1, -1, 0)) and p.contains((0, 1, -1))

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            perp((0, 0))

    def test_saturated(self):
        # Z^n / perp(k) is torsion-free of rank one: the quotient by
        # perp + (k itself scaled) realizes every index exactly
        rng = random.Random(23)
        for _ in range(60):
            n = rng.choice([2, 3])
            k = tuple(rng.randint(-4, 4) for _ in range(n))
            if not any(k):
                continue
            p = perp(k)
            assert p.rank() == n - 1
            g = math.gcd(*k) if n > 1 else abs(k[0])
            kk = tuple(x // g for x in k)
            full = Subgroup(n, p.gens + (kk,))
            assert quotient(full).order == sum(x * x for x in kk)


class TestGammaSJ:
    def test_index_examples(self):
        assert quotient(gamma_sj((1, 1), 3)).order == 6
        assert quotient(gamma_sj((1, 0), 5)).order == 5
        assert quotient(gamma_sj((2, 3), 6)).order == 78

    def test_cyclic_quotient(self):
        rng = random.Random(24)
        for _ in range(40):
            n = rng.choice([2, 3])
            k = tuple(rng.randint(1, 5) for _ in range(n))
            if math.gcd(*k) != 1:
                continue
            j = rng.randint(1, 5)
            A = quotient(gamma_sj(k, j))
            norm2 = sum(x * x for x in k)
            assert A.order == j * norm2
            assert A.invariant_factors == (j * norm2,)
            # m -> m·k mod j|k|^2 is the isomorphism: generator orders agree
            e = [0] * n
            e[0] = 1
            expect = (j * norm2) // math.gcd(k[0], j * norm2)
            assert A.order_of(A.project(e)) == expect

    def test_noncoprime_rejected(self):
        with pytest.raises(ValueError):
            gamma_sj((2, 4), 3)


class TestConvergingSequence:
    def test_univariate(self):
        assert converging_k_sequence(Direction((1.0,)), 7) == (1,)

    def test_postconditions(self):
        kappa = Direction.from_vector((1, 1))
        for s in (1, 2, 4):
            k = converging_k_sequence(kappa, s)
            assert all(x > 0 for x in k)
            assert math.gcd(*k) == 1
            assert lawton_norm(k) > s
            inv = Direction.from_vector([1.0 / x for x in k])
            assert inv.distance(kappa) < 1.0 / s

    def test_boundary_direction(self):
        # a direction with a zero coordinate drops the closeness condition
        k = converging_k_sequence(Direction((1.0, 0.0)), 2)
        assert lawton_norm(k) > 2

    def test_three_vars(self):
        kappa = Direction.from_vector((2, 1, 2))
        k = converging_k_sequence(kappa, 2)
        assert len(k) == 3 and math.gcd(*k) == 1
        assert lawton_norm(k) > 2

    def test_budget(self):
        with pytest.raises(SearchBudgetExceeded):
            converging_k_sequence(Direction.from_vector((1, 1)), 50, max_norm=3)


class TestDirection:
    def test_validation(self):
        with pytest.raises(ValueError):
            Direction((0.5, 0.5))
        with pytest.raises(ValueError):
            Direction((-1.0, 0.0))

    def test_direction_of_quotient(self):
        A = quotient(Subgroup(2, ((3, 0), (0, 4))))
        d = direction_of(A)
        assert d.coords == pytest.approx((0.6, 0.8))


def test_subgroup_json_roundtrip():
    g = Subgroup(2, ((1, -1), (1, 1)))
    assert Subgroup.from_json(g.to_json()) == g
