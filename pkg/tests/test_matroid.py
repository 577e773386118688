"""Matroid constructions, duality, and the axiom checkers."""

import random
from fractions import Fraction

import pytest

from vmint.core import GroundSet, InvalidInputError
from vmint.matroid import (
    ExplicitBaseFamily,
    check_base_exchange,
    check_independence_axioms,
    dual_matroid,
    enumerate_bases,
    from_explicit_bases,
    make_graphic,
    make_linear,
    make_partition,
    make_uniform,
    min_weight_base,
)
from vmint.rand_instances import random_matroid


@pytest.fixture
def g3():
    return GroundSet(3, ("a", "b", "c"))


class TestConstructions:
    def test_uniform(self, g3):
        u = make_uniform(g3, 2)
        assert u.is_independent(g3.subset([0, 1]))
        assert not u.is_independent(g3.full())
        zero = make_uniform(g3, 0)
        assert enumerate_bases(zero) == [g3.empty()]
        with pytest.raises(InvalidInputError):
            make_uniform(g3, 4)

    def test_partition(self, g3):
        blocks = [(g3.subset([0, 1]), 1), (g3.subset([2]), 1)]
        m = make_partition(g3, blocks)
        assert m.is_independent(g3.subset([0, 2]))
        assert not m.is_independent(g3.subset([0, 1]))
        zero = make_partition(g3, [(g3.full(), 0)])
        assert enumerate_bases(zero) == [g3.empty()]
        with pytest.raises(InvalidInputError):
            make_partition(g3, [(g3.subset([0]), 1)])

    def test_graphic_triangle(self):
        tri = make_graphic(3, [(0, 1), (1, 2), (0, 2)], ("a", "b", "c"))
        for pair in tri.ground.subsets_of_size(2):
            assert tri.is_independent(pair)
        assert not tri.is_independent(tri.ground.full())
        assert len(enumerate_bases(tri)) == 3

    def test_graphic_forest_and_parallel(self):
        forest = make_graphic(4, [(0, 1), (1, 2), (2, 3)])
        assert forest.is_independent(forest.ground.full())
        parallel = make_graphic(2, [(0, 1), (0, 1)])
        assert not parallel.is_independent(parallel.ground.full())

    def test_linear(self, g3):
        m = make_linear(g3, [[1, 0], [0, 1], [1, 1]])
        assert m.rank == 2
        assert m.is_independent(g3.subset([0, 1]))
        assert len(enumerate_bases(m)) == 3
        dependent = make_linear(g3, [[1, 0], [2, 0], [0, 1]])
        assert not dependent.is_independent(g3.subset([0, 1]))

    def test_explicit(self, g3):
        family = ExplicitBaseFamily.of(
            g3, [g3.subset([0, 1]), g3.subset([1, 2])])
        m = from_explicit_bases(family)
        assert m.rank == 2
        assert m.is_independent(g3.subset([0]))
        assert not m.is_base(g3.subset([0, 2]))


class TestDual:
    def test_dual_uniform(self, g3):
        dual = dual_matroid(make_uniform(g3, 2))
        assert dual.rank == 1
        assert sorted(b.mask for b in enumerate_bases(dual)) == [1, 2, 4]

    def test_dual_involution_and_rank(self):
        rng = random.Random(5)
        for _ in range(15):
            n = rng.randint(1, 6)
            ground = GroundSet(n)
            m = random_matroid(rng, ground)
            dual = dual_matroid(m)
            assert m.rank + dual.rank == n
            back = dual_matroid(dual)
            assert sorted(b.mask for b in enumerate_bases(back)) == \
                sorted(b.mask for b in enumerate_bases(m))
            complements = sorted(b.complement().mask
                                 for b in enumerate_bases(m))
            assert sorted(b.mask for b in enumerate_bases(dual)) == complements

    def test_dual_free_is_rank_zero(self, g3):
        assert dual_matroid(make_uniform(g3, 3)).rank == 0


class TestCheckers:
    def test_base_exchange_uniform(self, g3):
        family = ExplicitBaseFamily.of(g3, enumerate_bases(make_uniform(g3, 2)))
        assert check_base_exchange(family)

    def test_base_exchange_fails(self):
        g4 = GroundSet(4, ("a", "b", "c", "d"))
        family = ExplicitBaseFamily.of(
            g4, [g4.subset([0, 1]), g4.subset([2, 3])])
        assert not check_base_exchange(family)

    def test_base_exchange_singleton(self, g3):
        assert check_base_exchange(
            ExplicitBaseFamily.of(g3, [g3.subset([0, 1])]))
        with pytest.raises(InvalidInputError):
            check_base_exchange(ExplicitBaseFamily.of(g3, []))

    def test_random_matroids_satisfy_axioms(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.randint(1, 8)
            m = random_matroid(rng, GroundSet(n))
            assert check_independence_axioms(m), m.name

    def test_bases_equicardinal_at_rank(self):
        rng = random.Random(11)
        for _ in range(10):
            n = rng.randint(1, 7)
            m = random_matroid(rng, GroundSet(n))
            for base in enumerate_bases(m):
                assert base.cardinality() == m.rank


class TestGreedyBase:
    def test_min_weight_base(self, g3):
        u = make_uniform(g3, 2)
        base = min_weight_base(u, (Fraction(5), Fraction(1), Fraction(3)))
        assert base == g3.subset([1, 2])

    def test_min_weight_base_matches_enumeration(self):
        rng = random.Random(23)
        for _ in range(20):
            n = rng.randint(1, 7)
            ground = GroundSet(n)
            m = random_matroid(rng, ground)
            weights = [Fraction(rng.randint(-8, 8), rng.choice([1, 2]))
                       for _ in range(n)]
            greedy = min_weight_base(m, weights)
            best = min(sum(weights[i] for i in b.members())
                       for b in enumerate_bases(m))
            assert sum(weights[i] for i in greedy.members()) == best
