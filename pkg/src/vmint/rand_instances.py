"""Seeded random instance generators for the equivalence suites and the
CLI `generate` subcommand.

All randomness flows through an explicit `random.Random`, so identical
seeds reproduce identical instances.  Weights are exact rationals with
small denominators inside [-10, 10].
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .core import GroundSet
from .matroid import (
    MatroidOracle,
    make_graphic,
    make_linear,
    make_partition,
    make_uniform,
)
from .valuated import (
    ConvexTable,
    LaminarSpec,
    MnatFunction,
    ValuationOracle,
    from_matroid_and_weights,
    laminar_convex_function,
)

MATROID_KINDS = ("uniform", "partition", "graphic", "linear")


def random_rational(rng: random.Random, low: int = -10, high: int = 10,
                    denominators: Sequence[int] = (1, 1, 2, 4)) -> Fraction:
    d = rng.choice(denominators)
    return Fraction(rng.randint(low * d, high * d), d)


def random_weights(rng: random.Random, size: int, low: int = -10,
                   high: int = 10) -> tuple[Fraction, ...]:
    return tuple(random_rational(rng, low, high) for _ in range(size))


def random_matroid(rng: random.Random, ground: GroundSet,
                   max_rank: int = 4,
                   kinds: Sequence[str] = MATROID_KINDS) -> MatroidOracle:
    kind = rng.choice(list(kinds))
    n = ground.size
    cap = min(max_rank, n)
    if kind == "uniform":
        return make_uniform(ground, rng.randint(0, cap))
    if kind == "partition":
        blocks = []
        remaining = list(ground.elements())
        rng.shuffle(remaining)
        while remaining:
            take = rng.randint(1, len(remaining))
            chosen, remaining = remaining[:take], remaining[take:]
            blocks.append((ground.subset(chosen), rng.randint(0, 2)))
        matroid = make_partition(ground, blocks)
        if matroid.rank > cap:
            return make_uniform(ground, rng.randint(0, cap))
        return matroid
    if kind == "graphic":
        vertices = rng.randint(2, min(cap + 1, 5))
        edges = [(rng.randrange(vertices), rng.randrange(vertices))
                 for _ in range(n)]
        edges = [(u, v if v != u else (u + 1) % vertices) for u, v in edges]
        return make_graphic(vertices, edges, ground.labels)
    # Linear matroid over the rationals with a short random matrix.
    height = rng.randint(1, cap)
    columns = [[Fraction(rng.randint(-2, 2)) for _ in range(height)]
               for _ in range(n)]
    return make_linear(ground, columns)


def random_modular_valuation(rng: random.Random, ground: GroundSet,
                             max_rank: int = 4,
                             kinds: Sequence[str] = MATROID_KINDS,
                             ) -> tuple[ValuationOracle, MatroidOracle,
                                        tuple[Fraction, ...]]:
    matroid = random_matroid(rng, ground, max_rank, kinds)
    weights = random_weights(rng, ground.size)
    return from_matroid_and_weights(matroid, weights), matroid, weights


def random_ground(rng: random.Random, min_n: int = 2, max_n: int = 8,
                  labelled: bool = True) -> GroundSet:
    n = rng.randint(min_n, max_n)
    labels = tuple(f"e{i}" for i in range(n)) if labelled else None
    return GroundSet(n, labels)


def random_convex_table(rng: random.Random, start: int, length: int,
                        slope_low: int = -4, slope_high: int = 4,
                        ) -> ConvexTable:
    """A convex table built from sorted increments."""
    increments = sorted(random_rational(rng, slope_low, slope_high)
                        for _ in range(length - 1))
    values = [random_rational(rng, -5, 5)]
    for inc in increments:
        values.append(values[-1] + inc)
    return ConvexTable(start, tuple(values))


def random_mconvex_function(rng: random.Random, dimension: int,
                            max_entry: int = 3,
                            rank: Optional[int] = None) -> MnatFunction:
    """A random M-convex function: a laminar (singleton) convex sum
    restricted to a random achievable coordinate-sum hyperplane."""
    from .core import INF, IntVector

    ground = GroundSet(dimension)
    members = []
    tables = []
    uppers = []
    for v in range(dimension):
        hi = rng.randint(1, max_entry)
        uppers.append(hi)
        members.append(ground.subset([v]))
        tables.append(random_convex_table(rng, 0, hi + 1))
    spec = LaminarSpec(ground, tuple(members), tuple(tables))
    fn = laminar_convex_function(spec)
    if rank is None:
        rank = rng.randint(0, sum(uppers))
    target = rank

    def value(x):
        if x.total() != target:
            return INF
        return fn.value(x)

    witness_entries = []
    remaining = target
    for hi in uppers:
        take = min(hi, remaining)
        witness_entries.append(take)
        remaining -= take
    witness = IntVector(tuple(witness_entries))
    return MnatFunction(dimension, value, fn.box_lower, fn.box_upper,
                        witness, f"random-mconvex(sum={target})")


def random_mconvex_pair(rng: random.Random, dimension: int,
                        max_entry: int = 3,
                        ) -> tuple[MnatFunction, MnatFunction]:
    """Two M-convex functions on a common ground set whose boxes keep the
    brute-force pair enumeration at desk scale."""
    while True:
        f1 = random_mconvex_function(rng, dimension, max_entry)
        f2 = random_mconvex_function(rng, dimension, max_entry)
        if f1.box_volume() * f2.box_volume() <= 10_000:
            return f1, f2
