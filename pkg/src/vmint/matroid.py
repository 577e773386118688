"""Independence-oracle matroids, standard constructions, and axiom checkers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .core import (
    GroundSet,
    InvalidInputError,
    ResourceLimitError,
    Subset,
    parse_rational,
)

DEFAULT_ENUMERATION_LIMIT = 1 << 22


class MatroidOracle:
    """A matroid given by its ground set and an independence query.

    The rank is computed once by greedy augmentation from the empty set
    and cached; every downstream algorithm needs it repeatedly.
    """

    def __init__(self, ground: GroundSet, independent: Callable[[Subset], bool],
                 name: str = "matroid"):
        self.ground = ground
        self._independent = independent
        self.name = name
        if not independent(ground.empty()):
            raise InvalidInputError("the empty set must be independent")
        self._rank = len(self._greedy_extend(ground.empty(), ground.full()))

    def is_independent(self, subset: Subset) -> bool:
        if subset.ground != self.ground:
            raise InvalidInputError("subset is on a different ground set")
        return self._independent(subset)

    @property
    def rank(self) -> int:
        return self._rank

    def rank_of(self, subset: Subset) -> int:
        """Rank of a subset: size of a maximal independent subset of it."""
        return len(self._greedy_extend(self.ground.empty(), subset))

    def is_base(self, subset: Subset) -> bool:
        return subset.cardinality() == self._rank and self.is_independent(subset)

    def some_base(self) -> Subset:
        return self._greedy_extend(self.ground.empty(), self.ground.full())

    def _greedy_extend(self, start: Subset, within: Subset) -> Subset:
        current = start
        for i in within.members():
            if not current.contains(i):
                grown = current.add(i)
                if self._independent(grown):
                    current = grown
        return current

    def __repr__(self) -> str:
        return f"MatroidOracle({self.name}, |V|={self.ground.size}, rank={self._rank})"


@dataclass(frozen=True)
class ExplicitBaseFamily:
    """An explicit list of candidate bases over a common ground set."""

    ground: GroundSet
    bases: tuple[Subset, ...]

    @staticmethod
    def of(ground: GroundSet, bases: Iterable[Subset]) -> "ExplicitBaseFamily":
        return ExplicitBaseFamily(ground, tuple(bases))


def make_uniform(ground: GroundSet, r: int) -> MatroidOracle:
    """The uniform matroid U(r, |V|): independent iff cardinality <= r."""
    if not 0 <= r <= ground.size:
        raise InvalidInputError(f"uniform rank {r} out of range 0..{ground.size}")
    return MatroidOracle(ground, lambda x: x.cardinality() <= r, f"uniform(r={r})")


def make_free(ground: GroundSet) -> MatroidOracle:
    return make_uniform(ground, ground.size)


def make_partition(ground: GroundSet,
                   blocks: Sequence[tuple[Subset, int]]) -> MatroidOracle:
    """Partition matroid: at most `capacity` members per block.

    The blocks must partition the ground set.
    """
    seen = 0
    for block, capacity in blocks:
        if block.ground != ground:
            raise InvalidInputError("block on a different ground set")
        if capacity < 0:
            raise InvalidInputError("block capacity must be nonnegative")
        if seen & block.mask:
            raise InvalidInputError("blocks overlap")
        seen |= block.mask
    if seen != ground.full().mask:
        raise InvalidInputError("blocks do not cover the ground set")
    masks_caps = tuple((block.mask, cap) for block, cap in blocks)

    def independent(x: Subset) -> bool:
        return all(bin(x.mask & m).count("1") <= cap for m, cap in masks_caps)

    return MatroidOracle(ground, independent, "partition")


def make_graphic(vertices: int, edges: Sequence[tuple[int, int]],
                 labels: Optional[Sequence[str]] = None) -> MatroidOracle:
    """Graphic matroid of a multigraph; the ground set is the edge list.

    A subset of edges is independent iff it is acyclic (union-find check).
    """
    if vertices < 1:
        raise InvalidInputError("graph needs at least one vertex")
    for u, v in edges:
        if not (0 <= u < vertices and 0 <= v < vertices):
            raise InvalidInputError(f"edge ({u},{v}) has an endpoint out of range")
    ground = GroundSet(len(edges), tuple(labels) if labels else None)
    edge_list = tuple(edges)

    def independent(x: Subset) -> bool:
        parent = list(range(vertices))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in x.members():
            u, v = edge_list[i]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    return MatroidOracle(ground, independent, "graphic")


def make_linear(ground: GroundSet,
                columns: Sequence[Sequence[Fraction | int | str]]) -> MatroidOracle:
    """Linear matroid over the rationals; element i is column i.

    Independence is full column rank, decided by exact Gaussian elimination.
    """
    if len(columns) != ground.size:
        raise InvalidInputError("need one column per ground element")
    height = len(columns[0]) if columns else 0
    cols = []
    for col in columns:
        if len(col) != height:
            raise InvalidInputError("columns have inconsistent heights")
        cols.append(tuple(parse_rational(v) for v in col))

    def independent(x: Subset) -> bool:
        chosen = [list(cols[i]) for i in x.members()]
        if len(chosen) > height:
            return False
        # Row-reduce the selected columns; independent iff no column vanishes.
        pivots: list[tuple[int, list[Fraction]]] = []
        for vec in chosen:
            for row, pivot_vec in pivots:
                if vec[row] != 0:
                    factor = vec[row] / pivot_vec[row]
                    for j in range(height):
                        vec[j] -= factor * pivot_vec[j]
            lead = next((j for j in range(height) if vec[j] != 0), None)
            if lead is None:
                return False
            pivots.append((lead, vec))
        return True

    return MatroidOracle(ground, independent, "linear")


def from_explicit_bases(family: ExplicitBaseFamily) -> MatroidOracle:
    """Matroid whose bases are exactly the listed sets.

    The caller is responsible for the family satisfying the exchange axiom
    (see :func:`check_base_exchange`); independence is containment in a base.
    """
    if not family.bases:
        raise InvalidInputError("base family must be nonempty")
    sizes = {b.cardinality() for b in family.bases}
    if len(sizes) != 1:
        raise InvalidInputError("bases must be equicardinal")
    masks = tuple(b.mask for b in family.bases)

    def independent(x: Subset) -> bool:
        return any(x.mask & ~m == 0 for m in masks)

    return MatroidOracle(family.ground, independent, "explicit")


def dual_matroid(matroid: MatroidOracle) -> MatroidOracle:
    """The dual matroid: bases are the complements of the bases of `matroid`."""
    full_rank = matroid.rank

    def independent(x: Subset) -> bool:
        # X is coindependent iff some base avoids X.
        return matroid.rank_of(x.complement()) == full_rank

    return MatroidOracle(matroid.ground, independent, f"dual({matroid.name})")


def enumerate_bases(matroid: MatroidOracle,
                    limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[Subset]:
    """All bases of a matroid, by scanning the rank-sized subsets."""
    n, r = matroid.ground.size, matroid.rank
    count = 1
    for i in range(r):
        count = count * (n - i) // (i + 1)
    if count > limit:
        raise ResourceLimitError(
            f"enumerating C({n},{r})={count} candidate bases exceeds limit {limit}")
    return [x for x in matroid.ground.subsets_of_size(r) if matroid.is_independent(x)]


def check_base_exchange(family: ExplicitBaseFamily) -> bool:
    """Exhaustively test the base exchange axiom on an explicit family.

    For all bases X, Y and v in X \\ Y there must be u in Y \\ X with
    X - v + u in the family.
    """
    if not family.bases:
        raise InvalidInputError("base family must be nonempty")
    sizes = {b.cardinality() for b in family.bases}
    if len(sizes) != 1:
        raise InvalidInputError("bases must be equicardinal")
    masks = sorted({b.mask for b in family.bases})
    mask_set = set(masks)
    n = family.ground.size
    for xm in masks:
        for ym in masks:
            diff = xm & ~ym
            if not diff:
                continue
            candidates = ym & ~xm
            v = diff
            while v:
                vbit = v & -v
                u = candidates
                ok = False
                while u:
                    ubit = u & -u
                    if (xm ^ vbit) | ubit in mask_set:
                        ok = True
                        break
                    u ^= ubit
                if not ok:
                    return False
                v ^= vbit
    return True


def check_independence_axioms(matroid: MatroidOracle,
                              limit: int = DEFAULT_ENUMERATION_LIMIT) -> bool:
    """Exhaustively test the independence axioms (desk scale only).

    Checks that the empty set is independent, independence is closed
    downward, and the augmentation property holds.
    """
    n = matroid.ground.size
    if 1 << n > limit:
        raise ResourceLimitError(f"2^{n} subsets exceed limit {limit}")
    independent = [matroid.is_independent(Subset(matroid.ground, m))
                   for m in range(1 << n)]
    if not independent[0]:
        return False
    for m in range(1 << n):
        if not independent[m]:
            continue
        # Downward closure: dropping any element keeps independence.
        v = m
        while v:
            vbit = v & -v
            if not independent[m ^ vbit]:
                return False
            v ^= vbit
    sizes = [bin(m).count("1") for m in range(1 << n)]
    indep_masks = [m for m in range(1 << n) if independent[m]]
    for xm in indep_masks:
        for ym in indep_masks:
            if sizes[xm] >= sizes[ym]:
                continue
            candidates = ym & ~xm
            ok = False
            u = candidates
            while u:
                ubit = u & -u
                if independent[xm | ubit]:
                    ok = True
                    break
                u ^= ubit
            if not ok:
                return False
    return True


def min_weight_base(matroid: MatroidOracle,
                    weights: Sequence[Fraction]) -> Subset:
    """Minimum-weight base by the classic matroid greedy algorithm."""
    order = sorted(matroid.ground.elements(), key=lambda i: (weights[i], i))
    current = matroid.ground.empty()
    for i in order:
        grown = current.add(i)
        if matroid.is_independent(grown):
            current = grown
    return current
