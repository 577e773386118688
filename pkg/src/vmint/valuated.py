"""Value-oracle valuated matroids and M-natural-convex functions.

A :class:`ValuationOracle` maps subsets of a ground set to exact extended
rationals; its effective domain (the finite-valued sets) is a matroid base
family of known rank, and a witness base gives descent algorithms a finite
starting point.  An :class:`MnatFunction` is the integer-vector analogue,
with a bounding box enclosing its effective domain.

Domain membership is value finiteness; there is no separate domain oracle.
All value queries are memoized per oracle and counted, which feeds the
oracle-complexity checks in the test suite.  Oracles are logically
immutable, but the memo and counters mutate on query: confine an oracle to
one solver run at a time (or guard it) when sharing across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .core import (
    INF,
    ZERO,
    EmptyDomainError,
    ExtValue,
    GroundSet,
    IntVector,
    InvalidInputError,
    ResourceLimitError,
    Subset,
    dot,
)
from .matroid import MatroidOracle

DEFAULT_DOMAIN_LIMIT = 200_000


class ValuationOracle:
    """A valuated matroid given by a value query on subsets.

    `value(X)` is finite only on rank-sized subsets; `witness_base` is one
    finite-valued subset, or None when the effective domain is empty.
    """

    def __init__(self, ground: GroundSet, rank: int,
                 value_fn: Callable[[Subset], ExtValue],
                 witness_base: Optional[Subset],
                 name: str = "valuation"):
        if not 0 <= rank <= ground.size:
            raise InvalidInputError(f"rank {rank} out of range 0..{ground.size}")
        self.ground = ground
        self.rank = rank
        self._value_fn = value_fn
        self.witness_base = witness_base
        self.name = name
        self._memo: dict[int, ExtValue] = {}
        self.calls = 0
        self.evals = 0
        if witness_base is not None:
            if witness_base.cardinality() != rank:
                raise InvalidInputError("witness base has the wrong cardinality")
            if not self.value(witness_base).is_finite:
                raise InvalidInputError("witness base has infinite value")

    def value(self, subset: Subset) -> ExtValue:
        if subset.ground != self.ground:
            raise InvalidInputError("subset is on a different ground set")
        self.calls += 1
        cached = self._memo.get(subset.mask)
        if cached is None:
            if subset.cardinality() != self.rank:
                cached = INF
            else:
                cached = self._value_fn(subset)
            self._memo[subset.mask] = cached
            self.evals += 1
        return cached

    def in_domain(self, subset: Subset) -> bool:
        return self.value(subset).is_finite

    def reset_counters(self) -> None:
        self.calls = 0
        self.evals = 0

    def require_witness(self) -> Subset:
        if self.witness_base is None:
            raise EmptyDomainError(f"valuation {self.name!r} has an empty domain")
        return self.witness_base

    def enumerate_domain(self, limit: int = DEFAULT_DOMAIN_LIMIT) -> list[Subset]:
        """All finite-valued subsets, by scanning the rank-sized ones."""
        n, r = self.ground.size, self.rank
        count = 1
        for i in range(r):
            count = count * (n - i) // (i + 1)
        if count > limit:
            raise ResourceLimitError(
                f"domain scan over C({n},{r})={count} subsets exceeds limit {limit}")
        return [x for x in self.ground.subsets_of_size(r) if self.in_domain(x)]

    def __repr__(self) -> str:
        return f"ValuationOracle({self.name}, |V|={self.ground.size}, rank={self.rank})"


class MnatFunction:
    """An M-natural-convex function on integer vectors, with a bounding box."""

    def __init__(self, dimension: int,
                 value_fn: Callable[[IntVector], ExtValue],
                 box_lower: Sequence[int], box_upper: Sequence[int],
                 witness_point: Optional[IntVector],
                 name: str = "mnat"):
        if len(box_lower) != dimension or len(box_upper) != dimension:
            raise InvalidInputError("box bounds must match the dimension")
        if any(lo > hi for lo, hi in zip(box_lower, box_upper)):
            raise InvalidInputError("box lower bound exceeds upper bound")
        self.dimension = dimension
        self._value_fn = value_fn
        self.box_lower = tuple(int(v) for v in box_lower)
        self.box_upper = tuple(int(v) for v in box_upper)
        self.witness_point = witness_point
        self.name = name
        self._memo: dict[tuple[int, ...], ExtValue] = {}
        self.calls = 0
        self.evals = 0
        if witness_point is not None and not self.value(witness_point).is_finite:
            raise InvalidInputError("witness point has infinite value")

    def value(self, x: IntVector) -> ExtValue:
        if len(x) != self.dimension:
            raise InvalidInputError("vector length mismatch")
        self.calls += 1
        key = x.entries
        cached = self._memo.get(key)
        if cached is None:
            if self.in_box(x):
                cached = self._value_fn(x)
            else:
                cached = INF
            self._memo[key] = cached
            self.evals += 1
        return cached

    def in_box(self, x: IntVector) -> bool:
        return all(lo <= v <= hi for v, lo, hi in
                   zip(x.entries, self.box_lower, self.box_upper))

    def in_domain(self, x: IntVector) -> bool:
        return self.value(x).is_finite

    def box_volume(self) -> int:
        vol = 1
        for lo, hi in zip(self.box_lower, self.box_upper):
            vol *= hi - lo + 1
        return vol

    def reset_counters(self) -> None:
        self.calls = 0
        self.evals = 0

    def require_witness(self) -> IntVector:
        if self.witness_point is None:
            raise EmptyDomainError(f"function {self.name!r} has an empty domain")
        return self.witness_point

    def rank_total(self) -> int:
        """Coordinate sum of the witness point (the rank, for M-convex f)."""
        return self.require_witness().total()

    def iter_box(self, limit: int = DEFAULT_DOMAIN_LIMIT) -> Iterator[IntVector]:
        if self.box_volume() > limit:
            raise ResourceLimitError(
                f"box scan over {self.box_volume()} points exceeds limit {limit}")
        ranges = [range(lo, hi + 1) for lo, hi in
                  zip(self.box_lower, self.box_upper)]
        for combo in itertools.product(*ranges):
            yield IntVector(combo)

    def enumerate_domain(self, limit: int = DEFAULT_DOMAIN_LIMIT) -> list[IntVector]:
        return [x for x in self.iter_box(limit) if self.in_domain(x)]

    def __repr__(self) -> str:
        return f"MnatFunction({self.name}, dim={self.dimension})"


@dataclass(frozen=True)
class LaminarSpec:
    """A laminar family with one univariate convex table per member.

    Each table maps an integer interval [start, start+len-1] to exact
    rationals and is +infinity outside it.  Tables must satisfy
    g(k+1) + g(k-1) >= 2 g(k) on their interval.
    """

    ground: GroundSet
    members: tuple[Subset, ...]
    tables: tuple["ConvexTable", ...]

    def __post_init__(self):
        if len(self.members) != len(self.tables):
            raise InvalidInputError("need one table per laminar member")
        for member in self.members:
            if member.ground != self.ground:
                raise InvalidInputError("laminar member on a different ground set")
            if member.mask == 0:
                raise InvalidInputError("laminar members must be nonempty")
        for a, b in itertools.combinations(self.members, 2):
            inter = a.mask & b.mask
            if inter and inter != a.mask and inter != b.mask:
                raise InvalidInputError("family is not laminar")


@dataclass(frozen=True)
class ConvexTable:
    """A univariate discrete convex function on a finite integer interval."""

    start: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise InvalidInputError("convex table must be nonempty")
        for i in range(len(self.values) - 2):
            lhs = self.values[i + 2] + self.values[i]
            if lhs < 2 * self.values[i + 1]:
                raise InvalidInputError("table is not discrete convex")

    @property
    def end(self) -> int:
        return self.start + len(self.values) - 1

    def at(self, k: int) -> ExtValue:
        if self.start <= k <= self.end:
            return ExtValue(self.values[k - self.start])
        return INF


def from_matroid_and_weights(matroid: MatroidOracle,
                             weights: Sequence[Fraction],
                             name: str = "modular") -> ValuationOracle:
    """Modular weights restricted to a base family: w(X) on bases, else +inf."""
    if len(weights) != matroid.ground.size:
        raise InvalidInputError("need one weight per ground element")
    ws = tuple(Fraction(w) for w in weights)

    def value(subset: Subset) -> ExtValue:
        if not matroid.is_independent(subset):
            return INF
        return ExtValue(dot(ws, subset))

    return ValuationOracle(matroid.ground, matroid.rank, value,
                           matroid.some_base(), name)


def indicator_of_matroid(matroid: MatroidOracle) -> ValuationOracle:
    """The 0/+infinity indicator of a base family."""
    zeros = (Fraction(0),) * matroid.ground.size
    return from_matroid_and_weights(matroid, zeros, f"delta({matroid.name})")


def size_constrained_modular(ground: GroundSet, weights: Sequence[Fraction],
                             r: int) -> ValuationOracle:
    """Modular weights on all r-subsets (the uniform-matroid special case)."""
    if not 0 <= r <= ground.size:
        raise InvalidInputError(f"rank {r} out of range 0..{ground.size}")
    ws = tuple(Fraction(w) for w in weights)
    witness = ground.subset(range(r))
    return ValuationOracle(ground, r, lambda x: ExtValue(dot(ws, x)),
                           witness, f"size={r}")


def dual_valuation(omega: ValuationOracle) -> ValuationOracle:
    """The dual valuated matroid: value(X) = omega(V \\ X)."""
    witness = None
    if omega.witness_base is not None:
        witness = omega.witness_base.complement()
    return ValuationOracle(omega.ground, omega.ground.size - omega.rank,
                           lambda x: omega.value(x.complement()),
                           witness, f"dual({omega.name})")


def shift_by_potential(omega: ValuationOracle, potential: Sequence[Fraction],
                       sign: int) -> ValuationOracle:
    """The valuated matroid omega + sign * potential (sign is +1 or -1)."""
    pot = tuple(Fraction(p) for p in potential)

    def value(subset: Subset) -> ExtValue:
        base = omega.value(subset)
        if not base.is_finite:
            return INF
        return base + sign * dot(pot, subset)

    return ValuationOracle(omega.ground, omega.rank, value,
                           omega.witness_base, f"{omega.name}{'+' if sign > 0 else '-'}p")


class TupleGround:
    """n disjoint copies of a ground set V, with tuple/subset conversions.

    Copy i of element v sits at index i*|V| + v of the combined ground set.
    """

    def __init__(self, base: GroundSet, n: int):
        if n < 1:
            raise InvalidInputError("need at least one copy")
        self.base = base
        self.n = n
        labels = None
        if base.labels is not None:
            labels = tuple(f"{lbl}@{i + 1}" for i in range(n) for lbl in base.labels)
        self.combined = GroundSet(base.size * n, labels)

    def to_subset(self, parts: Sequence[Subset]) -> Subset:
        if len(parts) != self.n:
            raise InvalidInputError(f"expected {self.n} parts")
        mask = 0
        for i, part in enumerate(parts):
            if part.ground != self.base:
                raise InvalidInputError("part on a different ground set")
            mask |= part.mask << (i * self.base.size)
        return Subset(self.combined, mask)

    def to_parts(self, subset: Subset) -> tuple[Subset, ...]:
        if subset.ground != self.combined:
            raise InvalidInputError("subset not on the combined ground set")
        size = self.base.size
        window = (1 << size) - 1
        return tuple(Subset(self.base, subset.mask >> (i * size) & window)
                     for i in range(self.n))

    def common_intersection(self, subset: Subset) -> Subset:
        parts = self.to_parts(subset)
        mask = (1 << self.base.size) - 1
        for part in parts:
            mask &= part.mask
        return Subset(self.base, mask)

    def copy_counts(self, subset: Subset) -> IntVector:
        """How many copies contain each base element."""
        parts = self.to_parts(subset)
        return IntVector(tuple(sum(1 for p in parts if p.mask >> v & 1)
                               for v in self.base.elements()))


def disjoint_sum(omegas: Sequence[ValuationOracle]) -> tuple[ValuationOracle, TupleGround]:
    """Disjoint sum of valuations over n disjoint copies of their ground set.

    value(X_1, ..., X_n) = sum_i omega_i(X_i); the rank is the sum of the
    component ranks and the witness concatenates the component witnesses.
    """
    if not omegas:
        raise InvalidInputError("need at least one valuation")
    base = omegas[0].ground
    for om in omegas:
        if om.ground != base:
            raise InvalidInputError("valuations live on different ground sets")
    tg = TupleGround(base, len(omegas))

    def value(subset: Subset) -> ExtValue:
        total = ZERO
        for om, part in zip(omegas, tg.to_parts(subset)):
            term = om.value(part)
            if not term.is_finite:
                return INF
            total = total + term
        return total

    witness = None
    if all(om.witness_base is not None for om in omegas):
        witness = tg.to_subset([om.witness_base for om in omegas])
    rank = sum(om.rank for om in omegas)
    return (ValuationOracle(tg.combined, rank, value, witness, "disjoint-sum"), tg)


def intersection_constraint_valuation(n: int, constraint: MatroidOracle,
                                      r: int) -> tuple[ValuationOracle, TupleGround]:
    """The 0/+infinity valuation of tuples with intersection in a matroid.

    value(X_1, ..., X_n) = 0 when the common intersection of the parts is
    independent in `constraint` and the part sizes sum to r, else +infinity.
    The witness is found by a greedy fill; matroid augmentation guarantees
    the greedy reaches r whenever any tuple of total size r exists, so an
    unfinished fill means the domain is empty (witness None).
    """
    base = constraint.ground
    if not 0 <= r <= n * base.size:
        raise InvalidInputError(f"total rank {r} out of range 0..{n * base.size}")
    tg = TupleGround(base, n)

    def value(subset: Subset) -> ExtValue:
        inter = tg.common_intersection(subset)
        if constraint.is_independent(inter):
            return ZERO
        return INF

    witness: Optional[Subset] = _greedy_tuple_fill(tg, constraint, r)
    return (ValuationOracle(tg.combined, r, value, witness,
                            "intersection-constraint"), tg)


def _greedy_tuple_fill(tg: TupleGround, constraint: MatroidOracle,
                       r: int) -> Optional[Subset]:
    parts = [tg.base.empty() for _ in range(tg.n)]
    total = 0
    while total < r:
        extended = False
        for i in range(tg.n):
            for v in tg.base.elements():
                if parts[i].contains(v):
                    continue
                candidate = parts[i].add(v)
                inter_mask = candidate.mask
                for j in range(tg.n):
                    if j != i:
                        inter_mask &= parts[j].mask
                if constraint.is_independent(Subset(tg.base, inter_mask)):
                    parts[i] = candidate
                    total += 1
                    extended = True
                    break
            if extended:
                break
        if not extended:
            return None
    return tg.to_subset(parts)


def laminar_penalty(weights: Sequence[Fraction], n: int, r: int,
                    ground: GroundSet) -> tuple[ValuationOracle, TupleGround]:
    """The valuation of tuples charging w(v) when all n copies pick v.

    On the hyperplane (part sizes summing to r) the value is
    sum over v of g_v(count of copies containing v), where g_v is w(v) at
    count n and 0 below; off the hyperplane the value is +infinity.
    Nonnegative w makes each g_v convex, which is what turns this into a
    valuated matroid; negative entries are rejected.
    """
    ws = tuple(Fraction(w) for w in weights)
    if len(ws) != ground.size:
        raise InvalidInputError("need one weight per ground element")
    if any(w < 0 for w in ws):
        raise InvalidInputError("laminar penalty requires nonnegative weights")
    if not 0 <= r <= n * ground.size:
        raise InvalidInputError(f"total rank {r} out of range 0..{n * ground.size}")
    tg = TupleGround(ground, n)

    def value(subset: Subset) -> ExtValue:
        inter = tg.common_intersection(subset)
        return ExtValue(dot(ws, inter))

    witness = Subset(tg.combined, (1 << r) - 1)
    return (ValuationOracle(tg.combined, r, value, witness, "laminar-penalty"), tg)


def laminar_convex_function(spec: LaminarSpec,
                            box_lower: Optional[Sequence[int]] = None,
                            box_upper: Optional[Sequence[int]] = None,
                            witness_limit: int = DEFAULT_DOMAIN_LIMIT) -> MnatFunction:
    """The M-natural-convex function f(x) = sum over members X of g_X(sum x(v)).

    A bounding box may be passed explicitly; otherwise it is derived from
    the tables of singleton members, which must then cover every element.
    """
    ground = spec.ground
    if box_lower is None or box_upper is None:
        lower = [None] * ground.size
        upper = [None] * ground.size
        for member, table in zip(spec.members, spec.tables):
            if member.cardinality() == 1:
                (v,) = member.members()
                lower[v] = table.start
                upper[v] = table.end
        if any(v is None for v in lower):
            raise InvalidInputError(
                "cannot derive a box: pass box bounds or add singleton members")
        box_lower, box_upper = lower, upper  # type: ignore[assignment]

    member_data = tuple((m.members(), t) for m, t in zip(spec.members, spec.tables))

    def value(x: IntVector) -> ExtValue:
        total = ZERO
        for members, table in member_data:
            term = table.at(sum(x[v] for v in members))
            if not term.is_finite:
                return INF
            total = total + term
        return total

    fn = MnatFunction(ground.size, value, box_lower, box_upper, None, "laminar")
    fn.witness_point = _first_finite_point(fn, witness_limit)
    if fn.witness_point is None:
        raise EmptyDomainError("laminar convex function has an empty domain")
    return fn


def _first_finite_point(fn: MnatFunction, limit: int) -> Optional[IntVector]:
    for x in fn.iter_box(limit):
        if fn.in_domain(x):
            return x
    return None


def restrict_to_hyperplane(fn: MnatFunction, r: int,
                           ground: Optional[GroundSet] = None,
                           witness_limit: int = DEFAULT_DOMAIN_LIMIT):
    """Restrict an M-natural-convex function to coordinate sum r.

    Returns a :class:`ValuationOracle` when the box fits in {0,1}^V
    (pass `ground` to label it), else an M-convex :class:`MnatFunction`.
    Raises :class:`EmptyDomainError` when no point of the domain has sum r.
    """
    zero_one = all(lo >= 0 and hi <= 1 for lo, hi in
                   zip(fn.box_lower, fn.box_upper))
    if zero_one:
        if ground is None:
            ground = GroundSet(fn.dimension)
        witness = None

        def subset_value(subset: Subset) -> ExtValue:
            return fn.value(IntVector(tuple(
                1 if subset.mask >> i & 1 else 0 for i in range(fn.dimension))))

        for candidate in ground.subsets_of_size(r):
            if subset_value(candidate).is_finite:
                witness = candidate
                break
        if witness is None:
            raise EmptyDomainError("hyperplane restriction has an empty domain")
        return ValuationOracle(ground, r, subset_value, witness,
                               f"{fn.name}|sum={r}")

    def value(x: IntVector) -> ExtValue:
        if x.total() != r:
            return INF
        return fn.value(x)

    restricted = MnatFunction(fn.dimension, value, fn.box_lower, fn.box_upper,
                              None, f"{fn.name}|sum={r}")
    restricted.witness_point = _first_finite_point(restricted, witness_limit)
    if restricted.witness_point is None:
        raise EmptyDomainError("hyperplane restriction has an empty domain")
    return restricted


def check_valuated_exchange(omega: ValuationOracle,
                            limit: int = DEFAULT_DOMAIN_LIMIT) -> bool:
    """Exhaustively test the valuated exchange axiom over the domain.

    For all X, Y in dom and v in X \\ Y there must be u in Y \\ X with
    omega(X) + omega(Y) >= omega(X - v + u) + omega(Y + v - u).
    """
    domain = omega.enumerate_domain(limit)
    values = {x.mask: omega.value(x) for x in domain}
    for x in domain:
        vx = values[x.mask]
        for y in domain:
            lhs = vx + values[y.mask]
            diff = x.mask & ~y.mask
            candidates_mask = y.mask & ~x.mask
            v = diff
            while v:
                vbit = v & -v
                vi = vbit.bit_length() - 1
                ok = False
                u = candidates_mask
                while u:
                    ubit = u & -u
                    ui = ubit.bit_length() - 1
                    first = omega.value(Subset(omega.ground, x.mask ^ vbit | ubit))
                    if first.is_finite:
                        second = omega.value(
                            Subset(omega.ground, y.mask ^ ubit | vbit))
                        if second.is_finite and lhs >= first + second:
                            ok = True
                            break
                    u ^= ubit
                if not ok:
                    return False
                v ^= vbit
    return True


def check_mnat_exchange(fn: MnatFunction,
                        limit: int = DEFAULT_DOMAIN_LIMIT) -> bool:
    """Exhaustively test the M-natural exchange axiom within the box.

    For all x, y in dom and v with x(v) > y(v), either the single-coordinate
    inequality or some paired exchange inequality must hold.
    """
    domain = fn.enumerate_domain(limit)
    values = {x.entries: fn.value(x) for x in domain}
    for x in domain:
        for y in domain:
            lhs = values[x.entries] + values[y.entries]
            for v in range(fn.dimension):
                if x[v] <= y[v]:
                    continue
                down = fn.value(x.add_unit(v, -1))
                if down.is_finite:
                    up = fn.value(y.add_unit(v, +1))
                    if up.is_finite and lhs >= down + up:
                        continue
                ok = False
                for u in range(fn.dimension):
                    if x[u] >= y[u]:
                        continue
                    first = fn.value(x.add_unit(v, -1).add_unit(u, +1))
                    if not first.is_finite:
                        continue
                    second = fn.value(y.add_unit(v, +1).add_unit(u, -1))
                    if second.is_finite and lhs >= first + second:
                        ok = True
                        break
                if not ok:
                    return False
    return True


def valuation_from_explicit(ground: GroundSet, rank: int,
                            table: dict[int, Fraction],
                            name: str = "explicit") -> ValuationOracle:
    """A valuation from an explicit mask -> value table (testing helper)."""
    witness = None
    for mask in sorted(table):
        witness = Subset(ground, mask)
        break

    def value(subset: Subset) -> ExtValue:
        stored = table.get(subset.mask)
        return INF if stored is None else ExtValue(stored)

    return ValuationOracle(ground, rank, value, witness, name)
