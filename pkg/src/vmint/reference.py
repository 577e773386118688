"""Reference algorithms used to cross-validate the primary solvers.

Contains a primal-dual algorithm for the modular equality-constrained
problem that alternates zero-length-path augmentations with uniform dual
raises, the conversion between its witness format and the potential-pair
format of the augmenting-path solver, and an alternative equality solver
that walks exchange sequences inside minimizer families.

None of these aim at the primary solver's complexity; they exist so that
three independently-coded routes can be compared value-for-value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    ExtValue,
    InternalInvariantError,
    InvalidInputError,
    Subset,
    dot,
    intersection_cardinality,
)
from .greedy import minimizer_family
from .matroid import MatroidOracle, dual_matroid, min_weight_base
from .valuated import ValuationOracle, from_matroid_and_weights
from .viap import (
    ARC_EXCHANGE_1,
    ARC_EXCHANGE_2,
    IntersectionSolution,
    build_aux_digraph,
    shortest_path_with_hop_tiebreak,
)
from . import viap


@dataclass(frozen=True)
class LptWitness:
    """Primal-dual certificate: q1 >= 0, q2 <= 0, and a uniform gap."""

    q1: tuple[Fraction, ...]
    q2: tuple[Fraction, ...]
    gap: Fraction


def lpt_witness_check(x1: Subset, x2: Subset,
                      q1: Sequence[Fraction], q2: Sequence[Fraction],
                      gap: Fraction,
                      matroid1: MatroidOracle, matroid2: MatroidOracle,
                      w1: Sequence[Fraction], w2: Sequence[Fraction]) -> bool:
    """Check the primal-dual optimality conditions for a modular pair.

    Requires q1 nonnegative, q2 nonpositive, gap nonnegative; then
    q1(v) = q2(v) + gap everywhere, X1 and X2 minimize w1 - q1 and
    w2 + q2 over their base families, and the potentials vanish on
    X1 \\ X2 and X2 \\ X1 respectively.  Sign violations return False.
    """
    q1 = tuple(Fraction(q) for q in q1)
    q2 = tuple(Fraction(q) for q in q2)
    gap = Fraction(gap)
    if gap < 0 or any(q < 0 for q in q1) or any(q > 0 for q in q2):
        return False
    if any(a != b + gap for a, b in zip(q1, q2)):
        return False
    shifted1 = tuple(Fraction(w) - q for w, q in zip(w1, q1))
    shifted2 = tuple(Fraction(w) + q for w, q in zip(w2, q2))
    if dot(shifted1, x1) != dot(shifted1, min_weight_base(matroid1, shifted1)):
        return False
    if dot(shifted2, x2) != dot(shifted2, min_weight_base(matroid2, shifted2)):
        return False
    for v in x1.minus(x2).members():
        if q1[v] != 0:
            return False
    for v in x2.minus(x1).members():
        if q2[v] != 0:
            return False
    return True


def convert_witness(p1: Sequence[Fraction],
                    p2: Sequence[Fraction]) -> tuple[tuple[Fraction, ...],
                                                     tuple[Fraction, ...],
                                                     Fraction]:
    """Convert an augmenting-path witness into the primal-dual format.

    Requires min p1 = 0 and p1 = p2 pointwise (the invariants the
    augmenting solver maintains); then q1 = p1, q2 = p2 - max p2, and the
    gap is max p2.  The reverse direction is :func:`witness_from_lpt`.
    """
    p1 = tuple(Fraction(p) for p in p1)
    p2 = tuple(Fraction(p) for p in p2)
    if p1 != p2:
        raise InvalidInputError("potential copies must agree pointwise")
    if min(p1) != 0:
        raise InvalidInputError("minimum of p1 must be zero")
    gap = max(p2)
    q2 = tuple(p - gap for p in p2)
    return p1, q2, gap


def witness_from_lpt(q1: Sequence[Fraction],
                     q2: Sequence[Fraction]) -> tuple[tuple[Fraction, ...],
                                                      tuple[Fraction, ...]]:
    """The reverse conversion: both potential copies equal q1."""
    p = tuple(Fraction(q) for q in q1)
    return p, p


@dataclass
class _LptState:
    x1: Subset
    x2: Subset
    q1: list[Fraction]
    q2: list[Fraction]


def _lpt_case1(matroid1: MatroidOracle, matroid2: MatroidOracle,
               w1: Sequence[Fraction], w2: Sequence[Fraction], k: int,
               start: tuple[Subset, Subset]) -> Optional[_LptState]:
    """Raise the intersection of a minimum-base pair to k, primal-dually.

    While no zero-length source-sink path exists, the duals are raised by
    the smallest positive length of an exchange arc leaving the
    zero-reachable set; that arc then joins the zero subgraph, so the
    reachable set grows and the raise loop terminates.  When no exchange
    arc leaves the reachable set at all, the problem is infeasible.
    """
    omega1 = from_matroid_and_weights(matroid1, w1)
    omega2 = from_matroid_and_weights(matroid2, w2)
    n = matroid1.ground.size
    state = _LptState(start[0], start[1],
                      [Fraction(0)] * n, [Fraction(0)] * n)
    while intersection_cardinality(state.x1, state.x2) < k:
        graph = build_aux_digraph(state.x1, state.x2, state.q1, state.q2,
                                  state.x1.intersection(state.x2),
                                  omega1, omega2)
        dist, _parents, path = shortest_path_with_hop_tiebreak(graph)
        sink_dist = dist[graph.sink]
        if sink_dist is not None and sink_dist == 0:
            x1, x2 = state.x1, state.x2
            for arc in path:
                if arc.kind == ARC_EXCHANGE_1:
                    x1 = x1.exchange(arc.element_out, arc.element_in)
                elif arc.kind == ARC_EXCHANGE_2:
                    x2 = x2.exchange(arc.element_out, arc.element_in)
            if intersection_cardinality(x1, x2) != \
                    intersection_cardinality(state.x1, state.x2) + 1:
                raise InternalInvariantError(
                    "zero-path augmentation did not grow the intersection by 1")
            state.x1, state.x2 = x1, x2
            continue
        reachable = {node for node in range(graph.node_count())
                     if dist[node] is not None and dist[node] == 0}
        delta = None
        for arc in graph.arcs:
            if arc.kind not in (ARC_EXCHANGE_1, ARC_EXCHANGE_2):
                continue
            if arc.tail in reachable and arc.head not in reachable:
                if delta is None or arc.length < delta:
                    delta = arc.length
        if delta is None:
            return None
        if delta <= 0:
            raise InternalInvariantError("leaving arcs must have positive length")
        for v in range(n):
            if graph.node_v1(v) not in reachable:
                state.q1[v] += delta
            if graph.node_v2(v) in reachable:
                state.q2[v] -= delta
    return state


def lpt_solve_w_eq_k(matroid1: MatroidOracle, matroid2: MatroidOracle,
                     w1: Sequence[Fraction], w2: Sequence[Fraction],
                     k: int) -> IntersectionSolution:
    """Solve the modular |X1 intersect X2| = k problem primal-dually.

    Starts from minimum-weight bases.  When they intersect in more than k
    elements the instance is restated for the dual of the second matroid
    with negated weights at level rank1 - k, starting from the
    complemented base pair.
    """
    if k < 0:
        raise InvalidInputError("k must be nonnegative")
    return lpt_solve_with_witness(matroid1, matroid2, w1, w2, k).solution


def lpt_state_witness(state: _LptState) -> LptWitness:
    gaps = {a - b for a, b in zip(state.q1, state.q2)}
    if len(gaps) != 1:
        raise InternalInvariantError("dual gap is not uniform")
    (gap,) = gaps
    return LptWitness(tuple(state.q1), tuple(state.q2), gap)


@dataclass
class LptRun:
    """Solve outcome plus the instance the certificate actually lives on.

    For the dualized case the certificate refers to the dual matroid with
    negated weights, so checkers must be pointed at `cert_*`, not at the
    original instance.
    """

    solution: IntersectionSolution
    witness: Optional[LptWitness]
    cert_matroid1: MatroidOracle
    cert_matroid2: MatroidOracle
    cert_w1: tuple[Fraction, ...]
    cert_w2: tuple[Fraction, ...]
    cert_x1: Optional[Subset]
    cert_x2: Optional[Subset]


def lpt_solve_with_witness(matroid1: MatroidOracle, matroid2: MatroidOracle,
                           w1: Sequence[Fraction], w2: Sequence[Fraction],
                           k: int) -> LptRun:
    """Solve like :func:`lpt_solve_w_eq_k` but keep the certificate.

    The returned run names the instance the certificate refers to: the
    original one in the direct case, the dualized one otherwise.
    """
    w1 = tuple(Fraction(w) for w in w1)
    w2 = tuple(Fraction(w) for w in w2)
    x1 = min_weight_base(matroid1, w1)
    x2 = min_weight_base(matroid2, w2)
    if intersection_cardinality(x1, x2) <= k:
        state = _lpt_case1(matroid1, matroid2, w1, w2, k, (x1, x2))
        if state is None:
            return LptRun(IntersectionSolution("infeasible", k=k, mode="lpt"),
                          None, matroid1, matroid2, w1, w2, None, None)
        value = ExtValue(dot(w1, state.x1) + dot(w2, state.x2))
        solution = IntersectionSolution("optimal", state.x1, state.x2, value,
                                        None, k, "lpt")
        return LptRun(solution, lpt_state_witness(state), matroid1, matroid2,
                      w1, w2, state.x1, state.x2)
    dual2 = dual_matroid(matroid2)
    bar_w2 = tuple(-w for w in w2)
    target = matroid1.rank - k
    if target < 0:
        return LptRun(IntersectionSolution("infeasible", k=k, mode="lpt"),
                      None, matroid1, dual2, w1, bar_w2, None, None)
    state = _lpt_case1(matroid1, dual2, w1, bar_w2, target,
                       (x1, x2.complement()))
    if state is None:
        return LptRun(IntersectionSolution("infeasible", k=k, mode="lpt"),
                      None, matroid1, dual2, w1, bar_w2, None, None)
    x2_back = state.x2.complement()
    value = ExtValue(dot(w1, state.x1) + dot(w2, x2_back))
    solution = IntersectionSolution("optimal", state.x1, x2_back, value,
                                    None, k, "lpt")
    return LptRun(solution, lpt_state_witness(state), matroid1, dual2,
                  w1, bar_w2, state.x1, state.x2)


def _exchange_walk(family: list[Subset], origin: Subset,
                   destination: Subset) -> list[Subset]:
    """A sequence of family members from origin to destination that swaps
    in one destination element per step (base exchange guarantees a legal
    swap exists at every step)."""
    members = {b.mask for b in family}
    walk = [origin]
    current = origin
    while current.mask != destination.mask:
        step = None
        for v in destination.minus(current).members():
            for u in current.minus(destination).members():
                candidate = current.exchange(u, v)
                if candidate.mask in members:
                    step = candidate
                    break
            if step is not None:
                break
        if step is None:
            raise InternalInvariantError(
                "no legal swap: the minimizer family violates base exchange")
        walk.append(step)
        current = step
    return walk


def alt_solve_v_eq_k(omega1: ValuationOracle, omega2: ValuationOracle,
                     k: int) -> IntersectionSolution:
    """Equality-constrained solve via the boundary problems and minimizer
    walks (exhaustive minimizer families, desk scale).

    First solves the <= k and >= k problems; a boundary optimum that hits
    k exactly is returned.  Otherwise all four boundary sets are
    unconstrained minimizers and the optimum equals the unconstrained sum;
    walking exchange sequences inside the minimizer families changes the
    tracked intersection by at most one per step, so a pair meeting k
    exactly is found along the way.
    """
    from .vmi import solve_v_leq_k  # local import to avoid a cycle

    below = solve_v_leq_k(omega1, omega2, k)
    above = viap.solve_v_geq_k(omega1, omega2, k)
    if not below.optimal or not above.optimal:
        return IntersectionSolution("infeasible", k=k, mode="alt-eq")
    if intersection_cardinality(below.x1, below.x2) == k:
        return IntersectionSolution("optimal", below.x1, below.x2,
                                    below.value, None, k, "alt-eq")
    if intersection_cardinality(above.x1, above.x2) == k:
        return IntersectionSolution("optimal", above.x1, above.x2,
                                    above.value, None, k, "alt-eq")
    family1 = minimizer_family(omega1)
    family2 = minimizer_family(omega2)

    def finish(x1: Subset, x2: Subset) -> IntersectionSolution:
        value = omega1.value(x1) + omega2.value(x2)
        return IntersectionSolution("optimal", x1, x2, value, None, k,
                                    "alt-eq")

    walk1 = _exchange_walk(family1, below.x1, above.x1)
    previous = intersection_cardinality(below.x1, below.x2)
    for step in walk1:
        size = intersection_cardinality(step, below.x2)
        if abs(size - previous) > 1:
            raise InternalInvariantError("walk changed the intersection by >1")
        previous = size
        if size == k:
            return finish(step, below.x2)
    walk2 = _exchange_walk(family2, below.x2, above.x2)
    previous = intersection_cardinality(above.x1, below.x2)
    for step in walk2:
        size = intersection_cardinality(above.x1, step)
        if abs(size - previous) > 1:
            raise InternalInvariantError("walk changed the intersection by >1")
        previous = size
        if size == k:
            return finish(above.x1, step)
    raise InternalInvariantError(
        "straddling walks must pass through every intermediate size")
