"""Augmenting-path solver for intersection-constrained valuated matroid pairs.

Solves, over two valuated matroids omega_1 and omega_2 on the same ground
set, the problems of minimizing omega_1(X_1) + omega_2(X_2) subject to
|X_1 intersect X_2| >= k or = k.

The solver maintains a pair (X_1, X_2) that is optimal for the current
intersection size together with potentials (p_1, p_2) and the matched set
F = X_1 intersect X_2 certifying that optimality.  Each round builds an
auxiliary digraph on two copies of the ground set whose exchange arcs carry
reduced-cost lengths, finds a shortest source-sink path (fewest arcs among
the shortest), applies the exchanges along it, and raises the potentials by
the capped shortest-path distances.  Every round grows the intersection by
exactly one and keeps the optimality certificate valid, which the solver
re-verifies after each step.

Arc lengths are exact rationals and must be nonnegative; a negative length
means a precondition was violated and is reported as an internal error.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    INF,
    ExtValue,
    InternalInvariantError,
    InvalidInputError,
    Subset,
    intersection_cardinality,
)
from .greedy import minimize_valuated
from .valuated import ValuationOracle, dual_valuation

ARC_EDGE = "E"          # v1 -> v2, length 0, matches v
ARC_MATCHED = "F"       # v2 -> v1 for v in F, length 0, unmatches v
ARC_EXCHANGE_1 = "A1"   # u1 -> v1, exchange X1 - u + v
ARC_EXCHANGE_2 = "A2"   # v2 -> u2, exchange X2 - u + v
ARC_SOURCE = "S"        # s -> v1 for v in X1 \ X2
ARC_SINK = "T"          # v2 -> t for v in X2 \ X1


@dataclass(frozen=True)
class AuxArc:
    tail: int
    head: int
    length: Fraction
    kind: str
    element_out: int = -1   # u of an exchange arc, else -1
    element_in: int = -1    # v of an exchange arc / the element of E, F arcs


@dataclass
class AuxDigraph:
    """Auxiliary digraph on V1 + V2 + {s, t} with nonnegative arc lengths."""

    n: int
    arcs: list[AuxArc]
    adjacency: list[list[AuxArc]]

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return 2 * self.n + 1

    def node_count(self) -> int:
        return 2 * self.n + 2

    def node_v1(self, v: int) -> int:
        return 1 + v

    def node_v2(self, v: int) -> int:
        return 1 + self.n + v


@dataclass(frozen=True)
class Witness:
    """Potentials and matched set certifying optimality of a solution pair.

    The certificate asserts: p1 and p2 agree pointwise, X1 minimizes
    omega_1 - p1, X2 minimizes omega_2 + p2, and F is a k-element subset of
    the intersection with X1 \\ F inside argmin p1 and X2 \\ F inside
    argmax p2.
    """

    p1: tuple[Fraction, ...]
    p2: tuple[Fraction, ...]
    matched: Subset
    k: int


@dataclass
class IntersectionSolution:
    """Outcome of an intersection-constrained solve."""

    status: str                       # "optimal" | "infeasible"
    x1: Optional[Subset] = None
    x2: Optional[Subset] = None
    value: ExtValue = INF
    witness: Optional[Witness] = None
    k: int = 0
    mode: str = "geq"                 # "geq" | "eq-direct" | "eq-dual" | "leq"
    oracle_calls: int = 0
    last_feasible: Optional["IntersectionSolution"] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass
class SolverStats:
    """Per-run counters backing the complexity and invariant checks."""

    iterations: int = 0
    oracle_calls: int = 0
    invariant_checks: int = 0


@dataclass
class ViapState:
    omega1: ValuationOracle
    omega2: ValuationOracle
    x1: Subset
    x2: Subset
    p1: tuple[Fraction, ...]
    p2: tuple[Fraction, ...]
    matched: Subset
    stats: SolverStats = field(default_factory=SolverStats)
    check_invariants: bool = True

    def intersection_size(self) -> int:
        return intersection_cardinality(self.x1, self.x2)

    def objective(self) -> ExtValue:
        return self.omega1.value(self.x1) + self.omega2.value(self.x2)


def build_aux_digraph(x1: Subset, x2: Subset,
                      p1: Sequence[Fraction], p2: Sequence[Fraction],
                      matched: Subset,
                      omega1: ValuationOracle,
                      omega2: ValuationOracle) -> AuxDigraph:
    """Construct the auxiliary digraph for the current solver state.

    Arc classes: one edge arc per element (copy 1 to copy 2), one reverse
    arc per matched element, exchange arcs within each copy carrying the
    reduced-cost change of the corresponding single exchange, source arcs
    into X1 \\ X2 and sink arcs out of X2 \\ X1.  Exchange arc lengths are
    nonnegative exactly when X1 and X2 minimize the shifted valuations, so
    a negative length is reported as an internal error.
    """
    ground = omega1.ground
    n = ground.size
    graph = AuxDigraph(n, [], [[] for _ in range(2 * n + 2)])

    def add(arc: AuxArc) -> None:
        if arc.length < 0:
            raise InternalInvariantError(
                f"negative arc length {arc.length} on {arc.kind} arc; "
                "current sets are not minimizers of the shifted valuations")
        graph.arcs.append(arc)
        graph.adjacency[arc.tail].append(arc)

    zero = Fraction(0)
    for v in ground.elements():
        if x1.contains(v) and not x2.contains(v):
            add(AuxArc(graph.source, graph.node_v1(v), zero, ARC_SOURCE,
                       element_in=v))
    for v in ground.elements():
        add(AuxArc(graph.node_v1(v), graph.node_v2(v), zero, ARC_EDGE,
                   element_in=v))
    for v in matched.members():
        add(AuxArc(graph.node_v2(v), graph.node_v1(v), zero, ARC_MATCHED,
                   element_in=v))

    base1 = omega1.value(x1)
    base2 = omega2.value(x2)
    if not (base1.is_finite and base2.is_finite):
        raise InternalInvariantError("current sets left the effective domains")
    for u in x1.members():
        for v in ground.elements():
            if x1.contains(v):
                continue
            moved = omega1.value(x1.exchange(u, v))
            if moved.is_finite:
                length = (moved.finite - base1.finite) - p1[v] + p1[u]
                add(AuxArc(graph.node_v1(u), graph.node_v1(v), length,
                           ARC_EXCHANGE_1, element_out=u, element_in=v))
    for v in ground.elements():
        if x2.contains(v):
            continue
        for u in x2.members():
            moved = omega2.value(x2.exchange(u, v))
            if moved.is_finite:
                length = (moved.finite - base2.finite) + p2[v] - p2[u]
                add(AuxArc(graph.node_v2(v), graph.node_v2(u), length,
                           ARC_EXCHANGE_2, element_out=u, element_in=v))
    for v in ground.elements():
        if x2.contains(v) and not x1.contains(v):
            add(AuxArc(graph.node_v2(v), graph.sink, zero, ARC_SINK,
                       element_in=v))
    return graph


def shortest_path_with_hop_tiebreak(
        graph: AuxDigraph,
) -> tuple[list[Optional[Fraction]], list[Optional[AuxArc]],
           Optional[list[AuxArc]]]:
    """Label-setting search on the lexicographic key (length, hop count).

    Returns per-node distances (None for unreachable), the parent arc of
    each node on its shortest path, and the arc sequence of a shortest
    source-sink path with the fewest arcs among the shortest, or None when
    the sink is unreachable.
    """
    size = graph.node_count()
    dist: list[Optional[Fraction]] = [None] * size
    hops: list[int] = [0] * size
    parent: list[Optional[AuxArc]] = [None] * size
    done = [False] * size
    dist[graph.source] = Fraction(0)
    heap: list[tuple[Fraction, int, int]] = [(Fraction(0), 0, graph.source)]
    while heap:
        d, h, node = heapq.heappop(heap)
        if done[node]:
            continue
        done[node] = True
        for arc in graph.adjacency[node]:
            nd = d + arc.length
            nh = h + 1
            old = dist[arc.head]
            if old is None or (nd, nh) < (old, hops[arc.head]):
                dist[arc.head] = nd
                hops[arc.head] = nh
                parent[arc.head] = arc
                heapq.heappush(heap, (nd, nh, arc.head))
    if dist[graph.sink] is None:
        return dist, parent, None
    path: list[AuxArc] = []
    node = graph.sink
    while node != graph.source:
        arc = parent[node]
        assert arc is not None
        path.append(arc)
        node = arc.tail
    path.reverse()
    return dist, parent, path


def augment_step(state: ViapState) -> Optional[ViapState]:
    """One augmentation: grow the intersection by one, keep optimality.

    Returns the new state, or None when the sink is unreachable, which
    proves that no feasible pair with a larger intersection exists.
    Exchanges are applied arc-wise along the path: each exchange arc swaps
    one element of its copy, each edge arc matches its element, each
    reverse arc unmatches it; the potentials then grow by the shortest-path
    distances capped at the sink distance.
    """
    graph = build_aux_digraph(state.x1, state.x2, state.p1, state.p2,
                              state.matched, state.omega1, state.omega2)
    dist, _parent, path = shortest_path_with_hop_tiebreak(graph)
    if path is None:
        return None
    x1, x2, matched = state.x1, state.x2, state.matched
    for arc in path:
        if arc.kind == ARC_EXCHANGE_1:
            x1 = x1.exchange(arc.element_out, arc.element_in)
        elif arc.kind == ARC_EXCHANGE_2:
            x2 = x2.exchange(arc.element_out, arc.element_in)
        elif arc.kind == ARC_EDGE:
            matched = matched.add(arc.element_in)
        elif arc.kind == ARC_MATCHED:
            matched = matched.remove(arc.element_in)
    d_sink = dist[graph.sink]
    assert d_sink is not None

    def capped(d: Optional[Fraction]) -> Fraction:
        return d_sink if d is None else min(d, d_sink)

    n = state.omega1.ground.size
    p1 = tuple(state.p1[v] + capped(dist[graph.node_v1(v)]) for v in range(n))
    p2 = tuple(state.p2[v] + capped(dist[graph.node_v2(v)]) for v in range(n))
    new_state = ViapState(state.omega1, state.omega2, x1, x2, p1, p2, matched,
                          state.stats, state.check_invariants)
    new_state.stats.iterations += 1
    if state.check_invariants:
        _check_state(new_state, expected_intersection=state.intersection_size() + 1)
    return new_state


def _check_state(state: ViapState, expected_intersection: int) -> None:
    """Loop invariants checked after every augmentation (exact)."""
    state.stats.invariant_checks += 1
    inter = state.x1.intersection(state.x2)
    if inter.cardinality() != expected_intersection:
        raise InternalInvariantError("intersection did not grow by exactly 1")
    if state.matched.mask != inter.mask:
        raise InternalInvariantError("matched set drifted from the intersection")
    if state.p1 != state.p2:
        raise InternalInvariantError("potentials on the two copies disagree")
    if min(state.p1) != 0:
        raise InternalInvariantError("minimum of p1 is not zero")
    min_p1 = min(state.p1)
    max_p2 = max(state.p2)
    for v in state.x1.minus(state.x2).members():
        if state.p1[v] != min_p1:
            raise InternalInvariantError("X1 \\ X2 left argmin p1")
    for v in state.x2.minus(state.x1).members():
        if state.p2[v] != max_p2:
            raise InternalInvariantError("X2 \\ X1 left argmax p2")
    witness = Witness(state.p1, state.p2, state.matched, expected_intersection)
    if not verify_witness(state.x1, state.x2, witness, expected_intersection,
                          state.omega1, state.omega2):
        raise InternalInvariantError("optimality witness failed after augment")


def _is_shifted_minimizer(omega: ValuationOracle, x: Subset,
                          potential: Sequence[Fraction], sign: int) -> bool:
    """Local (hence global) minimality of omega + sign*potential at x."""
    base = omega.value(x)
    if not base.is_finite:
        return False
    pot_x = sum(potential[v] for v in x.members())
    shifted_base = base.finite + sign * pot_x
    for u in x.members():
        for v in omega.ground.elements():
            if x.contains(v):
                continue
            moved = omega.value(x.exchange(u, v))
            if not moved.is_finite:
                continue
            shifted = moved.finite + sign * (pot_x - potential[u] + potential[v])
            if shifted < shifted_base:
                return False
    return True


def verify_witness(x1: Subset, x2: Subset, witness: Witness, k: int,
                   omega1: ValuationOracle, omega2: ValuationOracle,
                   exhaustive: bool = False) -> bool:
    """Check the optimality certificate for a pair feasible at level k.

    Verifies that the potentials agree pointwise, that X1 and X2 minimize
    the shifted valuations omega_1 - p1 and omega_2 + p2 (by the local
    exchange criterion, which is equivalent to global minimality for
    valuated matroids, or exhaustively on request), and that the witness's
    matched set F has size k, lies inside the intersection, and satisfies
    the argmin/argmax conditions on X1 \\ F and X2 \\ F.
    """
    p1, p2, matched = witness.p1, witness.p2, witness.matched
    if tuple(p1) != tuple(p2):
        return False
    if matched.cardinality() != k:
        return False
    if not matched.is_subset_of(x1.intersection(x2)):
        return False
    if exhaustive:
        if not _is_shifted_minimizer_exhaustive(omega1, x1, p1, -1):
            return False
        if not _is_shifted_minimizer_exhaustive(omega2, x2, p2, +1):
            return False
    else:
        if not _is_shifted_minimizer(omega1, x1, p1, -1):
            return False
        if not _is_shifted_minimizer(omega2, x2, p2, +1):
            return False
    min_p1 = min(p1)
    max_p2 = max(p2)
    for v in x1.minus(matched).members():
        if p1[v] != min_p1:
            return False
    for v in x2.minus(matched).members():
        if p2[v] != max_p2:
            return False
    return True


def _is_shifted_minimizer_exhaustive(omega: ValuationOracle, x: Subset,
                                     potential: Sequence[Fraction],
                                     sign: int) -> bool:
    base = omega.value(x)
    if not base.is_finite:
        return False
    shift_x = base.finite + sign * sum(potential[v] for v in x.members())
    for y in omega.enumerate_domain():
        shifted = omega.value(y).finite + sign * sum(
            potential[v] for v in y.members())
        if shifted < shift_x:
            return False
    return True


@dataclass
class LadderEntry:
    """Optimal solution for one intersection level of the augmenting run."""

    level: int
    x1: Subset
    x2: Subset
    value: ExtValue
    witness: Witness


@dataclass
class LadderResult:
    entries: list[LadderEntry]
    reached: int           # largest feasible level visited
    infeasible_beyond: bool
    stats: SolverStats


def run_ladder(omega1: ValuationOracle, omega2: ValuationOracle,
               k_max: int, check_invariants: bool = True,
               start: Optional[tuple[Subset, Subset]] = None) -> LadderResult:
    """Augment from unconstrained minimizers up to intersection k_max.

    The entry at level i is an optimal solution of the >=i problem with
    intersection exactly i; for levels at or above the starting
    intersection these are therefore also optima of the =i problem.
    Levels below the starting intersection are not visited.

    `start`, when given, must be a pair of unconstrained minimizers; the
    equality solver passes the complemented pair here so that the dualized
    run begins strictly below its target level.
    """
    stats = SolverStats()
    calls_before = omega1.calls + omega2.calls
    if omega2.ground != omega1.ground:
        raise InvalidInputError("valuations live on different ground sets")
    if start is None:
        x1, _ = minimize_valuated(omega1)
        x2, _ = minimize_valuated(omega2)
    else:
        x1, x2 = start
    n = omega1.ground.size
    zeros = (Fraction(0),) * n
    state = ViapState(omega1, omega2, x1, x2, zeros, zeros,
                      x1.intersection(x2), stats, check_invariants)
    entries: list[LadderEntry] = []
    start = state.intersection_size()
    entries.append(_entry_from_state(state, start))
    infeasible_beyond = False
    while state.intersection_size() < k_max:
        next_state = augment_step(state)
        if next_state is None:
            infeasible_beyond = True
            break
        state = next_state
        entries.append(_entry_from_state(state, state.intersection_size()))
    stats.oracle_calls = omega1.calls + omega2.calls - calls_before
    return LadderResult(entries, state.intersection_size(), infeasible_beyond,
                        stats)


def _entry_from_state(state: ViapState, level: int) -> LadderEntry:
    witness = Witness(state.p1, state.p2, state.matched, level)
    return LadderEntry(level, state.x1, state.x2, state.objective(), witness)


def _k_subset(subset: Subset, k: int) -> Subset:
    """The lexicographically first k-element subset of `subset`."""
    picked = subset.ground.empty()
    for v in subset.members():
        if picked.cardinality() == k:
            break
        picked = picked.add(v)
    return picked


def solve_v_geq_k(omega1: ValuationOracle, omega2: ValuationOracle, k: int,
                  check_invariants: bool = True,
                  start: Optional[tuple[Subset, Subset]] = None,
                  ) -> IntersectionSolution:
    """Minimize omega_1(X_1) + omega_2(X_2) with |X_1 intersect X_2| >= k.

    Starts from unconstrained minimizers; if they already intersect in at
    least k elements they are optimal (with zero potentials and any
    k-element matched subset as witness).  Otherwise augmenting raises the
    intersection one element per round until level k or until the sink
    becomes unreachable, which proves infeasibility; the last feasible
    level's solution is attached to an infeasible outcome for diagnostics.
    """
    if k < 0:
        raise InvalidInputError("k must be nonnegative")
    omega1.require_witness()
    omega2.require_witness()
    ladder = run_ladder(omega1, omega2, k, check_invariants, start)
    top = ladder.entries[-1]
    if top.level >= k:
        if ladder.entries[0].level >= k:
            first = ladder.entries[0]
            witness = Witness(first.witness.p1, first.witness.p2,
                              _k_subset(first.x1.intersection(first.x2), k), k)
            return IntersectionSolution("optimal", first.x1, first.x2,
                                        first.value, witness, k, "geq",
                                        ladder.stats.oracle_calls)
        return IntersectionSolution("optimal", top.x1, top.x2, top.value,
                                    top.witness, k, "geq",
                                    ladder.stats.oracle_calls)
    last = IntersectionSolution("optimal", top.x1, top.x2, top.value,
                                top.witness, top.level, "geq",
                                ladder.stats.oracle_calls)
    return IntersectionSolution("infeasible", k=k, mode="geq",
                                oracle_calls=ladder.stats.oracle_calls,
                                last_feasible=last)


def solve_v_eq_k(omega1: ValuationOracle, omega2: ValuationOracle, k: int,
                 check_invariants: bool = True) -> IntersectionSolution:
    """Minimize omega_1(X_1) + omega_2(X_2) with |X_1 intersect X_2| = k.

    When the unconstrained minimizers intersect in at most k elements the
    augmenting run stops exactly at level k.  Otherwise the problem is
    restated for omega_1 and the dual of omega_2 at level rank(omega_1) - k
    and solved the same way; the second set is complemented on the way
    back, and the returned witness certifies the dualized run.
    """
    if k < 0:
        raise InvalidInputError("k must be nonnegative")
    omega1.require_witness()
    omega2.require_witness()
    x1, _ = minimize_valuated(omega1)
    x2, _ = minimize_valuated(omega2)
    if intersection_cardinality(x1, x2) <= k:
        solution = solve_v_geq_k(omega1, omega2, k, check_invariants,
                                 start=(x1, x2))
        solution.mode = "eq-direct"
        return solution
    # Dualizing the second valuation turns the > k start into a strictly
    # below-target start, so the augmenting run ends exactly on target.
    dual2 = dual_valuation(omega2)
    target = omega1.rank - k
    if target < 0:
        return IntersectionSolution("infeasible", k=k, mode="eq-dual")
    dual_solution = solve_v_geq_k(omega1, dual2, target, check_invariants,
                                  start=(x1, x2.complement()))
    if not dual_solution.optimal:
        diagnostics = dual_solution.last_feasible
        if diagnostics is not None:
            # Map the diagnostic pair back to original coordinates.
            x2_diag = diagnostics.x2.complement()
            diagnostics = IntersectionSolution(
                "optimal", diagnostics.x1, x2_diag,
                omega1.value(diagnostics.x1) + omega2.value(x2_diag),
                None, omega1.rank - diagnostics.k, "eq-dual")
        return IntersectionSolution(
            "infeasible", k=k, mode="eq-dual",
            oracle_calls=dual_solution.oracle_calls,
            last_feasible=diagnostics)
    x2_back = dual_solution.x2.complement()
    value = omega1.value(dual_solution.x1) + omega2.value(x2_back)
    return IntersectionSolution("optimal", dual_solution.x1, x2_back, value,
                                dual_solution.witness, k, "eq-dual",
                                dual_solution.oracle_calls)


def verify_solution(solution: IntersectionSolution,
                    omega1: ValuationOracle, omega2: ValuationOracle,
                    exhaustive: bool = False) -> bool:
    """Re-check a solution's witness against the oracles it was solved on.

    Dual-mode solutions are verified on the dualized instance they were
    actually certified for.
    """
    if not solution.optimal or solution.witness is None:
        return False
    if solution.mode == "eq-dual":
        dual2 = dual_valuation(omega2)
        return verify_witness(solution.x1, solution.x2.complement(),
                              solution.witness, omega1.rank - solution.k,
                              omega1, dual2, exhaustive)
    return verify_witness(solution.x1, solution.x2, solution.witness,
                          solution.witness.k, omega1, omega2, exhaustive)
