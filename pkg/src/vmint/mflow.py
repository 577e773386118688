"""Desk-scale M-natural-convex submodular flow and the >= k reduction.

The flow problem minimizes h(boundary of xi) + sum of arc weights times
arc flows over integer flows within capacities, for an M-natural-convex h.
The solver is a negative-cycle-canceling loop on an exchange-augmented
residual structure: the residual arcs of the network are joined by
exchange arcs (x, y) whose cost is the change of h when the boundary moves
one unit from y to x.  A feasible flow is optimal exactly when this
auxiliary graph has no negative cycle; while one exists, the solver
cancels a negative cycle with the fewest arcs (ties by cost), which is
guaranteed not to increase the true objective beyond the cycle cost.  The
true objective is re-evaluated after every cancellation and must strictly
decrease, so termination follows from integrality and boundedness.

The cardinality-coupled minimization over two M-convex functions reduces
to this flow problem on a bipartite network between two copies of the
ground set, with interval indicators on two extra nodes encoding the
coupling lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .core import (
    INF,
    ExtValue,
    IntVector,
    InternalInvariantError,
    InvalidInputError,
    ResourceLimitError,
    componentwise_min,
)
from .valuated import MnatFunction

MAX_CANCEL_ITERATIONS = 100_000


@dataclass(frozen=True)
class FlowArc:
    tail: int
    head: int
    lower: Optional[int]      # None = -infinity
    upper: Optional[int]      # None = +infinity
    weight: Fraction

    def __post_init__(self):
        if self.tail == self.head:
            raise InvalidInputError("self-loop arcs are not supported")
        if self.lower is not None and self.upper is not None:
            if self.lower > self.upper:
                raise InvalidInputError("arc lower capacity exceeds upper")


@dataclass(frozen=True)
class FlowNetwork:
    num_nodes: int
    arcs: tuple[FlowArc, ...]

    def __post_init__(self):
        for arc in self.arcs:
            if not (0 <= arc.tail < self.num_nodes
                    and 0 <= arc.head < self.num_nodes):
                raise InvalidInputError("arc endpoint out of range")


@dataclass
class FlowSolution:
    status: str                              # optimal | infeasible | unbounded
    flow: Optional[tuple[int, ...]] = None
    boundary: Optional[IntVector] = None
    objective: ExtValue = INF

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def boundary(flow: Sequence[int], network: FlowNetwork) -> IntVector:
    """Per-node inflow minus outflow of a flow vector."""
    if len(flow) != len(network.arcs):
        raise InvalidInputError("flow dimension does not match the arc count")
    values = [0] * network.num_nodes
    for xi, arc in zip(flow, network.arcs):
        values[arc.head] += xi
        values[arc.tail] -= xi
    return IntVector(tuple(values))


def flow_objective(h: MnatFunction, network: FlowNetwork,
                   flow: Sequence[int]) -> ExtValue:
    linear = Fraction(0)
    for xi, arc in zip(flow, network.arcs):
        linear += arc.weight * xi
    return h.value(boundary(flow, network)) + linear


# ---------------------------------------------------------------------------
# Negative-cycle canceling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _AuxArc:
    tail: int
    head: int
    cost: Fraction
    arc_index: int      # network arc for residual moves, -1 for exchanges
    direction: int      # +1 push, -1 retract, 0 exchange


def _residual_arcs(network: FlowNetwork, flow: Sequence[int]) -> list[_AuxArc]:
    arcs = []
    for i, arc in enumerate(network.arcs):
        xi = flow[i]
        if arc.upper is None or xi < arc.upper:
            arcs.append(_AuxArc(arc.tail, arc.head, arc.weight, i, +1))
        if arc.lower is None or xi > arc.lower:
            arcs.append(_AuxArc(arc.head, arc.tail, -arc.weight, i, -1))
    return arcs


def _exchange_arcs(h: MnatFunction, current: IntVector,
                   base_value: Fraction) -> list[_AuxArc]:
    arcs = []
    for x in range(h.dimension):
        up = current.add_unit(x, +1)
        for y in range(h.dimension):
            if y == x:
                continue
            moved = h.value(up.add_unit(y, -1))
            if moved.is_finite:
                arcs.append(_AuxArc(x, y, moved.finite - base_value, -1, 0))
    return arcs


def _find_negative_cycles(num_nodes: int, aux_arcs: list[_AuxArc]):
    """Yield negative cycles ordered by (arc count, cost, anchor node).

    Dynamic programming over walk length: the first length at which a
    negative closed walk appears yields a simple cycle (a shorter negative
    closed walk would exist otherwise).  Longer candidates may repeat arcs
    and are validated by the caller before use.
    """
    incoming: list[list[int]] = [[] for _ in range(num_nodes)]
    for idx, arc in enumerate(aux_arcs):
        incoming[arc.head].append(idx)
    # best[u][v]: cheapest walk u -> v with exactly k arcs, plus parent arc.
    best: list[dict[int, Fraction]] = [dict() for _ in range(num_nodes)]
    parent: list[list[dict[int, int]]] = [[] for _ in range(num_nodes)]
    for u in range(num_nodes):
        best[u][u] = Fraction(0)
    for length in range(1, num_nodes + 1):
        new_best: list[dict[int, Fraction]] = [dict() for _ in range(num_nodes)]
        new_parent: list[dict[int, int]] = [dict() for _ in range(num_nodes)]
        for u in range(num_nodes):
            reach = best[u]
            if not reach:
                continue
            for v in range(num_nodes):
                chosen_cost = None
                chosen_arc = -1
                for idx in incoming[v]:
                    arc = aux_arcs[idx]
                    prev = reach.get(arc.tail)
                    if prev is None:
                        continue
                    cost = prev + arc.cost
                    if chosen_cost is None or cost < chosen_cost:
                        chosen_cost = cost
                        chosen_arc = idx
                if chosen_cost is not None:
                    new_best[u][v] = chosen_cost
                    new_parent[u][v] = chosen_arc
        for u in range(num_nodes):
            parent[u].append(new_parent[u])
            best[u] = new_best[u]
        negatives = sorted(
            (cost, u) for u in range(num_nodes)
            for v, cost in best[u].items() if v == u and cost < 0)
        for cost, anchor in negatives:
            cycle = _reconstruct_cycle(aux_arcs, parent, anchor, length)
            yield cycle


def _reconstruct_cycle(aux_arcs: list[_AuxArc],
                       parent: list[list[dict[int, int]]],
                       anchor: int, length: int) -> list[_AuxArc]:
    arcs: list[_AuxArc] = []
    node = anchor
    for k in range(length, 0, -1):
        idx = parent[anchor][k - 1][node]
        arc = aux_arcs[idx]
        arcs.append(arc)
        node = arc.tail
    arcs.reverse()
    return arcs


def _apply_cycle(network: FlowNetwork, flow: list[int],
                 cycle: list[_AuxArc]) -> Optional[list[int]]:
    """Apply one unit around a cycle; None if capacities cannot take it."""
    new_flow = list(flow)
    for arc in cycle:
        if arc.direction == 0:
            continue
        idx = arc.arc_index
        new_flow[idx] += arc.direction
        net_arc = network.arcs[idx]
        if net_arc.upper is not None and new_flow[idx] > net_arc.upper:
            return None
        if net_arc.lower is not None and new_flow[idx] < net_arc.lower:
            return None
    return new_flow


def _infinitely_repeatable(network: FlowNetwork, cycle: list[_AuxArc]) -> bool:
    """A cycle of residual arcs whose capacities never bind is repeatable
    forever; a negative one witnesses unboundedness."""
    for arc in cycle:
        if arc.direction == 0:
            return False
        net_arc = network.arcs[arc.arc_index]
        if arc.direction > 0 and net_arc.upper is not None:
            return False
        if arc.direction < 0 and net_arc.lower is not None:
            return False
    return True


def _cancel_negative_cycles(
        h: MnatFunction, network: FlowNetwork, flow: list[int],
        stop: Optional[Callable[[Sequence[int]], bool]] = None,
        max_iterations: int = MAX_CANCEL_ITERATIONS,
) -> tuple[list[int], str]:
    """Descend to a negative-cycle-free (hence optimal) flow.

    Candidate cycles come in fewest-arcs-first order; the first one whose
    application keeps capacities and strictly decreases the exact
    objective is taken.  Returns the final flow and a status string.
    """
    current = flow
    current_obj = flow_objective(h, network, current)
    if not current_obj.is_finite:
        raise InternalInvariantError("cycle canceling started infeasible")
    for _ in range(max_iterations):
        if stop is not None and stop(current):
            return current, "stopped"
        bnd = boundary(current, network)
        base = h.value(bnd)
        aux = _residual_arcs(network, current) + _exchange_arcs(
            h, bnd, base.finite)
        improved = False
        had_candidate = False
        for cycle in _find_negative_cycles(network.num_nodes, aux):
            had_candidate = True
            if _infinitely_repeatable(network, cycle):
                return current, "unbounded"
            candidate = _apply_cycle(network, current, cycle)
            if candidate is None:
                continue
            candidate_obj = flow_objective(h, network, candidate)
            if candidate_obj < current_obj:
                current = candidate
                current_obj = candidate_obj
                improved = True
                break
        if not improved:
            if had_candidate:
                raise InternalInvariantError(
                    "negative cycles remain but none improves the objective")
            return current, "optimal"
    raise ResourceLimitError("cycle canceling exceeded the iteration cap")


# ---------------------------------------------------------------------------
# Feasible starting flows
# ---------------------------------------------------------------------------

def _max_flow(num_nodes: int, capacities: dict[tuple[int, int], int],
              source: int, sink: int) -> dict[tuple[int, int], int]:
    """Integral max flow by BFS augmentation (desk scale)."""
    flow: dict[tuple[int, int], int] = {key: 0 for key in capacities}
    adjacency: list[set[int]] = [set() for _ in range(num_nodes)]
    for (u, v) in capacities:
        adjacency[u].add(v)
        adjacency[v].add(u)
    while True:
        parent: dict[int, tuple[int, int, bool]] = {}
        queue = [source]
        seen = {source}
        while queue:
            node = queue.pop(0)
            if node == sink:
                break
            for nxt in adjacency[node]:
                if nxt in seen:
                    continue
                forward = capacities.get((node, nxt), 0) - flow.get((node, nxt), 0)
                if forward > 0:
                    parent[nxt] = (node, nxt, True)
                    seen.add(nxt)
                    queue.append(nxt)
                    continue
                backward = flow.get((nxt, node), 0)
                if backward > 0:
                    parent[nxt] = (node, nxt, False)
                    seen.add(nxt)
                    queue.append(nxt)
        if sink not in seen:
            return flow
        # Find the bottleneck along the path, then push it.
        path = []
        node = sink
        while node != source:
            prev, nxt, forward = parent[node]
            path.append((prev, nxt, forward))
            node = prev
        bottleneck = None
        for prev, nxt, forward in path:
            room = (capacities[(prev, nxt)] - flow[(prev, nxt)]) if forward \
                else flow[(nxt, prev)]
            bottleneck = room if bottleneck is None else min(bottleneck, room)
        for prev, nxt, forward in path:
            if forward:
                flow[(prev, nxt)] += bottleneck
            else:
                flow[(nxt, prev)] -= bottleneck


def _flow_with_boundary(network: FlowNetwork,
                        target: IntVector) -> Optional[list[int]]:
    """An integral flow within capacities with the given boundary, if any.

    Infinite capacities are tightened exactly: after removing circulations
    a flow decomposes into at most demand-many unit paths, so no arc needs
    more than the total demand beyond its finite reference level.
    """
    if target.total() != 0:
        return None
    reference = []
    for arc in network.arcs:
        if arc.lower is not None:
            reference.append(arc.lower)
        elif arc.upper is not None and arc.upper < 0:
            reference.append(arc.upper)
        else:
            reference.append(0)
    residual_demand = IntVector(tuple(
        target[v] - b for v, b in enumerate(boundary(reference, network))))
    demand_total = sum(d for d in residual_demand if d > 0)
    # Pseudo-network for max flow: node count + super source and sink.
    source = network.num_nodes
    sink = network.num_nodes + 1
    capacities: dict[tuple[int, int], int] = {}
    arc_keys: list[tuple[int, int]] = []
    for i, arc in enumerate(network.arcs):
        room_up = demand_total if arc.upper is None \
            else min(arc.upper - reference[i], demand_total)
        room_down = demand_total if arc.lower is None \
            else min(reference[i] - arc.lower, demand_total)
        # Deviation from the reference level, split into two directed parts.
        key_fwd = (arc.tail, arc.head)
        key_bwd = (arc.head, arc.tail)
        capacities[key_fwd] = capacities.get(key_fwd, 0) + max(room_up, 0)
        capacities[key_bwd] = capacities.get(key_bwd, 0) + max(room_down, 0)
        arc_keys.append((i, max(room_up, 0), max(room_down, 0)))
    # A node needing net inflow drains into the super sink; a node needing
    # net outflow is fed from the super source.
    for v in range(network.num_nodes):
        d = residual_demand[v]
        if d > 0:
            capacities[(v, sink)] = d
        elif d < 0:
            capacities[(source, v)] = -d
    flow = _max_flow(network.num_nodes + 2, capacities, source, sink)
    drained = sum(flow.get((v, sink), 0) for v in range(network.num_nodes))
    if drained != demand_total:
        return None
    # Distribute the aggregated pair flows back to individual arcs.
    result = list(reference)
    for (i, room_up, room_down) in arc_keys:
        arc = network.arcs[i]
        key_fwd = (arc.tail, arc.head)
        key_bwd = (arc.head, arc.tail)
        take_up = min(room_up, max(flow.get(key_fwd, 0), 0))
        if take_up > 0:
            result[i] += take_up
            flow[key_fwd] -= take_up
        take_down = min(room_down, max(flow.get(key_bwd, 0), 0))
        if take_down > 0:
            result[i] -= take_down
            flow[key_bwd] -= take_down
    if boundary(result, network).entries != target.entries:
        return None
    return result


def solve_mnat_flow(h: MnatFunction, network: FlowNetwork,
                    start: Optional[Sequence[int]] = None,
                    domain_limit: int = 100_000) -> FlowSolution:
    """Minimize h(boundary) + weighted flow over integer feasible flows.

    When no starting flow is given, one is found by scanning the finite
    points of h inside its box and asking, per candidate boundary, for an
    integral flow realizing it (a max-flow subproblem); the box must be
    finite and small enough to scan.
    """
    if h.dimension != network.num_nodes:
        raise InvalidInputError("h dimension must equal the node count")
    flow = list(start) if start is not None else None
    if flow is not None:
        if not flow_objective(h, network, flow).is_finite:
            raise InvalidInputError("provided starting flow is infeasible")
    else:
        for candidate in h.iter_box(domain_limit):
            if not h.value(candidate).is_finite:
                continue
            found = _flow_with_boundary(network, candidate)
            if found is not None:
                flow = found
                break
        if flow is None:
            return FlowSolution("infeasible")
    final, status = _cancel_negative_cycles(h, network, flow)
    if status == "unbounded":
        return FlowSolution("unbounded")
    bnd = boundary(final, network)
    return FlowSolution("optimal", tuple(final), bnd,
                        flow_objective(h, network, final))


# ---------------------------------------------------------------------------
# Reduction of the cardinality-coupled problem
# ---------------------------------------------------------------------------

@dataclass
class CoupledInstance:
    """The flow encoding of min f1(x1) + f2(x2) + w(min(x1,x2)),
    sum of min(x1,x2) >= k.

    Nodes: copy-1 elements, then s, then copy-2 elements, then t.  Arc i
    of the identity block carries weight w(v); the side arcs to t and from
    s absorb the surplus of each copy.  The two extra coordinates of h are
    interval indicators whose widths encode the coupling bound.
    """

    f1: MnatFunction
    f2: MnatFunction
    k: int
    weights: tuple[Fraction, ...]
    h: MnatFunction
    h_feasibility: MnatFunction
    network: FlowNetwork
    r1: int
    r2: int

    @property
    def n(self) -> int:
        return self.f1.dimension

    def identity_arc(self, v: int) -> int:
        return v

    def to_sink_arc(self, v: int) -> int:
        return self.n + v

    def from_source_arc(self, v: int) -> int:
        return 2 * self.n + v


@dataclass
class CoupledSolution:
    status: str
    x1: Optional[IntVector] = None
    x2: Optional[IntVector] = None
    value: ExtValue = INF

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def build_mgeqk_instance(f1: MnatFunction, f2: MnatFunction, k: int,
                         weights: Sequence[Fraction]) -> CoupledInstance:
    """Build the flow instance for the coupled problem with w <= 0.

    The boundary at a copy-1 node is -x1(v) (the copy-1 block of h is
    evaluated with inverted sign), at a copy-2 node x2(v); the s and t
    coordinates range over the surplus intervals [0, r2 - k] and
    [0, r1 - k].  All arcs have lower capacity 0; upper capacities are the
    box bounds, which no flow with finite h can exceed.
    """
    n = f1.dimension
    if f2.dimension != n:
        raise InvalidInputError("functions have different dimensions")
    ws = tuple(Fraction(w) for w in weights)
    if len(ws) != n:
        raise InvalidInputError("need one weight per element")
    if any(w > 0 for w in ws):
        raise InvalidInputError("coupling weights must be nonpositive")
    if any(lo < 0 for lo in f1.box_lower) or any(lo < 0 for lo in f2.box_lower):
        raise InvalidInputError("domains must lie in the nonnegative orthant")
    r1 = f1.rank_total()
    r2 = f2.rank_total()
    if not 0 <= k <= min(r1, r2):
        raise InvalidInputError(f"k={k} out of range 0..min({r1},{r2})")

    def make_h(s_width: int, t_width: int, indicator: bool) -> MnatFunction:
        def value(z: IntVector) -> ExtValue:
            x1 = IntVector(tuple(-z[v] for v in range(n)))
            x2 = IntVector(tuple(z[n + 1 + v] for v in range(n)))
            surplus2 = -z[n]
            surplus1 = z[2 * n + 1]
            if not (0 <= surplus2 <= s_width and 0 <= surplus1 <= t_width):
                return INF
            v1 = f1.value(x1)
            if not v1.is_finite:
                return INF
            v2 = f2.value(x2)
            if not v2.is_finite:
                return INF
            if indicator:
                return ExtValue(0)
            return v1 + v2

        lower = tuple(-u for u in f1.box_upper) + (-s_width,) \
            + f2.box_lower + (0,)
        upper = tuple(-lo for lo in f1.box_lower) + (0,) \
            + f2.box_upper + (t_width,)
        witness = IntVector(tuple(-v for v in f1.require_witness())
                            + (0,) + f2.require_witness().entries + (0,))
        return MnatFunction(2 * n + 2, value, lower, upper, witness,
                            "coupled-h" if not indicator else "coupled-h-feas")

    h = make_h(r2 - k, r1 - k, indicator=False)
    h_feas = make_h(r2, r1, indicator=True)
    arcs = []
    for v in range(n):
        cap = min(f1.box_upper[v], f2.box_upper[v])
        arcs.append(FlowArc(v, n + 1 + v, 0, cap, ws[v]))
    for v in range(n):
        arcs.append(FlowArc(v, 2 * n + 1, 0, f1.box_upper[v], Fraction(0)))
    for v in range(n):
        arcs.append(FlowArc(n, n + 1 + v, 0, f2.box_upper[v], Fraction(0)))
    network = FlowNetwork(2 * n + 2, tuple(arcs))
    return CoupledInstance(f1, f2, k, ws, h, h_feas, network, r1, r2)


def solution_to_flow(x1: IntVector, x2: IntVector,
                     instance: CoupledInstance) -> list[int]:
    """The canonical flow of a solution pair: identity arcs carry the
    componentwise minimum, side arcs the one-sided surpluses."""
    n = instance.n
    flow = [0] * len(instance.network.arcs)
    for v in range(n):
        low = min(x1[v], x2[v])
        flow[instance.identity_arc(v)] = low
        flow[instance.to_sink_arc(v)] = x1[v] - low
        flow[instance.from_source_arc(v)] = x2[v] - low
    return flow


def flow_to_solution(flow: Sequence[int],
                     instance: CoupledInstance) -> tuple[IntVector, IntVector,
                                                         list[int]]:
    """Read a solution pair off a feasible flow, rerouting first.

    Rerouting moves, per element, the common part of the two side flows
    onto the identity arc; the boundary is unchanged and with nonpositive
    weights the objective cannot increase.  Afterwards one side arc per
    element is zero and the pair is read off directly.
    """
    n = instance.n
    rerouted = list(flow)
    for v in range(n):
        spill_out = rerouted[instance.to_sink_arc(v)]
        spill_in = rerouted[instance.from_source_arc(v)]
        shift = min(spill_out, spill_in)
        if shift > 0:
            rerouted[instance.identity_arc(v)] += shift
            rerouted[instance.to_sink_arc(v)] -= shift
            rerouted[instance.from_source_arc(v)] -= shift
    x1 = IntVector(tuple(rerouted[instance.identity_arc(v)]
                         + rerouted[instance.to_sink_arc(v)]
                         for v in range(n)))
    x2 = IntVector(tuple(rerouted[instance.identity_arc(v)]
                         + rerouted[instance.from_source_arc(v)]
                         for v in range(n)))
    return x1, x2, rerouted


def coupled_objective(instance: CoupledInstance, x1: IntVector,
                      x2: IntVector) -> ExtValue:
    v1 = instance.f1.value(x1)
    v2 = instance.f2.value(x2)
    if not (v1.is_finite and v2.is_finite):
        return INF
    low = componentwise_min(x1, x2)
    coupling = sum((w * low[v] for v, w in enumerate(instance.weights)),
                   Fraction(0))
    return v1 + v2 + coupling


def solve_m_geq_k_w(f1: MnatFunction, f2: MnatFunction, k: int,
                    weights: Sequence[Fraction]) -> CoupledSolution:
    """Minimize f1(x1) + f2(x2) + w(min(x1, x2)) subject to
    sum_v min(x1(v), x2(v)) >= k, for nonpositive w.

    Phase 1 maximizes the identity-arc mass (an indicator-cost flow
    problem) starting from the witness pair; reaching k proves
    feasibility, and exhausting improvements below k proves infeasibility.
    Phase 2 descends on the true objective from the phase-1 flow.
    """
    r1 = f1.rank_total()
    r2 = f2.rank_total()
    if k > min(r1, r2):
        return CoupledSolution("infeasible")
    instance = build_mgeqk_instance(f1, f2, k, weights)
    start = solution_to_flow(f1.require_witness(), f2.require_witness(),
                             instance)
    n = instance.n

    def identity_mass(flow: Sequence[int]) -> int:
        return sum(flow[instance.identity_arc(v)] for v in range(n))

    if identity_mass(start) < k:
        feas_net = FlowNetwork(instance.network.num_nodes, tuple(
            FlowArc(arc.tail, arc.head, arc.lower, arc.upper,
                    Fraction(-1) if i < n else Fraction(0))
            for i, arc in enumerate(instance.network.arcs)))
        start, status = _cancel_negative_cycles(
            instance.h_feasibility, feas_net, start,
            stop=lambda fl: identity_mass(fl) >= k)
        if status == "unbounded":
            raise InternalInvariantError("feasibility phase became unbounded")
        if identity_mass(start) < k:
            return CoupledSolution("infeasible")
    final, status = _cancel_negative_cycles(instance.h, instance.network,
                                            list(start))
    if status != "optimal":
        raise InternalInvariantError(f"descent ended with status {status}")
    x1, x2, rerouted = flow_to_solution(final, instance)
    value = coupled_objective(instance, x1, x2)
    flow_value = flow_objective(instance.h, instance.network, rerouted)
    if value != flow_value:
        raise InternalInvariantError(
            "solution and flow objectives disagree after rerouting")
    return CoupledSolution("optimal", x1, x2, value)
