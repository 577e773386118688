"""Submodular flow at desk scale and the coupled >= k reduction."""

import random
from fractions import Fraction

import pytest

from vmint.core import (
    ExtValue,
    GroundSet,
    IntVector,
    InvalidInputError,
    componentwise_min,
)
from vmint.bruteforce import brute_m_geq_k_w, brute_v_geq_k
from vmint.matroid import make_uniform
from vmint.mflow import (
    FlowArc,
    FlowNetwork,
    boundary,
    build_mgeqk_instance,
    coupled_objective,
    flow_objective,
    flow_to_solution,
    solution_to_flow,
    solve_m_geq_k_w,
    solve_mnat_flow,
)
from vmint.rand_instances import random_mconvex_pair, random_rational
from vmint.valuated import MnatFunction, check_mnat_exchange, from_matroid_and_weights
from vmint.apps import mnat_from_valuation


class TestBoundary:
    def test_single_arc(self):
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 5, Fraction(0)),))
        assert boundary([2], net) == IntVector((-2, 2))

    def test_zero_flow(self):
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 5, Fraction(0)),))
        assert boundary([0], net) == IntVector((0, 0))

    def test_opposite_arcs_cancel(self):
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 5, Fraction(0)),
                              FlowArc(1, 0, 0, 5, Fraction(0))))
        assert boundary([1, 1], net) == IntVector((0, 0))

    def test_dimension_checked(self):
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 5, Fraction(0)),))
        with pytest.raises(InvalidInputError):
            boundary([1, 2], net)


def _quadratic_h(n: int, radius: int = 3) -> MnatFunction:
    def value(x):
        return ExtValue(sum(v * v for v in x.entries))

    return MnatFunction(n, value, (-radius,) * n, (radius,) * n,
                        IntVector((0,) * n))


class TestGenericFlow:
    def test_zero_flow_optimal(self):
        h = _quadratic_h(2)
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 5, Fraction(0)),))
        out = solve_mnat_flow(h, net)
        assert out.optimal and out.objective == ExtValue(0)
        assert out.flow == (0,)

    def test_forced_arc(self):
        h = _quadratic_h(2)
        net = FlowNetwork(2, (FlowArc(0, 1, 2, 2, Fraction(1)),))
        out = solve_mnat_flow(h, net)
        assert out.objective == ExtValue(10)  # 4 + 4 + 1*2

    def test_profitable_arc_saturates(self):
        h = _quadratic_h(2)
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 2, Fraction(-10)),))
        out = solve_mnat_flow(h, net)
        assert out.flow == (2,)
        assert out.objective == ExtValue(-12)

    def test_unbounded_detected(self):
        def flat(x):
            return ExtValue(0)

        h = MnatFunction(2, flat, (-2, -2), (2, 2), IntVector((0, 0)))
        net = FlowNetwork(2, (FlowArc(0, 1, 0, None, Fraction(-1)),
                              FlowArc(1, 0, 0, None, Fraction(0))))
        out = solve_mnat_flow(h, net)
        assert out.status == "unbounded"

    def test_infeasible_when_no_boundary_realizable(self):
        from vmint.core import INF

        def pinned(x):
            return ExtValue(0) if x.entries == (-3, 3) else INF

        h = MnatFunction(2, pinned, (-3, -3), (3, 3), None)
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 1, Fraction(0)),))
        out = solve_mnat_flow(h, net)
        assert out.status == "infeasible"

    def test_negative_flow_through_infinite_lower_bound(self):
        # The cheapest boundary needs one unit moved against the arc.
        def target(x):
            return ExtValue(abs(x[0] - 1) + abs(x[1] + 1))

        h = MnatFunction(2, target, (-2, -2), (2, 2), None)
        net = FlowNetwork(2, (FlowArc(0, 1, None, 4, Fraction(0)),))
        out = solve_mnat_flow(h, net)
        assert out.optimal
        assert out.flow == (-1,)
        assert out.objective == ExtValue(0)

    def test_parallel_arcs_split_demand(self):
        def target(x):
            return ExtValue(abs(x[0] + 2) + abs(x[1] - 2))

        h = MnatFunction(2, target, (-3, -3), (3, 3), None)
        net = FlowNetwork(2, (FlowArc(0, 1, 0, 1, Fraction(0)),
                              FlowArc(0, 1, 0, 1, Fraction(0))))
        out = solve_mnat_flow(h, net)
        assert out.optimal
        assert out.objective == ExtValue(0)
        assert out.flow == (1, 1)


class TestInstanceConstruction:
    def _pair(self, rng=None):
        rng = rng or random.Random(4)
        return random_mconvex_pair(rng, 2, max_entry=2)

    def test_arc_count(self):
        f1, f2 = self._pair()
        inst = build_mgeqk_instance(f1, f2, 0, [0, 0])
        assert len(inst.network.arcs) == 3 * 2

    def test_weight_sign_rejected(self):
        f1, f2 = self._pair()
        with pytest.raises(InvalidInputError):
            build_mgeqk_instance(f1, f2, 0, [1, 0])

    def test_k_range_rejected(self):
        f1, f2 = self._pair()
        with pytest.raises(InvalidInputError):
            build_mgeqk_instance(f1, f2, min(f1.rank_total(),
                                             f2.rank_total()) + 1, [0, 0])

    def test_h_is_mnat_convex(self):
        rng = random.Random(5150)
        for _ in range(5):
            f1, f2 = random_mconvex_pair(rng, 2, max_entry=2)
            k = rng.randint(0, min(f1.rank_total(), f2.rank_total()))
            inst = build_mgeqk_instance(f1, f2, k, [0, -1])
            assert check_mnat_exchange(inst.h, 100_000)

    def test_surplus_interval_widths(self):
        f1, f2 = self._pair()
        r1, r2 = f1.rank_total(), f2.rank_total()
        k = min(r1, r2)
        inst = build_mgeqk_instance(f1, f2, k, [0, 0])
        n = inst.n
        # s coordinate: [-(r2-k), 0]; t coordinate: [0, r1-k].
        assert inst.h.box_lower[n] == -(r2 - k)
        assert inst.h.box_upper[2 * n + 1] == r1 - k


class TestFlowConversions:
    def test_equal_vectors_no_side_flow(self):
        rng = random.Random(6)
        f1, f2 = random_mconvex_pair(rng, 2, max_entry=2)
        inst = build_mgeqk_instance(f1, f2, 0, [0, 0])
        x = f1.require_witness()
        if f2.value(x).is_finite:
            flow = solution_to_flow(x, x, inst)
            assert all(flow[inst.to_sink_arc(v)] == 0 for v in range(2))
            assert all(flow[inst.from_source_arc(v)] == 0 for v in range(2))

    def test_eq6_with_surplus(self):
        g1 = GroundSet(1)

        def f(x):
            return ExtValue(0)

        f1 = MnatFunction(1, f, (0,), (3,), IntVector((3,)))
        f2 = MnatFunction(1, f, (0,), (3,), IntVector((1,)))
        inst = build_mgeqk_instance(f1, f2, 1, [0])
        flow = solution_to_flow(IntVector((3,)), IntVector((1,)), inst)
        assert flow[inst.identity_arc(0)] == 1
        assert flow[inst.to_sink_arc(0)] == 2
        assert flow[inst.from_source_arc(0)] == 0

    def test_objectives_coincide(self):
        rng = random.Random(7)
        for _ in range(10):
            f1, f2 = random_mconvex_pair(rng, rng.randint(1, 3))
            w = [-abs(random_rational(rng, 0, 5)) for _ in range(f1.dimension)]
            inst = build_mgeqk_instance(f1, f2, 0, w)
            x1, x2 = f1.require_witness(), f2.require_witness()
            flow = solution_to_flow(x1, x2, inst)
            assert flow_objective(inst.h, inst.network, flow) == \
                coupled_objective(inst, x1, x2)

    def test_reroute_formula_and_monotonicity(self):
        def f(x):
            return ExtValue(0)

        f1 = MnatFunction(1, f, (0,), (5,), IntVector((3,)))
        f2 = MnatFunction(1, f, (0,), (5,), IntVector((3,)))
        inst = build_mgeqk_instance(f1, f2, 0, [-1])
        # Hand-built wasteful flow: identity 0, both side arcs 3.
        flow = [0, 3, 3]
        before = flow_objective(inst.h, inst.network, flow)
        x1, x2, rerouted = flow_to_solution(flow, inst)
        after = flow_objective(inst.h, inst.network, rerouted)
        assert (x1, x2) == (IntVector((3,)), IntVector((3,)))
        assert rerouted == [3, 0, 0]
        assert after < before  # strictly, since w < 0 and min > 0


class TestCoupledSolve:
    def test_decoupled_when_unconstrained(self):
        rng = random.Random(8)
        f1, f2 = random_mconvex_pair(rng, 2)
        out = solve_m_geq_k_w(f1, f2, 0, [0, 0])
        best1 = min(f1.value(x) for x in f1.enumerate_domain())
        best2 = min(f2.value(x) for x in f2.enumerate_domain())
        assert out.value == best1 + best2

    def test_k_too_large_infeasible(self):
        rng = random.Random(9)
        f1, f2 = random_mconvex_pair(rng, 2)
        k = min(f1.rank_total(), f2.rank_total()) + 1
        assert solve_m_geq_k_w(f1, f2, k, [0, 0]).status == "infeasible"

    def test_zero_one_case_matches_viap(self):
        g3 = GroundSet(3, ("a", "b", "c"))
        u23 = make_uniform(g3, 2)
        omega1 = from_matroid_and_weights(u23, [1, 2, 4])
        omega2 = from_matroid_and_weights(u23, [4, 2, 1])
        f1 = mnat_from_valuation(omega1)
        f2 = mnat_from_valuation(omega2)
        for k in range(0, 3):
            flow_out = solve_m_geq_k_w(f1, f2, k, [0, 0, 0])
            viap_out = brute_v_geq_k(omega1, omega2, k)
            assert flow_out.status == viap_out.status
            if flow_out.optimal:
                assert flow_out.value == viap_out.value

    def test_random_vs_brute(self):
        rng = random.Random(10101)
        for _ in range(30):
            dim = rng.randint(1, 3)
            f1, f2 = random_mconvex_pair(rng, dim)
            k = rng.randint(0, min(f1.rank_total(), f2.rank_total()) + 1)
            w = [-abs(random_rational(rng, 0, 6)) for _ in range(dim)]
            fast = solve_m_geq_k_w(f1, f2, k, w)
            slow = brute_m_geq_k_w(f1, f2, k, w)
            assert fast.status == slow.status
            if fast.optimal:
                assert fast.value == slow.value
                low = componentwise_min(fast.x1, fast.x2)
                assert low.total() >= k
