"""Valuated matroid intersection and the reductions built on it.

Valuated matroid intersection (minimize omega(X) + omega'(X) over common
rank-sized sets) is solved by forcing the intersection of the augmenting
pair up to the full rank.  The multi-valuation problems reduce to it over
n disjoint copies of the ground set: the objective becomes a disjoint sum
and the coupling constraint (intersection in a matroid, or a penalty on
elements picked by every copy) becomes a second valuated matroid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    INF,
    EmptyDomainError,
    ExtValue,
    InvalidInputError,
    Subset,
)
from .matroid import MatroidOracle, make_uniform
from .valuated import (
    LaminarSpec,
    TupleGround,
    ValuationOracle,
    check_mnat_exchange,
    disjoint_sum,
    dual_valuation,
    intersection_constraint_valuation,
    laminar_convex_function,
    laminar_penalty,
)
from .viap import IntersectionSolution, solve_v_geq_k

# The count-space exchange validation is quadratic in the box volume, so
# the default only covers genuinely small boxes; raise it to force the
# check on bigger instances.
MNAT_CHECK_LIMIT = 256


@dataclass
class TupleSolution:
    """Outcome of a reduction solve over n copies of the ground set."""

    status: str                      # "optimal" | "infeasible"
    parts: Optional[tuple[Subset, ...]] = None
    value: ExtValue = INF
    inner: Optional[IntersectionSolution] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def solve_vmi(omega: ValuationOracle, omega2: ValuationOracle,
              check_invariants: bool = True) -> IntersectionSolution:
    """Minimize omega(X) + omega2(X) over a common set X.

    Realized as the >= rank intersection problem, which forces X1 = X2.
    A rank mismatch makes the sum identically +infinity, so it is reported
    as infeasible rather than as an error.
    """
    if omega.rank != omega2.rank:
        return IntersectionSolution("infeasible", k=omega.rank, mode="geq")
    solution = solve_v_geq_k(omega, omega2, omega.rank, check_invariants)
    return solution


def solve_v_In(omegas: Sequence[ValuationOracle], constraint: MatroidOracle,
               check_invariants: bool = True) -> TupleSolution:
    """Minimize the sum of the valuations with the common intersection
    independent in `constraint`.

    Reduces to valuated matroid intersection of the disjoint sum and the
    0/+infinity valuation of the constraint family over the copies.
    """
    if not omegas:
        raise InvalidInputError("need at least one valuation")
    for om in omegas:
        om.require_witness()
    sum_oracle, tg = disjoint_sum(omegas)
    delta, _ = intersection_constraint_valuation(len(omegas), constraint,
                                                 sum_oracle.rank)
    if delta.witness_base is None:
        return TupleSolution("infeasible")
    inner = solve_vmi(sum_oracle, delta, check_invariants)
    if not inner.optimal:
        return TupleSolution("infeasible", inner=inner)
    return TupleSolution("optimal", tg.to_parts(inner.x1), inner.value, inner)


def solve_v_leq_k(omega1: ValuationOracle, omega2: ValuationOracle, k: int,
                  check_invariants: bool = True) -> IntersectionSolution:
    """Minimize omega_1(X_1) + omega_2(X_2) with |X_1 intersect X_2| <= k.

    The <= k constraint is intersection membership in a uniform matroid,
    so this is the two-valuation case of :func:`solve_v_In`.
    """
    if k < 0:
        raise InvalidInputError("k must be nonnegative")
    ground = omega1.ground
    constraint = make_uniform(ground, min(k, ground.size))
    outcome = solve_v_In([omega1, omega2], constraint, check_invariants)
    if not outcome.optimal:
        return IntersectionSolution("infeasible", k=k, mode="leq")
    x1, x2 = outcome.parts
    return IntersectionSolution("optimal", x1, x2, outcome.value,
                                outcome.inner.witness, k, "leq",
                                outcome.inner.oracle_calls)


def solve_v_geq_k_via_dual(omega1: ValuationOracle, omega2: ValuationOracle,
                           k: int,
                           check_invariants: bool = True) -> IntersectionSolution:
    """Alternative route for the >= k problem, used for cross-checking.

    |X_1 intersect X_2| >= k is |X_1 intersect (V \\ X_2)| <= rank_1 - k
    for the dual of omega_2, which goes through :func:`solve_v_leq_k`.
    """
    if k < 0:
        raise InvalidInputError("k must be nonnegative")
    target = omega1.rank - k
    if target < 0:
        return IntersectionSolution("infeasible", k=k, mode="geq")
    dual2 = dual_valuation(omega2)
    solved = solve_v_leq_k(omega1, dual2, target, check_invariants)
    if not solved.optimal:
        return IntersectionSolution("infeasible", k=k, mode="geq")
    x2 = solved.x2.complement()
    value = omega1.value(solved.x1) + omega2.value(x2)
    return IntersectionSolution("optimal", solved.x1, x2, value, None, k,
                                "geq", solved.oracle_calls)


def solve_v_n_w(omegas: Sequence[ValuationOracle], weights: Sequence[Fraction],
                check_invariants: bool = True) -> TupleSolution:
    """Minimize sum of the valuations plus w(common intersection), w >= 0.

    The penalty lifts to a laminar convex valuation over the copies
    (negative weights are rejected; that regime belongs to the submodular
    flow route or brute force).
    """
    if not omegas:
        raise InvalidInputError("need at least one valuation")
    ws = tuple(Fraction(w) for w in weights)
    if any(w < 0 for w in ws):
        raise InvalidInputError(
            "negative penalty weights: use the submodular-flow solver for "
            "w <= 0, or brute force for mixed signs")
    for om in omegas:
        om.require_witness()
    sum_oracle, tg = disjoint_sum(omegas)
    penalty, _ = laminar_penalty(ws, len(omegas), sum_oracle.rank,
                                 omegas[0].ground)
    inner = solve_vmi(sum_oracle, penalty, check_invariants)
    if not inner.optimal:
        return TupleSolution("infeasible", inner=inner)
    return TupleSolution("optimal", tg.to_parts(inner.x1), inner.value, inner)


def lift_laminar_to_copies(spec: LaminarSpec, tg: TupleGround,
                           rank: int) -> ValuationOracle:
    """Restrict a laminar convex function of copy counts to rank-sized tuples.

    Each laminar member X lifts to the set of all copies of its elements;
    the member sums then count, per member, how many copies picked its
    elements.  The hyperplane restriction of the lifted function is a
    valuated matroid on the copies.
    """
    member_data = tuple((member.mask, table)
                        for member, table in zip(spec.members, spec.tables))
    base_size = tg.base.size

    def value(subset: Subset) -> ExtValue:
        total = ExtValue(0)
        for member_mask, table in member_data:
            count = 0
            for i in range(tg.n):
                count += bin(subset.mask >> (i * base_size) & member_mask).count("1")
            term = table.at(count)
            if not term.is_finite:
                return INF
            total = total + term
        return total

    witness = None
    for candidate in tg.combined.subsets_of_size(rank):
        if value(candidate).is_finite:
            witness = candidate
            break
    if witness is None:
        raise EmptyDomainError("lifted laminar valuation has an empty domain")
    return ValuationOracle(tg.combined, rank, value, witness, "laminar-lift")


def solve_sum_valuated_plus_laminar(omegas: Sequence[ValuationOracle],
                                    phi: LaminarSpec,
                                    check_invariants: bool = True,
                                    mnat_check_limit: int = MNAT_CHECK_LIMIT,
                                    ) -> TupleSolution:
    """Minimize sum of the valuations plus a laminar convex function of the
    copy counts (how many of the n sets picked each element).

    This is the generalized penalty problem behind congestion games.  The
    laminar structure is validated (convex tables are enforced by
    construction; the exchange axiom of the count-space function is
    additionally checked exhaustively when its box is desk-scale).
    """
    if not omegas:
        raise InvalidInputError("need at least one valuation")
    n = len(omegas)
    ground = omegas[0].ground
    if phi.ground != ground:
        raise InvalidInputError("laminar spec is on a different ground set")
    box_volume = (n + 1) ** ground.size
    if box_volume <= mnat_check_limit:
        counts_fn = laminar_convex_function(
            phi, box_lower=(0,) * ground.size, box_upper=(n,) * ground.size)
        if not check_mnat_exchange(counts_fn, max(box_volume, 1)):
            raise InvalidInputError(
                "count-space function failed the exchange axiom check")
    for om in omegas:
        om.require_witness()
    sum_oracle, tg = disjoint_sum(omegas)
    lifted = lift_laminar_to_copies(phi, tg, sum_oracle.rank)
    inner = solve_vmi(sum_oracle, lifted, check_invariants)
    if not inner.optimal:
        return TupleSolution("infeasible", inner=inner)
    return TupleSolution("optimal", tg.to_parts(inner.x1), inner.value, inner)
