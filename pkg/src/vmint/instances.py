"""Instance file parsing and report serialization.

Instances are single YAML documents.  All numbers that matter are exact
rationals serialized as strings ("3/4", "-2", "inf"); plain integers are
also accepted.  Reports are emitted in the same syntax with a fixed field
order so that identical inputs produce byte-identical reports.

Schema sketch::

    ground: {size: 3, labels: [a, b, c]}
    matroids:
      M1: {kind: uniform, rank: 2}
      M2: {kind: graphic, vertices: 3, edges: [[0, 1], [1, 2], [0, 2]]}
      M3: {kind: partition, blocks: [{members: [a, b], capacity: 1}, ...]}
      M4: {kind: linear, columns: [["1", "0"], ["0", "1"], ["1", "1"]]}
      M5: {kind: explicit, bases: [[a, b], [b, c]]}
    valuations:
      v1: {kind: modular_on_matroid, matroid: M1, weights: ["1", "2", "4"]}
      v2: {kind: size_constrained, rank: 2, weights: ["4", "2", "1"]}
      v3: {kind: dual_of, base: v1}
      v4: {kind: indicator, matroid: M2}
      v5: {kind: disjoint_sum, parts: [v1, v2]}
    mconvex:
      f1: {kind: laminar_hyperplane, rank: 2,
           box: {lower: [0, 0], upper: [2, 2]},
           terms: [{members: [a], start: 0, values: ["0", "1", "4"]}]}
      f2: {kind: from_valuation, valuation: v1}
    problem:
      type: v_geq_k         # or v_eq_k, v_leq_k, v_in, v_n_w, m_geq_k_w,
      oracles: [v1, v2]     #    w_eq_k_lpt, v_c, copic, recoverable_robust,
      k: 2                  #    congestion
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import yaml

from .core import (
    ExtValue,
    GroundSet,
    InvalidInputError,
    Subset,
    parse_rational,
)
from .matroid import (
    ExplicitBaseFamily,
    MatroidOracle,
    from_explicit_bases,
    make_graphic,
    make_linear,
    make_partition,
    make_uniform,
)
from .valuated import (
    ValuationOracle,
    MnatFunction,
    ConvexTable,
    LaminarSpec,
    disjoint_sum,
    dual_valuation,
    from_matroid_and_weights,
    indicator_of_matroid,
    laminar_convex_function,
    restrict_to_hyperplane,
    size_constrained_modular,
)

PROBLEM_TYPES = (
    "v_geq_k", "v_eq_k", "v_leq_k", "v_in", "v_n_w", "m_geq_k_w",
    "w_eq_k_lpt", "v_c", "copic", "recoverable_robust", "congestion",
)


class ParseError(InvalidInputError):
    """Instance file violates the schema; the message names the field."""


class Instance:
    """A parsed instance: ground set, named oracles, and a problem section."""

    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise ParseError("instance document must be a mapping")
        self.raw = raw
        self.ground = self._parse_ground(raw.get("ground"))
        self.matroids: dict[str, MatroidOracle] = {}
        for name, spec in (raw.get("matroids") or {}).items():
            self.matroids[name] = self._build_matroid(name, spec)
        self.valuations: dict[str, ValuationOracle] = {}
        for name, spec in (raw.get("valuations") or {}).items():
            self.valuations[name] = self._build_valuation(name, spec)
        self.mconvex: dict[str, MnatFunction] = {}
        for name, spec in (raw.get("mconvex") or {}).items():
            self.mconvex[name] = self._build_mconvex(name, spec)
        problem = raw.get("problem")
        if not isinstance(problem, dict) or "type" not in problem:
            raise ParseError("problem: section with a type field is required")
        if problem["type"] not in PROBLEM_TYPES:
            raise ParseError(f"problem.type: unknown type {problem['type']!r}")
        self.problem = problem

    # -- section parsers ---------------------------------------------------

    def _parse_ground(self, spec) -> GroundSet:
        if not isinstance(spec, dict) or "size" not in spec:
            raise ParseError("ground: mapping with a size field is required")
        labels = spec.get("labels")
        if labels is not None:
            labels = tuple(str(lbl) for lbl in labels)
        try:
            return GroundSet(int(spec["size"]), labels)
        except InvalidInputError as exc:
            raise ParseError(f"ground: {exc}") from exc

    def _subset(self, field: str, members) -> Subset:
        if not isinstance(members, list):
            raise ParseError(f"{field}: expected a list of elements")
        indices = []
        for member in members:
            if isinstance(member, int):
                indices.append(member)
            else:
                indices.append(self.ground.index_of(str(member)))
        return self.ground.subset(indices)

    def _weights(self, field: str, values) -> tuple[Fraction, ...]:
        if not isinstance(values, list) or len(values) != self.ground.size:
            raise ParseError(f"{field}: expected {self.ground.size} rationals")
        try:
            return tuple(parse_rational(v) for v in values)
        except InvalidInputError as exc:
            raise ParseError(f"{field}: {exc}") from exc

    def _build_matroid(self, name: str, spec) -> MatroidOracle:
        field = f"matroids.{name}"
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ParseError(f"{field}: mapping with a kind field is required")
        kind = str(spec["kind"]).replace("-", "_")
        try:
            if kind == "uniform":
                return make_uniform(self.ground, int(spec["rank"]))
            if kind == "partition":
                blocks = [(self._subset(f"{field}.blocks", b["members"]),
                           int(b["capacity"])) for b in spec["blocks"]]
                return make_partition(self.ground, blocks)
            if kind == "graphic":
                edges = [(int(u), int(v)) for u, v in spec["edges"]]
                if len(edges) != self.ground.size:
                    raise ParseError(
                        f"{field}.edges: need one edge per ground element")
                return make_graphic(int(spec["vertices"]), edges,
                                    self.ground.labels)
            if kind == "linear":
                return make_linear(self.ground, spec["columns"])
            if kind == "explicit":
                bases = tuple(self._subset(f"{field}.bases", b)
                              for b in spec["bases"])
                return from_explicit_bases(
                    ExplicitBaseFamily(self.ground, bases))
        except KeyError as exc:
            raise ParseError(f"{field}: missing field {exc}") from exc
        raise ParseError(f"{field}.kind: unknown kind {kind!r}")

    def _build_valuation(self, name: str, spec) -> ValuationOracle:
        field = f"valuations.{name}"
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ParseError(f"{field}: mapping with a kind field is required")
        kind = str(spec["kind"]).replace("-", "_")
        try:
            if kind == "modular_on_matroid":
                matroid = self.named_matroid(field, spec["matroid"])
                return from_matroid_and_weights(
                    matroid, self._weights(f"{field}.weights", spec["weights"]))
            if kind == "size_constrained":
                return size_constrained_modular(
                    self.ground,
                    self._weights(f"{field}.weights", spec["weights"]),
                    int(spec["rank"]))
            if kind == "dual_of":
                return dual_valuation(self.named_valuation(field, spec["base"]))
            if kind == "indicator":
                return indicator_of_matroid(
                    self.named_matroid(field, spec["matroid"]))
            if kind == "disjoint_sum":
                parts = [self.named_valuation(field, p) for p in spec["parts"]]
                return disjoint_sum(parts)[0]
        except KeyError as exc:
            raise ParseError(f"{field}: missing field {exc}") from exc
        raise ParseError(f"{field}.kind: unknown kind {kind!r}")

    def _build_mconvex(self, name: str, spec) -> MnatFunction:
        field = f"mconvex.{name}"
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ParseError(f"{field}: mapping with a kind field is required")
        kind = str(spec["kind"]).replace("-", "_")
        try:
            if kind == "laminar_hyperplane":
                members = []
                tables = []
                for i, term in enumerate(spec["terms"]):
                    members.append(self._subset(
                        f"{field}.terms[{i}].members", term["members"]))
                    values = tuple(parse_rational(v) for v in term["values"])
                    tables.append(ConvexTable(int(term.get("start", 0)), values))
                lam = LaminarSpec(self.ground, tuple(members), tuple(tables))
                box = spec.get("box")
                lower = upper = None
                if box is not None:
                    lower = [int(v) for v in box["lower"]]
                    upper = [int(v) for v in box["upper"]]
                fn = laminar_convex_function(lam, lower, upper)
                if "rank" in spec:
                    restricted = restrict_to_hyperplane(fn, int(spec["rank"]))
                    if isinstance(restricted, ValuationOracle):
                        from .apps import mnat_from_valuation
                        return mnat_from_valuation(restricted)
                    return restricted
                return fn
            if kind == "from_valuation":
                from .apps import mnat_from_valuation
                return mnat_from_valuation(
                    self.named_valuation(field, spec["valuation"]))
        except KeyError as exc:
            raise ParseError(f"{field}: missing field {exc}") from exc
        raise ParseError(f"{field}.kind: unknown kind {kind!r}")

    # -- lookups (also the CLI's resolution surface) -------------------------

    def named_matroid(self, field: str, name) -> MatroidOracle:
        if name not in self.matroids:
            raise ParseError(f"{field}: unknown matroid {name!r}")
        return self.matroids[name]

    def named_valuation(self, field: str, name) -> ValuationOracle:
        if name not in self.valuations:
            raise ParseError(f"{field}: unknown valuation {name!r}")
        return self.valuations[name]

    def named_mconvex(self, field: str, name) -> MnatFunction:
        if name not in self.mconvex:
            raise ParseError(f"{field}: unknown mconvex function {name!r}")
        return self.mconvex[name]

    def weights_field(self, field: str, values) -> tuple[Fraction, ...]:
        return self._weights(field, values)


def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            location = f" at line {mark.line + 1}" if mark else ""
            raise ParseError(f"YAML parse error{location}: {exc}") from exc
    return Instance(raw)


def parse_instance_text(text: str) -> Instance:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        location = f" at line {mark.line + 1}" if mark else ""
        raise ParseError(f"YAML parse error{location}: {exc}") from exc
    return Instance(raw)


# -- report helpers ---------------------------------------------------------

def subset_out(subset: Optional[Subset]) -> Optional[list]:
    if subset is None:
        return None
    return list(subset.member_labels())


def value_out(value: ExtValue) -> str:
    return str(value)


def rationals_out(values) -> list[str]:
    return [str(v) for v in values]


def dump_report(report: dict) -> str:
    """Serialize a report with stable key order (insertion order)."""
    return yaml.dump(report, sort_keys=False, default_flow_style=False,
                     allow_unicode=True)
