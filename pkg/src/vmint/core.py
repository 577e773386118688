"""Exact arithmetic, ground sets, subsets, and integer vectors.

Every cost, weight, and potential in this package is an exact rational
(`fractions.Fraction`), extended with a single +infinity element through
:class:`ExtValue`.  Minus infinity is deliberately not representable;
arithmetic that would produce it raises instead of silently wrapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

RationalLike = Union[int, Fraction, str]


class InvalidInputError(ValueError):
    """A caller violated a documented precondition."""


class ResourceLimitError(RuntimeError):
    """An exhaustive operation would exceed its configured limit."""


class EmptyDomainError(RuntimeError):
    """An oracle has no finite-valued point, so there is nothing to optimize."""


class InternalInvariantError(RuntimeError):
    """An algorithm invariant failed; indicates a bug, not bad input."""


def parse_rational(text: RationalLike) -> Fraction:
    """Parse an exact rational from an int, Fraction, or "p/q" string."""
    if isinstance(text, bool):
        raise InvalidInputError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"not a rational: {text!r}") from exc
    raise InvalidInputError(f"not a rational: {text!r}")


class ExtValue:
    """An exact rational extended with +infinity.

    +infinity absorbs under addition and compares greater than every
    rational.  Subtracting infinity (or anything that would yield
    -infinity) raises :class:`ArithmeticError`.
    """

    __slots__ = ("_num",)

    def __init__(self, value: Optional[RationalLike]):
        if value is None:
            self._num: Optional[Fraction] = None
        else:
            self._num = parse_rational(value)

    @staticmethod
    def infinity() -> "ExtValue":
        return ExtValue(None)

    @staticmethod
    def of(value: RationalLike) -> "ExtValue":
        return ExtValue(value)

    @staticmethod
    def parse(text: str) -> "ExtValue":
        if text.strip() in ("inf", "+inf", "infinity"):
            return ExtValue(None)
        return ExtValue(parse_rational(text))

    @property
    def is_finite(self) -> bool:
        return self._num is not None

    @property
    def finite(self) -> Fraction:
        if self._num is None:
            raise ArithmeticError("value is +infinity")
        return self._num

    def _coerce(self, other: object) -> "ExtValue":
        if isinstance(other, ExtValue):
            return other
        if isinstance(other, (int, Fraction)):
            return ExtValue(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "ExtValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        if self._num is None or rhs._num is None:
            return INF
        return ExtValue(self._num + rhs._num)

    __radd__ = __add__

    def __sub__(self, other: object) -> "ExtValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        if rhs._num is None:
            raise ArithmeticError("cannot subtract +infinity")
        if self._num is None:
            return INF
        return ExtValue(self._num - rhs._num)

    def __neg__(self) -> "ExtValue":
        if self._num is None:
            raise ArithmeticError("-infinity is not representable")
        return ExtValue(-self._num)

    def __mul__(self, other: object) -> "ExtValue":
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        if self._num is None or rhs._num is None:
            raise ArithmeticError("multiplication with +infinity is undefined")
        return ExtValue(self._num * rhs._num)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self._num == rhs._num

    def __hash__(self) -> int:
        return hash(self._num)

    def __lt__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        if self._num is None:
            return False
        if rhs._num is None:
            return True
        return self._num < rhs._num

    def __le__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return self == rhs or self < rhs

    def __gt__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return rhs < self

    def __ge__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is NotImplemented:
            return NotImplemented
        return rhs <= self

    def __repr__(self) -> str:
        return f"ExtValue({str(self)})"

    def __str__(self) -> str:
        return "inf" if self._num is None else str(self._num)


INF = ExtValue.infinity()
ZERO = ExtValue(0)


@dataclass(frozen=True)
class GroundSet:
    """A finite ground set of `size` elements, optionally labelled."""

    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise InvalidInputError("ground set must have at least one element")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise InvalidInputError("label count must equal ground set size")
            if len(set(self.labels)) != self.size:
                raise InvalidInputError("labels must be unique")

    def elements(self) -> range:
        return range(self.size)

    def label(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        return f"e{index}"

    def index_of(self, label: str) -> int:
        if self.labels is None:
            raise InvalidInputError("ground set has no labels")
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise InvalidInputError(f"unknown element label: {label!r}") from exc

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def full(self) -> "Subset":
        return Subset(self, (1 << self.size) - 1)

    def subset(self, indices: Iterable[int]) -> "Subset":
        mask = 0
        for i in indices:
            if not 0 <= i < self.size:
                raise InvalidInputError(f"element index {i} out of range")
            mask |= 1 << i
        return Subset(self, mask)

    def subset_of_labels(self, labels: Iterable[str]) -> "Subset":
        return self.subset(self.index_of(lbl) for lbl in labels)

    def all_subsets(self) -> Iterator["Subset"]:
        for mask in range(1 << self.size):
            yield Subset(self, mask)

    def subsets_of_size(self, r: int) -> Iterator["Subset"]:
        # Gosper's hack enumerates r-bit masks in increasing mask order.
        if r < 0 or r > self.size:
            return
        if r == 0:
            yield Subset(self, 0)
            return
        mask = (1 << r) - 1
        limit = 1 << self.size
        while mask < limit:
            yield Subset(self, mask)
            low = mask & -mask
            ripple = mask + low
            mask = ripple | (((mask ^ ripple) >> 2) // low)


@dataclass(frozen=True)
class Subset:
    """A subset of a ground set stored as a bit mask (bit i <=> element i)."""

    ground: GroundSet
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.ground.size):
            raise InvalidInputError("subset mask out of range for ground set")

    def cardinality(self) -> int:
        return bin(self.mask).count("1")

    def __len__(self) -> int:
        return self.cardinality()

    def contains(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __contains__(self, index: int) -> bool:
        return self.contains(index)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in self.ground.elements() if self.mask >> i & 1)

    def member_labels(self) -> tuple[str, ...]:
        return tuple(self.ground.label(i) for i in self.members())

    def add(self, index: int) -> "Subset":
        return Subset(self.ground, self.mask | (1 << index))

    def remove(self, index: int) -> "Subset":
        return Subset(self.ground, self.mask & ~(1 << index))

    def union(self, other: "Subset") -> "Subset":
        self._check_ground(other)
        return Subset(self.ground, self.mask | other.mask)

    def intersection(self, other: "Subset") -> "Subset":
        self._check_ground(other)
        return Subset(self.ground, self.mask & other.mask)

    def minus(self, other: "Subset") -> "Subset":
        self._check_ground(other)
        return Subset(self.ground, self.mask & ~other.mask)

    def complement(self) -> "Subset":
        return Subset(self.ground, ~self.mask & ((1 << self.ground.size) - 1))

    def is_subset_of(self, other: "Subset") -> bool:
        self._check_ground(other)
        return self.mask & ~other.mask == 0

    def exchange(self, out_index: int, in_index: int) -> "Subset":
        return Subset(self.ground, self.mask & ~(1 << out_index) | (1 << in_index))

    def sort_key(self) -> tuple[int, ...]:
        """Key realizing 'lexicographically smallest member tuple' order."""
        return self.members()

    def _check_ground(self, other: "Subset") -> None:
        if other.ground != self.ground:
            raise InvalidInputError("subsets live on different ground sets")

    def __str__(self) -> str:
        return "{" + ",".join(self.member_labels()) + "}"


@dataclass(frozen=True)
class IntVector:
    """An integer vector with one entry per element of a ground set."""

    entries: tuple[int, ...]

    @staticmethod
    def of(values: Sequence[int]) -> "IntVector":
        return IntVector(tuple(int(v) for v in values))

    @staticmethod
    def zeros(n: int) -> "IntVector":
        return IntVector((0,) * n)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def total(self) -> int:
        return sum(self.entries)

    def add_unit(self, i: int, delta: int = 1) -> "IntVector":
        lst = list(self.entries)
        lst[i] += delta
        return IntVector(tuple(lst))

    def __add__(self, other: "IntVector") -> "IntVector":
        self._check_len(other)
        return IntVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntVector") -> "IntVector":
        self._check_len(other)
        return IntVector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntVector":
        return IntVector(tuple(-a for a in self.entries))

    def _check_len(self, other: "IntVector") -> None:
        if len(other.entries) != len(self.entries):
            raise InvalidInputError("vector length mismatch")

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.entries) + ")"


def componentwise_min(x: IntVector, y: IntVector) -> IntVector:
    """Entrywise minimum of two vectors over the same ground set."""
    if len(x) != len(y):
        raise InvalidInputError("vector length mismatch")
    return IntVector(tuple(min(a, b) for a, b in zip(x, y)))


def subset_to_vector(subset: Subset) -> IntVector:
    """The 0/1 incidence vector of a subset."""
    return IntVector(tuple(1 if subset.mask >> i & 1 else 0
                           for i in subset.ground.elements()))


def vector_to_subset(ground: GroundSet, x: IntVector) -> Subset:
    """Inverse of :func:`subset_to_vector`; entries must be 0 or 1."""
    if len(x) != ground.size:
        raise InvalidInputError("vector length mismatch")
    mask = 0
    for i, v in enumerate(x):
        if v not in (0, 1):
            raise InvalidInputError("vector is not 0/1")
        mask |= v << i
    return Subset(ground, mask)


def intersection_cardinality(x: Subset, y: Subset) -> int:
    """|X intersect Y| for two subsets of the same ground set."""
    return bin(x.intersection(y).mask).count("1")


def dot(weights: Sequence[Fraction], subset: Subset) -> Fraction:
    """Sum of weights over the members of a subset."""
    total = Fraction(0)
    mask = subset.mask
    i = 0
    while mask:
        if mask & 1:
            total += weights[i]
        mask >>= 1
        i += 1
    return total


def parse_weights(values: Sequence[RationalLike], size: int) -> tuple[Fraction, ...]:
    """Parse a weight vector, checking its length against the ground set."""
    ws = tuple(parse_rational(v) for v in values)
    if len(ws) != size:
        raise InvalidInputError(f"expected {size} weights, got {len(ws)}")
    return ws
