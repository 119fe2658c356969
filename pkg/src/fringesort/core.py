"""Value types shared across the package.

Keys are integers in ``1..u``.  Every comparison in the package is ternary and
reported as a :class:`Cmp` member.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

SUM_TOL = 1e-12


class ValidationError(ValueError):
    """An argument violates a documented precondition."""


class StateError(RuntimeError):
    """An operation was applied to an object in the wrong state."""


class BudgetError(ValueError):
    """An exhaustive computation would exceed its enumeration budget."""


class Cmp(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def cmp(a: int, b: int) -> Cmp:
    if a < b:
        return Cmp.LT
    if a > b:
        return Cmp.GT
    return Cmp.EQ


@dataclass(frozen=True)
class UniverseDistribution:
    """Probability vector over the ordered universe ``1..u``."""

    weights: Tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValidationError("distribution needs at least one value")
        if any(not math.isfinite(x) or x <= 0.0 for x in w):
            raise ValidationError("all weights must be positive and finite")
        if len(w) > 1 and any(x >= 1.0 for x in w):
            raise ValidationError("weights must lie in (0, 1) when u >= 2")
        if abs(math.fsum(w) - 1.0) > SUM_TOL:
            raise ValidationError(f"weights sum to {math.fsum(w)!r}, not 1")

    @property
    def u(self) -> int:
        return len(self.weights)

    def min_weight(self) -> float:
        return min(self.weights)

    def reversed(self) -> "UniverseDistribution":
        return UniverseDistribution(self.weights[::-1])

    def __len__(self):
        return len(self.weights)


def normalize_distribution(raw: Iterable[float]) -> UniverseDistribution:
    raw = [float(x) for x in raw]
    if not raw:
        raise ValidationError("empty weight vector")
    if any(not math.isfinite(x) or x <= 0.0 for x in raw):
        raise ValidationError("raw weights must be positive and finite")
    total = math.fsum(raw)
    w = [x / total for x in raw]
    if len(w) == 1:
        w = [1.0]
    return UniverseDistribution(tuple(w))


def uniform(u: int) -> UniverseDistribution:
    if u < 1:
        raise ValidationError("universe size must be positive")
    return normalize_distribution([1.0] * u)


@dataclass(frozen=True)
class Profile:
    """Multiplicity vector ``counts[v-1]`` = occurrences of value ``v``."""

    counts: Tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.counts)
        if any(x < 0 for x in c):
            raise ValidationError("profile counts must be non-negative")
        object.__setattr__(self, "counts", c)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def u(self) -> int:
        return len(self.counts)

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True)
class SampleParams:
    """Sample size ``k = 2t + 1`` for median-of-k pivot selection."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise ValidationError("k must be an integer")
        if self.k < 1 or self.k % 2 == 0:
            raise ValidationError(f"k must be an odd positive integer, got {self.k}")

    @property
    def t(self) -> int:
        return (self.k - 1) // 2

    @classmethod
    def from_t(cls, t: int) -> "SampleParams":
        return cls(2 * t + 1)


@dataclass(frozen=True)
class InputSequence:
    """Keys together with their original positions ``1..n``."""

    values: Tuple[int, ...]
    ids: Optional[Tuple[int, ...]] = None
    u: Optional[int] = None

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.ids is None:
            object.__setattr__(self, "ids", tuple(range(1, len(vals) + 1)))
        else:
            ids = tuple(int(i) for i in self.ids)
            if len(ids) != len(vals) or sorted(ids) != list(range(1, len(vals) + 1)):
                raise ValidationError("ids must be a permutation of 1..n")
            object.__setattr__(self, "ids", ids)
        if any(v < 1 for v in vals):
            raise ValidationError("values must be >= 1")
        if self.u is not None and any(v > self.u for v in vals):
            raise ValidationError(f"values must lie in 1..{self.u}")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def items(self) -> list:
        """``(value, id)`` pairs in sequence order."""
        return list(zip(self.values, self.ids))


Event = Tuple[int, int, Cmp]


@dataclass
class ComparisonLedger:
    """Categorized ternary comparison counts plus the partition event log.

    Events are ``(element_id, pivot_value, outcome)`` triples; only partition
    comparisons are logged.
    """

    partition_cmps: int = 0
    median_cmps: int = 0
    insertionsort_cmps: int = 0
    steps: int = 0
    events: list = field(default_factory=list)
    record_events: bool = True

    def log(self, element_id: int, pivot: int, outcome: Cmp):
        self.partition_cmps += 1
        if self.record_events:
            self.events.append((element_id, pivot, outcome))

    def event_multiset(self) -> Counter:
        return Counter(self.events)

    @property
    def total(self) -> int:
        return self.partition_cmps + self.median_cmps + self.insertionsort_cmps

    def as_dict(self) -> dict:
        return {
            "partition_cmps": self.partition_cmps,
            "median_cmps": self.median_cmps,
            "insertionsort_cmps": self.insertionsort_cmps,
            "steps": self.steps,
        }


# Tree nodes shared by the Quicksort recursion tree and the fringe-balanced tree.
# Leaf items are (value, id) pairs in arrival order.


class Leaf:
    __slots__ = ("items",)

    def __init__(self, items: Optional[list] = None):
        self.items = [] if items is None else items

    @property
    def buffer(self) -> list:
        return [v for v, _ in self.items]

    def __repr__(self):
        return f"Leaf({self.buffer})"


class Inner:
    __slots__ = ("pivot", "left", "right")

    def __init__(self, pivot: int, left: "Node", right: "Node"):
        self.pivot = pivot
        self.left = left
        self.right = right

    def __repr__(self):
        return f"Inner({self.pivot}, {self.left!r}, {self.right!r})"


Node = Union[Inner, Leaf]


def as_items(seq: Union[InputSequence, Sequence[int]]) -> list:
    if isinstance(seq, InputSequence):
        return seq.items()
    return [(int(v), i) for i, v in enumerate(seq, start=1)]
