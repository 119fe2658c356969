"""k-fringe-balanced search trees.

Leaves buffer up to ``k - 1`` elements in arrival order.  When a leaf receives
its ``k``-th element it splits around the median of its buffer; the buffered
elements (the median itself included) are compared to the new pivot, copies
of the pivot are dropped, and the rest go to two fresh leaves.
"""
from __future__ import annotations

import enum
from typing import Optional, Tuple

from .core import (
    BudgetError,
    Cmp,
    ComparisonLedger,
    Inner,
    Leaf,
    Node,
    SampleParams,
    StateError,
    UniverseDistribution,
    ValidationError,
    as_items,
    cmp,
)
from .inputgen import SeedLike, _rng, cumulative, sample_iid_array
from .quicksort import select_median


class FringeTree:
    """Mutable k-fringe-balanced tree with an attached comparison ledger."""

    def __init__(self, params: SampleParams, record_events: bool = True):
        self.params = params
        self.root: Node = Leaf()
        self.ledger = ComparisonLedger(record_events=record_events)
        self.inner_count = 0
        self._next_id = 1

    @classmethod
    def build(cls, seq, params: SampleParams, record_events: bool = True) -> "FringeTree":
        tree = cls(params, record_events)
        for value, ident in as_items(seq):
            tree.insert(value, ident)
        return tree

    def insert(self, x: int, ident: Optional[int] = None) -> "FringeTree":
        """Insert ``x``; returns the tree for chaining.

        Copies of a value already stored at an inner node leave the tree
        unchanged after the one comparison that finds them.
        """
        if ident is None:
            ident = self._next_id
        self._next_id = max(self._next_id, ident + 1)
        parent, side, node = None, None, self.root
        while isinstance(node, Inner):
            c = cmp(x, node.pivot)
            self.ledger.log(ident, node.pivot, c)
            if c is Cmp.EQ:
                return self
            parent, side = node, ("left" if c is Cmp.LT else "right")
            node = getattr(node, side)
        node.items.append((x, ident))
        if len(node.items) < self.params.k:
            return self
        new = self._split(node.items)
        if parent is None:
            self.root = new
        else:
            setattr(parent, side, new)
        return self

    def _split(self, items: list) -> Inner:
        pivot = select_median(items, self.ledger)
        smaller, larger = [], []
        for value, ident in items:
            c = cmp(value, pivot)
            self.ledger.log(ident, pivot, c)
            if c is Cmp.LT:
                smaller.append((value, ident))
            elif c is Cmp.GT:
                larger.append((value, ident))
        self.ledger.steps += 1
        self.inner_count += 1
        return Inner(pivot, Leaf(smaller), Leaf(larger))

    def is_saturated(self, u: int) -> bool:
        return self.inner_count >= u

    def search(self, x: int) -> Tuple["SearchOutcome", int]:
        return search(self.root, x)

    def node_depths(self, u: int) -> Tuple[int, ...]:
        return node_depths(self.root, u)

    def height(self) -> int:
        return height(self.root)

    def digest(self) -> str:
        return shape_digest(self.root)


class SearchOutcome(enum.Enum):
    FOUND_AT_INNER = "found-at-inner"
    FOUND_IN_LEAF = "found-in-leaf"
    ABSENT = "absent"


def _root(tree) -> Node:
    return tree.root if isinstance(tree, FringeTree) else tree


def search(tree, x: int) -> Tuple[SearchOutcome, int]:
    """Search ``x``; the cost counts inner-node comparisons only."""
    node, cost = _root(tree), 0
    while isinstance(node, Inner):
        cost += 1
        c = cmp(x, node.pivot)
        if c is Cmp.EQ:
            return SearchOutcome.FOUND_AT_INNER, cost
        node = node.left if c is Cmp.LT else node.right
    if x in node.buffer:
        return SearchOutcome.FOUND_IN_LEAF, cost
    return SearchOutcome.ABSENT, cost


def node_depths(tree, u: int) -> Tuple[int, ...]:
    """Depth of each value's inner node, root depth 1; requires saturation."""
    depths = [0] * u
    stack = [(_root(tree), 1)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, Inner):
            if not 1 <= node.pivot <= u:
                raise StateError(f"pivot {node.pivot} outside 1..{u}")
            depths[node.pivot - 1] = d
            stack.append((node.left, d + 1))
            stack.append((node.right, d + 1))
    if 0 in depths:
        missing = [v for v, d in enumerate(depths, start=1) if d == 0]
        raise StateError(f"tree is not saturated; values {missing} have no inner node")
    return tuple(depths)


def height(tree) -> int:
    """Number of inner nodes on the longest root-to-leaf path."""
    best = 0
    stack = [(_root(tree), 0)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, Inner):
            stack.append((node.left, d + 1))
            stack.append((node.right, d + 1))
        else:
            best = max(best, d)
    return best


def shape_digest(tree) -> str:
    """Canonical string: ``(p L R)`` for inner nodes, ``[b1 b2 ...]`` for leaves."""
    parts = []
    stack = [_root(tree)]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            parts.append(node)
        elif isinstance(node, Inner):
            stack.extend([")", node.right, " ", node.left, f"({node.pivot} "])
        else:
            parts.append("[" + " ".join(str(v) for v in node.buffer) + "]")
    return "".join(parts)


def insert(tree: FringeTree, x: int, ident: Optional[int] = None) -> FringeTree:
    return tree.insert(x, ident)


def build_until_saturated(q: UniverseDistribution, params: SampleParams, seed: SeedLike,
                          max_insertions: int = 10**6, block: int = 64) -> Tuple[FringeTree, int]:
    """Insert iid draws from ``q`` until every value labels an inner node.

    Returns the tree and the number of insertions used.  Raises
    :class:`BudgetError` when ``max_insertions`` draws do not suffice.
    """
    if max_insertions < 1:
        raise ValidationError("max_insertions must be positive")
    rng = _rng(seed)
    cdf = cumulative(q)
    tree = FringeTree(params, record_events=False)
    used = 0
    while not tree.is_saturated(q.u):
        if used >= max_insertions:
            raise BudgetError(f"not saturated after {max_insertions} insertions")
        for v in sample_iid_array(None, min(block, max_insertions - used), rng, cdf=cdf).tolist():
            tree.insert(v)
            used += 1
            if tree.is_saturated(q.u):
                break
    return tree, used
