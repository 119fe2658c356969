"""Fat-pivot median-of-k Quicksort on order-preserving lists.

Each partitioning step compares every element of the sublist to the pivot,
the pivot element itself included, so a step on ``m`` elements costs ``m``
partition comparisons.  :func:`sedgewick_count` converts to the ``m - 1``
convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    Cmp,
    ComparisonLedger,
    InputSequence,
    Inner,
    Leaf,
    Node,
    SampleParams,
    StateError,
    ValidationError,
    as_items,
    cmp,
)


def insertion_sort(items: list, ledger: ComparisonLedger = None, category: str = "insertionsort_cmps") -> list:
    """Stable insertion sort of ``(value, id)`` pairs, counting comparisons.

    Costs at most ``m(m-1)/2`` comparisons for ``m`` items.
    """
    a = list(items)
    cmps = 0
    for i in range(1, len(a)):
        x = a[i]
        j = i
        while j > 0:
            cmps += 1
            if a[j - 1][0] > x[0]:
                a[j] = a[j - 1]
                j -= 1
            else:
                break
        a[j] = x
    if ledger is not None:
        setattr(ledger, category, getattr(ledger, category) + cmps)
    return a


def select_median(sample: Sequence, ledger: ComparisonLedger = None):
    """Rank ``t+1`` element of an odd-sized sample.

    Accepts plain values or ``(value, id)`` pairs; returns the value.
    Comparisons go to ``ledger.median_cmps`` and are not logged as events.
    """
    k = len(sample)
    if k % 2 == 0:
        raise ValidationError("sample size must be odd")
    items = [s if isinstance(s, tuple) else (s, None) for s in sample]
    ordered = insertion_sort(items, ledger, "median_cmps")
    return ordered[k // 2][0]


@dataclass
class SortOutcome:
    sorted: InputSequence
    tree: Node
    ledger: ComparisonLedger


def quicksort_k(seq, params: SampleParams, record_events: bool = True) -> SortOutcome:
    """Sort ``seq`` with median-of-k fat-pivot Quicksort.

    Sublists of at most ``k - 1`` elements go to Insertionsort and become
    leaves of the recursion tree.  The work list is explicit, so deep
    recursion trees (sorted inputs with ``k = 1``) are fine.
    """
    k = params.k
    ledger = ComparisonLedger(record_events=record_events)
    items = as_items(seq)
    out = []
    # "sort" entries carry (items, parent, side); "emit" entries flush the
    # finalized pivot duplicates into the output between the two halves.
    root_box = {}
    stack = [("sort", items, root_box, "root")]
    while stack:
        entry = stack.pop()
        if entry[0] == "emit":
            out.extend(entry[1])
            continue
        _, lst, parent, side = entry
        if len(lst) <= k - 1:
            out.extend(insertion_sort(lst, ledger))
            _attach(parent, side, Leaf(list(lst)))  # leaf keeps arrival order
            continue
        pivot = select_median(lst[:k], ledger)
        less, equal, greater = [], [], []
        for item in lst:
            c = cmp(item[0], pivot)
            ledger.log(item[1], pivot, c)
            if c is Cmp.LT:
                less.append(item)
            elif c is Cmp.EQ:
                equal.append(item)
            else:
                greater.append(item)
        ledger.steps += 1
        node = Inner(pivot, None, None)
        _attach(parent, side, node)
        stack.append(("sort", greater, node, "right"))
        stack.append(("emit", equal))
        stack.append(("sort", less, node, "left"))
    tree = root_box["root"]
    values = tuple(v for v, _ in out)
    ids = tuple(i for _, i in out)
    return SortOutcome(InputSequence(values, ids), tree, ledger)


def _attach(parent, side, node):
    if side == "root":
        parent["root"] = node
    else:
        setattr(parent, side, node)


def sedgewick_count(ledger: ComparisonLedger) -> int:
    """Partition comparisons without the pivot's self-comparison per step."""
    if ledger.steps > ledger.partition_cmps:
        raise StateError("ledger has more steps than partition comparisons")
    return ledger.partition_cmps - ledger.steps
