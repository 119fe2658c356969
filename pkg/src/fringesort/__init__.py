"""Median-of-k fat-pivot Quicksort and k-fringe-balanced trees with exact
ternary-comparison accounting, analytic cost formulas, and seeded experiments.
"""
from .core import (
    BudgetError,
    Cmp,
    ComparisonLedger,
    InputSequence,
    Inner,
    Leaf,
    Profile,
    SampleParams,
    StateError,
    UniverseDistribution,
    ValidationError,
    normalize_distribution,
    uniform,
)
from .fringe_tree import FringeTree, build_until_saturated, height, node_depths, search, shape_digest
from .inputgen import (
    DegeneracyParams,
    SplitMix64,
    is_profile_degenerate,
    profile_of,
    sample_iid,
    shuffle_multiset,
)
from .kernels import BACKEND
from .quicksort import quicksort_k, sedgewick_count, select_median

__version__ = "0.1.0"
