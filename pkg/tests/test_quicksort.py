import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fringesort.analysis import qs_entropy_exact
from fringesort.core import (
    ComparisonLedger,
    Inner,
    InputSequence,
    Leaf,
    Profile,
    SampleParams,
    StateError,
    ValidationError,
)
from fringesort.fringe_tree import shape_digest
from fringesort.quicksort import insertion_sort, quicksort_k, sedgewick_count, select_median

NINE_KEYS = (7, 4, 2, 9, 1, 3, 8, 5, 6)


def _run(values, k=1):
    return quicksort_k(InputSequence(tuple(values)), SampleParams(k))


def test_nine_key_recursion_tree():
    out = _run(NINE_KEYS)
    assert shape_digest(out.tree) == "(7 (4 (2 (1 [] []) (3 [] [])) (5 [] (6 [] []))) (9 (8 [] []) []))"


def test_nine_key_counts():
    led = _run(NINE_KEYS).ledger
    assert (led.partition_cmps, led.steps, sedgewick_count(led)) == (26, 9, 17)
    assert led.median_cmps == 0 and led.insertionsort_cmps == 0


def test_two_distinct_keys():
    # profile (1,1): one step on 2 elements, one on the leftover element
    led = _run((1, 2)).ledger
    assert (led.partition_cmps, led.steps, sedgewick_count(led)) == (3, 2, 1)
    led = _run((2, 1)).ledger
    assert (led.partition_cmps, led.steps, sedgewick_count(led)) == (3, 2, 1)


def test_two_equal_keys():
    led = _run((1, 1)).ledger
    assert (led.partition_cmps, led.steps, sedgewick_count(led)) == (2, 1, 1)


@pytest.mark.parametrize("n", [1, 2, 10, 500])
def test_all_equal_one_step(n):
    led = _run([3] * n).ledger
    assert led.steps == 1 and led.partition_cmps == n
    assert sedgewick_count(led) == n - 1


def test_sorted_input_k1_is_deep():
    n = 2000
    out = _run(range(1, n + 1))
    assert out.ledger.steps == n
    assert out.ledger.partition_cmps == n * (n + 1) // 2


@pytest.mark.parametrize(
    "sample, expected",
    [((5,), 5), ((3, 1, 2), 2), ((2, 2, 1), 2), ((9, 1, 5, 7, 3), 5)],
)
def test_select_median(sample, expected):
    led = ComparisonLedger()
    assert select_median(sample, led) == expected
    k = len(sample)
    assert led.median_cmps <= k * (k - 1) // 2
    assert led.partition_cmps == 0


def test_select_median_single_is_free():
    led = ComparisonLedger()
    select_median((5,), led)
    assert led.median_cmps == 0


def test_select_median_even_rejected():
    with pytest.raises(ValidationError):
        select_median((1, 2))


def test_insertion_sort_stable():
    items = [(2, 1), (1, 2), (2, 3), (1, 4)]
    assert insertion_sort(items) == [(1, 2), (1, 4), (2, 1), (2, 3)]


def test_sedgewick_rejects_inconsistent_ledger():
    led = ComparisonLedger()
    led.steps = 2
    led.partition_cmps = 1
    with pytest.raises(StateError):
        sedgewick_count(led)


def test_leaves_keep_arrival_order():
    out = _run((5, 3, 1, 2), k=5)
    assert isinstance(out.tree, Leaf)
    assert out.tree.buffer == [5, 3, 1, 2]
    assert out.sorted.values == (1, 2, 3, 5)
    assert out.ledger.steps == 0 and out.ledger.insertionsort_cmps > 0


def _bst_insert(values):
    """Plain unbalanced BST, used as an independent oracle for k = 1."""
    root = None

    def put(node, v):
        if node is None:
            return [v, None, None]
        if v < node[0]:
            node[1] = put(node[1], v)
        elif v > node[0]:
            node[2] = put(node[2], v)
        return node

    for v in values:
        root = put(root, v)
    return root


def _bst_digest(node):
    if node is None:
        return "[]"
    return f"({node[0]} {_bst_digest(node[1])} {_bst_digest(node[2])})"


@given(st.permutations(list(range(1, 10))))
def test_k1_distinct_tree_is_bst(perm):
    assert shape_digest(_run(perm).tree) == _bst_digest(_bst_insert(perm))


values_strategy = st.lists(st.integers(1, 8), min_size=1, max_size=60)


@settings(max_examples=200)
@given(values_strategy, st.sampled_from([1, 3, 5, 7]))
def test_sorted_stable_permutation(values, k):
    out = _run(values, k)
    pairs = list(zip(out.sorted.values, out.sorted.ids))
    assert pairs == sorted(zip(values, range(1, len(values) + 1)))
    assert out.ledger.steps <= len(set(values))
    assert out.ledger.partition_cmps == len(out.ledger.events)


@settings(max_examples=100)
@given(values_strategy, st.sampled_from([1, 3, 5]))
def test_every_element_compared_once_per_ancestor(values, k):
    out = _run(values, k)
    pivots = {p for _, p, _ in out.ledger.events}
    assert len(pivots) == out.ledger.steps
    # an element meets each pivot at most once
    assert all(c == 1 for c in out.ledger.event_multiset().values())


def _distinct_arrangements(counts):
    base = [v for v, c in enumerate(counts, start=1) for _ in range(c)]
    return set(itertools.permutations(base))


def _profiles(n_max, u_max):
    for u in range(1, u_max + 1):
        for counts in itertools.product(range(1, n_max + 1), repeat=u):
            if sum(counts) <= n_max:
                yield counts


@pytest.mark.parametrize("counts", list(_profiles(6, 3)))
def test_sedgewick_formula_exhaustive(counts):
    # exhaustive average versus 2Q(x) + n - u, exact rationals on both sides
    arr = _distinct_arrangements(counts)
    total = sum(sedgewick_count(_run(a).ledger) for a in arr)
    n, u = sum(counts), len(counts)
    assert Fraction(total, len(arr)) == 2 * qs_entropy_exact(Profile(counts)) + n - u


def test_sedgewick_small_examples():
    arr = _distinct_arrangements((2, 1))
    assert Fraction(sum(sedgewick_count(_run(a).ledger) for a in arr), 3) == Fraction(7, 3)
    for a in _distinct_arrangements((1, 1)):
        assert sedgewick_count(_run(a).ledger) == 1


def test_distinct_keys_classical_average():
    # distinct keys: average partition count of the m-1 convention is 2(n+1)H_n - 4n
    n = 5
    perms = list(itertools.permutations(range(1, n + 1)))
    avg = Fraction(sum(sedgewick_count(_run(p).ledger) for p in perms), len(perms))
    h = sum(Fraction(1, i) for i in range(1, n + 1))
    assert avg == 2 * (n + 1) * h - 4 * n == Fraction(37, 5)


def test_events_disabled():
    out = quicksort_k(InputSequence(NINE_KEYS), SampleParams(1), record_events=False)
    assert out.ledger.events == [] and out.ledger.partition_cmps == 26


def test_tree_shape_types():
    out = _run((2, 1, 3))
    assert isinstance(out.tree, Inner) and out.tree.pivot == 2
