"""Pure-Python kernels; reference behaviour for ``_ckernels``.

The counting functions take a sequence of integer keys and return plain integer
tuples.  No events and no trees are kept, only counts.
"""
import numpy as np


def _isort_cost(a):
    """Sort ``a`` in place by insertion, return the number of comparisons."""
    cmps = 0
    for i in range(1, len(a)):
        x = a[i]
        j = i
        while j > 0:
            cmps += 1
            if a[j - 1] > x:
                a[j] = a[j - 1]
                j -= 1
            else:
                break
        a[j] = x
    return cmps


def quicksort_counts(values, k):
    """Return ``(partition, median, insertionsort, steps, height)``."""
    t = k // 2
    partition = median = isort = steps = height = 0
    stack = [(list(values), 0)]
    while stack:
        lst, depth = stack.pop()
        m = len(lst)
        if m <= k - 1:
            isort += _isort_cost(lst)
            continue
        sample = lst[:k]
        median += _isort_cost(sample)
        p = sample[t]
        partition += m
        steps += 1
        if depth + 1 > height:
            height = depth + 1
        less = [x for x in lst if x < p]
        greater = [x for x in lst if x > p]
        stack.append((greater, depth + 1))
        stack.append((less, depth + 1))
    return partition, median, isort, steps, height


def fringe_counts(values, k):
    """Build a k-fringe-balanced tree; return ``(partition, median, inner_nodes, height)``.

    Inner nodes are addressed by index; a child slot holds either an inner
    index ``>= 0`` or ``~leaf`` for a leaf.
    """
    t = k // 2
    pivot, left, right = [], [], []
    leaves = [[]]
    root = ~0
    partition = median = height = 0
    for x in values:
        parent, side, node, depth = -1, 0, root, 0
        found = False
        while node >= 0:
            partition += 1
            p = pivot[node]
            if x == p:
                found = True
                break
            parent, depth = node, depth + 1
            if x < p:
                side, node = 0, left[node]
            else:
                side, node = 1, right[node]
        if found:
            continue
        leaf = ~node
        buf = leaves[leaf]
        buf.append(x)
        if len(buf) < k:
            continue
        sample = list(buf)
        median += _isort_cost(sample)
        p = sample[t]
        partition += k
        new_leaf = len(leaves)
        leaves[leaf] = [y for y in buf if y < p]
        leaves.append([y for y in buf if y > p])
        idx = len(pivot)
        pivot.append(p)
        left.append(~leaf)
        right.append(~new_leaf)
        if depth + 1 > height:
            height = depth + 1
        if parent < 0:
            root = idx
        elif side == 0:
            left[parent] = idx
        else:
            right[parent] = idx
    return partition, median, len(pivot), height


def inverse_cdf(cdf, uniforms):
    """1-based index of the first ``cdf`` entry >= each uniform (clipped to u)."""
    idx = np.searchsorted(cdf, uniforms, side="left")
    np.minimum(idx, len(cdf) - 1, out=idx)
    return (idx + 1).astype(np.int64)
