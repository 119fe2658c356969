# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels; same contract as ``_pykernels``."""

import numpy as np

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy


cdef long long _isort_cost(long long* a, Py_ssize_t m) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef long long x, cmps = 0
    for i in range(1, m):
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


def quicksort_counts(values, int k):
    """Return ``(partition, median, insertionsort, steps, height)``."""
    cdef const long long[::1] src = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t t = k // 2
    cdef long long partition = 0, median = 0, isort = 0, steps = 0, height = 0
    cdef long long* a = <long long*> malloc((n + 1) * sizeof(long long))
    cdef long long* tmp = <long long*> malloc((n + 1) * sizeof(long long))
    cdef long long* sample = <long long*> malloc((k + 1) * sizeof(long long))
    cdef Py_ssize_t* stack = <Py_ssize_t*> malloc((3 * (2 * n + 2)) * sizeof(Py_ssize_t))
    cdef Py_ssize_t sp = 0, lo, hi, depth, m, i, nl, ne, pl, pe, pg
    cdef long long p, x
    if a == NULL or tmp == NULL or sample == NULL or stack == NULL:
        free(a); free(tmp); free(sample); free(stack)
        raise MemoryError()
    try:
        with nogil:
            if n > 0:
                memcpy(a, &src[0], n * sizeof(long long))
            stack[0] = 0; stack[1] = n; stack[2] = 0
            sp = 1
            while sp > 0:
                sp -= 1
                lo = stack[3 * sp]; hi = stack[3 * sp + 1]; depth = stack[3 * sp + 2]
                m = hi - lo
                if m <= k - 1:
                    isort += _isort_cost(a + lo, m)
                    continue
                memcpy(sample, a + lo, k * sizeof(long long))
                median += _isort_cost(sample, k)
                p = sample[t]
                partition += m
                steps += 1
                if depth + 1 > height:
                    height = depth + 1
                nl = 0; ne = 0
                for i in range(lo, hi):
                    x = a[i]
                    if x < p:
                        nl += 1
                    elif x == p:
                        ne += 1
                pl = lo; pe = lo + nl; pg = lo + nl + ne
                for i in range(lo, hi):
                    x = a[i]
                    if x < p:
                        tmp[pl] = x; pl += 1
                    elif x == p:
                        tmp[pe] = x; pe += 1
                    else:
                        tmp[pg] = x; pg += 1
                memcpy(a + lo, tmp + lo, m * sizeof(long long))
                # right segment first so the left one is processed next
                stack[3 * sp] = lo + nl + ne; stack[3 * sp + 1] = hi; stack[3 * sp + 2] = depth + 1
                sp += 1
                stack[3 * sp] = lo; stack[3 * sp + 1] = lo + nl; stack[3 * sp + 2] = depth + 1
                sp += 1
    finally:
        free(a); free(tmp); free(sample); free(stack)
    return int(partition), int(median), int(isort), int(steps), int(height)


def fringe_counts(values, int k):
    """Return ``(partition, median, inner_nodes, height)`` of the built tree."""
    cdef const long long[::1] src = np.ascontiguousarray(values, dtype=np.int64)
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t t = k // 2
    cdef Py_ssize_t cap = n + 2
    cdef long long* pivot = <long long*> malloc(cap * sizeof(long long))
    cdef Py_ssize_t* left = <Py_ssize_t*> malloc(cap * sizeof(Py_ssize_t))
    cdef Py_ssize_t* right = <Py_ssize_t*> malloc(cap * sizeof(Py_ssize_t))
    cdef long long* buf = <long long*> malloc(cap * k * sizeof(long long))
    cdef Py_ssize_t* cnt = <Py_ssize_t*> malloc(cap * sizeof(Py_ssize_t))
    cdef long long* sample = <long long*> malloc((k + 1) * sizeof(long long))
    cdef Py_ssize_t inner = 0, nleaves = 1, root = -1, node, parent, side, depth, leaf, newleaf, i, j, nl, nr
    cdef long long partition = 0, median = 0, height = 0, x, p, y
    cdef long long* lb
    cdef long long* rb
    cdef bint found
    if (pivot == NULL or left == NULL or right == NULL or buf == NULL
            or cnt == NULL or sample == NULL):
        free(pivot); free(left); free(right); free(buf); free(cnt); free(sample)
        raise MemoryError()
    # child encoding: >= 0 inner index, < 0 leaf ~index
    try:
        with nogil:
            cnt[0] = 0
            root = -1
            for i in range(n):
                x = src[i]
                parent = -1; side = 0; node = root; depth = 0
                found = False
                while node >= 0:
                    partition += 1
                    p = pivot[node]
                    if x == p:
                        found = True
                        break
                    parent = node
                    depth += 1
                    if x < p:
                        side = 0; node = left[node]
                    else:
                        side = 1; node = right[node]
                if found:
                    continue
                leaf = ~node
                lb = buf + leaf * k
                lb[cnt[leaf]] = x
                cnt[leaf] += 1
                if cnt[leaf] < k:
                    continue
                memcpy(sample, lb, k * sizeof(long long))
                median += _isort_cost(sample, k)
                p = sample[t]
                partition += k
                newleaf = nleaves
                nleaves += 1
                rb = buf + newleaf * k
                nl = 0; nr = 0
                for j in range(k):
                    y = lb[j]
                    if y < p:
                        lb[nl] = y; nl += 1
                    elif y > p:
                        rb[nr] = y; nr += 1
                cnt[leaf] = nl
                cnt[newleaf] = nr
                pivot[inner] = p
                left[inner] = ~leaf
                right[inner] = ~newleaf
                if depth + 1 > height:
                    height = depth + 1
                if parent < 0:
                    root = inner
                elif side == 0:
                    left[parent] = inner
                else:
                    right[parent] = inner
                inner += 1
    finally:
        free(pivot); free(left); free(right); free(buf); free(cnt); free(sample)
    return int(partition), int(median), int(inner), int(height)


def inverse_cdf(const double[::1] cdf, const double[::1] uniforms):
    """1-based index of the first ``cdf`` entry >= each uniform (clipped to u).

    A guide table gives the starting point; the final index is corrected in
    both directions, so the result equals ``searchsorted(cdf, x, 'left') + 1``.
    """
    cdef Py_ssize_t u = cdf.shape[0], n = uniforms.shape[0], i, j, g
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] res = out
    guide_arr = np.empty(u + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] guide = guide_arr
    cdef double x
    with nogil:
        i = 0
        for g in range(u + 1):
            while i < u - 1 and cdf[i] < (<double> g) / u:
                i += 1
            guide[g] = i
        for j in range(n):
            x = uniforms[j]
            g = <Py_ssize_t> (x * u)
            if g < 0:
                g = 0
            elif g > u:
                g = u
            i = guide[g]
            while i > 0 and cdf[i - 1] >= x:
                i -= 1
            while i < u - 1 and cdf[i] < x:
                i += 1
            res[j] = i + 1
    return out
