# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Levenshtein distance over token sequences.

Tokens are interned to integers first; the dynamic programme then runs over
two C rows.  Semantics are identical to ``_editdist_py.edit_distance``.
"""

from libc.stdlib cimport malloc, free


def edit_distance(a, b):
    cdef Py_ssize_t n = len(a), m = len(b)
    cdef Py_ssize_t i, j, sub, best
    cdef long *ia
    cdef long *ib
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp
    if n == 0:
        return m
    if m == 0:
        return n
    ids = {}
    ia = <long *> malloc(n * sizeof(long))
    ib = <long *> malloc(m * sizeof(long))
    prev = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    cur = <Py_ssize_t *> malloc((m + 1) * sizeof(Py_ssize_t))
    if not ia or not ib or not prev or not cur:
        free(ia); free(ib); free(prev); free(cur)
        raise MemoryError()
    try:
        for i in range(n):
            ia[i] = ids.setdefault(a[i], len(ids))
        for j in range(m):
            ib[j] = ids.setdefault(b[j], len(ids))
        for j in range(m + 1):
            prev[j] = j
        for i in range(1, n + 1):
            cur[0] = i
            for j in range(1, m + 1):
                sub = prev[j - 1] + (0 if ia[i - 1] == ib[j - 1] else 1)
                best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                if sub < best:
                    best = sub
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[m]
    finally:
        free(ia); free(ib); free(prev); free(cur)
