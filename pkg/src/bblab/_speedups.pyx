# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled inner loops of the exact kernel.

Mirrors bblab._kernel_py exactly: arithmetic stays on Python ints (so
results are identical and arbitrary precision is preserved); the win is
removing interpreter overhead from the tight pivot and row-scan loops.
"""

IMPLEMENTATION = "c"


def pivot_update(list rows, Py_ssize_t r, Py_ssize_t c, den):
    cdef Py_ssize_t i, j, ncols, nrows
    cdef list prow = <list>rows[r]
    cdef list row
    piv = prow[c]
    ncols = len(prow)
    nrows = len(rows)
    for i in range(nrows):
        if i == r:
            continue
        row = <list>rows[i]
        f = row[c]
        if f == 0:
            if piv != den:
                for j in range(ncols):
                    row[j] = row[j] * piv // den
        else:
            for j in range(ncols):
                row[j] = (row[j] * piv - f * prow[j]) // den
    return piv


def violated_indices(list introws, list nums, den):
    cdef Py_ssize_t idx, j, n, m
    cdef list row, out = []
    n = len(nums)
    m = len(introws)
    for idx in range(m):
        row = <list>introws[idx]
        s = 0
        for j in range(n):
            v = nums[j]
            if v:
                s = s + row[j] * v
        if s > row[n] * den:
            out.append(idx)
    return out


def first_violated_mask(list introws, mask):
    cdef Py_ssize_t idx, j, m, nc
    cdef unsigned long long mbits
    cdef list row
    m = len(introws)
    mbits = mask
    for idx in range(m):
        row = <list>introws[idx]
        nc = len(row)
        s = 0
        j = 0
        while (mbits >> j) and j < nc - 1:
            if (mbits >> j) & 1:
                s = s + row[j]
            j += 1
        if s > row[nc - 1]:
            return idx
    return -1
