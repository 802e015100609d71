# distutils: language = c++
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled refinement-round kernel.

Produces the same per-vertex signature bytes as ``relwl._kernels.pure``:
packed native int64 sequences, neighbor entries sorted ascending.  The hot
work per round (gather + sort of every directed adjacency entry) runs at C
speed; relabeling stays in the Python driver.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdint cimport int64_t
from libcpp.algorithm cimport sort

import numpy as np


def signatures_plain(const int64_t[::1] indptr, const int64_t[::1] nbr, const int64_t[::1] colors):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, j, lo, hi, m, maxdeg = 0
    for v in range(n):
        m = indptr[v + 1] - indptr[v]
        if m > maxdeg:
            maxdeg = m
    buf = np.empty(maxdeg + 2, dtype=np.int64)
    cdef int64_t[::1] b = buf
    out = [None] * n
    for v in range(n):
        lo = indptr[v]
        hi = indptr[v + 1]
        m = hi - lo
        b[0] = colors[v]
        for j in range(m):
            b[1 + j] = colors[nbr[lo + j]]
        if m > 1:
            sort(&b[1], &b[1 + m])
        out[v] = PyBytes_FromStringAndSize(<char*> &b[0], (1 + m) * 8)
    return out


def signatures_tagged(const int64_t[::1] indptr, const int64_t[::1] nbr, const int64_t[::1] rel,
                      const int64_t[::1] colors, int64_t r):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, j, lo, hi, m, maxdeg = 0
    for v in range(n):
        m = indptr[v + 1] - indptr[v]
        if m > maxdeg:
            maxdeg = m
    buf = np.empty(maxdeg + 2, dtype=np.int64)
    cdef int64_t[::1] b = buf
    out = [None] * n
    for v in range(n):
        lo = indptr[v]
        hi = indptr[v + 1]
        m = hi - lo
        b[0] = colors[v]
        for j in range(m):
            b[1 + j] = colors[nbr[lo + j]] * r + rel[lo + j]
        if m > 1:
            sort(&b[1], &b[1 + m])
        out[v] = PyBytes_FromStringAndSize(<char*> &b[0], (1 + m) * 8)
    return out


def signatures_weak(const int64_t[::1] indptr, const int64_t[::1] nbr, const int64_t[::1] rel,
                    const int64_t[::1] colors, int64_t r):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t v, j, lo, hi, m, maxdeg = 0
    for v in range(n):
        m = indptr[v + 1] - indptr[v]
        if m > maxdeg:
            maxdeg = m
    buf = np.empty(maxdeg + r + 2, dtype=np.int64)
    cdef int64_t[::1] b = buf
    out = [None] * n
    for v in range(n):
        lo = indptr[v]
        hi = indptr[v + 1]
        m = hi - lo
        b[0] = colors[v]
        for j in range(r):
            b[1 + m + j] = 0
        for j in range(m):
            b[1 + j] = colors[nbr[lo + j]]
            b[1 + m + rel[lo + j]] += 1
        if m > 1:
            sort(&b[1], &b[1 + m])
        out[v] = PyBytes_FromStringAndSize(<char*> &b[0], (1 + m + r) * 8)
    return out
