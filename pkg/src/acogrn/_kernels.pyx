# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Operation order matches ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp

from .errors import ZeroMass

cnp.import_array()

NAME = "cython"


cdef Py_ssize_t _build_one(const double[:, ::1] w, Py_ssize_t start,
                           const double[::1] u, cnp.int64_t[::1] out,
                           char* visited) noexcept nogil:
    """Fill ``out`` with one tour; return -1 on success or the stuck gene."""
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t step, j, cur, chosen, fallback
    cdef double total, target, acc, wj
    for j in range(n):
        visited[j] = 0
    visited[start] = 1
    out[0] = start
    cur = start
    for step in range(n - 1):
        total = 0.0
        for j in range(n):
            if not visited[j]:
                total += w[cur, j]
        if not total > 0.0:
            return cur
        target = u[step] * total
        acc = 0.0
        chosen = -1
        fallback = -1
        for j in range(n):
            if visited[j]:
                continue
            wj = w[cur, j]
            if wj > 0.0:
                fallback = j
            acc += wj
            if acc > target:
                chosen = j
                break
        if chosen < 0:
            chosen = fallback
        visited[chosen] = 1
        out[step + 1] = chosen
        cur = chosen
    return -1


def construct_orders(weights, starts, uniforms):
    cdef const double[:, ::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.int64_t[::1] s = np.ascontiguousarray(starts, dtype=np.int64)
    cdef const double[:, ::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t m = s.shape[0]
    result = np.empty((m, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = result
    cdef bytearray scratch = bytearray(n)
    cdef char* visited = scratch
    cdef Py_ssize_t a, stuck = -1
    with nogil:
        for a in range(m):
            stuck = _build_one(w, s[a], u[a], out[a], visited)
            if stuck >= 0:
                break
    if stuck >= 0:
        raise ZeroMass(f"all transition weights from gene {stuck} are zero")
    return result


def circuit_sum(c, order):
    cdef const double[:, ::1] cc = np.ascontiguousarray(c, dtype=np.float64)
    cdef cnp.int64_t[::1] o = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = o.shape[0], k
    cdef double s = 0.0
    for k in range(n - 1):
        s += cc[o[k], o[k + 1]]
    s += cc[o[n - 1], o[0]]
    return s


def brute_force(weights):
    cdef const double[:, ::1] c = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0]
    cdef cnp.int64_t[::1] order = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] nxt = np.zeros(n, dtype=np.int64)
    cdef char[::1] used = np.zeros(n, dtype=np.int8)
    cdef double[::1] partial = np.zeros(n, dtype=np.float64)
    cdef double best = -np.inf
    cdef double s
    cdef long long count = 0
    cdef Py_ssize_t pos, j, first
    optima = []
    # Iterative lexicographic DFS; nxt[pos] is the next candidate at pos.
    used[0] = 1
    pos = 1
    nxt[1] = 1
    while pos >= 1:
        if pos == n - 1:
            first = order[1]
            for j in range(first + 1, n):
                if used[j]:
                    continue
                s = partial[pos - 1] + c[order[pos - 1], j]
                s += c[j, 0]
                count += 1
                if s > best:
                    best = s
                    order[pos] = j
                    optima.clear()
                    optima.append(tuple(order))
                elif s == best:
                    order[pos] = j
                    optima.append(tuple(order))
            pos -= 1
            if pos >= 1:
                used[order[pos]] = 0
            continue
        j = nxt[pos]
        while j < n and used[j]:
            j += 1
        if j >= n:
            pos -= 1
            if pos >= 1:
                used[order[pos]] = 0
            continue
        order[pos] = j
        used[j] = 1
        nxt[pos] = j + 1
        partial[pos] = partial[pos - 1] + c[order[pos - 1], j]
        pos += 1
        nxt[pos] = 1
    return best, optima, count
