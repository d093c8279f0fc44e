"""Pure-Python kernels; the fallback when the compiled ``_kernels`` is absent.

Arithmetic order here mirrors ``_kernels.pyx`` operation for operation so
both backends return identical tours and bit-identical scores.
"""

import numpy as np

from .errors import ZeroMass

NAME = "python"


def construct_orders(weights, starts, uniforms):
    """Build one tour per ant by roulette-wheel sampling over ``weights``.

    ``weights[i][j]`` is the unnormalised transition weight from gene i to
    gene j, ``starts[a]`` the first gene of ant a and ``uniforms[a]`` its
    n - 1 draws from [0, 1). Returns an (m, n) int64 array of orders.
    """
    w = np.asarray(weights, dtype=np.float64).tolist()
    n = len(w)
    starts = [int(s) for s in starts]
    draws = np.asarray(uniforms, dtype=np.float64).tolist()
    out = np.empty((len(starts), n), dtype=np.int64)
    for a, start in enumerate(starts):
        visited = [False] * n
        visited[start] = True
        order = [start]
        cur = start
        u = draws[a]
        for step in range(n - 1):
            row = w[cur]
            total = 0.0
            for j in range(n):
                if not visited[j]:
                    total += row[j]
            if not total > 0.0:
                raise ZeroMass(f"all transition weights from gene {cur} are zero")
            target = u[step] * total
            acc = 0.0
            chosen = -1
            fallback = -1
            for j in range(n):
                if visited[j]:
                    continue
                wj = row[j]
                if wj > 0.0:
                    fallback = j
                acc += wj
                if acc > target:
                    chosen = j
                    break
            if chosen < 0:
                chosen = fallback
            visited[chosen] = True
            order.append(chosen)
            cur = chosen
        out[a] = order
    return out


def circuit_sum(c, order):
    """Left-to-right sum of edge weights around the closed circuit."""
    n = len(order)
    s = 0.0
    for k in range(n - 1):
        s += c[order[k]][order[k + 1]]
    s += c[order[n - 1]][order[0]]
    return s


def brute_force(weights):
    """Exhaustive maximum over canonical circuits.

    Canonical form: gene 0 first and the second gene smaller than the last,
    visited in lexicographic order. Returns (best score, list of tied
    optimal orders, number of circuits examined).
    """
    c = np.asarray(weights, dtype=np.float64).tolist()
    n = len(c)
    order = [0] * n
    used = [False] * n
    used[0] = True
    partial = [0.0] * n
    best = -float("inf")
    optima = []
    count = 0

    def extend(pos):
        nonlocal best, count
        prev = order[pos - 1]
        base = partial[pos - 1]
        crow = c[prev]
        if pos == n - 1:
            for j in range(1, n):
                if used[j] or j < order[1]:
                    continue
                if j == order[1]:
                    continue
                s = base + crow[j]
                s += c[j][0]
                count += 1
                if s > best:
                    best = s
                    order[pos] = j
                    optima.clear()
                    optima.append(tuple(order))
                elif s == best:
                    order[pos] = j
                    optima.append(tuple(order))
            return
        for j in range(1, n):
            if used[j]:
                continue
            used[j] = True
            order[pos] = j
            partial[pos] = base + crow[j]
            extend(pos + 1)
            used[j] = False

    partial[0] = 0.0
    extend(1)
    return best, optima, count
