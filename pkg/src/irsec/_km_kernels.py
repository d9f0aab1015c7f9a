"""Minimum-cost perfect-matching kernels (Kuhn-Munkres family).

Shortest-augmenting-path formulation with row/column potentials, O(n^3).
Forbidden pairs are encoded as +inf costs; potentials stay finite, so an
infinity is only ever combined with finite values (never inf + inf), and
an all-infinite search front signals infeasibility.

Both paths return (assignment, feasible): assignment[i] is the column
matched to row i, or -1 throughout when infeasible.  Totals are summed
by the caller so that every scheme adds the same floats the same way.
"""

import numpy as np

from ._accel import NUMBA_ENABLED, njit


def _km_core_loops(cost):
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    # p[j]: 1-based row matched to column j (0 = unmatched); column 0 is a sentinel
    p = np.zeros(n + 1, np.int64)
    way = np.zeros(n + 1, np.int64)
    assignment = np.full(n, -1, np.int64)

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            if j1 < 0 or delta == np.inf:
                return assignment, False
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        # unwind the augmenting path
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    for j in range(1, n + 1):
        assignment[p[j] - 1] = j - 1
    return assignment, True


def km_solve_numpy(cost):
    """Vectorized twin of the loop kernel."""
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, np.int64)
    way = np.zeros(n + 1, np.int64)
    assignment = np.full(n, -1, np.int64)

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            active = ~used[1:]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            upd = active & (cur < minv[1:])
            minv[1:][upd] = cur[upd]
            way[1:][upd] = j0
            front = np.where(active, minv[1:], np.inf)
            j1 = int(front.argmin())
            delta = front[j1]
            if delta == np.inf:
                return assignment, False
            u[p[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1 + 1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    assignment[p[1:] - 1] = np.arange(n)
    return assignment, True


if NUMBA_ENABLED:
    _km_core_jit = njit(cache=True)(_km_core_loops)

    def km_solve_numba(cost):
        return _km_core_jit(np.ascontiguousarray(cost, dtype=np.float64))

    km_solve_kernel = km_solve_numba
else:
    km_solve_numba = None
    km_solve_kernel = km_solve_numpy
