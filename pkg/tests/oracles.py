"""Independent oracles used to freeze expected values.

These deliberately avoid the package's own machinery: dense numpy
elimination for GF(2), plain flood fill for components, brute-force
simplex enumeration for Rips complexes.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np


def dense_rank_gf2(rows: list[list[int]]) -> int:
    """Textbook Gaussian elimination over GF(2) on a dense numpy array."""
    A = np.array(rows, dtype=np.uint8) % 2
    if A.size == 0:
        return 0
    n, m = A.shape
    r = 0
    for c in range(m):
        piv = None
        for i in range(r, n):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        for i in range(n):
            if i != r and A[i, c]:
                A[i, :] ^= A[r, :]
        r += 1
        if r == n:
            break
    return r


def dense_solve_gf2(rows: list[list[int]], rhs: list[int]):
    """Any solution of A x = b over GF(2), or None."""
    A = np.array(rows, dtype=np.uint8) % 2
    b = np.array(rhs, dtype=np.uint8) % 2
    n, m = A.shape
    Ab = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    r = 0
    pivot_cols = []
    for c in range(m):
        piv = None
        for i in range(r, n):
            if Ab[i, c]:
                piv = i
                break
        if piv is None:
            continue
        Ab[[r, piv]] = Ab[[piv, r]]
        for i in range(n):
            if i != r and Ab[i, c]:
                Ab[i, :] ^= Ab[r, :]
        pivot_cols.append(c)
        r += 1
    for i in range(r, n):
        if Ab[i, m]:
            return None
    x = np.zeros(m, dtype=np.uint8)
    for i, c in enumerate(pivot_cols):
        x[c] = Ab[i, m]
    return x.tolist()


def dense_kernel_dim_gf2(rows: list[list[int]]) -> int:
    A = np.array(rows, dtype=np.uint8)
    return (A.shape[1] if A.size else 0) - dense_rank_gf2(rows)


def flood_fill_components(vertices, neighbors):
    """Components of a graph given by a neighbor function; list of frozensets."""
    vertices = list(vertices)
    vset = set(vertices)
    seen = set()
    comps = []
    for v in vertices:
        if v in seen:
            continue
        comp = {v}
        seen.add(v)
        dq = deque([v])
        while dq:
            u = dq.popleft()
            for w in neighbors(u):
                if w in vset and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    dq.append(w)
        comps.append(frozenset(comp))
    return comps


def brute_force_simplices(points, dist, r, max_dim):
    """All Rips simplices up to max_dim by exhaustive subset enumeration."""
    points = sorted(points)
    out = {k: [] for k in range(max_dim + 1)}
    for k in range(max_dim + 1):
        for combo in itertools.combinations(points, k + 1):
            if all(dist(a, b) <= r for a, b in itertools.combinations(combo, 2)):
                out[k].append(tuple(combo))
    return out


def bfs_distances(adj, source):
    dist = {source: 0}
    dq = deque([source])
    while dq:
        u = dq.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                dq.append(w)
    return dist
