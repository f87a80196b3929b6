"""Finite metric spaces, subset masks, neighborhoods and t-chains.

Every analysis in the package runs over a :class:`FiniteMetricSpace`: a
finite window with integer point ids and an integer-valued distance. Two
backings exist: a unit-step graph (distances by BFS, computed lazily per
source and cached) and an explicit distance table. All built-in models are
graph path metrics, which makes every window 1-geodesic; table backing
exists for subspaces and for group families whose balls are not convex in
their Cayley graph.

Values are immutable after construction; the per-source distance cache is
an idempotent fill and safe to share between threads.
"""

from __future__ import annotations

import math
from array import array
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .errors import EmptySubsetError

UNREACHABLE = -1  # sentinel inside distance rows; surfaces as math.inf


class SubsetMask:
    """An immutable subset of the point ids of a parent space."""

    __slots__ = ("parent_size", "ids")

    def __init__(self, parent_size: int, ids: Iterable[int]):
        self.parent_size = parent_size
        self.ids = frozenset(ids)
        if self.ids and (min(self.ids) < 0 or max(self.ids) >= parent_size):
            raise ValueError("mask ids outside parent range")

    @classmethod
    def full(cls, parent_size: int) -> "SubsetMask":
        return cls(parent_size, range(parent_size))

    @classmethod
    def empty(cls, parent_size: int) -> "SubsetMask":
        return cls(parent_size, ())

    def sorted_ids(self) -> list[int]:
        return sorted(self.ids)

    def _check(self, other: "SubsetMask") -> None:
        if self.parent_size != other.parent_size:
            raise ValueError("masks over different parents")

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        self._check(other)
        return SubsetMask(self.parent_size, self.ids & other.ids)

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        self._check(other)
        return SubsetMask(self.parent_size, self.ids | other.ids)

    def __xor__(self, other: "SubsetMask") -> "SubsetMask":
        self._check(other)
        return SubsetMask(self.parent_size, self.ids ^ other.ids)

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        self._check(other)
        return SubsetMask(self.parent_size, self.ids - other.ids)

    def __invert__(self) -> "SubsetMask":
        return SubsetMask(self.parent_size, set(range(self.parent_size)) - self.ids)

    def __contains__(self, i: int) -> bool:
        return i in self.ids

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.sorted_ids())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubsetMask)
            and self.parent_size == other.parent_size
            and self.ids == other.ids
        )

    def __hash__(self) -> int:
        return hash((self.parent_size, self.ids))

    def issubset(self, other: "SubsetMask") -> bool:
        self._check(other)
        return self.ids <= other.ids

    def __repr__(self) -> str:
        return f"SubsetMask({len(self.ids)}/{self.parent_size})"


class FiniteMetricSpace:
    """Finite point set with a symmetric integer distance.

    ``labels`` carry per-point annotations (lattice coordinates, group
    normal forms); ``radial`` is the distance from the window's basepoint in
    the defining model and drives collar logic; ``window_radius`` is the
    radius the window was constructed at.
    """

    def __init__(
        self,
        n: int,
        adjacency: Optional[Sequence[Sequence[int]]] = None,
        table: Optional[Sequence[Sequence[int]]] = None,
        labels: Optional[Sequence] = None,
        radial: Optional[Sequence[int]] = None,
        window_radius: Optional[int] = None,
        basepoint: Optional[int] = None,
    ):
        if (adjacency is None) == (table is None):
            raise ValueError("exactly one of adjacency/table must be given")
        self.n = n
        self._adj = [sorted(a) for a in adjacency] if adjacency is not None else None
        self._table = [array("i", row) for row in table] if table is not None else None
        self.labels = list(labels) if labels is not None else None
        self.window_radius = window_radius
        self.basepoint = basepoint
        self._row_cache: dict[int, array] = {}
        self._scale_adj_cache: dict[int, list[list[int]]] = {}
        if radial is not None:
            self.radial = list(radial)
        elif basepoint is not None:
            self.radial = [d if d != UNREACHABLE else 10**9 for d in self.dist_row(basepoint)]
        else:
            self.radial = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_graph(cls, n, edges, **kw) -> "FiniteMetricSpace":
        adj = [[] for _ in range(n)]
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        return cls(n, adjacency=adj, **kw)

    @classmethod
    def from_table(cls, table, **kw) -> "FiniteMetricSpace":
        return cls(len(table), table=table, **kw)

    @classmethod
    def line(cls, lo: int, hi: int) -> "FiniteMetricSpace":
        """Integer segment [lo, hi] with the path metric; labels are the integers."""
        pts = list(range(lo, hi + 1))
        idx = {v: i for i, v in enumerate(pts)}
        edges = [(idx[v], idx[v + 1]) for v in pts[:-1]]
        base = idx.get(0)
        return cls.from_graph(
            len(pts),
            edges,
            labels=pts,
            window_radius=max(abs(lo), abs(hi)),
            basepoint=base,
        )

    # -- distances -------------------------------------------------------------

    def dist_row(self, x: int) -> array:
        row = self._row_cache.get(x)
        if row is not None:
            return row
        if self._table is not None:
            row = self._table[x]
        else:
            row = array("i", [UNREACHABLE]) * self.n
            row[x] = 0
            dq = deque([x])
            adj = self._adj
            while dq:
                u = dq.popleft()
                du = row[u]
                for w in adj[u]:
                    if row[w] == UNREACHABLE:
                        row[w] = du + 1
                        dq.append(w)
        self._row_cache[x] = row
        return row

    def dist(self, x: int, y: int) -> float:
        d = self.dist_row(x)[y]
        return math.inf if d == UNREACHABLE else d

    def dist_to_set(self, ids: Iterable[int]) -> list[float]:
        """d(x, S) for every x, by multi-source BFS (graph) or row minima."""
        ids = sorted(set(ids))
        if not ids:
            raise EmptySubsetError()
        if self._adj is not None:
            out = [UNREACHABLE] * self.n
            dq = deque()
            for s in ids:
                out[s] = 0
                dq.append(s)
            while dq:
                u = dq.popleft()
                du = out[u]
                for w in self._adj[u]:
                    if out[w] == UNREACHABLE:
                        out[w] = du + 1
                        dq.append(w)
            return [math.inf if d == UNREACHABLE else d for d in out]
        best = [math.inf] * self.n
        for s in ids:
            row = self.dist_row(s)
            for x in range(self.n):
                d = row[x]
                if d != UNREACHABLE and d < best[x]:
                    best[x] = d
        return best

    def neighbors_within(self, x: int, r: int) -> list[int]:
        """Sorted ids at distance in (0, r] of x."""
        return [y for y in self.adjacency_at_scale(r)[x]]

    def adjacency_at_scale(self, r: int) -> list[list[int]]:
        """For each point, sorted points at distance in (0, r]; cached."""
        cached = self._scale_adj_cache.get(r)
        if cached is not None:
            return cached
        if self._adj is not None and r == 1:
            out = [sorted(set(a)) for a in self._adj]
        elif self._adj is not None:
            out = []
            for x in range(self.n):
                found = {x: 0}
                dq = deque([x])
                while dq:
                    u = dq.popleft()
                    du = found[u]
                    if du == r:
                        continue
                    for w in self._adj[u]:
                        if w not in found:
                            found[w] = du + 1
                            dq.append(w)
                found.pop(x)
                out.append(sorted(found))
        else:
            out = []
            for x in range(self.n):
                row = self.dist_row(x)
                out.append([y for y in range(self.n) if y != x and 0 <= row[y] <= r])
        self._scale_adj_cache[r] = out
        return out

    # -- masks and set operations ------------------------------------------------

    def full_mask(self) -> SubsetMask:
        return SubsetMask.full(self.n)

    def mask(self, ids: Iterable[int]) -> SubsetMask:
        return SubsetMask(self.n, ids)

    def mask_where(self, pred: Callable) -> SubsetMask:
        """Mask of points whose label satisfies pred."""
        if self.labels is None:
            raise ValueError("space has no labels")
        return SubsetMask(self.n, (i for i, lab in enumerate(self.labels) if pred(lab)))

    def collar_mask(self, width: int) -> SubsetMask:
        """Outermost shell of the window; these points never decide verdicts."""
        if self.radial is None or self.window_radius is None:
            return SubsetMask.empty(self.n)
        cut = self.window_radius - width
        return SubsetMask(self.n, (i for i in range(self.n) if self.radial[i] > cut))

    def interior_mask(self, width: int) -> SubsetMask:
        return ~self.collar_mask(width)

    def ball_cardinality_profile(self, radii: Sequence[int]) -> dict[int, int]:
        """max_x |N_r(x)| per requested r; the bounded-geometry report."""
        out = {}
        for r in radii:
            adj = self.adjacency_at_scale(r)
            out[r] = max((len(a) + 1 for a in adj), default=0)
        return out


# -- module-level operations ------------------------------------------------------


def neighborhood(X: FiniteMetricSpace, S: SubsetMask, r: int) -> SubsetMask:
    """{ x : d(x, S) <= r }; monotone in both r and S."""
    if len(S) == 0:
        raise EmptySubsetError()
    if r < 0:
        raise ValueError("r must be >= 0")
    d = X.dist_to_set(S.ids)
    return SubsetMask(X.n, (x for x in range(X.n) if d[x] <= r))


def hausdorff_distance(X: FiniteMetricSpace, A: SubsetMask, B: SubsetMask) -> float:
    """inf { r : A <= N_r(B) and B <= N_r(A) } within the window."""
    if len(A) == 0 or len(B) == 0:
        raise EmptySubsetError()
    dB = X.dist_to_set(B.ids)
    dA = X.dist_to_set(A.ids)
    return max(
        max(dB[a] for a in A.ids),
        max(dA[b] for b in B.ids),
    )


@dataclass
class ChainProfile:
    """Minimal t-chain lengths between all pairs (UNREACHABLE where none)."""

    t: int
    lengths: list[array]
    unreachable_pairs: int

    def length(self, x: int, y: int) -> float:
        d = self.lengths[x][y]
        return math.inf if d == UNREACHABLE else d


def chain_profile(X: FiniteMetricSpace, t: int) -> ChainProfile:
    """Per-pair minimal t-chain lengths via BFS on the t-adjacency graph."""
    if t < 1:
        raise ValueError("t must be >= 1")
    adj = X.adjacency_at_scale(t)
    rows = []
    unreachable = 0
    for x in range(X.n):
        row = array("i", [UNREACHABLE]) * X.n
        row[x] = 0
        dq = deque([x])
        while dq:
            u = dq.popleft()
            du = row[u]
            for w in adj[u]:
                if row[w] == UNREACHABLE:
                    row[w] = du + 1
                    dq.append(w)
        unreachable += sum(1 for d in row if d == UNREACHABLE)
        rows.append(row)
    return ChainProfile(t, rows, unreachable)


@dataclass
class CoarseMapProfile:
    """Sampled distortion envelope of a point map.

    eta and phi are non-decreasing step functions stored as sorted
    (input distance, value) breakpoints satisfying
    eta(d(x,y)) <= d(f x, f y) <= phi(d(x,y)) on every sampled pair;
    density is the covering constant B of the image.
    """

    eta: list[tuple[int, float]]
    phi: list[tuple[int, float]]
    density: float

    def eta_at(self, d: float) -> float:
        out = 0.0
        for s, v in self.eta:
            if s <= d:
                out = v
            else:
                break
        return out

    def phi_at(self, d: float) -> float:
        out = 0.0
        for s, v in self.phi:
            if s <= d:
                out = v
        return out


def profile_point_map(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    f: Sequence[int],
    sample_pairs: Optional[Iterable[tuple[int, int]]] = None,
) -> CoarseMapProfile:
    """Sampled (eta, phi, B) profile of the map x -> f[x]."""
    if sample_pairs is None:
        sample_pairs = ((x, y) for x in range(X.n) for y in range(x + 1, X.n))
    per_d: dict[int, list[float]] = {}
    for x, y in sample_pairs:
        dx = X.dist(x, y)
        dy = Y.dist(f[x], f[y])
        if math.isinf(dx):
            continue
        per_d.setdefault(int(dx), []).append(dy)
    ds = sorted(per_d)
    # eta(s) = min image distance over sampled source distances >= s
    eta = []
    running = math.inf
    for s in reversed(ds):
        running = min(running, min(per_d[s]))
        eta.append((s, running))
    eta.reverse()
    # phi(s) = max image distance over sampled source distances <= s
    phi = []
    running = 0.0
    for s in ds:
        running = max(running, max(per_d[s]))
        phi.append((s, running))
    dimg = Y.dist_to_set(set(f))
    density = max(dimg) if dimg else 0.0
    return CoarseMapProfile(eta, phi, density)


__all__ = [
    "UNREACHABLE",
    "SubsetMask",
    "FiniteMetricSpace",
    "neighborhood",
    "hausdorff_distance",
    "ChainProfile",
    "chain_profile",
    "CoarseMapProfile",
    "profile_point_map",
]
