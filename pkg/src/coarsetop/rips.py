"""Rips complexes with GF(2) boundary matrices, inclusions and cycle filling.

Simplices are canonical sorted id-tuples; GF(2) coefficients remove all
orientation bookkeeping. Enumeration extends cliques over the r-adjacency
graph in lexicographic order, so ids and matrices are deterministic.
Chains in dimension k are int bitsets over the dimension-k simplex list.

The dimension cap defaults to n+1 for an analysis in dimension n, since no
operation here needs higher simplices. fill_cycle solves the sparse GF(2)
system by column reduction, optionally restricted to simplices inside a
locality ball; feasibility-only solves stream columns and skip witness
bookkeeping, which is what makes window-global membership tests affordable
on the 3d fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from . import gf2
from .errors import ComplexTooLargeError, NotACycleError, NotAChainMapError, NotASubcomplexError, ScheduleExhaustedError
from .gf2 import GF2Matrix
from .metric import FiniteMetricSpace, SubsetMask


class RipsComplex:
    """P_r on a vertex mask of a space, up to dimension cap m."""

    def __init__(self, space: FiniteMetricSpace, vertex_mask: SubsetMask, scale: int, cap: int,
                 simplices: list[list[tuple[int, ...]]]):
        self.space = space
        self.vertex_mask = vertex_mask
        self.scale = scale
        self.cap = cap
        self.simplices = simplices  # per dim, sorted lists of sorted id tuples
        self.index: list[dict[tuple[int, ...], int]] = [
            {s: i for i, s in enumerate(level)} for level in simplices
        ]
        self._boundary_cache: dict[int, GF2Matrix] = {}

    # -- basic counts ---------------------------------------------------------

    def n_simplices(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k <= self.cap else 0

    @property
    def vertices(self) -> list[int]:
        return [s[0] for s in self.simplices[0]]

    # -- boundary matrices ----------------------------------------------------

    def boundary(self, k: int) -> GF2Matrix:
        """∂_k : C_k -> C_{k-1}; ∂_0 is the augmentation row (all ones)."""
        mat = self._boundary_cache.get(k)
        if mat is not None:
            return mat
        if k == 0:
            mat = GF2Matrix(1, self.n_simplices(0), [1] * self.n_simplices(0))
        else:
            mat = GF2Matrix(
                self.n_simplices(k - 1),
                self.n_simplices(k),
                list(self.iter_boundary_columns(k)),
            )
        self._boundary_cache[k] = mat
        return mat

    def iter_boundary_columns(self, k: int) -> Iterator[int]:
        """Columns of ∂_k, streamed (memory-light form for large complexes)."""
        if k == 0:
            for _ in self.simplices[0]:
                yield 1
            return
        faces = self.index[k - 1]
        for s in self.simplices[k]:
            col = 0
            for drop in range(len(s)):
                col |= 1 << faces[s[:drop] + s[drop + 1:]]
            yield col

    def boundary_of_chain(self, k: int, chain: int) -> int:
        """∂_k applied to a chain bitset (k >= 1); k = 0 gives the augmentation."""
        if k == 0:
            return gf2.popcount(chain) & 1
        out = 0
        faces = self.index[k - 1]
        for j in gf2.bits(chain):
            s = self.simplices[k][j]
            for drop in range(len(s)):
                out ^= 1 << faces[s[:drop] + s[drop + 1:]]
        return out

    def chain_from_simplices(self, k: int, simplex_list: Iterable[Sequence[int]]) -> int:
        out = 0
        idx = self.index[k]
        for s in simplex_list:
            out ^= 1 << idx[tuple(sorted(s))]
        return out

    def chain_support_vertices(self, k: int, chain: int) -> SubsetMask:
        verts: set[int] = set()
        for j in gf2.bits(chain):
            verts.update(self.simplices[k][j])
        return SubsetMask(self.space.n, verts)

    def simplices_within(self, k: int, allowed: SubsetMask) -> list[int]:
        """Indices of k-simplices all of whose vertices lie in the mask."""
        ids = allowed.ids
        return [j for j, s in enumerate(self.simplices[k]) if all(v in ids for v in s)]

    def export_simplices(self) -> str:
        """Plain-text export: one sorted vertex tuple per line, per dimension."""
        lines = []
        for k in range(self.cap + 1):
            for s in self.simplices[k]:
                lines.append(" ".join(str(v) for v in s))
        return "\n".join(lines) + "\n"


def build_rips(
    X: FiniteMetricSpace,
    V: SubsetMask,
    r: int,
    m: int,
    max_simplices: int = 5_000_000,
) -> RipsComplex:
    """All simplices of P_r(V) up to dimension m.

    A tuple spans a simplex iff its pairwise distances are <= r; cliques are
    grown over the r-adjacency graph in sorted order.
    """
    if r < 0 or m < 0:
        raise ValueError("scale and cap must be >= 0")
    verts = V.sorted_ids()
    vset = V.ids
    adj = X.adjacency_at_scale(r) if r > 0 else [[] for _ in range(X.n)]
    fwd = {v: [u for u in adj[v] if u in vset and u > v] for v in verts}
    fwd_sets = {v: set(nb) for v, nb in fwd.items()}
    counts = {0: len(verts)}
    simplices: list[list[tuple[int, ...]]] = [[(v,) for v in verts]]
    total = len(verts)
    if total > max_simplices:
        raise ComplexTooLargeError(counts, max_simplices)
    level = [((v,), fwd[v]) for v in verts]
    for k in range(1, m + 1):
        nxt = []
        out = []
        for s, cand in level:
            for u in cand:
                ns = s + (u,)
                ncand = [w for w in cand if w in fwd_sets[u]] if k < m else []
                out.append(ns)
                nxt.append((ns, ncand))
                total += 1
                if total > max_simplices:
                    counts[k] = len(out)
                    raise ComplexTooLargeError(counts, max_simplices)
        counts[k] = len(out)
        simplices.append(out)
        level = nxt
    return RipsComplex(X, V, r, m, simplices)


# -- chain maps ---------------------------------------------------------------


@dataclass
class ChainMap:
    """Per-dimension GF(2) matrices from source chains to target chains."""

    source: RipsComplex
    target: RipsComplex
    mats: list[GF2Matrix]
    vertex_map: dict[int, int]  # space id -> space id
    displacement: list[int] = field(default_factory=list)

    def apply(self, k: int, chain: int) -> int:
        return self.mats[k].matvec(chain)

    def validate(self) -> None:
        """Chain-map identity f∂ = ∂f in every dimension present, plus augmentation."""
        for k in range(1, len(self.mats)):
            lhs = self.mats[k - 1].matmul(_as_matrix(self.source, k))
            rhs = _as_matrix(self.target, k).matmul(self.mats[k])
            if lhs != rhs:
                raise NotAChainMapError(f"failure at dimension {k}")
        # augmentation: epsilon f_0 = epsilon
        f0 = self.mats[0]
        for j in range(f0.cols):
            if gf2.popcount(f0.columns[j]) % 2 != 1:
                raise NotAChainMapError("dimension-0 map is not augmentation preserving")

    def achieved_displacement(self, k: int) -> int:
        """max over k-simplices of the spread of the image support beyond the mapped vertices.

        The simplex-identity map has displacement 0 under this convention.
        """
        spc = self.target.space
        worst = 0
        for j, s in enumerate(self.source.simplices[k]):
            img = self.mats[k].columns[j]
            rows = [spc.dist_row(self.vertex_map[v]) for v in s]
            for t in gf2.bits(img):
                for v in self.target.simplices[k][t]:
                    worst = max(worst, min(row[v] for row in rows))
        return worst


def _as_matrix(K: RipsComplex, k: int) -> GF2Matrix:
    return K.boundary(k)


def inclusion_chain_map(K: RipsComplex, L: RipsComplex) -> ChainMap:
    """Simplex-identity map of a subcomplex; displacement 0."""
    if not K.vertex_mask.issubset(L.vertex_mask):
        raise NotASubcomplexError("vertex mask not contained in target's")
    if K.scale > L.scale or K.cap > L.cap:
        raise NotASubcomplexError("scale or cap exceeds target's")
    mats = []
    for k in range(K.cap + 1):
        cols = []
        for s in K.simplices[k]:
            t = L.index[k].get(s)
            if t is None:
                raise NotASubcomplexError(f"simplex {s} missing from target")
            cols.append(1 << t)
        mats.append(GF2Matrix(L.n_simplices(k), K.n_simplices(k), cols))
    return ChainMap(K, L, mats, {v: v for v in K.vertices}, [0] * (K.cap + 1))


def fill_cycle(
    L: RipsComplex,
    k: int,
    z: int,
    locality: Optional[tuple[int, int]] = None,
    want_witness: bool = True,
) -> Optional[int]:
    """A (k+1)-chain w with ∂w = z, or None ("no-fill").

    z must be a reduced k-cycle (augmentation included for k = 0). With a
    locality (center id, radius), only (k+1)-simplices whose vertices lie in
    N_radius(center) enter the solve.
    """
    if k + 1 > L.cap:
        raise ValueError("complex cap too low to fill at this dimension")
    if L.boundary_of_chain(k, z) != 0:
        raise NotACycleError()
    if locality is None:
        cols_idx = range(L.n_simplices(k + 1))
    else:
        center, radius = locality
        row = L.space.dist_row(center)
        allowed = {v for v in L.vertex_mask.ids if 0 <= row[v] <= radius}
        cols_idx = [
            j for j, s in enumerate(L.simplices[k + 1]) if all(v in allowed for v in s)
        ]
    faces = L.index[k]
    simp = L.simplices[k + 1]

    def columns():
        for j in cols_idx:
            s = simp[j]
            col = 0
            for drop in range(len(s)):
                col |= 1 << faces[s[:drop] + s[drop + 1:]]
            yield col

    x = gf2.solve_columns(columns(), z, want_witness=want_witness)
    if x is None:
        return None
    if not want_witness:
        return 0
    out = 0
    idx_list = list(cols_idx)
    for b in gf2.bits(x):
        out |= 1 << idx_list[b]
    return out


def induced_chain_map(
    f: dict[int, int],
    K: RipsComplex,
    Y: FiniteMetricSpace,
    schedule: Sequence[int],
    target_mask: Optional[SubsetMask] = None,
) -> ChainMap:
    """Chain map induced by a point map, built by local cycle filling.

    Dimension 0 is vertex relabeling; each higher simplex maps to a filling
    of its boundary's image, searched inside growing locality balls at the
    scheduled target scale for that dimension. The final target complex is
    built at the last scheduled scale, into which lower-scale fills include
    simplex-for-simplex.
    """
    if list(schedule) != sorted(schedule):
        raise ValueError("scale schedule must be non-decreasing")
    if len(schedule) < K.cap + 1:
        raise ValueError("schedule must name a scale per dimension")
    mask = target_mask if target_mask is not None else Y.full_mask()
    for v in K.vertices:
        if f[v] not in mask.ids:
            raise ValueError(f"vertex {v} maps outside the target window")
    targets = {r: build_rips(Y, mask, r, K.cap) for r in sorted(set(schedule))}
    final = targets[schedule[K.cap]]
    mats: list[GF2Matrix] = []
    disp: list[int] = []
    # dimension 0: relabel
    cols0 = [1 << final.index[0][(f[s[0]],)] for s in K.simplices[0]]
    mats.append(GF2Matrix(final.n_simplices(0), K.n_simplices(0), cols0))
    disp.append(0)
    prev_disp = 0
    for k in range(1, K.cap + 1):
        r_k = schedule[k]
        tgt = targets[r_k]
        cols = []
        worst = 0
        for s in K.simplices[k]:
            # boundary image, expressed in the scale-r_k target complex
            bnd = 0
            for drop in range(len(s)):
                face = s[:drop] + s[drop + 1:]
                img = mats[k - 1].columns[K.index[k - 1][face]]
                for t in gf2.bits(img):
                    bnd ^= 1 << tgt.index[k - 1][final.simplices[k - 1][t]]
            center = f[s[0]]
            # when the image vertex set itself spans a target simplex, the
            # simplicial value is the canonical fill (displacement 0 for
            # inclusions and relabelings)
            image = tuple(sorted({f[v] for v in s}))
            w = None
            if len(image) < len(s):
                if bnd == 0:
                    w = 0
            else:
                t = tgt.index[k].get(image)
                if t is not None and tgt.boundary_of_chain(k, 1 << t) == bnd:
                    w = 1 << t
            base_radius = (k + 1) * r_k + prev_disp + K.scale + 1
            radius = base_radius
            window = Y.window_radius or 10**9
            while w is None:
                w = fill_cycle(tgt, k - 1, bnd, locality=(center, radius))
                if w is not None:
                    break
                if radius > 2 * window:
                    w = fill_cycle(tgt, k - 1, bnd, locality=None)
                    if w is None:
                        raise ScheduleExhaustedError(s)
                    break
                radius *= 2
            col = 0
            rows = [Y.dist_row(f[v]) for v in s]
            for t in gf2.bits(w):
                tup = tgt.simplices[k][t]
                col |= 1 << final.index[k][tup]
                worst = max(worst, max(min(rw[v] for rw in rows) for v in tup))
            cols.append(col)
        mats.append(GF2Matrix(final.n_simplices(k), K.n_simplices(k), cols))
        disp.append(worst)
        prev_disp = worst
    cm = ChainMap(K, final, mats, dict(f), disp)
    cm.validate()
    return cm


__all__ = [
    "RipsComplex",
    "build_rips",
    "ChainMap",
    "inclusion_chain_map",
    "fill_cycle",
    "induced_chain_map",
]
