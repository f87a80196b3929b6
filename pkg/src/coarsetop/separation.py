"""Coarse boundaries, complementary components, relative ends, stabilizers.

A coarse complementary component of W at parameters (r, A) is a set C with
boundary_r(C \\ N_A(W)) inside N_A(W); equivalently a union of components
of the r-adjacency graph off N_A(W). "Deep" properly means not contained
in any neighborhood of W, an asymptotic statement; its finite surrogate
here is reaching the collar while escaping N_{A+collar}(W). Every verdict
names the window it was computed on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CoarseTopError, EmptySubsetError
from .groups import BallModel, trend_verdict
from .metric import FiniteMetricSpace, SubsetMask, hausdorff_distance, neighborhood


def coarse_boundary(X: FiniteMetricSpace, C: SubsetMask, r: int) -> SubsetMask:
    """{ x not in C : d(x, C) <= r }."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if len(C) == 0:
        return SubsetMask.empty(X.n)
    d = X.dist_to_set(C.ids)
    return SubsetMask(X.n, (x for x in range(X.n) if x not in C.ids and d[x] <= r))


def is_coarse_complementary(
    X: FiniteMetricSpace, W: SubsetMask, C: SubsetMask, r: int, A: int
) -> bool:
    """Literal containment check boundary_r(C \\ N_A(W)) inside N_A(W)."""
    if r < 1 or A < 0:
        raise ValueError("need r >= 1 and A >= 0")
    nA = neighborhood(X, W, A) if A > 0 else _closure0(X, W)
    core = C - nA
    if len(core) == 0:
        return True  # vacuously complementary
    bdry = coarse_boundary(X, core, r)
    return bdry.issubset(nA)


def _closure0(X: FiniteMetricSpace, W: SubsetMask) -> SubsetMask:
    # N_0(W) = W itself for integer metrics
    return W


@dataclass
class CoarseComponent:
    mask: SubsetMask
    touches_collar: bool
    max_dist_to_w: float
    deep: bool


@dataclass
class CoarseComponentSet:
    """Components of the r-adjacency graph off N_A(W), with depth labels."""

    space: FiniteMetricSpace
    w: SubsetMask
    r: int
    A: int
    collar: int
    nA: SubsetMask
    components: list[CoarseComponent]

    def deep_components(self) -> list[CoarseComponent]:
        return [c for c in self.components if c.deep]

    def shallow_components(self) -> list[CoarseComponent]:
        return [c for c in self.components if not c.deep]

    def partition_ok(self) -> bool:
        """The component masks partition X \\ N_A(W) exactly."""
        seen: set[int] = set()
        for c in self.components:
            if seen & c.mask.ids:
                return False
            seen |= c.mask.ids
        return seen == (self.space.full_mask() - self.nA).ids


def complement_components(
    X: FiniteMetricSpace,
    W: SubsetMask,
    r: int,
    A: int,
    collar: int = 2,
) -> CoarseComponentSet:
    """Union-find components of P_r(X) \\ P_r(N_A(W)).

    deep = touches the collar and is not contained in N_{A+collar}(W) for
    the largest collar-safe test radius; the labels are monotone under
    window growth.
    """
    if len(W) == 0:
        raise EmptySubsetError("W must be nonempty")
    nA = neighborhood(X, W, A)
    off = X.full_mask() - nA
    dW = X.dist_to_set(W.ids)
    rad = X.radial
    R = X.window_radius
    cut = (R - collar) if (R is not None and rad is not None) else None
    adj = X.adjacency_at_scale(r)
    ids = off.ids
    seen: set[int] = set()
    comps: list[CoarseComponent] = []
    for v in off.sorted_ids():
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in ids and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        touches = bool(cut is not None and any(rad[u] > cut for u in comp))
        maxd = max(dW[u] for u in comp)
        deep = touches and maxd > A + collar
        comps.append(CoarseComponent(SubsetMask(X.n, comp), touches, maxd, deep))
    comps.sort(key=lambda c: min(c.mask.ids))
    return CoarseComponentSet(X, W, r, A, collar, nA, comps)


# -- boolean algebra of complementary sets -----------------------------------------


def verified_algebra_op(
    X: FiniteMetricSpace,
    W: SubsetMask,
    r: int,
    A: int,
    op: str,
    C1: SubsetMask,
    C2: Optional[SubsetMask] = None,
) -> SubsetMask:
    """Apply complement/union/intersection/symmetric difference, re-verified.

    The result of any of these on (r, A)-complementary inputs is again
    (r, A)-complementary; the check is replayed literally and a failure
    raises, which would signal the inputs were not complementary.
    """
    if op == "complement":
        out = ~C1
    elif op == "union":
        out = C1 | C2
    elif op == "intersection":
        out = C1 & C2
    elif op == "symmetric_difference":
        out = C1 ^ C2
    else:
        raise ValueError(f"unknown op {op!r}")
    if not is_coarse_complementary(X, W, out, r, A):
        raise CoarseTopError("algebra-not-complementary", f"{op} result failed verification")
    return out


# -- separation reports --------------------------------------------------------------


@dataclass
class WindowSeparation:
    window_radius: int
    n_deep: int
    e_tilde_lower: int
    e_lower: Optional[int]


@dataclass
class SeparationReport:
    windows: list[WindowSeparation]
    verdict: str  # "stable" | "growing" | "inconclusive"

    def max_deep(self) -> int:
        return max(w.n_deep for w in self.windows)


def coarse_n_separation(
    window_components: Sequence[CoarseComponentSet],
    invariant_counts: Optional[Sequence[Optional[int]]] = None,
) -> SeparationReport:
    """Count deep, pairwise coarse-disjoint components per window.

    Irreducible components are pairwise disjoint, hence automatically coarse
    disjoint, so the count is the number of deep components. The e-side
    lower bound counts H-invariant unions when an action is supplied.
    """
    rows = []
    for t, cs in enumerate(window_components):
        n_deep = len(cs.deep_components())
        e_low = invariant_counts[t] if invariant_counts is not None else None
        if e_low is not None and e_low > n_deep:
            raise CoarseTopError("e-exceeds-etilde", "invariant count exceeded deep count")
        rows.append(
            WindowSeparation(cs.space.window_radius or -1, n_deep, n_deep, e_low)
        )
    counts = [r.n_deep for r in rows]
    t = trend_verdict(counts)
    return SeparationReport(rows, "stable" if t == "bounded" else t)


# -- group actions on components ------------------------------------------------------


def invariant_components(
    ball: BallModel,
    H: SubsetMask,
    generators: Sequence,
    components: CoarseComponentSet,
) -> tuple[list[str], Optional[int]]:
    """Per-component action verdicts and the H-invariant (e-side) count.

    Verdicts are "invariant", "not", or "undetermined-at-window" when the
    partial action never lands inside the window. The e-side count groups
    components into orbits of the partial action; each deep orbit union is
    an H-invariant complementary set.
    """
    steps = []
    for g in generators:
        steps.append(g)
        steps.append(ball.model.inv(g))
    tables = [ball.action_table(g) for g in steps]
    verdicts = []
    n = len(components.components)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    comp_of = {}
    for t, c in enumerate(components.components):
        for v in c.mask.ids:
            comp_of[v] = t
    for t, c in enumerate(components.components):
        any_defined = False
        stays = True
        for table in tables:
            for v in c.mask.ids:
                img = table[v]
                if img is None:
                    continue
                any_defined = True
                other = comp_of.get(img)
                if other is None:
                    # lands in N_A(W); ignore for invariance of the off part
                    continue
                if other != t:
                    stays = False
                    union(t, other)
        if not any_defined:
            verdicts.append("undetermined-at-window")
        elif stays:
            verdicts.append("invariant")
        else:
            verdicts.append("not")
    deep_orbit_roots = set()
    saw_undetermined = False
    for t, c in enumerate(components.components):
        if c.deep:
            if verdicts[t] == "undetermined-at-window":
                saw_undetermined = True
            deep_orbit_roots.add(find(t))
    e_count: Optional[int] = None if saw_undetermined else len(deep_orbit_roots)
    return verdicts, e_count


def stabilizer_trace(
    ball: BallModel,
    H: SubsetMask,
    C: SubsetMask,
    A: int,
) -> tuple[SubsetMask, dict]:
    """{ h in H∩window : h(C \\ N_A(H)) = C \\ N_A(H) where defined }.

    The report compares the trace to H within the window: the trace of the
    true stabilizer need not generate it, so only the windowed Hausdorff
    distance is stated.
    """
    X = ball.space
    nA = neighborhood(X, H, A)
    core = (C - nA).ids
    trace = []
    for h_id in H.sorted_ids():
        h = ball.elements[h_id]
        table = ball.action_table(h)
        inv_table = ball.action_table(ball.model.inv(h))
        ok = True
        for v in core:
            for tb in (table, inv_table):
                img = tb[v]
                if img is not None and img not in core and img not in nA.ids:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            trace.append(h_id)
    trace_mask = SubsetMask(X.n, trace)
    if trace:
        dist = hausdorff_distance(X, trace_mask, H)
    else:
        dist = math.inf
    report = {
        "trace_size": len(trace),
        "H_size": len(H),
        "hausdorff_to_H": dist,
        "close_to_H": dist <= A + ball.radius ** 0.5 if dist != math.inf else False,
        "window_radius": ball.radius,
    }
    return trace_mask, report


def almost_invariant_extract(
    ball: BallModel,
    H: SubsetMask,
    C: SubsetMask,
    A: int,
    collar: int = 2,
) -> tuple[SubsetMask, dict]:
    """X^ = { g : gH∩window inside C ∪ N_A(H) }, with the three checks replayed.

    Verifies (i) right H-invariance where defined, (ii) agreement with C
    outside N_A(H), (iii) depth of both X^ and its complement.
    """
    X = ball.space
    model = ball.model
    nA = neighborhood(X, H, A)
    h_elems = [ball.elements[i] for i in H.sorted_ids()]
    allowed = C.ids | nA.ids
    members = []
    for g_id in range(X.n):
        g = ball.elements[g_id]
        coset_ids = []
        for h in h_elems:
            i = ball.index.get(model.mul(g, h))
            if i is not None:
                coset_ids.append(i)
        if coset_ids and all(i in allowed for i in coset_ids):
            members.append(g_id)
    xhat = SubsetMask(X.n, members)

    # (i) right multiplication by H generators preserves X^ where defined;
    # the trace's shortest nontrivial elements act as generators
    right_ok = True
    interior = X.interior_mask(collar)
    nontrivial = sorted(
        (h for h in h_elems if h != model.identity()), key=model.length
    )
    gens = nontrivial[:2] if nontrivial else []
    for h in gens:
        for g_id in members:
            img = ball.act_right(g_id, h)
            if img is None:
                continue
            if g_id in interior.ids and img in interior.ids and img not in xhat.ids:
                right_ok = False
    # (ii) agreement with C outside N_A(H)
    agree = (xhat ^ C) - nA
    agree_ok = len(agree & interior) == 0
    # (iii) both sides deep
    comp = ~xhat
    rad = X.radial
    cut = (X.window_radius or 0) - collar
    dH = X.dist_to_set(H.ids)
    def deep(mask: SubsetMask) -> bool:
        pts = (mask - nA).ids
        return any(rad[v] > cut for v in pts) and any(dH[v] > A + collar for v in pts)
    proper = deep(xhat) and deep(comp)
    report = {
        "right_invariant_where_defined": right_ok,
        "agrees_with_C_off_NA": agree_ok,
        "proper": proper,
        "verdict": "ok" if (right_ok and agree_ok and proper) else "not-proper",
        "window_radius": ball.radius,
    }
    return xhat, report


def shallow_bound_check(
    X: FiniteMetricSpace,
    W: SubsetMask,
    r: int,
    A: int,
    R_grid: Sequence[int],
    collar: int = 2,
) -> dict:
    """Smallest R in the grid with every shallow component inside N_R(W)."""
    cs = complement_components(X, W, r, A, collar=collar)
    shallow = cs.shallow_components()
    if not shallow:
        return {"R": A, "shallow_components": 0, "note": "no shallow components exist"}
    worst = max(c.max_dist_to_w for c in shallow)
    for R in sorted(R_grid):
        if worst <= R:
            return {"R": R, "shallow_components": len(shallow), "max_depth": worst}
    return {"R": None, "shallow_components": len(shallow), "max_depth": worst,
            "note": "exceeds-window"}


# -- literal containment checks (used by tests and the MV dichotomy gate) -------------


def nbhd_containment_check(
    X: FiniteMetricSpace, W: SubsetMask, C: SubsetMask, r: int, A: int, R_values: Sequence[int]
) -> bool:
    """N_R(C) inside C ∪ N_{A+R}(W) for every tested R."""
    for R in R_values:
        nC = neighborhood(X, C, R)
        allowed = C | neighborhood(X, W, A + R)
        if not nC.issubset(allowed):
            return False
    return True


def simplex_dichotomy_check(K, W_A: SubsetMask, C: SubsetMask) -> bool:
    """Every simplex lies in N_A(W) ∪ C or in N_A(W) ∪ (X \\ C), literally."""
    other = (K.space.full_mask() - C) | W_A
    first = C | W_A
    for k in range(K.cap + 1):
        for s in K.simplices[k]:
            in_first = all(v in first.ids for v in s)
            in_second = all(v in other.ids for v in s)
            if not (in_first or in_second):
                return False
    return True


__all__ = [
    "coarse_boundary",
    "is_coarse_complementary",
    "CoarseComponent",
    "CoarseComponentSet",
    "complement_components",
    "verified_algebra_op",
    "WindowSeparation",
    "SeparationReport",
    "coarse_n_separation",
    "invariant_components",
    "stabilizer_trace",
    "almost_invariant_extract",
    "shallow_bound_check",
    "nbhd_containment_check",
    "simplex_dichotomy_check",
]
