"""Essential-component probes and the finite-scale Mayer-Vietoris assembly.

Essentiality is decided through homology at infinity: a complementary
component C of W is probed by pushing the surviving classes of reduced
H_{n-1} of W-annuli into annuli of C ∪ W at a coarser paired schedule and
asking whether they die there. Death of every surviving class reads
"essential", a surviving image reads "non-essential", and a probe with no
class to push is inconclusive. The paired schedule doubles the Rips scale
and halves the excision radius.

The Mayer-Vietoris assembly works on collar-relative cochain complexes of
the pieces N_A(W), N_A(W) ∪ C, N_A(W) ∪ (X\\C) and X at one Rips scale,
verifies the short exact sequence columnwise (the simplex dichotomy is the
gate), computes the connecting map by the extend/coboundary/extend snake,
and checks exactness at the reachable spots as subspace identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import gf2
from .cochains import RelativeComplex, extension_matrix, restriction_matrix
from .errors import CoarseTopError, WindowTooSmallError
from .gf2 import GF2Matrix
from .homology import (
    WindowSchedule,
    annulus_mask,
    pd_signature_check,
    schedule_two_scale,
)
from .metric import FiniteMetricSpace, SubsetMask, neighborhood
from .rips import RipsComplex, build_rips, fill_cycle
from .separation import is_coarse_complementary, simplex_dichotomy_check


# -- almost essential ---------------------------------------------------------------


@dataclass
class AlmostEssentialReport:
    A: int
    B: Optional[int]  # smallest working B, None when none in the grid works
    tested: list[int]
    verdict: str  # "B=<n>" | "fails-at-window"
    window_radius: int


def almost_essential_probe(
    X: FiniteMetricSpace,
    W: SubsetMask,
    C: SubsetMask,
    A: int,
    B_grid: Sequence[int],
    collar: int = 2,
) -> AlmostEssentialReport:
    """Smallest B in the grid with W (off the collar) inside N_B(C \\ N_A(W))."""
    if not is_coarse_complementary(X, W, C, 1, A):
        raise CoarseTopError("not-complementary", "C is not (1, A)-complementary to W")
    nA = neighborhood(X, W, A)
    core = C - nA
    interior = X.interior_mask(collar)
    targets = (W & interior).sorted_ids()
    if not targets or len(core) == 0:
        return AlmostEssentialReport(A, None, list(B_grid), "fails-at-window", X.window_radius or -1)
    d = X.dist_to_set(core.ids)
    need = max(d[w] for w in targets)
    for B in sorted(B_grid):
        if need <= B:
            return AlmostEssentialReport(A, B, list(B_grid), f"B={B}", X.window_radius or -1)
    return AlmostEssentialReport(A, None, list(B_grid), "fails-at-window", X.window_radius or -1)


# -- essential probe ----------------------------------------------------------------


@dataclass
class EssentialVerdict:
    component: str
    verdict: str  # "essential" | "non-essential" | "inconclusive"
    schedule: Optional[WindowSchedule]
    reason: str = ""
    witnesses: list[dict] = field(default_factory=list)


def paired_target_schedule(sched: WindowSchedule) -> tuple[int, int]:
    """(scale, excision) for the C ∪ W annulus paired with a W-side schedule.

    Doubles the Rips scale and halves the excision radius, mirroring the
    acyclicity escalation of a component union.
    """
    scale = max(2 * sched.i, sched.j)
    excise = max(sched.S_out, sched.S // 2, scale)
    return scale, excise


def essential_probe(
    X: FiniteMetricSpace,
    W: SubsetMask,
    C: SubsetMask,
    n: int,
    schedules: Sequence[WindowSchedule],
    component_name: str = "C",
    skip_pd_check: bool = False,
    max_witness_columns: int = 60_000,
    probe_schedule: Optional[WindowSchedule] = None,
) -> EssentialVerdict:
    """Probe one complementary component for essentiality in dimension n.

    The schedule family drives the PD precondition on W; the class push
    happens at ``probe_schedule`` (default: the last of the family).
    """
    try:
        if not skip_pd_check:
            pd = pd_signature_check(X, n, schedules, within=W)
            if not pd.passed:
                return EssentialVerdict(
                    component_name,
                    "inconclusive",
                    None,
                    reason=f"W fails the PD signature check at n={n}: {pd.degree_verdicts}",
                )
        sched = probe_schedule if probe_schedule is not None else schedules[-1]
        sched.validate()
        w_img = schedule_two_scale(X, n - 1, sched, within=W)
    except WindowTooSmallError as err:
        return EssentialVerdict(component_name, "inconclusive", None, reason=str(err))
    if w_img.rank == 0:
        return EssentialVerdict(
            component_name, "inconclusive", sched, reason="no surviving W-class to push"
        )
    scale, excise = paired_target_schedule(sched)
    target_mask = annulus_mask(X, excise, None, within=(C | W))
    if len(target_mask) == 0:
        return EssentialVerdict(component_name, "inconclusive", sched, reason="empty target annulus")
    target = build_rips(X, target_mask, scale, n)
    witnesses = []
    any_survives = False
    for cls in w_img.classes:
        chain = _push_cycle(w_img.inner, target, n - 1, cls.representative)
        fate = _death_or_survival(target, n - 1, chain, max_witness_columns)
        witnesses.append(
            {
                "class_dim": n - 1,
                "survives_in_target": fate["survives"],
                "fill": fate.get("fill"),
                "fill_locality": fate.get("locality"),
            }
        )
        if fate["survives"]:
            any_survives = True
    verdict = "non-essential" if any_survives else "essential"
    return EssentialVerdict(component_name, verdict, sched, witnesses=witnesses)


def _push_cycle(src: RipsComplex, dst: RipsComplex, k: int, chain: int) -> int:
    """Reindex a chain of src into dst; src must be a subcomplex of dst."""
    out = 0
    for j in gf2.bits(chain):
        s = src.simplices[k][j]
        t = dst.index[k].get(s)
        if t is None:
            raise CoarseTopError("not-a-subcomplex", f"simplex {s} missing from target complex")
        out |= 1 << t
    return out


def _death_or_survival(target: RipsComplex, k: int, z: int, max_witness_columns: int) -> dict:
    """Decide z ∈ im ∂_{k+1}(target); extract a fill chain when affordable.

    Small systems run witnessed directly. Large ones try one locality pass
    around the cycle support for a compact witness, then decide on the full
    complex with the witnessless streaming solve; the verdict always comes
    from an exact membership computation.
    """
    ncols = target.n_simplices(k + 1)
    if ncols <= max_witness_columns:
        fill = fill_cycle(target, k, z, want_witness=True)
        return {"survives": fill is None, "fill": fill, "locality": "full"}
    supp = target.chain_support_vertices(k, z)
    rho = 2 * target.scale + 2
    d = target.space.dist_to_set(supp.ids)
    local_vertices = SubsetMask(
        target.space.n, (v for v in target.vertex_mask.ids if d[v] <= rho)
    )
    local_cols = target.simplices_within(k + 1, local_vertices)
    if len(local_cols) <= max_witness_columns:
        fill = _fill_on_columns(target, k, z, local_cols, want_witness=True)
        if fill is not None:
            return {"survives": False, "fill": fill, "locality": f"N_{rho}(supp)"}
    feasible = fill_cycle(target, k, z, want_witness=False)
    return {"survives": feasible is None, "fill": None, "locality": "full/feasibility-only"}


def _fill_on_columns(K: RipsComplex, k: int, z: int, cols_idx: list[int], want_witness: bool):
    faces = K.index[k]
    simp = K.simplices[k + 1]

    def columns():
        for j in cols_idx:
            s = simp[j]
            col = 0
            for drop in range(len(s)):
                col |= 1 << faces[s[:drop] + s[drop + 1:]]
            yield col

    x = gf2.solve_columns(columns(), z, want_witness=want_witness)
    if x is None or not want_witness:
        return x
    out = 0
    for b in gf2.bits(x):
        out |= 1 << cols_idx[b]
    return out


# -- Mayer-Vietoris assembly -----------------------------------------------------------


@dataclass
class MVPieces:
    X: RelativeComplex
    A: RelativeComplex  # N_A(W) ∪ C1
    B: RelativeComplex  # N_A(W) ∪ C2
    W: RelativeComplex  # N_A(W)
    q_mats: dict[int, tuple[GF2Matrix, GF2Matrix]]  # restrictions X->A, X->B
    p_mats: dict[int, tuple[GF2Matrix, GF2Matrix]]  # restrictions A->W, B->W


@dataclass
class MVReport:
    r: int
    A: int
    collar: int
    dichotomy: bool
    ses_ok: dict[int, bool]
    connecting: list[dict]
    exactness: dict[str, bool]
    pieces: MVPieces = field(repr=False, default=None)


def mv_assemble(
    X: FiniteMetricSpace,
    W: SubsetMask,
    C1: SubsetMask,
    r: int,
    A: int,
    cap: int,
    w_classes: Sequence[tuple[int, int]] = (),
    collar: int = 2,
    check_exactness_upto: Optional[int] = None,
) -> MVReport:
    """Assemble the three-piece short exact sequence and the connecting map.

    ``w_classes`` lists (degree, cochain bitset over the W piece's relative
    simplices); each must be a relative cocycle. The report carries, per
    class, the snake representative on X, its support, and whether it is
    nonzero in the collar-relative cohomology proxy.
    """
    if not is_coarse_complementary(X, W, C1, r, A):
        raise CoarseTopError("not-complementary", "C1 is not (r, A)-complementary to W")
    nA = neighborhood(X, W, A)
    C2 = (X.full_mask() - C1) | nA
    C1p = C1 | nA
    interior = X.interior_mask(collar)
    KX = build_rips(X, X.full_mask(), r, cap)
    dichotomy = simplex_dichotomy_check(KX, nA, C1)
    if not dichotomy:
        raise CoarseTopError("dichotomy-failed", "a simplex straddles both sides; raise A")
    KA = build_rips(X, C1p, r, cap)
    KB = build_rips(X, C2, r, cap)
    KW = build_rips(X, nA, r, cap)
    RX = RelativeComplex(KX, interior)
    RA = RelativeComplex(KA, interior & C1p)
    RB = RelativeComplex(KB, interior & C2)
    RW = RelativeComplex(KW, interior & nA)
    q_mats = {}
    p_mats = {}
    ses_ok = {}
    for k in range(cap + 1):
        qa = restriction_matrix(RX, RA, k)
        qb = restriction_matrix(RX, RB, k)
        pa = restriction_matrix(RA, RW, k)
        pb = restriction_matrix(RB, RW, k)
        q_mats[k] = (qa, qb)
        p_mats[k] = (pa, pb)
        # columnwise short exactness:
        #  q injective, p surjective, p∘q = 0, rank q + rank p = middle dim
        stacked_q = [qa.columns[j] | (qb.columns[j] << RA.n_rel(k)) for j in range(RX.n_rel(k))]
        q_inj = gf2.rank_of_columns(stacked_q) == RX.n_rel(k)
        p_cols = [pa.columns[j] for j in range(RA.n_rel(k))] + [
            pb.columns[j] for j in range(RB.n_rel(k))
        ]
        p_surj = gf2.rank_of_columns(p_cols) == RW.n_rel(k)
        pq_zero = all(
            pa.matvec(qa.columns[j]) ^ pb.matvec(qb.columns[j]) == 0
            for j in range(RX.n_rel(k))
        )
        middle = RA.n_rel(k) + RB.n_rel(k)
        rank_ok = gf2.rank_of_columns(stacked_q) + gf2.rank_of_columns(p_cols) == middle
        ses_ok[k] = bool(q_inj and p_surj and pq_zero and rank_ok)
    pieces = MVPieces(RX, RA, RB, RW, q_mats, p_mats)
    connecting = []
    for deg, sigma in w_classes:
        if not RW.is_cocycle(deg, sigma):
            raise CoarseTopError("not-a-cocycle", "supplied W-class is not a relative cocycle")
        omega = connecting_map(pieces, deg, sigma)
        nonzero = RX.class_is_zero(deg + 1, omega) is None
        connecting.append(
            {
                "degree": deg,
                "input": sigma,
                "output": omega,
                "nonzero_in_proxy": nonzero,
                "support": RX.support_vertices(deg + 1, omega),
            }
        )
    exactness = {}
    upto = check_exactness_upto if check_exactness_upto is not None else cap - 1
    for k in range(0, max(0, upto)):
        exactness[f"middle-H{k}"] = _exact_at_middle(pieces, k)
        exactness[f"w-H{k}"] = _exact_at_w(pieces, k)
    return MVReport(r, A, collar, dichotomy, ses_ok, connecting, exactness, pieces)


def connecting_map(pieces: MVPieces, deg: int, sigma: int) -> int:
    """Snake: extend by zero to the C1 piece, take delta, extend by zero to X."""
    RA, RW, RX = pieces.A, pieces.W, pieces.X
    ext_wa = extension_matrix(RW, RA, deg)
    rho = ext_wa.matvec(sigma)
    eta = RA.coboundary(deg, rho)
    ext_ax = extension_matrix(RA, RX, deg + 1)
    omega = ext_ax.matvec(eta)
    if not RX.is_cocycle(deg + 1, omega):
        raise CoarseTopError("snake-failed", "connecting-map output is not a relative cocycle")
    return omega


def _span_equal(span_a: list[int], span_b: list[int], ambient: int) -> bool:
    sa = gf2.span_of(span_a, ambient)
    sb = gf2.span_of(span_b, ambient)
    if sa.dim != sb.dim:
        return False
    return all(sb.contains(v) for v in span_a)


def _exact_at_middle(pieces: MVPieces, k: int) -> bool:
    """im q* = ker p* at H^k(A) ⊕ H^k(B)."""
    RX, RA, RB, RW = pieces.X, pieces.A, pieces.B, pieces.W
    qa, qb = pieces.q_mats[k]
    pa, pb = pieces.p_mats[k]
    offs = RA.n_rel(k)
    dim_mid = RA.n_rel(k) + RB.n_rel(k)
    # cocycles of the middle term (block diagonal delta)
    da, db = RA.delta(k), RB.delta(k)
    mid_delta = GF2Matrix(
        da.rows + db.rows,
        dim_mid,
        [da.columns[j] for j in range(da.cols)]
        + [db.columns[j] << da.rows for j in range(db.cols)],
    )
    z_mid = gf2.kernel_basis(mid_delta)
    bd_mid_cols = (
        []
        if k == 0
        else [
            RA.delta(k - 1).columns[j] for j in range(RA.n_rel(k - 1))
        ]
        + [RB.delta(k - 1).columns[j] << offs for j in range(RB.n_rel(k - 1))]
    )
    # image side: q of X-cocycles, plus middle coboundaries
    z_x = gf2.kernel_basis(RX.delta(k)) if k < RX.K.cap else [1 << j for j in range(RX.n_rel(k))]
    img = [qa.matvec(z) | (qb.matvec(z) << offs) for z in z_x] + bd_mid_cols
    # kernel side: middle cocycles whose p-image is a W-coboundary
    bw = RW.coboundary_space(k)
    reduced = []
    for z in z_mid:
        pz = pa.matvec(z & ((1 << offs) - 1)) ^ pb.matvec(z >> offs)
        reduced.append(bw.reduce(pz))
    combos = gf2.kernel_basis(GF2Matrix(RW.n_rel(k), len(reduced), reduced))
    ker = []
    for m in combos:
        v = 0
        for b in gf2.bits(m):
            v ^= z_mid[b]
        ker.append(v)
    ker += bd_mid_cols
    return _span_equal(img, ker, dim_mid)


def _exact_at_w(pieces: MVPieces, k: int) -> bool:
    """im p* = ker delta~ at H^k(W)."""
    RX, RA, RB, RW = pieces.X, pieces.A, pieces.B, pieces.W
    pa, pb = pieces.p_mats[k]
    z_w = gf2.kernel_basis(RW.delta(k)) if k < RW.K.cap else [1 << j for j in range(RW.n_rel(k))]
    bd_w = [] if k == 0 else list(RW.delta(k - 1).columns)
    # image side: p of middle cocycles
    da, db = RA.delta(k), RB.delta(k)
    img = []
    for z in gf2.kernel_basis(da):
        img.append(pa.matvec(z))
    for z in gf2.kernel_basis(db):
        img.append(pb.matvec(z))
    img += bd_w
    # kernel side: W-cocycles whose snake image is a coboundary on X
    bx = gf2.image_basis(RX.delta(k)) if RX.n_rel(k) else gf2.GF2Subspace(RX.n_rel(k + 1), {})
    reduced = [bx.reduce(connecting_map(pieces, k, z)) for z in z_w]
    combos = gf2.kernel_basis(GF2Matrix(RX.n_rel(k + 1), len(reduced), reduced))
    ker = []
    for m in combos:
        v = 0
        for b in gf2.bits(m):
            v ^= z_w[b]
        ker.append(v)
    ker += bd_w
    return _span_equal(img, ker, RW.n_rel(k))


def localized_boundary_support(
    pieces: MVPieces,
    deg: int,
    sigma: int,
    input_support: SubsetMask,
) -> dict:
    """Support of the snake representative, with the schedule-derived radius check.

    The snake (extend, coboundary, extend) moves support by at most one
    simplex diameter, so the representative of delta~[sigma] must live
    within R = (deg + 2) * r of the input support. The achieved radius is
    reported exactly.
    """
    RX = pieces.X
    omega = connecting_map(pieces, deg, sigma)
    supp = RX.support_vertices(deg + 1, omega)
    r = RX.K.scale
    bound = (deg + 2) * r
    if len(supp) == 0:
        return {"omega": omega, "support": supp, "achieved_radius": 0, "bound": bound, "within_bound": True}
    d = RX.K.space.dist_to_set(input_support.ids)
    achieved = max(d[v] for v in supp.ids)
    return {
        "omega": omega,
        "support": supp,
        "achieved_radius": achieved,
        "bound": bound,
        "within_bound": achieved <= bound,
    }


# -- two-sided representability --------------------------------------------------------


def side_representability(
    RX: RelativeComplex,
    W: SubsetMask,
    side: SubsetMask,
    deg: int,
    omega: int,
    s: int,
) -> Optional[int]:
    """A cocycle omega + delta tau supported in side \\ N_s(W), or None.

    Support containment is simplex-level: values may be nonzero only on
    relative simplices with every vertex in the side region.
    """
    X = RX.K.space
    allowed_vertices = side - neighborhood(X, W, s)
    allowed = set(RX.simplex_positions_within(deg, allowed_vertices))
    delta = RX.delta(deg - 1) if deg >= 1 else None
    if delta is None:
        raise ValueError("degree must be >= 1")
    forbidden_rows = [t for t in range(RX.n_rel(deg)) if t not in allowed]
    row_pos = {t: i for i, t in enumerate(forbidden_rows)}
    # constraint system: (delta tau)(t) = omega(t) on forbidden simplices
    cols = []
    for j in range(delta.cols):
        col = 0
        for t in gf2.bits(delta.columns[j]):
            i = row_pos.get(t)
            if i is not None:
                col |= 1 << i
        cols.append(col)
    b = 0
    for t in gf2.bits(omega):
        i = row_pos.get(t)
        if i is not None:
            b |= 1 << i
    tau = gf2.solve_columns(cols, b, want_witness=True)
    if tau is None:
        return None
    return omega ^ delta.matvec(tau)


def two_sided_representability(
    RX: RelativeComplex,
    W: SubsetMask,
    side_a: SubsetMask,
    side_b: SubsetMask,
    deg: int,
    omega: int,
    s: int,
) -> dict:
    """Representability of [omega] in each side region beyond N_s(W).

    When both sides succeed the class must vanish; the zero verdict is
    verified by an explicit coboundary solve, never inferred.
    """
    if not RX.is_cocycle(deg, omega):
        raise CoarseTopError("not-a-cocycle", "omega is not a relative cocycle")
    wa = side_representability(RX, W, side_a, deg, omega, s)
    wb = side_representability(RX, W, side_b, deg, omega, s)
    out = {
        "representable_a": wa is not None,
        "representable_b": wb is not None,
        "witness_a": wa,
        "witness_b": wb,
    }
    if wa is not None and wb is not None:
        out["verdict"] = "both"
        tau = RX.class_is_zero(deg, omega)
        out["class_zero_verified"] = tau is not None
        out["zero_witness"] = tau
    elif wa is not None:
        out["verdict"] = "representable-in-a"
    elif wb is not None:
        out["verdict"] = "representable-in-b"
    else:
        out["verdict"] = "neither"
    return out


__all__ = [
    "AlmostEssentialReport",
    "almost_essential_probe",
    "EssentialVerdict",
    "essential_probe",
    "paired_target_schedule",
    "MVPieces",
    "MVReport",
    "mv_assemble",
    "connecting_map",
    "localized_boundary_support",
    "side_representability",
    "two_sided_representability",
]
