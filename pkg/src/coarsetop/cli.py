"""Scenario-driven command line front end.

Scenarios are JSON (schema 1): a space (group family + radius, or fixture
name + window), a W, and a list of analyses with parameter blocks. Each
analysis writes one entry in the machine-readable report; a human-readable
text report is rendered from the same data. Identical scenario files
produce byte-identical reports: all iteration orders are fixed by id sort
and the seed only affects sampling order, never verdicts.

Exit codes: 0 all verdicts reached, 2 some analysis inconclusive,
1 an error (parse failure, or an analysis aborted by caps).
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import fixtures as fixtures_mod
from .cochains import RelativeComplex
from .errors import CoarseTopError
from .essential import (
    almost_essential_probe,
    essential_probe,
    localized_boundary_support,
    mv_assemble,
)
from .fixtures import crossing_cochain, grid_fixture
from .groups import (
    FreeAbelian,
    FreeGroup,
    Lamplighter,
    amalgam_z2_z_z2,
    build_ball,
    subgroup_trace,
)
from .homology import (
    WindowSchedule,
    default_schedules,
    ends_estimate,
    pd_signature_check,
    uniform_acyclicity_probe,
)
from .metric import SubsetMask
from .mobility import Cocycle, coarse_manifold_detector, stab_mob_comparison
from .rips import build_rips
from .separation import (
    complement_components,
    coarse_n_separation,
    almost_invariant_extract,
    invariant_components,
)

SCHEMA_VERSION = 1

ANALYSES = {
    "ends": "ends_estimate over a schedule family; params: schedules | auto {scales, count}",
    "separate": "deep complementary components of W; params: r, A, collar, windows (radii list for trend)",
    "essential": "essential probe of a component; params: n, component, schedules",
    "almost-essential": "smallest B with W inside N_B(C minus N_A(W)); params: A, B_max, component",
    "mv": "Mayer-Vietoris assembly + connecting map of the W point class; params: r, A, cap, component, axis",
    "mobility": "mobility set, stab comparison, manifold detector; params: class, n, D_schedule, scale, cap",
    "acyclicity": "uniform acyclicity probe; params: k_max, i_values, r_values, lambda_max, mu_max, centers",
    "pd-signature": "coarse PD signature check of W; params: n, schedules",
    "almost-invariant": "H-almost invariant set extraction; params: A, component",
}


def raise_on_bad(cond: bool, message: str) -> None:
    if not cond:
        raise CoarseTopError("scenario-invalid", message)


class ScenarioContext:
    """Space, W and component masks resolved once per scenario."""

    def __init__(self, scenario: dict):
        caps = scenario.get("caps", {})
        self.max_vertices = int(caps.get("max_vertices", 200_000))
        self.max_simplices = int(caps.get("max_simplices", 5_000_000))
        self.w_spec = scenario.get("w")
        spec = scenario["space"]
        self.ball = None
        self.fixture = None
        if spec["kind"] == "group":
            model = parse_family(spec["family"])
            self.ball = build_ball(model, int(spec["radius"]), max_vertices=self.max_vertices)
            self.space = self.ball.space
        elif spec["kind"] == "fixture":
            self.fixture = grid_fixture(spec["name"], int(spec["radius"]))
            self.space = self.fixture.space
        else:
            raise CoarseTopError("scenario-invalid", f"unknown space kind {spec['kind']!r}")
        self.w = self._resolve_w(scenario.get("w"))

    def _resolve_w(self, wspec):
        if wspec is None:
            return self.fixture.w if self.fixture else None
        kind = wspec["kind"]
        if kind == "fixture-w":
            raise_on_bad(self.fixture is not None, "fixture-w requires a fixture space")
            return self.fixture.w
        if kind == "subgroup":
            raise_on_bad(self.ball is not None, "subgroup W requires a group space")
            return subgroup_trace(self.ball, wspec["spec"])
        if kind == "point":
            return SubsetMask(self.space.n, [self.space.basepoint or 0])
        raise CoarseTopError("scenario-invalid", f"unknown w kind {kind!r}")

    def component(self, name, r: int = 1, A: int = 0, collar: int = 2) -> SubsetMask:
        if self.fixture and isinstance(name, str) and name in self.fixture.components:
            return self.fixture.components[name]
        cs = complement_components(self.space, self.w, r, A, collar=collar)
        deep = cs.deep_components()
        idx = int(name)
        raise_on_bad(0 <= idx < len(deep), f"component index {idx} out of range ({len(deep)} deep)")
        return deep[idx].mask

    def schedules(self, block) -> list[WindowSchedule]:
        R = self.space.window_radius
        if block is None or block == "auto":
            return default_schedules(R)
        if isinstance(block, dict) and "auto" in block:
            auto = block["auto"]
            return default_schedules(
                R,
                collar=int(auto.get("collar", 2)),
                scales=tuple(auto.get("scales", (1, 1))),
                count=int(auto.get("count", 3)),
            )
        out = []
        for row in block:
            S, i, S_out, j, collar = (int(v) for v in row)
            out.append(WindowSchedule(S=S, i=i, S_out=S_out, j=j, R=R, collar=collar))
        return out


def parse_family(name: str):
    name = name.strip()
    if name == "Z":
        return FreeAbelian(1)
    if name.startswith("Z^"):
        return FreeAbelian(int(name[2:]))
    if name.startswith("F_"):
        return FreeGroup(int(name[2:]))
    if name.startswith("free:"):
        return FreeGroup(int(name.split(":")[1]))
    if name == "lamplighter":
        return Lamplighter()
    if name in ("amalgam", "amalgam_z2_z_z2"):
        return amalgam_z2_z_z2()
    raise CoarseTopError("scenario-invalid", f"unknown group family {name!r}")


def _verdict_str(v) -> str:
    return str(v)


def gf2_popcount(x) -> int:
    return 0 if not x else int(x).bit_count()


# -- analysis runners -------------------------------------------------------------


def run_ends(ctx: ScenarioContext, params: dict) -> dict:
    scheds = ctx.schedules(params.get("schedules"))
    rep = ends_estimate(ctx.space, scheds)
    status = "inconclusive" if rep.verdict == "inconclusive" else "ok"
    return {
        "status": status,
        "counts": rep.deep_counts,
        "verdict": _verdict_str(rep.verdict),
        "schedules": [vars(s) for s in scheds],
    }


def run_separate(ctx: ScenarioContext, params: dict) -> dict:
    r = int(params.get("r", 1))
    A = int(params.get("A", 0))
    collar = int(params.get("collar", 2))
    windows = params.get("windows")
    gens_words = params.get("invariance_generators")
    rows = []  # (ball-or-None, w, component set) per window, masks aligned
    if windows and ctx.ball is not None:
        raise_on_bad(
            ctx.w_spec is not None and ctx.w_spec.get("kind") == "subgroup",
            "windowed separation needs a subgroup w to rebuild per radius",
        )
        for R in windows:
            ball = build_ball(ctx.ball.model, int(R), max_vertices=ctx.max_vertices)
            w = subgroup_trace(ball, ctx.w_spec["spec"])
            rows.append((ball, w, complement_components(ball.space, w, r, A, collar=collar)))
    else:
        rows.append((ctx.ball, ctx.w, complement_components(ctx.space, ctx.w, r, A, collar=collar)))
    inv_counts = None
    if gens_words and all(ball is not None for ball, _, _ in rows):
        inv_counts = []
        for ball, w, cs in rows:
            gens = [ball.model.parse_word(word) for word in gens_words]
            _, e = invariant_components(ball, w, gens, cs)
            inv_counts.append(e)
    sets = [cs for _, _, cs in rows]
    rep = coarse_n_separation(sets, inv_counts)
    last = sets[-1]
    return {
        "status": "ok" if rep.verdict != "inconclusive" or len(sets) == 1 else "inconclusive",
        "windows": [vars(w) for w in rep.windows],
        "trend": rep.verdict,
        "deep_count": len(last.deep_components()),
        "shallow_count": len(last.shallow_components()),
        "params": {"r": r, "A": A, "collar": collar},
    }


def run_essential(ctx: ScenarioContext, params: dict) -> dict:
    n = int(params["n"])
    scheds = ctx.schedules(params.get("schedules"))
    probe = scheds[int(params["probe_index"])] if "probe_index" in params else None
    names = params.get("components")
    if names is None:
        names = sorted(ctx.fixture.components) if ctx.fixture else ["0", "1"]
    out = {}
    worst = "ok"
    for name in names:
        C = ctx.component(name)
        v = essential_probe(
            ctx.space, ctx.w, C, n, scheds, component_name=str(name), probe_schedule=probe
        )
        out[str(name)] = {
            "verdict": v.verdict,
            "reason": v.reason,
            "classes": [
                {
                    "survives": w["survives_in_target"],
                    "locality": w["fill_locality"],
                    "fill_size": gf2_popcount(w.get("fill")),
                }
                for w in v.witnesses
            ],
        }
        if v.verdict == "inconclusive":
            worst = "inconclusive"
    return {
        "status": worst,
        "components": out,
        "schedules": [vars(s) for s in scheds],
    }


def run_almost_essential(ctx: ScenarioContext, params: dict) -> dict:
    A = int(params.get("A", 0))
    B_grid = list(range(0, int(params.get("B_max", 8)) + 1))
    names = params.get("components")
    if names is None:
        names = sorted(ctx.fixture.components) if ctx.fixture else ["0", "1"]
    out = {}
    for name in names:
        C = ctx.component(name, A=A)
        rep = almost_essential_probe(ctx.space, ctx.w, C, A, B_grid)
        out[str(name)] = {"verdict": rep.verdict, "window_radius": rep.window_radius}
    return {"status": "ok", "components": out, "A": A, "B_grid": B_grid}


def run_mv(ctx: ScenarioContext, params: dict) -> dict:
    r = int(params.get("r", 2))
    A = int(params.get("A", 1))
    cap = int(params.get("cap", 3))
    collar = int(params.get("collar", 2))
    axis = int(params.get("axis", 0))
    comp_name = params.get("component", "upper" if ctx.fixture else "0")
    C1 = ctx.component(comp_name, r=r, A=A, collar=collar)
    base = mv_assemble(ctx.space, ctx.w, C1, r=r, A=A, cap=cap, collar=collar)
    RW = base.pieces.W
    cross = crossing_cochain(ctx.space, axis, 0)
    sigma = RW.cochain_from_edge_predicate(cross)
    rep = mv_assemble(
        ctx.space, ctx.w, C1, r=r, A=A, cap=cap, w_classes=[(1, sigma)], collar=collar
    )
    c = rep.connecting[0]
    supp_in = RW.support_vertices(1, sigma)
    loc = localized_boundary_support(rep.pieces, 1, sigma, supp_in)
    return {
        "status": "ok",
        "dichotomy": rep.dichotomy,
        "ses_ok": {str(k): v for k, v in rep.ses_ok.items()},
        "exactness": rep.exactness,
        "delta_nonzero": c["nonzero_in_proxy"],
        "localized_support_radius": loc["achieved_radius"],
        "localized_bound": loc["bound"],
        "params": {"r": r, "A": A, "cap": cap, "collar": collar},
    }


def run_mobility(ctx: ScenarioContext, params: dict) -> dict:
    kind = params.get("class", "crossing")
    collar = int(params.get("collar", 2))
    D_schedule = [int(d) for d in params.get("D_schedule", [1, 2])]
    if kind == "crossing":
        n, scale, cap = 1, int(params.get("scale", 1)), 2
    elif kind == "fundamental":
        n, scale, cap = 2, int(params.get("scale", 2)), 3
    elif kind == "edge-cut":
        n, scale, cap = 1, int(params.get("scale", 1)), 2
    else:
        raise CoarseTopError("scenario-invalid", f"unknown mobility class {kind!r}")
    K = build_rips(ctx.space, ctx.space.full_mask(), scale, cap, max_simplices=ctx.max_simplices)
    R = RelativeComplex(K, ctx.space.interior_mask(collar))
    if kind == "crossing":
        vec = R.cochain_from_edge_predicate(crossing_cochain(ctx.space, 0, 0))
    elif kind == "fundamental":
        vec = R.cochain_from_cup_product(
            crossing_cochain(ctx.space, 0, 0), crossing_cochain(ctx.space, 1, 0)
        )
    else:
        raise_on_bad(ctx.ball is not None, "edge-cut class requires a group ball")
        gens = ctx.ball.model.generators()
        e_id = ctx.ball.index[ctx.ball.model.identity()]
        a_id = ctx.ball.index[gens[0][1]]
        edge = tuple(sorted((e_id, a_id)))
        vec = 1 << R.rel_pos[1][K.index[1][edge]]
    alpha0 = Cocycle(R, n, vec)
    alpha0.validate()
    det = coarse_manifold_detector(R, n, alpha0, D_schedule, collar=collar)
    out = {
        "status": "ok" if det.verdict != "inconclusive" else "inconclusive",
        "class": kind,
        "nonzero": not alpha0.is_zero_class(),
        "detector": {"covered": det.covered, "verdict": det.verdict, "D_schedule": D_schedule},
    }
    if ctx.ball is not None and params.get("stab_comparison", True):
        res = stab_mob_comparison(ctx.ball, R, alpha0, D_schedule[-1], collar=collar)
        out["stab_mob_hausdorff"] = (
            None if res.stab_mob_hausdorff is None or math.isinf(res.stab_mob_hausdorff)
            else res.stab_mob_hausdorff
        )
        out["mob_size"] = len(res.mob_mask)
        out["stab_orbit_size"] = len(res.stab_orbit) if res.stab_orbit else 0
    if params.get("export_class", False):
        out["class_simplices"] = [list(s) for s in alpha0.export_simplex_values()]
    return out


def run_acyclicity(ctx: ScenarioContext, params: dict, rng: random.Random) -> dict:
    k_max = int(params.get("k_max", 1))
    i_values = [int(v) for v in params.get("i_values", [1])]
    r_values = [int(v) for v in params.get("r_values", [1, 2, 3])]
    lambda_max = int(params.get("lambda_max", 3))
    mu_max = int(params.get("mu_max", max(r_values) + 3))
    centers_spec = params.get("centers", "basepoint")
    if centers_spec == "basepoint":
        centers = [ctx.space.basepoint or 0]
    elif isinstance(centers_spec, dict) and "sample" in centers_spec:
        safe = [
            v
            for v in range(ctx.space.n)
            if ctx.space.radial is not None
            and ctx.space.radial[v] + mu_max <= (ctx.space.window_radius or 0)
        ]
        count = min(int(centers_spec["sample"]), len(safe))
        centers = sorted(rng.sample(safe, count)) if safe else [ctx.space.basepoint or 0]
    else:
        centers = [int(v) for v in centers_spec]
    prof = uniform_acyclicity_probe(
        ctx.space, k_max, centers, i_values, r_values, lambda_max, mu_max
    )
    entries = [
        {
            "center": e.center,
            "k": e.k,
            "i": e.i,
            "r": e.r,
            "lambda": e.lam,
            "mu": e.mu,
            "failed": e.failed,
        }
        for e in prof.entries
    ]
    return {
        "status": "ok" if not prof.failures() else "inconclusive",
        "entries": entries,
        "failures": len(prof.failures()),
    }


def run_pd_signature(ctx: ScenarioContext, params: dict) -> dict:
    n = int(params["n"])
    scheds = ctx.schedules(params.get("schedules"))
    rep = pd_signature_check(ctx.space, n, scheds, within=ctx.w)
    return {
        "status": "ok",
        "passed": rep.passed,
        "degree_verdicts": {str(k): _verdict_str(v) for k, v in rep.degree_verdicts.items()},
    }


def run_almost_invariant(ctx: ScenarioContext, params: dict) -> dict:
    raise_on_bad(ctx.ball is not None, "almost-invariant extraction requires a group ball")
    A = int(params.get("A", 0))
    comp_name = params.get("component", "0")
    C = ctx.component(comp_name, A=A)
    xhat, report = almost_invariant_extract(ctx.ball, ctx.w, C, A)
    return {
        "status": "ok" if report["verdict"] == "ok" else "inconclusive",
        "verdict": report["verdict"],
        "checks": {k: v for k, v in report.items() if k != "verdict"},
        "xhat_size": len(xhat),
    }


RUNNERS = {
    "ends": run_ends,
    "separate": run_separate,
    "essential": run_essential,
    "almost-essential": run_almost_essential,
    "mv": run_mv,
    "mobility": run_mobility,
    "pd-signature": run_pd_signature,
    "almost-invariant": run_almost_invariant,
}


REQUIRED_PARAMS = {"essential": ("n",), "pd-signature": ("n",)}


def validate_analyses(scenario: dict) -> None:
    """Every analysis block must validate before any computation starts.

    Failures are anchored to the offending block index; cap violations are
    runtime events and abort only their own analysis, not the run.
    """
    for t, block in enumerate(scenario.get("analyses", [])):
        where = f"analyses[{t}]"
        raise_on_bad(isinstance(block, dict), f"{where}: analysis block must be an object")
        name = block.get("analysis")
        raise_on_bad(name in ANALYSES, f"{where}: unknown analysis {name!r}")
        for param in REQUIRED_PARAMS.get(name, ()):
            raise_on_bad(param in block, f"{where}: {name} requires parameter {param!r}")
        sched = block.get("schedules")
        if isinstance(sched, list):
            for row in sched:
                raise_on_bad(
                    isinstance(row, list) and len(row) == 5 and all(isinstance(v, int) for v in row),
                    f"{where}: schedule rows are [S, i, S_out, j, collar] integer lists",
                )
        needs_w = name in ("separate", "essential", "almost-essential", "mv", "pd-signature", "almost-invariant")
        if needs_w and scenario.get("w") is None:
            raise_on_bad(
                scenario["space"]["kind"] == "fixture",
                f"{where}: {name} needs a W; give a 'w' block or use a fixture space",
            )


def run_scenario(scenario: dict, seed: int = 0, threads: int = 1) -> tuple[dict, int]:
    raise_on_bad(scenario.get("schema") == SCHEMA_VERSION, "unsupported schema version")
    validate_analyses(scenario)
    ctx = ScenarioContext(scenario)
    analyses = scenario.get("analyses", [])
    results: list = [None] * len(analyses)

    def run_one(t: int) -> dict:
        block = analyses[t]
        name = block.get("analysis")
        entry = {"analysis": name, "params": {k: v for k, v in block.items() if k != "analysis"}}
        try:
            if name == "acyclicity":
                entry.update(run_acyclicity(ctx, block, random.Random(seed)))
            elif name in RUNNERS:
                entry.update(RUNNERS[name](ctx, block))
            else:
                raise CoarseTopError("scenario-invalid", f"unknown analysis {name!r}")
        except CoarseTopError as err:
            entry.update({"status": "error", "error": err.code, "message": str(err)})
        return entry

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for t, entry in enumerate(pool.map(run_one, range(len(analyses)))):
                results[t] = entry
    else:
        for t in range(len(analyses)):
            results[t] = run_one(t)
    window = {
        "kind": scenario["space"]["kind"],
        "detail": scenario["space"].get("family") or scenario["space"].get("name"),
        "radius": scenario["space"].get("radius"),
        "points": ctx.space.n,
    }
    report = {"schema": SCHEMA_VERSION, "window": window, "results": results}
    if any(r.get("status") == "error" for r in results):
        code = 1
    elif any(r.get("status") == "inconclusive" for r in results):
        code = 2
    else:
        code = 0
    return report, code


def render_text(report: dict) -> str:
    lines = []
    w = report["window"]
    lines.append(f"window: {w['detail']} radius {w['radius']} ({w['points']} points)")
    for r in report["results"]:
        lines.append(f"[{r['analysis']}] status={r['status']}")
        for key in sorted(r):
            if key in ("analysis", "status", "params"):
                continue
            lines.append(f"  {key}: {json.dumps(r[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="coarsetop", description="finite-window coarse topology probes")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario", type=Path)
    p_run.add_argument("--out", type=Path, default=Path("."))
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    sub.add_parser("fixtures", help="list built-in fixtures")
    p_desc = sub.add_parser("describe", help="describe an analysis")
    p_desc.add_argument("analysis")
    args = parser.parse_args(argv)

    if args.command == "fixtures":
        for name, desc in fixtures_mod.list_fixtures().items():
            print(f"{name}: {desc}")
        return 0
    if args.command == "describe":
        if args.analysis not in ANALYSES:
            print(f"unknown analysis {args.analysis!r}; known: {sorted(ANALYSES)}", file=sys.stderr)
            return 1
        print(f"{args.analysis}: {ANALYSES[args.analysis]}")
        return 0
    # run
    try:
        scenario = json.loads(args.scenario.read_text())
    except (OSError, json.JSONDecodeError) as err:
        print(f"cannot parse scenario: {err}", file=sys.stderr)
        return 1
    try:
        report, code = run_scenario(scenario, seed=args.seed, threads=args.threads)
    except CoarseTopError as err:
        print(f"scenario failed: {err}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    stem = args.scenario.stem
    out_json = args.out / f"{stem}.report.json"
    out_txt = args.out / f"{stem}.report.txt"
    payload = json.dumps(report, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"
    out_json.write_text(payload)
    out_txt.write_text(render_text(report))
    print(f"wrote {out_json} and {out_txt}; exit {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
