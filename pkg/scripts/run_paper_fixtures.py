#!/usr/bin/env python3
"""Classify the two motivating grid fixtures end to end.

Runs the almost-essential and essential probes on both components of the
half-plane-with-flap fixture (a line separating, one side attached along a
half-line) and the plane-with-fin fixture (a plane separating 3-space,
with a cone-complement fin above). Prints one verdict line per component.

Usage: python scripts/run_paper_fixtures.py [--radius 12]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from coarsetop.essential import almost_essential_probe, essential_probe
from coarsetop.fixtures import grid_fixture
from coarsetop.homology import WindowSchedule


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--radius", type=int, default=12)
    args = parser.parse_args()
    R = args.radius
    schedules = [
        WindowSchedule(S=s, i=1, S_out=s - 2, j=2, R=R, collar=2) for s in (3, 4, 5)
    ]
    for name in ("fig1_halfplane_flap", "fig2_plane_fin"):
        fix = grid_fixture(name, R)
        n = fix.analysis_dim
        print(f"== {name} (window radius {R}, {fix.space.n} points, n={n})")
        for comp in sorted(fix.components):
            t0 = time.time()
            ae = almost_essential_probe(fix.space, fix.w, fix.components[comp], 0, range(0, 7))
            ev = essential_probe(
                fix.space, fix.w, fix.components[comp], n, schedules,
                component_name=comp, probe_schedule=schedules[1],
            )
            dt = time.time() - t0
            print(
                f"  {comp:8s} almost-essential: {ae.verdict:16s} "
                f"essential probe: {ev.verdict:14s} ({dt:.1f}s)"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
