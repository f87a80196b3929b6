"""Scenario CLI: runs, reports, determinism, caps, help plumbing."""

import json

from coarsetop.cli import main, run_scenario


def write_scenario(tmp_path, name, payload):
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(payload))
    return p


FIG1 = {
    "schema": 1,
    "space": {"kind": "fixture", "name": "fig1_halfplane_flap", "radius": 10},
    "analyses": [
        {"analysis": "almost-essential", "A": 0, "B_max": 6},
        {
            "analysis": "essential",
            "n": 1,
            "schedules": [[3, 1, 1, 2, 2], [4, 1, 2, 2, 2], [5, 1, 3, 2, 2]],
        },
    ],
}

Z2_AXIS = {
    "schema": 1,
    "space": {"kind": "group", "family": "Z^2", "radius": 10},
    "w": {"kind": "subgroup", "spec": {"cyclic": "a"}},
    "analyses": [
        {"analysis": "separate", "r": 1, "A": 0, "invariance_generators": ["a"]},
        {"analysis": "mv", "r": 2, "A": 1, "cap": 3, "component": "0"},
    ],
}


def test_fig1_scenario_runs(tmp_path):
    p = write_scenario(tmp_path, "fig1", FIG1)
    code = main(["run", str(p), "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "fig1.report.json").read_text())
    ess = next(r for r in report["results"] if r["analysis"] == "essential")
    assert ess["components"]["bottom"]["verdict"] == "essential"
    assert ess["components"]["top"]["verdict"] == "non-essential"
    ae = next(r for r in report["results"] if r["analysis"] == "almost-essential")
    assert ae["components"]["bottom"]["verdict"] == "B=1"
    assert ae["components"]["top"]["verdict"] == "fails-at-window"
    assert (tmp_path / "fig1.report.txt").exists()


def test_z2_axis_scenario(tmp_path):
    p = write_scenario(tmp_path, "z2", Z2_AXIS)
    code = main(["run", str(p), "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "z2.report.json").read_text())
    sep = next(r for r in report["results"] if r["analysis"] == "separate")
    assert sep["deep_count"] == 2
    mv = next(r for r in report["results"] if r["analysis"] == "mv")
    assert mv["delta_nonzero"] is True
    assert all(mv["ses_ok"].values())


def test_windowed_separation_trend():
    scen = {
        "schema": 1,
        "space": {"kind": "group", "family": "Z^2", "radius": 10},
        "w": {"kind": "subgroup", "spec": {"cyclic": "a"}},
        "analyses": [
            {
                "analysis": "separate",
                "r": 1,
                "A": 0,
                "windows": [8, 10, 12],
                "invariance_generators": ["a"],
            }
        ],
    }
    report, code = run_scenario(scen)
    assert code == 0
    sep = report["results"][0]
    assert sep["trend"] == "stable"
    assert [w["n_deep"] for w in sep["windows"]] == [2, 2, 2]
    assert [w["e_lower"] for w in sep["windows"]] == [2, 2, 2]


def test_determinism_byte_identical(tmp_path):
    p = write_scenario(tmp_path, "det", Z2_AXIS)
    out1 = tmp_path / "o1"
    out2 = tmp_path / "o2"
    assert main(["run", str(p), "--out", str(out1)]) == 0
    assert main(["run", str(p), "--out", str(out2)]) == 0
    assert (out1 / "det.report.json").read_bytes() == (out2 / "det.report.json").read_bytes()


def test_threads_do_not_change_report(tmp_path):
    p = write_scenario(tmp_path, "thr", FIG1)
    out1 = tmp_path / "t1"
    out2 = tmp_path / "t2"
    assert main(["run", str(p), "--out", str(out1)]) == 0
    assert main(["run", str(p), "--out", str(out2), "--threads", "2"]) == 0
    assert (out1 / "thr.report.json").read_bytes() == (out2 / "thr.report.json").read_bytes()


def test_cap_violation_aborts_single_analysis(tmp_path):
    scen = {
        "schema": 1,
        "space": {"kind": "group", "family": "F_2", "radius": 6},
        "w": {"kind": "subgroup", "spec": {"cyclic": "a"}},
        "caps": {"max_simplices": 100},
        "analyses": [
            {"analysis": "separate", "r": 1, "A": 0, "collar": 1},
            {"analysis": "mobility", "class": "edge-cut", "D_schedule": [1], "collar": 1},
        ],
    }
    p = write_scenario(tmp_path, "caps", scen)
    code = main(["run", str(p), "--out", str(tmp_path)])
    assert code == 1  # the capped analysis errored, the run still reported
    report = json.loads((tmp_path / "caps.report.json").read_text())
    sep = next(r for r in report["results"] if r["analysis"] == "separate")
    mob = next(r for r in report["results"] if r["analysis"] == "mobility")
    assert sep["status"] == "ok"
    assert mob["status"] == "error"
    assert mob["error"] == "complex-too-large"


def test_window_too_large_cap(tmp_path):
    scen = {
        "schema": 1,
        "space": {"kind": "group", "family": "F_2", "radius": 6},
        "caps": {"max_vertices": 10},
        "analyses": [{"analysis": "ends"}],
    }
    p = write_scenario(tmp_path, "toolarge", scen)
    code = main(["run", str(p), "--out", str(tmp_path)])
    assert code == 1


def test_fixtures_listing(capsys):
    assert main(["fixtures"]) == 0
    out = capsys.readouterr().out
    assert "fig1_halfplane_flap" in out
    assert "fig2_plane_fin" in out


def test_describe(capsys):
    assert main(["describe", "essential"]) == 0
    out = capsys.readouterr().out
    assert "schedules" in out
    assert main(["describe", "nope"]) == 1


def test_bad_scenario_file(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["run", str(p)]) == 1


def test_unknown_analysis_fails_validation_up_front(tmp_path):
    import pytest

    from coarsetop.errors import CoarseTopError

    scen = {
        "schema": 1,
        "space": {"kind": "fixture", "name": "line_in_plane", "radius": 6},
        "analyses": [{"analysis": "nonsense"}],
    }
    with pytest.raises(CoarseTopError) as err:
        run_scenario(scen)
    assert "analyses[0]" in str(err.value)


def test_missing_required_param_fails_validation(tmp_path):
    import pytest

    from coarsetop.errors import CoarseTopError

    scen = {
        "schema": 1,
        "space": {"kind": "fixture", "name": "line_in_plane", "radius": 6},
        "analyses": [{"analysis": "essential"}],  # n missing
    }
    with pytest.raises(CoarseTopError) as err:
        run_scenario(scen)
    assert "requires parameter" in str(err.value)


def test_inconclusive_exit_code():
    scen = {
        "schema": 1,
        "space": {"kind": "group", "family": "Z", "radius": 20},
        "w": {"kind": "point"},
        "analyses": [
            {
                "analysis": "acyclicity",
                "k_max": 0,
                "i_values": [1],
                "r_values": [2],
                "lambda_max": 1,
                "mu_max": 2,
                "centers": "basepoint",
            }
        ],
    }
    # lambda_max 1 and mu_max r: nothing to find beyond the trivial pair,
    # but intervals are connected, so this still succeeds; shrink the space
    # to two far points via a fixture-free route is not expressible here,
    # so instead force inconclusiveness through an essential probe without
    # surviving classes
    scen2 = {
        "schema": 1,
        "space": {"kind": "group", "family": "Z^2", "radius": 10},
        "w": {"kind": "point"},
        "analyses": [
            {"analysis": "essential", "n": 1, "components": ["0"],
             "schedules": [[3, 1, 1, 1, 2], [4, 1, 2, 1, 2], [5, 1, 3, 1, 2]]}
        ],
    }
    report, code = run_scenario(scen2)
    assert code == 2
    assert report["results"][0]["status"] == "inconclusive"
