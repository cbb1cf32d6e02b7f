"""Smoke tests for the python bindings."""

import math
import xml.dom.minidom

import pytest

import lfcov


def test_homography_roundtrip():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    quad = [(0, 0), (1, 0), (1.2, 1), (-0.1, 1)]
    h = lfcov.homography_from_quads(quad, square)
    assert lfcov.apply(h, (1.2, 1.0)) == pytest.approx((1.0, 1.0), abs=1e-9)
    hinv = lfcov.invert(h)
    p = (0.4, 0.6)
    assert lfcov.apply(hinv, lfcov.apply(h, p)) == pytest.approx(p, abs=1e-9)
    rows = lfcov.jacobian(h, p)
    assert len(rows) == 2 and len(rows[0]) == 2


def test_voronoi_partition():
    domain = lfcov.Rect((0.0, 0.0), 1.0, 1.0)
    cells = lfcov.bounded_voronoi([(0.25, 0.5), (0.75, 0.5)], domain)
    assert len(cells) == 2
    assert sum(lfcov.polygon_area(c) for c in cells) == pytest.approx(1.0, abs=1e-9)
    assert lfcov.voronoi_neighbors([(0.25, 0.5), (0.75, 0.5)], domain) == [[1], [0]]


def test_msd_energy_decreases():
    params = lfcov.MsdParams(mass=1.0, damping=2.0, stiffness=8.0, rest_length=1.0,
                             leader_count=10)
    assert len(lfcov.build_grid_topology(params)) == 21
    state = lfcov.make_rest_grid(params, (0.0, 0.0), (1.0, 0.0))
    pushed = lfcov.msd_step(state, [(0.3, -0.1)] * 10, params, 0.01)
    zero = [(0.0, 0.0)] * 10
    energy = lfcov.system_energy(pushed, params)
    for _ in range(200):
        pushed = lfcov.msd_step(pushed, zero, params, 0.002)
    assert lfcov.system_energy(pushed, params) <= energy + 1e-12
    assert lfcov.max_elongation(state, params) == 0.0
    assert lfcov.ELONGATION_LIMIT == pytest.approx(0.1715729, abs=1e-6)


def test_coverage_control_converges():
    vd = lfcov.make_virtual_domain(6, 1.0, 1.0)
    pts = [(0.31, 0.41), (1.27, 0.62), (0.84, 0.13), (1.66, 0.37)]
    cost0 = lfcov.locational_cost(pts, vd)
    for _ in range(400):
        v = lfcov.virtual_control(pts, vd, K=1.0, law="lloyd")
        pts = [(p[0] + dv[0] * 0.01, p[1] + dv[1] * 0.01) for p, dv in zip(pts, v)]
    assert lfcov.locational_cost(pts, vd) < cost0
    assert lfcov.aggregate_error(pts, vd) < 0.05
    cs = lfcov.centroids(pts, vd)
    for p, c in zip(pts, cs):
        assert math.dist(p, c) < 0.05


def test_run_small_scenario():
    scenario = lfcov.parse_scenario("""{
      "schema_version": 1,
      "msd": {"m": 1.0, "c": 2.0, "kappa": 8.0, "rest_length": 1.0, "leader_count": 6},
      "gains": {"kappa1": 0.5, "kappa2": 1.0, "kappa3": 1.5, "kappa4": 1.0,
                "delta_sensing": 0.15, "sensing_radius": 1.2},
      "coverage": {"K": 1.0, "law": "exact"},
      "follower_count": 5,
      "obstacles": [],
      "start": [0.0, 0.0],
      "goal": [3.0, 0.0],
      "v_ref": 0.6,
      "dt": 0.005,
      "duration": 1.0,
      "seed": 3
    }""")
    assert scenario.validate() == ""
    result = lfcov.run_scenario(scenario, with_records=True)
    assert result["summary"]["completed"] is True
    assert result["summary"]["fault"] is None
    assert len(result["records"]) == 201
    assert result["records"][-1]["t"] == pytest.approx(1.0)


def test_bad_scenario_raises():
    with pytest.raises(lfcov.SimulationError):
        lfcov.parse_scenario("{\"schema_version\": 1}")


def test_cli_svg_wellformed(tmp_path):
    """Drive the CLI end to end and parse its SVG output as XML."""
    import os
    import subprocess

    cli = os.environ.get("LFCOV_CLI")
    if not cli or not os.path.exists(cli):
        pytest.skip("CLI binary not available (bindings-only install)")
    scenario = tmp_path / "scenario.json"
    scenario.write_text("""{
      "schema_version": 1,
      "msd": {"m": 1.0, "c": 2.0, "kappa": 8.0, "rest_length": 1.0, "leader_count": 6},
      "gains": {"kappa1": 0.5, "kappa2": 1.0, "kappa3": 1.5, "kappa4": 1.0,
                "delta_sensing": 0.15, "sensing_radius": 1.2},
      "coverage": {"K": 1.0, "law": "exact"},
      "follower_count": 5,
      "obstacles": [{"type": "circle", "center": [1.5, 1.1], "radius": 0.3}],
      "start": [0.0, 0.0],
      "goal": [3.0, 0.0],
      "v_ref": 0.6,
      "dt": 0.005,
      "duration": 2.0,
      "seed": 3,
      "planner": {"clearance": 0.4}
    }""")
    out = tmp_path / "out"
    subprocess.run([cli, "run", "--scenario", str(scenario), "--out", str(out)], check=True)
    subprocess.run([cli, "plot", "--log", str(out / "run.jsonl"), "--out",
                    str(tmp_path / "plots"), "--frames", "1",
                    "--scenario", str(scenario)], check=True)
    for name in ("metrics.svg", "frame_1.svg"):
        xml.dom.minidom.parseString((tmp_path / "plots" / name).read_text())
