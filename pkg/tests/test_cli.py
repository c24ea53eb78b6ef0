"""Command-line interface: exit codes, determinism, config precedence."""

import json
import math

import numpy as np
import pytest

from geohull import read_cloud_csv, read_function_csv, read_slice_csv
from geohull.cli import main

TRI = "0,0;1,0;0,1"


def _run_hull(tmp_path, name, extra=()):
    out = tmp_path / name
    rc = main(["hull", "--space", "e2", "--seeds", TRI,
               "--iterations", "2", "--res", "0.2", "--out", str(out),
               *extra])
    return rc, out


def test_hull_writes_cloud(tmp_path, capsys):
    rc, out = _run_hull(tmp_path, "tri.csv")
    assert rc == 0
    captured = capsys.readouterr().out
    assert "wrote" in captured and "pass sizes" in captured
    cloud = read_cloud_csv(out)
    assert cloud.space.id == "e2" and len(cloud.pass_sizes) == 3


def test_hull_deterministic_across_threads(tmp_path):
    _, a = _run_hull(tmp_path, "a.csv")
    _, b = _run_hull(tmp_path, "b.csv")
    _, c = _run_hull(tmp_path, "c.csv", ["--threads", "4"])
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_hull_zero_iterations_keeps_seeds(tmp_path):
    out = tmp_path / "seeds.csv"
    rc = main(["hull", "--space", "e2", "--seeds", TRI,
               "--iterations", "0", "--res", "0.2", "--out", str(out)])
    assert rc == 0
    cloud = read_cloud_csv(out)
    np.testing.assert_array_equal(cloud.coords,
                                  [[0, 0], [1, 0], [0, 1]])


def test_hull_seeds_file_round_trip(tmp_path):
    _, first = _run_hull(tmp_path, "first.csv")
    out = tmp_path / "second.csv"
    # the space comes from the file; no --space needed
    rc = main(["hull", "--seeds-file", str(first), "--iterations", "0",
               "--res", "0.2", "--out", str(out)])
    assert rc == 0
    np.testing.assert_array_equal(read_cloud_csv(out).coords,
                                  read_cloud_csv(first).coords)


def test_hull_input_conflicts(tmp_path):
    _, first = _run_hull(tmp_path, "first.csv")
    out = str(tmp_path / "x.csv")
    base = ["--iterations", "0", "--res", "0.2", "--out", out]
    assert main(["hull", "--seeds", TRI, *base]) == 1  # no --space
    assert main(["hull", "--space", "e2", *base]) == 1  # no seeds at all
    assert main(["hull", "--seeds", TRI, "--space", "e2",
                 "--seeds-file", str(first), *base]) == 1


def test_hull_inline_extension_seeds(tmp_path):
    out = tmp_path / "ext.csv"
    rc = main(["hull", "--space", "h2xr", "--seeds", "0,3,0;4,5,1",
               "--iterations", "0", "--res", "0.1", "--out", str(out)])
    assert rc == 0
    cloud = read_cloud_csv(out)
    assert cloud.space.id == "h2xr"
    np.testing.assert_array_equal(cloud.coords, [[0, 3, 0], [4, 5, 1]])


def test_bad_flags_exit_one(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["hull", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["hull", "--space", "q7", "--seeds", TRI, "--iterations", "1",
              "--res", "0.2", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:  # missing required --res
        main(["hull", "--space", "e2", "--seeds", TRI, "--iterations", "1",
              "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 1


def test_no_command_prints_help(capsys):
    assert main([]) == 1
    assert "COMMAND" in capsys.readouterr().out


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_bad_seed_literals_exit_one(tmp_path):
    out = str(tmp_path / "x.csv")
    base = ["--iterations", "1", "--res", "0.2", "--out", out]
    assert main(["hull", "--space", "e2", "--seeds", "0,zero", *base]) == 1
    assert main(["hull", "--space", "e2", "--seeds", "0,0,0", *base]) == 1
    assert main(["hull", "--space", "e2", "--seeds", ";", *base]) == 1


def test_resource_limit_exits_two(tmp_path):
    rc = main(["hull", "--space", "e2", "--seeds", TRI,
               "--iterations", "3", "--res", "0.01", "--dedup-tol", "0",
               "--max-points", "100", "--out", str(tmp_path / "x.csv")])
    assert rc == 2


def test_config_precedence(tmp_path):
    cfg = tmp_path / "hull.json"
    cfg.write_text(json.dumps({
        "space": "e2", "seeds": TRI, "iterations": 2, "res": 0.2}))
    via_cfg = tmp_path / "cfg.csv"
    rc = main(["hull", "--config", str(cfg), "--out", str(via_cfg)])
    assert rc == 0
    _, via_flags = _run_hull(tmp_path, "flags.csv")
    assert via_cfg.read_bytes() == via_flags.read_bytes()
    # an explicit flag beats the config value
    finer = tmp_path / "finer.csv"
    rc = main(["hull", "--config", str(cfg), "--res", "0.1",
               "--out", str(finer)])
    assert rc == 0
    assert len(read_cloud_csv(finer)) > len(read_cloud_csv(via_cfg))


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"space": "e2", "resolution": 0.2}))
    with pytest.raises(SystemExit) as exc:
        main(["hull", "--config", str(cfg), "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 1
    cfg.write_text("[1, 2]")
    with pytest.raises(SystemExit) as exc:
        main(["hull", "--config", str(cfg), "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 1


def test_slice_pipeline(tmp_path):
    cloud = tmp_path / "cloud.csv"
    rc = main(["hull", "--space", "h2xr", "--seeds", "0,3,0;4,5,1;-4,5,1",
               "--iterations", "1", "--res", "0.05", "--out", str(cloud)])
    assert rc == 0
    out = tmp_path / "slice.csv"
    rc = main(["slice", "--in", str(cloud), "--plane",
               f"0,3;0,{math.sqrt(41.0)}", "--plane-tol", "0.01",
               "--out", str(out)])
    assert rc == 0
    sh = read_slice_csv(out)
    assert sh.shape[0] > 0
    # the plane is the symmetry axis; slice heights live between the seeds
    assert sh[:, 1].min() >= 0.0 and sh[:, 1].max() <= 1.0


def test_slice_rejects_bad_inputs(tmp_path):
    cloud = tmp_path / "cloud.csv"
    main(["hull", "--space", "h2xr", "--seeds", "0,3,0;4,5,1",
          "--iterations", "0", "--res", "0.1", "--out", str(cloud)])
    out = str(tmp_path / "s.csv")
    assert main(["slice", "--in", str(cloud), "--plane", "0,3;0,3",
                 "--out", out]) == 1
    flat = tmp_path / "flat.csv"
    main(["hull", "--space", "e2", "--seeds", TRI, "--iterations", "0",
          "--res", "0.1", "--out", str(flat)])
    assert main(["slice", "--in", str(flat), "--plane", "0,3;0,5",
                 "--out", out]) == 1


def test_counterexample_fast_settings(tmp_path, capsys):
    rec_path = tmp_path / "ce.json"
    rc = main(["counterexample", "--iterations", "2", "--res", "0.02",
               "--delta", "0.025", "--base-window", "0.02",
               "--json", str(rec_path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "eps1 = " in out and "PASS" in out
    rec = json.loads(rec_path.read_text())
    assert rec["drop_gap"]["passed"] is True
    assert rec["incidences"]["passed"] is True


def test_counterexample_coarse_res_fails(capsys):
    rc = main(["counterexample", "--iterations", "1", "--res", "0.5"])
    assert rc == 3
    assert "INCONCLUSIVE" in capsys.readouterr().out


def test_separate_pipeline(tmp_path):
    xs = np.arange(-1.0, 1.0 + 1e-9, 0.25)
    g = tmp_path / "g.csv"
    g.write_text("x1,value\n" +
                 "".join(f"{x},{x * x}\n" for x in xs))
    phi_path = tmp_path / "phi.csv"
    rep_path = tmp_path / "rep.json"
    rc = main(["separate", "--space", "e1", "--f", str(g), "--g", str(g),
               "--res", "0.1", "--snap-radius", "0.15", "--tol", "0.3",
               "--out", str(phi_path), "--report", str(rep_path)])
    assert rc == 0
    phi = read_function_csv(phi_path)
    gf = read_function_csv(g)
    assert (phi.values <= gf.values).all()
    rep = json.loads(rep_path.read_text())
    assert rep["passed"] is True and rep["hull_points"] > len(gf)
    assert 0.0 < rep["max_snap_used"] <= 0.15


def test_separate_fails_at_tight_tol(tmp_path):
    xs = np.arange(-1.0, 1.0 + 1e-9, 0.25)
    g = tmp_path / "g.csv"
    g.write_text("x1,value\n" +
                 "".join(f"{x},{x * x}\n" for x in xs))
    rc = main(["separate", "--space", "e1", "--f", str(g), "--g", str(g),
               "--res", "0.1", "--snap-radius", "0.15", "--tol", "1e-9",
               "--out", str(tmp_path / "phi.csv")])
    assert rc == 3


def test_axioms_cmd(tmp_path):
    rec_path = tmp_path / "ax.json"
    rc = main(["axioms", "--space", "h2", "--samples", "50", "--seed", "42",
               "--json", str(rec_path)])
    assert rc == 0
    recs = json.loads(rec_path.read_text())
    assert [r["check"] for r in recs] == ["ruler", "betweenness", "incidence"]
    assert all(r["violation_count"] == 0 for r in recs)


def test_convert_inline_points(capsys):
    rc = main(["convert", "--to", "klein", "--points", "0,1;0,3"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "0,0"
    u, v = map(float, lines[1].split(","))
    assert u == pytest.approx(0.8, abs=1e-15) and v == pytest.approx(0.0)


def test_convert_csv_round_trip(tmp_path):
    cloud_path = tmp_path / "h2.csv"
    main(["hull", "--space", "h2", "--seeds", "0,3;4,5;-4,5",
          "--iterations", "1", "--res", "0.1", "--out", str(cloud_path)])
    klein_path = tmp_path / "klein.csv"
    back_path = tmp_path / "back.csv"
    assert main(["convert", "--to", "klein", "--in", str(cloud_path),
                 "--out", str(klein_path)]) == 0
    assert klein_path.read_text().splitlines()[1].startswith("klein,")
    assert main(["convert", "--to", "halfplane", "--in", str(klein_path),
                 "--out", str(back_path)]) == 0
    orig = read_cloud_csv(cloud_path)
    back = read_cloud_csv(back_path)
    np.testing.assert_allclose(back.coords, orig.coords, atol=1e-12)
    np.testing.assert_array_equal(back.gen, orig.gen)
    np.testing.assert_array_equal(back.parents, orig.parents)


def test_convert_rejects_boundary_points(capsys):
    assert main(["convert", "--to", "klein", "--points", "0,0"]) == 1
    assert main(["convert", "--to", "halfplane", "--points", "1,0"]) == 1
    assert main(["convert", "--to", "klein"]) == 1  # no input at all
