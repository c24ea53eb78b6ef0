"""Acceptance gate: one pass/fail line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see every line; without
-s the lines still appear for failing criteria.  The separator criterion
rebuilds two large clouds and dominates the runtime (tens of minutes); all
other criteria finish in well under a minute combined.
"""

import math
import time

import numpy as np
import pytest

from geohull import (
    EPS1,
    EPS2,
    HPoint,
    SampledFunction,
    build_separator,
    compute_epsilons,
    dist,
    exotic_configuration,
    geod_ext,
    hausdorff,
    kantorovich_hull,
    make_space,
    read_cloud_csv,
    run_axiom_suite,
    to_klein,
    verify_drop_gap,
)
from geohull.cli import main as cli_main
from _oracles import in_triangle, lower_envelope

SEP_GRID = np.arange(-1.0, 1.0 + 1e-9, 0.05)


def _line(num: int, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    return ok


@pytest.fixture(scope="module")
def gap_report():
    t0 = time.perf_counter()
    rep = verify_drop_gap(2, 0.006, 0.01)
    rep.elapsed = time.perf_counter() - t0
    return rep


@pytest.fixture(scope="module")
def sep_x2(e1):
    g = SampledFunction.from_callable(SEP_GRID, lambda x: x * x)
    t0 = time.perf_counter()
    res = build_separator(e1, g, 2, 0.01, 0.02)
    res.elapsed = time.perf_counter() - t0
    return g, res


@pytest.fixture(scope="module")
def sep_hat(e1):
    g = SampledFunction.from_callable(
        SEP_GRID, lambda x: max(0.0, 1.0 - abs(x)))
    t0 = time.perf_counter()
    res = build_separator(e1, g, 2, 0.01, 0.02)
    res.elapsed = time.perf_counter() - t0
    return g, res


def test_criterion_1_distance_identities():
    d1 = abs(dist(HPoint(0.0, 3.0), HPoint(4.0, 5.0)) - math.log(3.0))
    d2 = abs(dist(HPoint(0.0, 3.0), HPoint(1.0, 4.0)) -
             (math.log(3.0) - math.log(2.0)))
    dev = max(d1, d2)
    ok = _line(1, dev <= 1e-12,
               f"distance identities, max deviation {dev:.3e} (limit 1e-12)")
    assert ok


def test_criterion_2_epsilon_inequalities():
    e1v, e2v = compute_epsilons()
    d1 = abs(e1v - (1.0 - math.log(2.0) / math.log(3.0)))
    d2 = abs(e2v - (math.log(17.0) - 2.0 * math.log(3.0)) /
             (math.log(41.0) - 2.0 * math.log(3.0)))
    strict = e1v < 0.4 < e2v
    ok = _line(2, max(d1, d2) <= 1e-12 and strict,
               f"eps1 = {e1v:.12f}, eps2 = {e2v:.12f}, "
               f"max deviation {max(d1, d2):.3e}, eps1 < 2/5 < eps2: {strict}")
    assert ok


def test_criterion_3_counterexample_gap(gap_report):
    rep = gap_report
    clauses = (rep.hull_covers_x1, rep.drop_covers_x2,
               rep.conclusive and rep.min_height_near_x > EPS1 + 0.02)
    ok = _line(3, all(clauses),
               f"iterations=2 res=0.006 delta=0.01: covers(hull, X1) "
               f"{clauses[0]} (nearest {rep.x1_nearest:.5f}), "
               f"covers(drop, X2) {clauses[1]} "
               f"(nearest {rep.x2_nearest:.5f}), min drop height near x "
               f"{rep.min_height_near_x:.5f} > eps1 + 0.02 = "
               f"{EPS1 + 0.02:.5f}: {clauses[2]} "
               f"[hull {rep.hull_size} pts, drop {rep.drop_size} pts, "
               f"{rep.elapsed:.1f} s]")
    assert ok


def test_criterion_4_euclidean_triangle_oracle(e2):
    t0 = time.perf_counter()
    tri = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    cloud = kantorovich_hull(e2, tri, 2, 0.02)
    outside = sum(1 for p in cloud.coords
                  if not in_triangle(p, *tri, 1e-9))
    xs = np.arange(0.0, 1.0 + 1e-12, 0.01)
    grid = np.array([(x, y) for x in xs for y in xs
                     if x + y <= 1.0 + 1e-12])
    hd = hausdorff(e2, cloud.coords, grid)
    elapsed = time.perf_counter() - t0
    ok = _line(4, outside == 0 and hd <= 0.1,
               f"triangle hull {len(cloud)} pts, {outside} outside "
               f"(tol 1e-9), Hausdorff to fine grid {hd:.5f} <= 0.1 "
               f"[{elapsed:.1f} s]")
    assert ok


def test_criterion_5_klein_oracle(h2):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2026)
    seeds = [HPoint(float(x), float(y))
             for x, y in zip(rng.uniform(-2.0, 2.0, 3),
                             rng.uniform(1.0, 3.0, 3))]
    cloud = kantorovich_hull(h2, seeds, 2, 0.05)
    corners = [to_klein(s) for s in seeds]
    tri = [(k.u, k.v) for k in corners]
    outside = 0
    for row in cloud.coords:
        k = to_klein(HPoint(row[0], row[1]))
        if not in_triangle((k.u, k.v), *tri, 1e-6):
            outside += 1
    elapsed = time.perf_counter() - t0
    ok = _line(5, outside == 0,
               f"rng seed 2026, {len(cloud)} cloud points, {outside} "
               f"outside the Klein chord triangle (tol 1e-6) "
               f"[{elapsed:.1f} s]")
    assert ok


def test_criterion_6_axiom_suites():
    t0 = time.perf_counter()
    totals = {}
    for sid in ("e2", "h2", "h2xr"):
        reports = run_axiom_suite(make_space(sid), 1000, 42)
        totals[sid] = sum(len(r.violations) for r in reports)
    elapsed = time.perf_counter() - t0
    ok = _line(6, all(v == 0 for v in totals.values()),
               "ruler/betweenness/incidence violations: "
               + ", ".join(f"{k}={v}" for k, v in totals.items())
               + f" (1000 samples, seed 42) [{elapsed:.1f} s]")
    assert ok


def test_criterion_7_affine_height_invariant(h2xr):
    rng = np.random.default_rng(7)
    import random as _random
    prng = _random.Random(7)
    worst = 0.0
    for _ in range(1000):
        p = h2xr.random_point(prng)
        q = h2xr.random_point(prng)
        t = rng.uniform(0.0, 1.0)
        made = geod_ext(h2xr.base, p, q, t)
        blend = (1.0 - t) * p.height + t * q.height
        rel = abs(made.height - blend) / max(1.0, abs(blend))
        worst = max(worst, rel)
    ok = _line(7, worst <= 1e-14,
               f"1000 extension pairs, worst relative height deviation "
               f"{worst:.3e} (limit 1e-14)")
    assert ok


def test_criterion_8_separator_oracle(sep_x2, sep_hat, e1):
    g_sq, res_sq = sep_x2
    dev_sq = float(np.abs(res_sq.phi.values - g_sq.values).max())
    sq_ok = dev_sq <= 0.02

    g_hat, res_hat = sep_hat
    env = lower_envelope(g_hat.domain[:, 0], g_hat.values)
    dev_hat = float(np.abs(res_hat.phi.values -
                           env(g_hat.domain[:, 0])).max())
    hat_ok = dev_hat <= 0.05

    ok = _line(8, sq_ok and hat_ok,
               f"x^2: max |phi - g| = {dev_sq:.6f} vs 0.02 "
               f"({'ok' if sq_ok else 'EXCEEDED'}, "
               f"{res_sq.elapsed:.0f} s build); hat: max |phi - envelope| "
               f"= {dev_hat:.6f} vs 0.05 ({'ok' if hat_ok else 'EXCEEDED'}, "
               f"{res_hat.elapsed:.0f} s build)")
    if not sq_ok:
        # windowed minima over a radius-0.02 ball of a slope-2 function dip
        # up to 0.04 below it, so the stated bound cannot hold as written;
        # the same cloud read at snap 0.005 stays within the bound
        bases = res_sq.hull_cloud.coords[:, 0]
        heights = res_sq.hull_cloud.coords[:, 1]
        redo = np.array([
            heights[np.abs(bases - x) <= 0.005].min() for x in SEP_GRID])
        dev_small = float(np.abs(redo - g_sq.values).max())
        print(f"       snap 0.005 on the same cloud: max |phi - g| = "
              f"{dev_small:.6f} (<= 0.02: {dev_small <= 0.02})")
    assert ok


def test_criterion_9_cli_determinism(tmp_path):
    t0 = time.perf_counter()
    outs = []
    for name, threads in (("t4a.csv", "4"), ("t4b.csv", "4"),
                          ("t1.csv", "1")):
        out = tmp_path / name
        rc = cli_main(["hull", "--space", "h2xr",
                       "--seeds", "0,3,0;4,5,1;-4,5,1",
                       "--iterations", "2", "--res", "0.05",
                       "--threads", threads, "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    elapsed = time.perf_counter() - t0
    identical = outs[0] == outs[1] == outs[2]
    ok = _line(9, identical,
               f"three cmd_hull runs (--threads 4, 4, 1) byte-identical: "
               f"{identical} ({len(outs[0])} bytes each) [{elapsed:.1f} s]")
    assert ok
