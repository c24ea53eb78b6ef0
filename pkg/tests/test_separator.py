"""Separator construction, the sampled convexity checkers, function CSV."""

import json
import math

import numpy as np
import pytest

from geohull import (
    ConfigError,
    GeometryError,
    SampledFunction,
    SnapRadiusError,
    build_separator,
    check_sep1_euclidean,
    check_sep2,
    make_space,
    read_function_csv,
    verify_separator,
    write_function_csv,
)
from _oracles import lower_envelope

GRID = np.arange(-1.0, 1.0 + 1e-9, 0.25)


def _sq(x):
    return x * x


def _hat(x):
    return max(0.0, 1.0 - abs(x))


@pytest.fixture(scope="module")
def sq_result(e1):
    g = SampledFunction.from_callable(GRID, _sq)
    return g, build_separator(e1, g, 2, 0.1, 0.15)


@pytest.fixture(scope="module")
def hat_result(e1):
    g = SampledFunction.from_callable(GRID, _hat)
    return g, build_separator(e1, g, 2, 0.1, 0.15)


def test_sampled_function_validation():
    with pytest.raises(GeometryError):
        SampledFunction([[0.0], [1.0]], [1.0])
    with pytest.raises(GeometryError):
        SampledFunction(np.empty((0, 1)), [])
    with pytest.raises(GeometryError):
        SampledFunction([[0.0], [1.0], [0.0]], [1.0, 2.0, 3.0])


def test_sampled_function_from_callable_shapes():
    fn = SampledFunction.from_callable([0.0, 0.5, 1.0], _sq)
    assert fn.domain.shape == (3, 1)
    np.testing.assert_allclose(fn.values, [0.0, 0.25, 1.0])
    fn2 = SampledFunction.from_callable([[0.0, 0.0], [1.0, 2.0]],
                                        lambda x, y: x + y)
    assert fn2.domain.shape == (2, 2)
    np.testing.assert_allclose(fn2.values, [0.0, 3.0])


def test_sampled_function_nearest(e1):
    fn = SampledFunction.from_callable([0.0, 1.0], _sq)
    i, d = fn.nearest(e1, [0.7])
    assert i == 1 and d == pytest.approx(0.3)


def test_phi_below_g_exactly(sq_result, hat_result):
    for g, res in (sq_result, hat_result):
        assert (res.phi.values <= g.values).all()
        assert np.array_equal(res.phi.domain, g.domain)
        assert res.clamp_events == []
        assert 0.0 < res.max_snap_used <= res.snap_radius


def test_phi_matches_envelope_oracle(sq_result, hat_result):
    # spec slack: twice the sampling plus snapping scale
    slack = 2.0 * (0.1 + 0.15)
    for g, res in (sq_result, hat_result):
        env = lower_envelope(g.domain[:, 0], g.values)
        dev = np.abs(res.phi.values - env(g.domain[:, 0])).max()
        assert dev <= slack


def test_hat_envelope_is_flat(hat_result):
    # both end samples sit at height zero, so the envelope is the zero line
    _, res = hat_result
    assert res.phi.values.min() == 0.0
    assert res.phi.values.max() <= 1e-12


def test_enlarging_samples_never_raises_phi(e1, sq_result):
    g_fine, res_fine = sq_result
    coarse = GRID[::2]  # every other point, still includes both ends
    g_coarse = SampledFunction.from_callable(coarse, _sq)
    res_coarse = build_separator(e1, g_coarse, 2, 0.1, 0.15)
    slack = 2.0 * (0.1 + 0.15)
    fine_at_common = res_fine.phi.values[::2]
    assert (fine_at_common <= res_coarse.phi.values + slack).all()


def test_build_separator_validation(e1):
    g = SampledFunction.from_callable(GRID, _sq)
    with pytest.raises(GeometryError):
        build_separator(e1, g, 2, 0.1, 0.0)
    with pytest.raises(GeometryError):
        build_separator(e1, g, 2, -0.1, 0.1)


def test_verify_separator_passes_own_build(e1, sq_result):
    g, res = sq_result
    rep = verify_separator(e1, res.phi, g, res, 7, 0.3)
    assert rep.passed
    assert "PASS" in rep.to_text()
    json.dumps(rep.to_record())


def test_verify_separator_flags_inflated_phi(e1, sq_result):
    g, res = sq_result
    fake = SampledFunction(g.domain.copy(), g.values + 1.0)
    broken = type(res)(phi=fake, hull_cloud=res.hull_cloud,
                       snap_radius=res.snap_radius)
    rep = verify_separator(e1, fake, g, broken, 5, 0.3)
    assert rep.upper_violations and not rep.passed
    assert "FAIL" in rep.to_text()


def test_verify_separator_flags_concave_phi(e1):
    ghat = SampledFunction.from_callable(GRID, _hat)
    zero = SampledFunction(ghat.domain.copy(), np.zeros(len(ghat)))
    from geohull import SeparatorResult
    fake = SeparatorResult(phi=ghat, hull_cloud=None, snap_radius=0.1)
    rep = verify_separator(e1, zero, ghat, fake, 5, 0.3)
    assert rep.convexity_violations and not rep.passed


def test_verify_separator_validation(e1, sq_result):
    g, res = sq_result
    with pytest.raises(GeometryError):
        verify_separator(e1, res.phi, g, res, 1, 0.3)
    other = SampledFunction.from_callable(GRID[:-1], _sq)
    with pytest.raises(GeometryError):
        verify_separator(e1, other, g, res, 5, 0.3)


def test_hat_fails_both_separation_checks(e1):
    # midpoint of the two zero-height ends evaluates to one: not convex
    ghat = SampledFunction.from_callable(GRID, _hat)
    v2 = check_sep2(e1, ghat, ghat, 200, 7, 1, 0.3)
    v1 = check_sep1_euclidean(ghat, ghat, 3, 200, 1, 0.3)
    assert v2 and v1
    worst = max(v["excess"] for v in v2)
    assert worst > 0.5
    for v in v2[:5]:
        assert {"tuple_index", "t", "lhs", "rhs", "snap_x",
                "snap_eval"} <= set(v)


def test_convex_function_passes_both_checks(e1):
    gsq = SampledFunction.from_callable(GRID, _sq)
    assert check_sep2(e1, gsq, gsq, 200, 7, 1, 0.3) == []
    assert check_sep1_euclidean(gsq, gsq, 3, 200, 1, 0.3) == []


def test_check_sep2_on_hyperbolic_domain(h2):
    rows = [[0.0, 3.0], [4.0, 5.0], [-4.0, 5.0], [1.0, 4.0]]
    const = SampledFunction(rows, np.zeros(4))
    assert check_sep2(h2, const, const, 50, 5, 0, 1e-9) == []


def test_check_sep2_validation(e1):
    gsq = SampledFunction.from_callable(GRID, _sq)
    with pytest.raises(GeometryError):
        check_sep2(e1, gsq, gsq, 10, 1, 0, 0.1)
    with pytest.raises(GeometryError):
        check_sep2(e1, gsq, gsq, 10, 5, 0, 0.1, max_len=0)
    other = SampledFunction.from_callable(GRID[:-1], _sq)
    with pytest.raises(GeometryError):
        check_sep2(e1, gsq, other, 10, 5, 0, 0.1)


def test_snap_guard(e1):
    # two far-apart samples force a long snap for interior curve points
    sparse = SampledFunction([[0.0], [10.0]], [0.0, 0.0])
    with pytest.raises(SnapRadiusError):
        check_sep2(e1, sparse, sparse, 50, 5, 0, 0.1, max_snap=1.0)
    with pytest.raises(SnapRadiusError):
        check_sep1_euclidean(sparse, sparse, 2, 50, 0, 0.1, max_snap=1.0)


def test_function_csv_round_trip(tmp_path):
    fn = SampledFunction.from_callable(GRID, _sq)
    path = tmp_path / "g.csv"
    write_function_csv(path, fn)
    assert path.read_text().splitlines()[0] == "x1,value"
    back = read_function_csv(path)
    np.testing.assert_array_equal(back.domain, fn.domain)
    np.testing.assert_array_equal(back.values, fn.values)


def test_function_csv_two_columns(tmp_path):
    fn = SampledFunction([[0.0, 1.0], [2.0, 3.0]], [0.5, 0.25])
    path = tmp_path / "g2.csv"
    write_function_csv(path, fn)
    assert path.read_text().splitlines()[0] == "x1,x2,value"
    back = read_function_csv(path)
    np.testing.assert_array_equal(back.domain, fn.domain)


def test_function_csv_rejects_garbage(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n0,0\n")
    with pytest.raises(ConfigError):
        read_function_csv(p)
    p.write_text("x1,value\n")
    with pytest.raises(ConfigError):
        read_function_csv(p)
    p.write_text("x1,value\n0,one\n")
    with pytest.raises(ConfigError):
        read_function_csv(p)
