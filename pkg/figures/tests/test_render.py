import math

import numpy as np
import pytest

from geohull_figures import main, read_slice, render_slice

# hull height over the arc apex; the slice bands below are centered here
EPS1 = 1.0 - math.log(2.0) / math.log(3.0)

SAMPLE = "s,h\n0.0,0.1\n0.25,0.35\n-0.5,0.0\n0.75,1.0\n"


def _write(path, text):
    path.write_text(text)
    return path


def test_read_slice_basic(tmp_path):
    p = _write(tmp_path / "s.csv", SAMPLE)
    data = read_slice(p)
    assert data.shape == (4, 2)
    assert data[0].tolist() == [0.0, 0.1]
    assert data[2].tolist() == [-0.5, 0.0]


def test_read_slice_tolerates_padding(tmp_path):
    p = _write(tmp_path / "s.csv", " s , h \n1.0,2.0\n\n3.0,4.0\n")
    data = read_slice(p)
    assert data.shape == (2, 2)


@pytest.mark.parametrize("text", [
    "x,y\n0,0\n",
    "",
    "s,h\n1.0\n",
    "s,h\n1.0,2.0,3.0\n",
    "s,h\napple,2.0\n",
    "s,h\n1.0,nan\n",
    "s,h\n1.0,inf\n",
])
def test_read_slice_rejects(tmp_path, text):
    p = _write(tmp_path / "bad.csv", text)
    with pytest.raises(ValueError):
        read_slice(p)


def test_render_basic(tmp_path):
    p = _write(tmp_path / "s.csv", SAMPLE)
    out = tmp_path / "s.png"
    summary = render_slice(p, out, "probe")
    assert out.exists() and out.stat().st_size > 0
    assert summary["points"] == 4
    assert not summary["warned"]
    assert summary["extents"] == (-0.5, 0.75, 0.0, 1.0)


def test_render_deterministic(tmp_path):
    p = _write(tmp_path / "s.csv", SAMPLE)
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render_slice(p, a, "same")
    render_slice(p, b, "same")
    assert a.read_bytes() == b.read_bytes()


def test_title_changes_bytes(tmp_path):
    p = _write(tmp_path / "s.csv", SAMPLE)
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render_slice(p, a, "one")
    render_slice(p, b, "two")
    assert a.read_bytes() != b.read_bytes()


def test_default_title_is_input_stem(tmp_path):
    p = _write(tmp_path / "axis_slice.csv", SAMPLE)
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render_slice(p, a)
    render_slice(p, b, "axis_slice")
    assert a.read_bytes() == b.read_bytes()


def test_empty_slice_warns(tmp_path):
    p = _write(tmp_path / "empty.csv", "s,h\n")
    out = tmp_path / "empty.png"
    summary = render_slice(p, out, "empty")
    assert summary["warned"]
    assert summary["points"] == 0
    assert summary["extents"] is None
    assert out.exists() and out.stat().st_size > 0


def test_main_success(tmp_path, capsys):
    p = _write(tmp_path / "s.csv", SAMPLE)
    out = tmp_path / "s.png"
    rc = main(["--in", str(p), "--out", str(out), "--title", "cli"])
    assert rc == 0
    assert out.exists()
    assert "wrote" in capsys.readouterr().out


def test_main_parse_failure(tmp_path, capsys):
    p = _write(tmp_path / "bad.csv", "wrong,header\n0,0\n")
    rc = main(["--in", str(p), "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
    assert not (tmp_path / "x.png").exists()


def test_main_missing_file(tmp_path, capsys):
    rc = main(["--in", str(tmp_path / "nope.csv"),
               "--out", str(tmp_path / "x.png")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_main_requires_flags(tmp_path):
    with pytest.raises(SystemExit) as ei:
        main(["--out", str(tmp_path / "x.png")])
    assert ei.value.code not in (0, None)


def test_canonical_slices_render(canonical_slices, tmp_path):
    for key in ("axis", "arc"):
        out = tmp_path / f"{key}.png"
        summary = render_slice(canonical_slices[key], out)
        assert summary["points"] > 0, f"{key} slice came back empty"
        assert out.stat().st_size > 0
        lo, hi, hlo, hhi = summary["extents"]
        assert lo < hi and hlo <= hhi


def test_axis_slice_spans_seed_heights(canonical_slices):
    data = read_slice(canonical_slices["axis"])
    hs = data[:, 1]
    # the low seed and the apex of the top edge both sit on this plane
    assert hs.min() <= 0.02
    assert hs.max() >= 0.98
    s_apex = 0.5 * math.log(17.0 / 9.0)
    near = hs[np.abs(data[:, 0] - s_apex) <= 0.05]
    assert near.size > 0
    assert np.any(np.abs(near - EPS1) <= 0.02)


def test_arc_slice_heights_stay_in_band(canonical_slices):
    data = read_slice(canonical_slices["arc"])
    hs = data[:, 1]
    assert hs.size > 0
    lo, hi = EPS1 - 0.02, EPS1 + 0.02
    outside = int(np.sum((hs < lo) | (hs > hi)))
    line = (f"arc slice heights in [{hs.min():.4f}, {hs.max():.4f}], "
            f"band [{lo:.4f}, {hi:.4f}], {outside}/{hs.size} outside")
    print(("[PASS] " if outside == 0 else "[FAIL] ") + line)
    assert outside == 0, line
