"""Geodesic space registry and axiom checking.

A space bundles the scalar operations (dist, geod, unit-speed rulers, line
identity) with vectorized row operations used by the hull engine.  Points
travel as native objects (coordinate tuples, HPoint, EPoint); bulk data as
float64 row arrays in each space's native coordinates.

Supported ids: e1, e2, e3 (Euclidean), h2 (hyperbolic half-plane), and the
vertical extensions h2xr, e1xr, e2xr, e3xr.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import halfplane as hp
from .errors import CoincidentPointsError, GeometryError
from .extension import EQUAL_BASE_TOL, EPoint, dist_ext, geod_ext, ruler_ext

# overflow failsafe for arc parameters; matches halfplane._S_CLIP
_S_CLIP = 690.0


class Line:
    """Canonical description of a full geodesic line, comparable across
    recomputations from different point pairs on the same line."""

    __slots__ = ("key",)

    def __init__(self, key: tuple):
        self.key = key


def _close(u: float, v: float, tol: float) -> bool:
    return abs(u - v) <= tol * max(1.0, abs(u), abs(v))


def _keys_close(k1, k2, tol: float) -> bool:
    # keys nest: extension lines embed the base line's tagged key
    if isinstance(k1, tuple) or isinstance(k2, tuple):
        if not (isinstance(k1, tuple) and isinstance(k2, tuple)):
            return False
        if len(k1) != len(k2):
            return False
        return all(_keys_close(a, b, tol) for a, b in zip(k1, k2))
    if isinstance(k1, str) or isinstance(k2, str):
        return k1 == k2
    return _close(k1, k2, tol)


def lines_close(l1: Line, l2: Line, tol: float = 1e-9) -> bool:
    return _keys_close(l1.key, l2.key, tol)


class EuclideanSpace:
    """R^dim with the usual metric; rows are plain coordinate tuples."""

    def __init__(self, dim: int):
        if dim < 1:
            raise GeometryError(f"bad dimension {dim}")
        self.dim = dim
        self.id = f"e{dim}"
        self.ncoords = dim
        self.chart_dim = dim
        self.kernel_code = 0
        self.eq_tol = 1e-12

    def dist(self, a, b) -> float:
        return math.sqrt(sum((u - v) ** 2 for u, v in zip(a, b)))

    def geod(self, a, b, t: float):
        return tuple((1.0 - t) * u + t * v for u, v in zip(a, b))

    def ruler_through(self, a, b):
        d = self.dist(a, b)
        if d <= self.eq_tol:
            raise CoincidentPointsError(f"no unique ruler through {a!r}, {b!r}")
        u = tuple((v - w) / d for v, w in zip(b, a))
        return (lambda s: tuple(p + s * q for p, q in zip(a, u))), 0.0, d

    def random_point(self, rng: random.Random):
        return tuple(rng.uniform(-10.0, 10.0) for _ in range(self.dim))

    def to_row(self, p):
        return tuple(float(v) for v in p)

    def from_row(self, row):
        return tuple(float(v) for v in row)

    def chart_rows(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def seg_dist(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return np.sqrt(((A - B) ** 2).sum(axis=1))

    def geod_rows(self, A: np.ndarray, B: np.ndarray, t: np.ndarray) -> np.ndarray:
        return A + t[:, None] * (B - A)

    def dist_rows(self, row, arr: np.ndarray) -> np.ndarray:
        return np.sqrt(((arr - np.asarray(row, dtype=float)) ** 2).sum(axis=1))

    def line_through(self, a, b) -> Line:
        av = np.asarray(a, dtype=float)
        bv = np.asarray(b, dtype=float)
        d = bv - av
        n = float(np.linalg.norm(d))
        if n <= self.eq_tol:
            raise CoincidentPointsError(f"no unique line through {a!r}, {b!r}")
        u = d / n
        for comp in u:
            if abs(comp) > 1e-12:
                if comp < 0.0:
                    u = -u
                break
        foot = av - float(av @ u) * u
        return Line(("e", tuple(foot), tuple(u)))

    def line_param(self, line: Line, p) -> float:
        u = np.asarray(line.key[2])
        return float((np.asarray(p, dtype=float) - np.asarray(line.key[1])) @ u)


class HalfPlaneSpace:
    """Hyperbolic plane in half-plane coordinates; rows are (x, y)."""

    def __init__(self):
        self.id = "h2"
        self.ncoords = 2
        self.chart_dim = 2
        self.kernel_code = 1
        self.eq_tol = 1e-12

    def dist(self, a, b) -> float:
        return hp.dist(a, b)

    def geod(self, a, b, t: float):
        return hp.geod(a, b, t)

    def ruler_through(self, a, b):
        return hp.ruler_through(a, b)

    def random_point(self, rng: random.Random):
        return hp.HPoint(rng.uniform(-10.0, 10.0), rng.uniform(0.1, 10.0))

    def to_row(self, p):
        return (float(p[0]), float(p[1]))

    def from_row(self, row):
        return hp.HPoint(float(row[0]), float(row[1]))

    def chart_rows(self, arr: np.ndarray) -> np.ndarray:
        out = np.empty_like(arr)
        out[:, 0] = arr[:, 0]
        out[:, 1] = np.log(arr[:, 1])
        return out

    def seg_dist(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        dx = A[:, 0] - B[:, 0]
        straight = np.hypot(dx, A[:, 1] - B[:, 1])
        mirrored = np.hypot(dx, A[:, 1] + B[:, 1])
        return 2.0 * np.log((straight + mirrored) / (2.0 * np.sqrt(A[:, 1] * B[:, 1])))

    def geod_rows(self, A: np.ndarray, B: np.ndarray, t: np.ndarray) -> np.ndarray:
        xa, ya = A[:, 0], A[:, 1]
        xb, yb = B[:, 0], B[:, 1]
        dx = xb - xa
        # same cutoff as halfplane._VERTICAL_REL_TOL; the engine kernels
        # mirror it, keeping every code path's pair classification identical
        vert = np.abs(dx) <= 1e-8 * np.maximum(
            1.0, np.maximum(np.abs(xa), np.abs(xb))
        )
        safe_dx = np.where(vert, 1.0, dx)
        m = (xb * xb + yb * yb - xa * xa - ya * ya) / (2.0 * safe_dx)
        R = np.hypot(xa - m, ya)
        # stable arc parameter: atanh((x-m)/R) written as a log via the
        # on-arc identity R^2 - (x-m)^2 = y^2
        dxa = xa - m
        dxb = xb - m
        sa = np.sign(dxa) * np.log((R + np.abs(dxa)) / ya)
        sb = np.sign(dxb) * np.log((R + np.abs(dxb)) / yb)
        sa = np.clip(sa, -_S_CLIP, _S_CLIP)
        sb = np.clip(sb, -_S_CLIP, _S_CLIP)
        s = (1.0 - t) * sa + t * sb
        x_arc = m + R * np.tanh(s)
        y_arc = R / np.cosh(s)
        s_v = (1.0 - t) * np.log(ya) + t * np.log(yb)
        out = np.empty((len(t), 2))
        out[:, 0] = np.where(vert, xa, x_arc)
        out[:, 1] = np.where(vert, np.exp(s_v), y_arc)
        return out

    def dist_rows(self, row, arr: np.ndarray) -> np.ndarray:
        x, y = float(row[0]), float(row[1])
        dx = arr[:, 0] - x
        straight = np.hypot(dx, arr[:, 1] - y)
        mirrored = np.hypot(dx, arr[:, 1] + y)
        return 2.0 * np.log((straight + mirrored) / (2.0 * np.sqrt(arr[:, 1] * y)))

    def line_through(self, a, b) -> Line:
        g = hp.geodesic_through(a, b)
        if isinstance(g, hp.Vertical):
            return Line(("v", g.x0))
        return Line(("a", g.center, g.radius))

    def line_param(self, line: Line, p) -> float:
        if line.key[0] == "v":
            return hp.param_of(hp.Vertical(line.key[1]), p)
        return hp.param_of(hp.Arc(line.key[1], line.key[2]), p)


class VerticalExtension:
    """Product of a base space with the height line; rows append the height
    to the base row."""

    def __init__(self, base):
        self.base = base
        self.id = base.id + "xr"
        self.ncoords = base.ncoords + 1
        self.chart_dim = base.chart_dim + 1
        # Euclidean base: the product metric is plain Euclidean one dim up.
        self.kernel_code = 0 if base.kernel_code == 0 else 2
        self.eq_tol = 1e-12

    def dist(self, p: EPoint, q: EPoint) -> float:
        return dist_ext(self.base, p, q)

    def geod(self, p: EPoint, q: EPoint, t: float) -> EPoint:
        return geod_ext(self.base, p, q, t)

    def ruler_through(self, p: EPoint, q: EPoint):
        return ruler_ext(self.base, p, q)

    def random_point(self, rng: random.Random) -> EPoint:
        return EPoint(self.base.random_point(rng), rng.uniform(-10.0, 10.0))

    def to_row(self, p: EPoint):
        return self.base.to_row(p.base) + (float(p.height),)

    def from_row(self, row):
        return EPoint(self.base.from_row(row[:-1]), float(row[-1]))

    def chart_rows(self, arr: np.ndarray) -> np.ndarray:
        out = np.empty((arr.shape[0], self.chart_dim))
        out[:, :-1] = self.base.chart_rows(arr[:, :-1])
        out[:, -1] = arr[:, -1]
        return out

    def seg_dist(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        db = self.base.seg_dist(A[:, :-1], B[:, :-1])
        dh = A[:, -1] - B[:, -1]
        return np.sqrt(db * db + dh * dh)

    def geod_rows(self, A: np.ndarray, B: np.ndarray, t: np.ndarray) -> np.ndarray:
        out = np.empty((len(t), self.ncoords))
        db = self.base.seg_dist(A[:, :-1], B[:, :-1])
        same = db <= EQUAL_BASE_TOL
        moved = self.base.geod_rows(A[:, :-1], B[:, :-1], t)
        out[:, :-1] = np.where(same[:, None], A[:, :-1], moved)
        out[:, -1] = (1.0 - t) * A[:, -1] + t * B[:, -1]
        return out

    def dist_rows(self, row, arr: np.ndarray) -> np.ndarray:
        db = self.base.dist_rows(row[:-1], arr[:, :-1])
        dh = arr[:, -1] - float(row[-1])
        return np.sqrt(db * db + dh * dh)

    def line_through(self, p: EPoint, q: EPoint) -> Line:
        db = self.base.dist(p.base, q.base)
        if db <= EQUAL_BASE_TOL:
            if abs(p.height - q.height) <= self.eq_tol:
                raise CoincidentPointsError(f"no unique line through {p!r}, {q!r}")
            return Line(("const",) + tuple(self.base.to_row(p.base)))
        base_line = self.base.line_through(p.base, q.base)
        sp = self.base.line_param(base_line, p.base)
        sq = self.base.line_param(base_line, q.base)
        beta = (q.height - p.height) / (sq - sp)
        alpha = p.height - beta * sp
        return Line(("x", base_line.key, alpha, beta))


_SPACES: dict[str, object] = {}


def make_space(space_id: str):
    """Factory for the supported space ids (cached, spaces are stateless)."""
    sid = space_id.strip().lower()
    if sid in _SPACES:
        return _SPACES[sid]
    if sid == "h2":
        space = HalfPlaneSpace()
    elif sid == "h2xr":
        space = VerticalExtension(make_space("h2"))
    elif sid.endswith("xr") and sid[:-2].startswith("e"):
        space = VerticalExtension(make_space(sid[:-2]))
    elif sid.startswith("e") and sid[1:].isdigit():
        space = EuclideanSpace(int(sid[1:]))
    else:
        raise GeometryError(f"unknown space id {space_id!r}")
    _SPACES[sid] = space
    return space


# ---------------------------------------------------------------------------
# Axiom checking


@dataclass
class AxiomReport:
    check: str
    space_id: str
    samples: int
    seed: int
    tol: float
    max_deviation: float = 0.0
    skipped: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_record(self) -> dict:
        return {
            "check": self.check,
            "space": self.space_id,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "max_deviation": self.max_deviation,
            "skipped": self.skipped,
            "violation_count": len(self.violations),
            "violations": self.violations,
        }

    def to_text(self) -> str:
        status = "ok" if self.passed else f"{len(self.violations)} violations"
        lines = [
            f"{self.check} on {self.space_id}: {status} "
            f"(samples={self.samples} seed={self.seed} tol={self.tol:g} "
            f"max_dev={self.max_deviation:.3e} skipped={self.skipped})"
        ]
        for v in self.violations[:20]:
            lines.append(f"  sample {v['index']}: {v['note']} dev={v['deviation']:.3e}")
        return "\n".join(lines)


def check_ruler(space, a, b, samples: int, seed: int, tol: float = 1e-9,
                t_range: float = 10.0) -> AxiomReport:
    """Verify d(c(t), c(s)) = |t - s| on the unit-speed line through a, b."""
    report = AxiomReport("ruler", space.id, samples, seed, tol)
    c, _, _ = space.ruler_through(a, b)
    rng = random.Random(seed)
    for i in range(samples):
        t = rng.uniform(-t_range, t_range)
        s = rng.uniform(-t_range, t_range)
        dev = abs(space.dist(c(t), c(s)) - abs(t - s))
        report.max_deviation = max(report.max_deviation, dev)
        if dev > tol:
            report.violations.append(
                {"index": i, "deviation": dev, "note": f"t={t:.6g} s={s:.6g}"}
            )
    report.violations.sort(key=lambda v: v["index"])
    return report


def check_betweenness_axioms(space, triples: int, seed: int,
                             tol: float = 1e-9) -> AxiomReport:
    """Sampled betweenness axioms: interior points of segments are between
    the endpoints, the relation is symmetric, exclusive of reorderings, and
    every segment extends beyond its endpoint."""
    report = AxiomReport("betweenness", space.id, triples, seed, tol)
    rng = random.Random(seed)
    for i in range(triples):
        a = space.random_point(rng)
        b = space.random_point(rng)
        t = rng.uniform(0.0, 1.0)
        u = rng.uniform(1.1, 2.0)
        d_ab = space.dist(a, b)
        if d_ab < 1e-3:
            report.skipped += 1
            continue
        p = space.geod(a, b, t)
        d_ap = space.dist(a, p)
        d_pb = space.dist(p, b)
        if min(d_ap, d_pb) < 1e-6:
            report.skipped += 1
            continue

        def fail(note: str, dev: float) -> None:
            report.violations.append({"index": i, "deviation": dev, "note": note})

        dev = abs(d_ab - (d_ap + d_pb))
        report.max_deviation = max(report.max_deviation, dev)
        if dev > tol:
            fail("interior point not between endpoints", dev)
        if abs(d_ab - (space.dist(b, p) + space.dist(p, a))) > tol:
            fail("betweenness not symmetric", dev)
        # exclusivity: the same three points in other orders are not aligned
        if abs(d_pb - (d_ap + d_ab)) <= tol:
            fail("ordering (p,a,b) also additive", abs(d_pb - (d_ap + d_ab)))
        if abs(d_ap - (d_ab + d_pb)) <= tol:
            fail("ordering (a,b,p) also additive", abs(d_ap - (d_ab + d_pb)))
        # extension: some point beyond b keeps b between a and it
        c2 = space.geod(a, b, u)
        dev2 = abs(space.dist(a, c2) - (d_ab + space.dist(b, c2)))
        report.max_deviation = max(report.max_deviation, dev2)
        if dev2 > tol:
            fail("no additive extension beyond endpoint", dev2)
    report.violations.sort(key=lambda v: v["index"])
    return report


def check_incidence(space, pairs: int, seed: int, tol: float = 1e-9) -> AxiomReport:
    """Two distinct points of a line recover that line: the line through two
    interior samples of [a, b] must equal the line through a and b."""
    report = AxiomReport("incidence", space.id, pairs, seed, tol)
    rng = random.Random(seed)
    is_ext = isinstance(space, VerticalExtension)
    for i in range(pairs):
        if is_ext and i % 4 == 3:
            # constant-base lines are a separate code path worth exercising
            base = space.base.random_point(rng)
            a = EPoint(base, rng.uniform(-10.0, 10.0))
            b = EPoint(base, rng.uniform(-10.0, 10.0))
        else:
            a = space.random_point(rng)
            b = space.random_point(rng)
        if space.dist(a, b) < 1e-3:
            report.skipped += 1
            continue
        t1 = rng.uniform(0.05, 0.45)
        t2 = rng.uniform(0.55, 0.95)
        p = space.geod(a, b, t1)
        q = space.geod(a, b, t2)
        try:
            expected = space.line_through(a, b)
            got = space.line_through(p, q)
        except CoincidentPointsError:
            report.skipped += 1
            continue
        if not lines_close(expected, got, tol):
            report.violations.append(
                {
                    "index": i,
                    "deviation": float("nan"),
                    "note": f"line {got.key!r} != {expected.key!r}",
                }
            )
    report.violations.sort(key=lambda v: v["index"])
    return report


def run_axiom_suite(space, samples: int, seed: int) -> list[AxiomReport]:
    """Run all three checks with per-space default tolerances."""
    euclid_like = space.kernel_code == 0
    ruler_tol = 1e-12 if euclid_like else 1e-9
    rng = random.Random(seed)
    a = space.random_point(rng)
    b = space.random_point(rng)
    while space.dist(a, b) < 1e-3:
        b = space.random_point(rng)
    return [
        check_ruler(space, a, b, samples, seed, tol=ruler_tol),
        check_betweenness_axioms(space, samples, seed, tol=1e-9),
        check_incidence(space, samples, seed, tol=1e-9),
    ]
