"""A certified drop-gap configuration in the extended half-plane.

Three lifted points A, B, C in H² x R: their convex hull contains a point
X1 over the base x = (0, sqrt(17)) at height eps1, reachable by two rounds
of segment interpolation, while every segment from the apex A to the lifted
[B, C] passes over that base near height eps2 > eps1.  The union of drops
from A therefore misses X1: the extended space is not drop complete.

The module pins the configuration as exact literals, derives eps1/eps2 both
in closed form and through height reconstruction, checks the incidence
facts with independent circle-equation arguments, and certifies the gap
quantitatively from sampled clouds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .extension import EPoint, dist_ext, geod_ext, reconstruct_height
from .halfplane import (Arc, HPoint, dist, geodesic_through, is_between,
                        param_of, point_at, segment_intersection)
from .hull import (DEFAULT_MAX_POINTS, covers, drop_set, kantorovich_hull,
                   min_dist)
from .spaces import make_space

EPS1 = 1.0 - math.log(2.0) / math.log(3.0)
EPS2 = (math.log(17.0) - 2.0 * math.log(3.0)) / \
    (math.log(41.0) - 2.0 * math.log(3.0))

__all__ = [
    "EPS1",
    "EPS2",
    "ExoticConfiguration",
    "exotic_configuration",
    "CheckItem",
    "IncidenceReport",
    "DropGapReport",
    "verify_incidences",
    "compute_epsilons",
    "crossing_consistency",
    "verify_drop_gap",
]


@dataclass(frozen=True)
class ExoticConfiguration:
    """The named points of the construction, as exact literals."""

    a: HPoint
    b: HPoint
    c: HPoint
    p: HPoint
    q: HPoint
    r: HPoint
    x: HPoint
    A: EPoint
    B: EPoint
    C: EPoint
    P: EPoint
    Q: EPoint
    R: EPoint
    X1: EPoint
    X2: EPoint
    eps1: float
    eps2: float


def exotic_configuration() -> ExoticConfiguration:
    a = HPoint(0.0, 3.0)
    b = HPoint(4.0, 5.0)
    c = HPoint(-4.0, 5.0)
    p = HPoint(1.0, 4.0)
    q = HPoint(-1.0, 4.0)
    r = HPoint(0.0, math.sqrt(41.0))
    x = HPoint(0.0, math.sqrt(17.0))
    return ExoticConfiguration(
        a=a, b=b, c=c, p=p, q=q, r=r, x=x,
        A=EPoint(a, 0.0), B=EPoint(b, 1.0), C=EPoint(c, 1.0),
        P=EPoint(p, EPS1), Q=EPoint(q, EPS1), R=EPoint(r, 1.0),
        X1=EPoint(x, EPS1), X2=EPoint(x, EPS2),
        eps1=EPS1, eps2=EPS2)


@dataclass
class CheckItem:
    name: str
    passed: bool
    measured: float
    limit: float
    note: str = ""

    def to_record(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "measured": self.measured, "limit": self.limit,
                "note": self.note}


@dataclass
class IncidenceReport:
    tol: float
    checks: list[CheckItem] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_record(self) -> dict:
        return {"report": "incidences", "tol": self.tol,
                "passed": self.passed,
                "checks": [c.to_record() for c in self.checks],
                "notes": list(self.notes)}

    def to_text(self) -> str:
        lines = [f"incidence checks (tol={self.tol:g})"]
        for c in self.checks:
            mark = "ok " if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}: deviation {c.measured:.3e}"
                         f" (limit {c.limit:g})"
                         + (f" - {c.note}" if c.note else ""))
        for n in self.notes:
            lines.append(f"  note: {n}")
        lines.append("  => " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def verify_incidences(tol: float = 1e-9) -> IncidenceReport:
    """Check the stated incidences of the configuration.

    Each betweenness claim is double-checked against the circle equation of
    the segment's arc, which is an independent route to the same fact.
    """
    if not (tol > 0.0):
        raise GeometryError(f"tol must be positive, got {tol}")
    cfg = exotic_configuration()
    rep = IncidenceReport(tol=tol)

    def add(name, passed, measured, limit, note=""):
        rep.checks.append(CheckItem(name, bool(passed), float(measured),
                                    float(limit), note))

    # betweenness on the three construction segments
    for name, (u, w, v) in (
        ("p between a and b", (cfg.a, cfg.p, cfg.b)),
        ("q between a and c", (cfg.a, cfg.q, cfg.c)),
        ("r between b and c", (cfg.b, cfg.r, cfg.c)),
    ):
        dev = abs(dist(u, w) + dist(w, v) - dist(u, v))
        add(name, is_between(u, w, v, tol), dev, tol)

    # circle equations: [a,b] is the arc center 4 radius 5, and p satisfies
    # it; [b,c] is the arc center 0 radius sqrt(41)
    g_ab = geodesic_through(cfg.a, cfg.b)
    dev = abs(g_ab.center - 4.0) + abs(g_ab.radius - 5.0) \
        if isinstance(g_ab, Arc) else math.inf
    add("segment [a,b] lies on the circle center 4 radius 5", dev <= tol,
        dev, tol)
    dev = abs((cfg.p.x - 4.0) ** 2 + cfg.p.y ** 2 - 25.0)
    add("p satisfies the circle equation of [a,b]", dev <= tol, dev, tol)
    g_bc = geodesic_through(cfg.b, cfg.c)
    dev = abs(g_bc.center - 0.0) + abs(g_bc.radius - math.sqrt(41.0)) \
        if isinstance(g_bc, Arc) else math.inf
    add("segment [b,c] lies on the circle center 0 radius sqrt(41)",
        dev <= tol, dev, tol)

    # r is the unique point of [b,c] over first coordinate 0: solving
    # x(s) = center + radius*tanh(s) = 0 gives one s, and the point is r
    if isinstance(g_bc, Arc):
        s0 = math.atanh(max(-1.0, min(1.0, -g_bc.center / g_bc.radius)))
        over_axis = point_at(g_bc, s0)
        dev = dist(over_axis, cfg.r)
        add("unique point of [b,c] over x=0 is r", dev <= tol, dev, tol)

    # crossing: [p,q] meets [a,r] exactly at x
    inter = segment_intersection(cfg.p, cfg.q, cfg.a, cfg.r, tol)
    if inter.point is None or inter.overlapping:
        add("[p,q] crosses [a,r] at x", False, math.inf, tol,
            "no transversal crossing found")
    else:
        dev = dist(inter.point, cfg.x)
        add("[p,q] crosses [a,r] at x", dev <= tol, dev, tol)

    # non-crossing: [p,q] and [b,c] are concentric arcs, no intersection
    inter2 = segment_intersection(cfg.p, cfg.q, cfg.b, cfg.c, tol)
    add("[p,q] and [b,c] do not meet", inter2.point is None
        and not inter2.overlapping, 0.0 if inter2.point is None else 1.0,
        0.5, "concentric arcs, radii sqrt(17) and sqrt(41)")

    rep.notes.append(
        "2*ln((sqrt(2)+sqrt(50))/(2*sqrt(12))) = "
        f"{2.0 * math.log((math.sqrt(2) + math.sqrt(50)) / (2 * math.sqrt(12))):.9f}"
        f" equals d(a,p) = ln 3 - ln 2 = {dist(cfg.a, cfg.p):.9f}; "
        f"d(a,x) = ln sqrt(17) - ln 3 = {dist(cfg.a, cfg.x):.9f} is a "
        "different quantity. The first crossing height is the ratio "
        "d(a,p)/d(a,b).")
    rep.notes.append(
        f"d(a,x)/d(a,b) = {dist(cfg.a, cfg.x) / dist(cfg.a, cfg.b):.9f} "
        f"differs from eps1 = {EPS1:.9f}; the interpolation point fixing "
        "eps1 is p = (1, 4).")
    return rep


def compute_epsilons() -> tuple[float, float]:
    """Closed forms of the two crossing heights, cross-checked against
    height reconstruction along the segments that define them."""
    cfg = exotic_configuration()
    h2 = make_space("h2")
    rec1 = reconstruct_height(h2, cfg.a, cfg.b, 0.0, 1.0, cfg.p)
    rec2 = reconstruct_height(h2, cfg.a, cfg.r, 0.0, 1.0, cfg.x)
    if abs(rec1 - EPS1) > 1e-12:
        raise GeometryError(
            f"eps1 closed form {EPS1!r} disagrees with reconstruction {rec1!r}")
    if abs(rec2 - EPS2) > 1e-12:
        raise GeometryError(
            f"eps2 closed form {EPS2!r} disagrees with reconstruction {rec2!r}")
    if not (EPS1 < 0.4 < EPS2):
        raise GeometryError("eps1 < 2/5 < eps2 violated")
    return EPS1, EPS2


def crossing_consistency() -> float:
    """Deviation of X1 from the segment [P, Q] at the base-interpolation
    parameter; P and Q themselves come from height reconstruction."""
    cfg = exotic_configuration()
    h2 = make_space("h2")
    hp1 = reconstruct_height(h2, cfg.a, cfg.b, 0.0, 1.0, cfg.p)
    hq1 = reconstruct_height(h2, cfg.a, cfg.c, 0.0, 1.0, cfg.q)
    P = EPoint(cfg.p, hp1)
    Q = EPoint(cfg.q, hq1)
    t = dist(cfg.p, cfg.x) / dist(cfg.p, cfg.q)
    made = geod_ext(h2, P, Q, t)
    return dist_ext(h2, made, cfg.X1)


@dataclass
class DropGapReport:
    iterations: int
    res: float
    delta: float
    base_window: float
    eps1: float
    eps2: float
    hull_size: int
    hull_pass_sizes: list[int]
    hull_covers_x1: bool
    x1_nearest: float
    base_size: int
    drop_size: int
    drop_covers_x2: bool
    x2_nearest: float
    near_count: int
    min_height_near_x: float
    max_height_near_x: float
    conclusive: bool
    notes: list[str] = field(default_factory=list)
    hull: object = None
    base: object = None
    drop: object = None

    @property
    def mid_threshold(self) -> float:
        return 0.5 * (self.eps1 + self.eps2)

    @property
    def gap_passed(self) -> bool:
        return self.conclusive and self.min_height_near_x > self.mid_threshold

    @property
    def certified_clearance(self) -> float:
        """Radius around X1 certified free of drop points: points with base
        further than the window are at least the window away; points inside
        it sit at least min_height - eps1 above X1."""
        if not self.conclusive:
            return 0.0
        return min(self.base_window, self.min_height_near_x - self.eps1)

    @property
    def passed(self) -> bool:
        return self.hull_covers_x1 and self.drop_covers_x2 and self.gap_passed

    def to_record(self) -> dict:
        return {
            "report": "drop_gap",
            "iterations": self.iterations, "res": self.res,
            "delta": self.delta, "base_window": self.base_window,
            "eps1": self.eps1, "eps2": self.eps2,
            "hull_size": self.hull_size,
            "hull_pass_sizes": list(self.hull_pass_sizes),
            "hull_covers_x1": self.hull_covers_x1,
            "x1_nearest": self.x1_nearest,
            "base_size": self.base_size, "drop_size": self.drop_size,
            "drop_covers_x2": self.drop_covers_x2,
            "x2_nearest": self.x2_nearest,
            "near_count": self.near_count,
            "min_height_near_x": self.min_height_near_x,
            "max_height_near_x": self.max_height_near_x,
            "mid_threshold": self.mid_threshold,
            "margin_over_mid": self.min_height_near_x - self.mid_threshold,
            "margin_over_eps1": self.min_height_near_x - self.eps1,
            "certified_clearance": self.certified_clearance,
            "conclusive": self.conclusive,
            "gap_passed": self.gap_passed,
            "passed": self.passed,
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [
            f"drop-gap verification (iterations={self.iterations}, "
            f"res={self.res:g}, delta={self.delta:g}, "
            f"base window {self.base_window:g})",
            f"  eps1 = {self.eps1:.9f}   eps2 = {self.eps2:.9f}   "
            f"gap eps2-eps1 = {self.eps2 - self.eps1:.9f}",
            f"  hull cloud: {self.hull_size} points "
            f"(pass sizes {'/'.join(str(s) for s in self.hull_pass_sizes)})",
            f"  covers(hull, X1, {self.delta:g}): "
            f"{'yes' if self.hull_covers_x1 else 'NO'} "
            f"(nearest {self.x1_nearest:.5f})",
            f"  drop cloud: {self.drop_size} points over "
            f"{self.base_size} base points",
            f"  covers(drop, X2, {self.delta:g}): "
            f"{'yes' if self.drop_covers_x2 else 'NO'} "
            f"(nearest {self.x2_nearest:.5f})",
        ]
        if self.conclusive:
            lines.append(
                f"  drop heights over bases within {self.base_window:g} of x: "
                f"{self.near_count} points in "
                f"[{self.min_height_near_x:.5f}, {self.max_height_near_x:.5f}]")
            lines.append(
                f"  gap: min height {self.min_height_near_x:.5f} vs midpoint "
                f"threshold {self.mid_threshold:.5f} "
                f"(margin {self.min_height_near_x - self.mid_threshold:+.5f}), "
                f"vs eps1 margin "
                f"{self.min_height_near_x - self.eps1:+.5f}")
            lines.append(
                f"  certified: no drop point within "
                f"{self.certified_clearance:.5f} of X1")
        else:
            lines.append(
                f"  INCONCLUSIVE: no drop point with base within "
                f"{self.base_window:g} of x (res too coarse)")
        for n in self.notes:
            lines.append(f"  note: {n}")
        lines.append("  => " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def verify_drop_gap(iterations: int = 2, res: float = 0.006,
                    delta: float = 0.01, *, base_window: float = 0.01,
                    dedup_tol: float | None = None,
                    max_points: int = DEFAULT_MAX_POINTS,
                    engine: str = "auto",
                    keep_clouds: bool = False) -> DropGapReport:
    """Build the hull and drop clouds and certify the gap at x.

    Asserted facts: the iterated hull reaches X1 = (x, eps1) within delta;
    the drops from A reach X2 = (x, eps2) within delta; and every drop point
    whose base lies within base_window of x has height above
    (eps1 + eps2)/2, so X1 stays uncovered.
    """
    if not (res > 0.0):
        raise GeometryError(f"res must be positive, got {res}")
    if not (delta > 0.0):
        raise GeometryError(f"delta must be positive, got {delta}")
    if not (base_window > 0.0):
        raise GeometryError(f"base_window must be positive, got {base_window}")
    cfg = exotic_configuration()
    space = make_space("h2xr")
    hull = kantorovich_hull(space, [cfg.A, cfg.B, cfg.C], iterations, res,
                            dedup_tol, max_points=max_points, engine=engine)
    base = kantorovich_hull(space, [cfg.B, cfg.C], 1, res, dedup_tol,
                            max_points=max_points, engine=engine)
    drop = drop_set(space, cfg.A, base, res, dedup_tol,
                    max_points=max_points, engine=engine)

    x_row = (cfg.x.x, cfg.x.y)
    base_dists = space.base.dist_rows(x_row, drop.coords[:, :2])
    near = drop.coords[base_dists <= base_window]
    conclusive = near.shape[0] > 0

    rep = DropGapReport(
        iterations=iterations, res=res, delta=delta, base_window=base_window,
        eps1=EPS1, eps2=EPS2,
        hull_size=len(hull), hull_pass_sizes=list(hull.pass_sizes),
        hull_covers_x1=covers(hull, cfg.X1, delta),
        x1_nearest=min_dist(hull, cfg.X1),
        base_size=len(base), drop_size=len(drop),
        drop_covers_x2=covers(drop, cfg.X2, delta),
        x2_nearest=min_dist(drop, cfg.X2),
        near_count=int(near.shape[0]),
        min_height_near_x=float(near[:, 2].min()) if conclusive else math.nan,
        max_height_near_x=float(near[:, 2].max()) if conclusive else math.nan,
        conclusive=conclusive,
    )
    if delta <= res:
        rep.notes.append(
            f"res={res:g} is at or above delta={delta:g}; sample spacing "
            "alone can defeat coverage, expect an inconclusive gap")
    rep.notes.append(
        "dist_ext(X1, X2) = eps2 - eps1 = "
        f"{dist_ext(space.base, cfg.X1, cfg.X2):.9f} (equal bases)")
    rep.notes.append(
        "heights over the x=0 axis come from the single drop segment "
        "[A, R]; continuity spreads nearby bases over the reported interval")
    if keep_clouds:
        rep.hull, rep.base, rep.drop = hull, base, drop
    return rep
