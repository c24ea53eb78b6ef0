"""Hyperbolic geometry in the upper half-plane.

Points are pairs (x, y) with y > 0.  Geodesics are vertical rays (constant x)
or semicircles centered on the boundary axis.  Both carry an exact unit-speed
parametrization, which is what makes segment sampling and ruler checks cheap:

    vertical through x0:   s -> (x0, exp(s))
    arc with center m, radius R:   s -> (m + R*tanh(s), R/cosh(s))

Distances use the cross-ratio form

    d(a, b) = 2*ln( (|a-b| + |a-b*|) / (2*sqrt(a_y*b_y)) )

where b* is the mirror of b across the boundary.  For points sharing x this
collapses to |ln(a_y) - ln(b_y)|.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Union

from .errors import CoincidentPointsError, GeometryError


class HPoint(NamedTuple):
    x: float
    y: float


class KleinPoint(NamedTuple):
    u: float
    v: float


class Vertical(NamedTuple):
    """Geodesic {x = x0}."""

    x0: float


class Arc(NamedTuple):
    """Geodesic semicircle centered at (center, 0) with the given radius."""

    center: float
    radius: float


Geodesic = Union[Vertical, Arc]


class SegmentIntersection(NamedTuple):
    """Result of intersecting two geodesic segments.

    point is None when the segments do not meet in a single point;
    overlapping is True when they share a sub-segment of positive length.
    """

    point: HPoint | None
    overlapping: bool


# Two points are on a common vertical iff their x coordinates agree to this
# relative precision.  Near sqrt(eps) the flattening error (~dx) and the
# rounding error of the huge-radius arc parametrization (~eps/dx) cross
# over, so tightening this constant makes near-vertical pairs less
# accurate, not more.
_VERTICAL_REL_TOL = 1e-8

# Overflow failsafe for the arc parameter: |s| this large keeps exp/cosh
# finite; only reachable when y/R is within a few hundred orders of the
# bottom of the double range.
_S_CLIP = 690.0


def _check_point(p) -> None:
    if not (p[1] > 0.0) or not math.isfinite(p[0]) or not math.isfinite(p[1]):
        raise GeometryError(f"not an upper half-plane point: {p!r}")


def dist(a, b) -> float:
    """Geodesic distance between two half-plane points."""
    _check_point(a)
    _check_point(b)
    dx = a[0] - b[0]
    straight = math.hypot(dx, a[1] - b[1])
    mirrored = math.hypot(dx, a[1] + b[1])
    return 2.0 * math.log((straight + mirrored) / (2.0 * math.sqrt(a[1] * b[1])))


def _is_vertical_pair(a, b) -> bool:
    return abs(a[0] - b[0]) <= _VERTICAL_REL_TOL * max(1.0, abs(a[0]), abs(b[0]))


def geodesic_through(a, b) -> Geodesic:
    """The unique geodesic through two distinct points."""
    _check_point(a)
    _check_point(b)
    if a[0] == b[0] and a[1] == b[1]:
        raise CoincidentPointsError(f"no unique geodesic through equal points {a!r}")
    if _is_vertical_pair(a, b):
        if abs(a[1] - b[1]) <= _VERTICAL_REL_TOL * max(1.0, a[1], b[1]):
            raise CoincidentPointsError(f"points coincide within tolerance: {a!r}, {b!r}")
        return Vertical(a[0])
    m = (b[0] * b[0] + b[1] * b[1] - a[0] * a[0] - a[1] * a[1]) / (2.0 * (b[0] - a[0]))
    return Arc(m, math.hypot(a[0] - m, a[1]))


def param_of(g: Geodesic, p) -> float:
    """Unit-speed parameter of p (assumed on g) under the canonical ruler."""
    if isinstance(g, Vertical):
        return math.log(p[1])
    # On the arc R^2 - dx^2 = y^2, which turns atanh(dx/R) into a single
    # log with no cancellation even when |dx| agrees with R to rounding.
    dx = p[0] - g.center
    if dx >= 0.0:
        s = math.log((g.radius + dx) / p[1])
    else:
        s = -math.log((g.radius - dx) / p[1])
    if s > _S_CLIP:
        return _S_CLIP
    if s < -_S_CLIP:
        return -_S_CLIP
    return s


def point_at(g: Geodesic, s: float) -> HPoint:
    """Point at unit-speed parameter s on the canonical ruler of g."""
    if isinstance(g, Vertical):
        return HPoint(g.x0, math.exp(s))
    return HPoint(g.center + g.radius * math.tanh(s), g.radius / math.cosh(s))


def ruler_through(a, b) -> tuple[Callable[[float], HPoint], float, float]:
    """Unit-speed ruler c with c(s_a) = a, c(s_b) = b.

    Returns (c, s_a, s_b).  |s_a - s_b| equals dist(a, b) up to roundoff.
    """
    g = geodesic_through(a, b)
    return (lambda s: point_at(g, s)), param_of(g, a), param_of(g, b)


def geod(a, b, t: float) -> HPoint:
    """Constant-speed geodesic with geod(a,b,0) = a and geod(a,b,1) = b.

    t outside [0, 1] extends the segment along the same geodesic.
    """
    g = geodesic_through(a, b)
    s = (1.0 - t) * param_of(g, a) + t * param_of(g, b)
    return point_at(g, s)


def point_to_geodesic_distance(p, g: Geodesic, method: str = "closed") -> float:
    """Distance from p to the full geodesic g.

    method "closed" uses the inversive-distance formulas; "numeric" ternary
    searches the unit-speed parameter to relative tolerance 1e-10 and exists
    as an independent cross-check.
    """
    _check_point(p)
    if method == "closed":
        if isinstance(g, Vertical):
            return math.asinh(abs(p[0] - g.x0) / p[1])
        power = (p[0] - g.center) ** 2 + p[1] * p[1] - g.radius * g.radius
        return math.asinh(abs(power) / (2.0 * g.radius * p[1]))
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")

    f = lambda s: dist(p, point_at(g, s))
    lo, hi = -1.0, 1.0
    # expand until the minimum is bracketed
    for _ in range(200):
        if f(lo) > f(lo + 1e-3) and f(hi) > f(hi - 1e-3):
            break
        lo *= 2.0
        hi *= 2.0
    for _ in range(300):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
        if hi - lo <= 1e-10 * max(1.0, abs(lo), abs(hi)):
            break
    return f(0.5 * (lo + hi))


def foot_param(p, g: Geodesic) -> float:
    """Unit-speed parameter of the point of g nearest to p.

    For an arc this conjugates by the Moebius map sending the arc to the
    vertical axis, where the nearest point of a vertical line sits at the
    height |w| of the mapped point w.
    """
    _check_point(p)
    if isinstance(g, Vertical):
        return 0.5 * math.log((p[0] - g.x0) ** 2 + p[1] * p[1])
    z = complex(p[0], p[1])
    w = (z - (g.center - g.radius)) / ((g.center + g.radius) - z)
    return math.log(abs(w))


def is_between(a, p, b, tol: float = 1e-9) -> bool:
    """True iff p lies strictly between a and b on their geodesic.

    Requires the three points pairwise distinct (beyond tol), p on the
    geodesic through a and b (within tol), and the distances additive.
    """
    _check_point(a)
    _check_point(p)
    _check_point(b)
    d_ab = dist(a, b)
    d_ap = dist(a, p)
    d_pb = dist(p, b)
    if d_ab <= tol or d_ap <= tol or d_pb <= tol:
        return False
    g = geodesic_through(a, b)
    if point_to_geodesic_distance(p, g) > tol:
        return False
    return abs(d_ab - (d_ap + d_pb)) <= tol


def same_geodesic(g1: Geodesic, g2: Geodesic, tol: float = 1e-9) -> bool:
    """Parameter comparison, scaled so large arc centers stay comparable."""
    if isinstance(g1, Vertical) != isinstance(g2, Vertical):
        return False
    if isinstance(g1, Vertical):
        return abs(g1.x0 - g2.x0) <= tol * max(1.0, abs(g1.x0), abs(g2.x0))
    scale = max(1.0, abs(g1.center), abs(g2.center), g1.radius, g2.radius)
    return abs(g1.center - g2.center) <= tol * scale and abs(g1.radius - g2.radius) <= tol * scale


def _on_segment(pt, a, b, tol: float) -> bool:
    return dist(pt, a) <= tol or dist(pt, b) <= tol or is_between(a, pt, b, tol)


def _collinear_overlap(g: Geodesic, a1, b1, a2, b2, tol: float) -> SegmentIntersection:
    lo1, hi1 = sorted((param_of(g, a1), param_of(g, b1)))
    lo2, hi2 = sorted((param_of(g, a2), param_of(g, b2)))
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    if hi - lo > tol:
        return SegmentIntersection(None, True)
    if hi >= lo - tol:
        return SegmentIntersection(point_at(g, 0.5 * (lo + hi)), False)
    return SegmentIntersection(None, False)


def segment_intersection(a1, b1, a2, b2, tol: float = 1e-9) -> SegmentIntersection:
    """Intersection of geodesic segments [a1,b1] and [a2,b2].

    Circle pairs are solved through the radical line; a single near-tangent
    root (discriminant within 1e-10 of zero) still counts.  Candidates are
    kept only if they lie on both segments, endpoints included.
    """
    g1 = geodesic_through(a1, b1)
    g2 = geodesic_through(a2, b2)
    if same_geodesic(g1, g2, tol):
        return _collinear_overlap(g1, a1, b1, a2, b2, tol)

    candidates: list[HPoint] = []
    if isinstance(g1, Vertical) and isinstance(g2, Vertical):
        return SegmentIntersection(None, False)  # distinct parallels
    if isinstance(g1, Vertical) or isinstance(g2, Vertical):
        v, arc = (g1, g2) if isinstance(g1, Vertical) else (g2, g1)
        y2 = arc.radius * arc.radius - (v.x0 - arc.center) ** 2
        if y2 > -1e-10:
            y = math.sqrt(max(y2, 0.0))
            if y > 0.0:
                candidates.append(HPoint(v.x0, y))
    else:
        denom = 2.0 * (g2.center - g1.center)
        if denom != 0.0:  # concentric distinct circles never meet
            x = (
                g1.radius * g1.radius
                - g2.radius * g2.radius
                + g2.center * g2.center
                - g1.center * g1.center
            ) / denom
            y2 = g1.radius * g1.radius - (x - g1.center) ** 2
            if y2 > -1e-10:
                y = math.sqrt(max(y2, 0.0))
                if y > 0.0:
                    candidates.append(HPoint(x, y))

    for pt in candidates:
        if _on_segment(pt, a1, b1, tol) and _on_segment(pt, a2, b2, tol):
            return SegmentIntersection(pt, False)
    return SegmentIntersection(None, False)


def to_klein(p) -> KleinPoint:
    """Half-plane -> Klein disk.  Geodesics map to Euclidean chords."""
    _check_point(p)
    z = complex(p[0], p[1])
    w = (z - 1j) / (z + 1j)
    ww = (w.real * w.real + w.imag * w.imag)
    k = 2.0 * w / (1.0 + ww)
    return KleinPoint(k.real, k.imag)


def from_klein(k) -> HPoint:
    """Klein disk -> half-plane, inverse of to_klein."""
    kk = k[0] * k[0] + k[1] * k[1]
    if kk >= 1.0:
        raise GeometryError(f"not inside the unit disk: {k!r}")
    w = complex(k[0], k[1]) / (1.0 + math.sqrt(1.0 - kk))
    z = 1j * (1.0 + w) / (1.0 - w)
    if z.imag <= 0.0:
        raise GeometryError(f"maps outside the upper half-plane: {k!r}")
    return HPoint(z.real, z.imag)
