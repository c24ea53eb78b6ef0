"""Vertical extension of a geodesic space: points (x, h) with x in the base
and h a real height.

    d*((x0,h0), (x1,h1)) = sqrt( d(x0,x1)^2 + (h0-h1)^2 )

Geodesics interpolate the base geodesic while the height varies affinely in
the parameter, so heights along a segment are exactly the linear blend of the
endpoint heights.  The base space is any object exposing dist(a, b),
geod(a, b, t) and ruler_through(a, b).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import CoincidentPointsError

# Bases closer than this are treated as equal; the connecting geodesic is
# then the vertical line {x} x R.
EQUAL_BASE_TOL = 1e-12


class EPoint(NamedTuple):
    base: object
    height: float


def dist_ext(base_space, p: EPoint, q: EPoint) -> float:
    db = base_space.dist(p.base, q.base)
    dh = p.height - q.height
    return math.sqrt(db * db + dh * dh)


def geod_ext(base_space, p: EPoint, q: EPoint, t: float) -> EPoint:
    """Constant-speed geodesic from p (t=0) to q (t=1); height stays affine."""
    h = (1.0 - t) * p.height + t * q.height
    if base_space.dist(p.base, q.base) <= EQUAL_BASE_TOL:
        return EPoint(p.base, h)
    try:
        b = base_space.geod(p.base, q.base, t)
    except CoincidentPointsError:
        # base pair inside the base space's own coincidence tolerance:
        # same degenerate shape as the equal-base branch
        return EPoint(p.base, h)
    return EPoint(b, h)


def ruler_ext(base_space, p: EPoint, q: EPoint):
    """Unit-speed ruler through p and q.

    Returns (c, 0.0, L) with c(0) = p, c(L) = q and L = dist(p, q).  Built
    from a unit-speed base ruler c_b via

        c(s) = ( c_b(a*s*(s1-s0) + s0), a*s*(h1-h0) + h0 ),  a = 1/L,

    which stays valid for s outside [0, L].  For equal bases the base part
    is constant and the height moves at unit speed.
    """
    h0, h1 = p.height, q.height
    db = base_space.dist(p.base, q.base)
    length = math.sqrt(db * db + (h1 - h0) ** 2)
    if length <= EQUAL_BASE_TOL:
        raise CoincidentPointsError(f"no unique ruler through equal points {p!r}")
    a = 1.0 / length
    if db > EQUAL_BASE_TOL:
        try:
            c_b, s0, s1 = base_space.ruler_through(p.base, q.base)
        except CoincidentPointsError:
            c_b = None  # base pair the base space refuses to connect
    else:
        c_b = None
    if c_b is None:
        base = p.base
        return (lambda s: EPoint(base, a * s * (h1 - h0) + h0)), 0.0, length
    return (
        lambda s: EPoint(c_b(a * s * (s1 - s0) + s0), a * s * (h1 - h0) + h0)
    ), 0.0, length


def reconstruct_height(base_space, x0, x1, y0: float, y1: float, x) -> float:
    """Height of the point over x on the extension segment from (x0,y0) to
    (x1,y1), recovered from base distances alone:

        y = y0 + d(x0,x)/d(x0,x1) * (y1 - y0)

    x must sit on the base segment [x0, x1] for the value to be meaningful.
    """
    d_total = base_space.dist(x0, x1)
    if d_total <= EQUAL_BASE_TOL:
        raise CoincidentPointsError("reconstruct_height needs distinct base points")
    return y0 + (base_space.dist(x0, x) / d_total) * (y1 - y0)
