"""Planar geometric predicates and constructions with exact sign decisions.

The sign predicates (``orient2d``, ``incircle``) evaluate a cheap
floating-point expression first and fall back to exact rational
arithmetic whenever the result lands inside the filter's error bound,
so callers never see a sign that rounding flipped.
"""

from __future__ import annotations

import math
from enum import IntEnum
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "Point",
    "Orientation",
    "CircleSide",
    "DegenerateTriangleError",
    "orient2d",
    "orient_sign",
    "incircle",
    "incircle_sign",
    "circumcenter",
    "min_angle_deg",
    "encroaches",
]


class Point(NamedTuple):
    x: float
    y: float


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class CircleSide(IntEnum):
    OUTSIDE = -1
    ON = 0
    INSIDE = 1


class DegenerateTriangleError(ValueError):
    """A construction that needs a proper triangle got collinear points."""


_EPS = 1.1102230246251565e-16  # 2**-53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_INCIRCLE_BOUND = (10.0 + 96.0 * _EPS) * _EPS

# Relative dead band within which a point counts as lying exactly on a
# diametral circle.  Constructed query points (circumcenters, midpoints)
# carry rounding of order 1e-16 relative, so a raw sign there would be
# noise; anything within the band is classified ON.
_BOUNDARY_BAND = 1e-12


def orient_sign(ax: float, ay: float, bx: float, by: float,
                cx: float, cy: float) -> int:
    """Exact sign (+1/0/-1) of the doubled signed area of triangle abc."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if abs(det) >= _CCW_BOUND * detsum:
        return (det > 0.0) - (det < 0.0)
    return _orient_exact(ax, ay, bx, by, cx, cy)


def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    det = (Fraction(ax) - Fraction(cx)) * (Fraction(by) - Fraction(cy)) - (
        Fraction(ay) - Fraction(cy)
    ) * (Fraction(bx) - Fraction(cx))
    return (det > 0) - (det < 0)


def orient2d(p: Point, q: Point, r: Point) -> Orientation:
    """Orientation of the triangle p, q, r (exact decision)."""
    return Orientation(orient_sign(p[0], p[1], q[0], q[1], r[0], r[1]))


def incircle_sign(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    """Exact sign of the incircle determinant for CCW triangle abc.

    +1 when d is strictly inside the circumcircle of (a, b, c), -1 when
    strictly outside, 0 when cocircular.  Callers must pass abc in CCW
    order (``incircle`` below normalizes).
    """
    adx = ax - dx
    ady = ay - dy
    bdx = bx - dx
    bdy = by - dy
    cdx = cx - dx
    cdy = cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady

    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy

    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if abs(det) >= _INCIRCLE_BOUND * permanent:
        return (det > 0.0) - (det < 0.0)
    return _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    adx = Fraction(ax) - Fraction(dx)
    ady = Fraction(ay) - Fraction(dy)
    bdx = Fraction(bx) - Fraction(dx)
    bdy = Fraction(by) - Fraction(dy)
    cdx = Fraction(cx) - Fraction(dx)
    cdy = Fraction(cy) - Fraction(dy)
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return (det > 0) - (det < 0)


def incircle(a: Point, b: Point, c: Point, d: Point) -> CircleSide:
    """Position of d relative to the circumcircle of triangle abc.

    The triangle may be given in either orientation; collinear abc is an
    error rather than a silent sign.
    """
    orient = orient_sign(a[0], a[1], b[0], b[1], c[0], c[1])
    if orient == 0:
        raise DegenerateTriangleError(
            "incircle needs a non-degenerate triangle, got collinear points"
        )
    if orient < 0:
        b, c = c, b
    return CircleSide(
        incircle_sign(a[0], a[1], b[0], b[1], c[0], c[1], d[0], d[1])
    )


def circumcenter(a: Point, b: Point, c: Point) -> Point:
    """Circumcenter of triangle abc; raises on collinear input."""
    if orient_sign(a[0], a[1], b[0], b[1], c[0], c[1]) == 0:
        raise DegenerateTriangleError("collinear points have no circumcenter")
    bx = b[0] - a[0]
    by = b[1] - a[1]
    cx = c[0] - a[0]
    cy = c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    bl = bx * bx + by * by
    cl = cx * cx + cy * cy
    ux = (cy * bl - by * cl) / d
    uy = (bx * cl - cx * bl) / d
    return Point(a[0] + ux, a[1] + uy)


def _vertex_angle(ox, oy, px, py, qx, qy) -> float:
    ux = px - ox
    uy = py - oy
    vx = qx - ox
    vy = qy - oy
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return math.atan2(abs(cross), dot)


def min_angle_deg(a: Point, b: Point, c: Point) -> float:
    """Smallest interior angle of triangle abc, in degrees."""
    if orient_sign(a[0], a[1], b[0], b[1], c[0], c[1]) == 0:
        raise DegenerateTriangleError("degenerate triangle has no angles")
    ang = min(
        _vertex_angle(a[0], a[1], b[0], b[1], c[0], c[1]),
        _vertex_angle(b[0], b[1], c[0], c[1], a[0], a[1]),
        _vertex_angle(c[0], c[1], a[0], a[1], b[0], b[1]),
    )
    return math.degrees(ang)


def encroaches(p: Point, a: Point, b: Point, closed: bool = False) -> bool:
    """Whether p lies inside the diametral circle of segment ab.

    With ``closed=False`` only the open disk counts; with ``closed=True``
    the boundary circle counts as well.  Points within a relative 1e-12
    band of the circle are treated as exactly on it, so constructed
    points (midpoints, circumcenters) classify stably.
    """
    if (p[0] == a[0] and p[1] == a[1]) or (p[0] == b[0] and p[1] == b[1]):
        raise ValueError("encroachment query point coincides with an endpoint")
    pax = a[0] - p[0]
    pay = a[1] - p[1]
    pbx = b[0] - p[0]
    pby = b[1] - p[1]
    dot = pax * pbx + pay * pby
    scale = max(pax * pax + pay * pay, pbx * pbx + pby * pby)
    if abs(dot) <= _BOUNDARY_BAND * scale:
        return closed
    return dot < 0.0
