"""Independent brute-force oracles used to cross-check the package.

Everything here is written directly from definitions (rational
determinants, exhaustive scans) and deliberately shares no code with the
implementation under test.
"""

from __future__ import annotations

from fractions import Fraction


def orient_oracle(a, b, c) -> int:
    """Sign of the 3x3 orientation determinant in exact arithmetic."""
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def incircle_oracle(a, b, c, d) -> int:
    """Sign of the full 4x4 lifted determinant, normalized to CCW abc.

    +1 means d strictly inside the circumcircle of abc.
    """
    rows = []
    for p in (a, b, c, d):
        x, y = Fraction(p[0]), Fraction(p[1])
        rows.append([x, y, x * x + y * y, Fraction(1)])
    det = _det4(rows)
    o = orient_oracle(a, b, c)
    if o == 0:
        raise ValueError("collinear triangle in incircle oracle")
    det *= o
    return (det > 0) - (det < 0)


def _det4(m) -> Fraction:
    total = Fraction(0)
    sign = 1
    for col in range(4):
        minor = [
            [m[r][c] for c in range(4) if c != col] for r in range(1, 4)
        ]
        total += sign * m[0][col] * _det3(minor)
        sign = -sign
    return total


def _det3(m) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def in_diametral_disk_oracle(p, a, b) -> int:
    """-1 outside, 0 on, +1 strictly inside the diametral circle of ab.

    Exact rational test: p is inside iff the angle apb is obtuse.
    """
    pax = Fraction(a[0]) - Fraction(p[0])
    pay = Fraction(a[1]) - Fraction(p[1])
    pbx = Fraction(b[0]) - Fraction(p[0])
    pby = Fraction(b[1]) - Fraction(p[1])
    dot = pax * pbx + pay * pby
    return (dot < 0) - (dot > 0)


def segments_cross_oracle(p1, q1, p2, q2) -> bool:
    """True when the closed segments share any point (exact)."""

    def on_segment(a, b, c):
        # c collinear with ab assumed; is c within the bounding box?
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    o1 = orient_oracle(p1, q1, p2)
    o2 = orient_oracle(p1, q1, q2)
    o3 = orient_oracle(p2, q2, p1)
    o4 = orient_oracle(p2, q2, q1)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p1, q1, p2):
        return True
    if o2 == 0 and on_segment(p1, q1, q2):
        return True
    if o3 == 0 and on_segment(p2, q2, p1):
        return True
    if o4 == 0 and on_segment(p2, q2, q1):
        return True
    return False


def constrained_delaunay_violations(points, triangles, constraint_edges):
    """Brute-force constrained empty-circle audit.

    For every triangle and every other vertex strictly inside its
    circumcircle, the vertex must be hidden from the triangle's centroid
    by some constraint edge.  Returns a list of (triangle, vertex)
    offenders.
    """
    constraints = [
        (points[u], points[v]) for (u, v) in constraint_edges
    ]
    bad = []
    for tri in triangles:
        ia, ib, ic = tri
        a, b, c = points[ia], points[ib], points[ic]
        cx = Fraction(a[0]) + Fraction(b[0]) + Fraction(c[0])
        cy = Fraction(a[1]) + Fraction(b[1]) + Fraction(c[1])
        centroid = (cx / 3, cy / 3)
        for iv, p in points.items() if isinstance(points, dict) else enumerate(points):
            if iv in tri:
                continue
            if incircle_oracle(a, b, c, p) <= 0:
                continue
            visible = True
            for (u, v) in constraints:
                if (u == p or v == p):
                    continue
                if _proper_cross(centroid, p, u, v):
                    visible = False
                    break
            if visible:
                bad.append((tuple(tri), iv))
    return bad


def _proper_cross(p1, q1, p2, q2) -> bool:
    """Segments p1q1 and p2q2 cross at a single interior point of p2q2."""
    o1 = orient_oracle(p1, q1, p2)
    o2 = orient_oracle(p1, q1, q2)
    o3 = orient_oracle(p2, q2, p1)
    o4 = orient_oracle(p2, q2, q1)
    return o1 * o2 < 0 and o3 * o4 < 0
