"""Weakly x-monotone curves: linear pieces and circular arcs.

A curve is a piece of a rational line (segment, ray, or full line) or a
circular arc lying on one y-branch of a rational circle.  Endpoints are
stored explicitly and ordered lexicographically; an absent endpoint marks an
unbounded end whose position lives on the fictitious border (classified
LEFT/RIGHT for non-vertical pieces, BOTTOM/TOP for vertical ones).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from gmpy2 import mpq

from envvor.kernel import (
    Circle2,
    Line2,
    Point2,
    circle_circle_intersections,
    cmp_xy,
    line_circle_intersections,
    line_line_intersection,
)
from envvor.numeric import (
    Scalar,
    make_scalar,
    rational_between,
    scalar_cmp,
    scalar_sign,
)

LEFT, RIGHT, BOTTOM, TOP = "L", "R", "B", "T"

UPPER, LOWER = 1, -1


@dataclass(frozen=True)
class BorderKey:
    """Position of an unbounded curve end on the fictitious border.

    Non-vertical ends sort along the LEFT/RIGHT border by line slope and
    intercept; vertical ends sort along BOTTOM/TOP by their x-coordinate.
    """

    side: str
    primary: mpq
    secondary: mpq

    def sort_key(self):
        return (self.primary, self.secondary)


class XMonotoneCurve:
    __slots__ = ("kind", "support", "branch", "left", "right", "uid")

    _next_uid = 0

    def __init__(self, kind: str, support, branch: int,
                 left: Optional[Point2], right: Optional[Point2]):
        self.kind = kind          # "seg" | "arc"
        self.support = support    # Line2 | Circle2
        self.branch = branch      # UPPER/LOWER for arcs, 0 for segs
        self.left = left
        self.right = right
        self.uid = XMonotoneCurve._next_uid
        XMonotoneCurve._next_uid += 1

    def __repr__(self):
        return (f"XMono({self.kind}, {self.support}, br={self.branch}, "
                f"{self.left}..{self.right})")

    def is_vertical(self) -> bool:
        return self.kind == "seg" and self.support.is_vertical()

    def is_arc(self) -> bool:
        return self.kind == "arc"

    def left_side(self) -> str:
        return BOTTOM if self.is_vertical() else LEFT

    def right_side(self) -> str:
        return TOP if self.is_vertical() else RIGHT

    def end_key(self, which: str) -> BorderKey:
        """Border position of an unbounded end ('left' or 'right')."""
        line = self.support
        if self.is_vertical():
            side = BOTTOM if which == "left" else TOP
            return BorderKey(side, line.x_at(), mpq(0))
        m, k = line.slope(), line.y_intercept()
        if which == "left":
            # bottom-to-top along the left border: slope descending
            return BorderKey(LEFT, -m, k)
        return BorderKey(RIGHT, m, k)

    def support_key(self):
        if self.kind == "seg":
            s = self.support
            return ("seg", s.a, s.b, s.c)
        s = self.support
        return ("arc", s.cx, s.cy, s.sq_r, self.branch)

    def descriptor(self):
        """Canonical JSON-able geometry descriptor."""
        from envvor.numeric import rational_str
        if self.kind == "seg":
            s = self.support
            return ("seg", rational_str(s.a), rational_str(s.b),
                    rational_str(s.c))
        s = self.support
        return ("arc", rational_str(s.cx), rational_str(s.cy),
                rational_str(s.sq_r), self.branch)


def seg_curve(line: Line2, left: Optional[Point2],
              right: Optional[Point2]) -> XMonotoneCurve:
    if left is not None and right is not None and cmp_xy(left, right) >= 0:
        raise ValueError("endpoints out of order")
    return XMonotoneCurve("seg", line, 0, left, right)


def full_line_curve(line: Line2) -> XMonotoneCurve:
    return XMonotoneCurve("seg", line, 0, None, None)


def segment_between(p: Point2, q: Point2) -> XMonotoneCurve:
    line = Line2.through(p, q)
    if cmp_xy(p, q) > 0:
        p, q = q, p
    return seg_curve(line, p, q)


def ray_from(p: Point2, dx, dy) -> XMonotoneCurve:
    """Ray from p in rational direction (dx, dy)."""
    dx, dy = mpq(dx), mpq(dy)
    q = Point2(p.x + dx, p.y + dy)
    line = Line2.through(p, q)
    if dx > 0 or (dx == 0 and dy > 0):
        return seg_curve(line, p, None)
    return seg_curve(line, None, p)


def arc_curve(circ: Circle2, branch: int, left: Point2,
              right: Point2) -> XMonotoneCurve:
    if cmp_xy(left, right) >= 0:
        raise ValueError("arc endpoints out of order")
    return XMonotoneCurve("arc", circ, branch, left, right)


def split_circle(circ: Circle2) -> list[XMonotoneCurve]:
    """A full circle as its upper and lower x-monotone arcs."""
    if circ.sq_r == 0:
        raise ValueError("degenerate circle")
    lp, rp = circ.left_point(), circ.right_point()
    return [arc_curve(circ, UPPER, lp, rp), arc_curve(circ, LOWER, lp, rp)]


# -- range and point predicates ----------------------------------------------

def cmp_to_left_end(c: XMonotoneCurve, x: Scalar) -> int:
    """-1 if x precedes the curve's x-range, else 0/1 style compare."""
    if c.left is None:
        return 1
    return scalar_cmp(x, c.left.x)


def x_in_range(c: XMonotoneCurve, x: Scalar) -> bool:
    if c.left is not None and scalar_cmp(x, c.left.x) < 0:
        return False
    if c.right is not None and scalar_cmp(x, c.right.x) > 0:
        return False
    return True


def point_in_y_range_vertical(c: XMonotoneCurve, p: Point2) -> bool:
    if c.left is not None and scalar_cmp(p.y, c.left.y) < 0:
        return False
    if c.right is not None and scalar_cmp(p.y, c.right.y) > 0:
        return False
    return True


def cmp_point_to_curve(p: Point2, c: XMonotoneCurve) -> int:
    """-1/0/+1 for p below/on/above the curve at x = p.x.

    Precondition: p.x lies in the curve's x-range (callers check), and the
    curve is not vertical.
    """
    if c.kind == "seg":
        line = c.support
        v = line.eval_at(p)
        s = scalar_sign(v)
        if s == 0:
            return 0
        # normalize: positive side above the line iff b > 0
        return s if line.b > 0 else -s
    circ = c.support
    pw = scalar_sign(circ.power_of(p))
    dy = scalar_cmp(p.y, circ.cy)
    if c.branch == UPPER:
        if pw == 0:
            return 0 if dy >= 0 else -1
        if pw < 0:
            return -1
        return 1 if dy > 0 else -1
    if pw == 0:
        return 0 if dy <= 0 else 1
    if pw < 0:
        return 1
    return -1 if dy < 0 else 1


def point_on_curve(p: Point2, c: XMonotoneCurve) -> bool:
    if c.is_vertical():
        if scalar_cmp(p.x, c.support.x_at()) != 0:
            return False
        return point_in_y_range_vertical(c, p)
    if not x_in_range(c, p.x):
        return False
    return cmp_point_to_curve(p, c) == 0


def curve_y_at(c: XMonotoneCurve, x: Scalar) -> Scalar:
    """y-coordinate of a non-vertical curve at x (may introduce a radicand)."""
    if c.kind == "seg":
        return c.support.y_at(x)
    circ = c.support
    dx = x - circ.cx
    disc = circ.sq_r - dx * dx
    if scalar_sign(disc) < 0:
        raise ValueError("x outside arc support")
    if not isinstance(disc, mpq):
        raise ValueError("nested radical would be required")
    return make_scalar(circ.cy, c.branch, disc)


# -- tangent directions, curvature, angular order ------------------------------

@dataclass
class EdgeEnd:
    """Outgoing direction of a curve at one of its endpoints."""

    dx: Scalar
    dy: Scalar
    curv_side: int      # sign of curvature wrt (dx, dy); 0 for lines
    sq_r: Optional[mpq]  # circle squared radius when curv_side != 0


def direction_into(c: XMonotoneCurve, p: Point2, towards_right: bool) -> EdgeEnd:
    """Direction leaving p into the curve (towards its right or left end)."""
    if c.kind == "seg":
        dx, dy = c.support.direction()
        if c.is_vertical():
            # canonical direction is up; "right" end is the top end
            if not towards_right:
                dx, dy = -dx, -dy
        elif not towards_right:
            dx, dy = -dx, -dy
        return EdgeEnd(dx, dy, 0, None)
    circ = c.support
    rx = p.x - circ.cx
    ry = p.y - circ.cy
    if c.branch == UPPER:
        dx, dy = ry, -rx
    else:
        dx, dy = -ry, rx
    if not towards_right:
        dx, dy = -dx, -dy
    sdx, sdy = scalar_sign(dx), scalar_sign(dy)
    if sdx == 0 and sdy == 0:
        raise ValueError("degenerate tangent")
    # curvature side: +1 when the center lies left of the direction
    side = scalar_sign(dx * (-ry) - dy * (-rx))
    return EdgeEnd(dx, dy, side, circ.sq_r)


_QUAD = {
    (1, 0): 0, (1, 1): 1, (0, 1): 2, (-1, 1): 3,
    (-1, 0): 4, (-1, -1): 5, (0, -1): 6, (1, -1): 7,
}


def _quadrant(e: EdgeEnd) -> int:
    return _QUAD[(scalar_sign(e.dx), scalar_sign(e.dy))]


def _cmp_curvature(e1: EdgeEnd, e2: EdgeEnd) -> int:
    # signed curvature ascending; equal directions assumed
    if e1.curv_side != e2.curv_side:
        return -1 if e1.curv_side < e2.curv_side else 1
    s = e1.curv_side
    if s == 0:
        return 0
    # kappa_i = s / sqrt(sq_r_i): sign(k1 - k2) = s * sign(sq_r2 - sq_r1)
    d = e2.sq_r - e1.sq_r
    if d == 0:
        return 0
    return s * (-1 if d < 0 else 1)


def cmp_angular(e1: EdgeEnd, e2: EdgeEnd, from_quadrant: int = 0) -> int:
    """CCW angular order of edge ends, starting at the given quadrant.

    from_quadrant 0 starts at east; 6 starts at south (used by the cycle
    orientation test).  Ties in direction are broken by ascending signed
    curvature, matching the geometry infinitesimally away from the vertex.
    """
    q1 = (_quadrant(e1) - from_quadrant) % 8
    q2 = (_quadrant(e2) - from_quadrant) % 8
    if q1 != q2:
        return -1 if q1 < q2 else 1
    # cross(e1, e2) > 0: e2 lies counterclockwise of e1, so e1 comes first
    cr = scalar_sign(e1.dx * e2.dy - e1.dy * e2.dx)
    if cr != 0:
        return -cr
    return _cmp_curvature(e1, e2)


def cmp_curves_right_of(c1: XMonotoneCurve, c2: XMonotoneCurve,
                        p: Point2) -> int:
    """Vertical order of two curves just right of their common point p."""
    e1 = direction_into(c1, p, True)
    e2 = direction_into(c2, p, True)
    # slope order: vertical-up tangents are steepest, vertical-down lowest
    def slope_class(e):
        s = scalar_sign(e.dx)
        if s > 0:
            return 0
        return 1 if scalar_sign(e.dy) > 0 else -1
    k1, k2 = slope_class(e1), slope_class(e2)
    if k1 != k2:
        return -1 if k1 < k2 else 1
    if k1 == 0:
        # cross > 0: e2 counterclockwise of e1, i.e. steeper, i.e. above
        cr = scalar_sign(e1.dx * e2.dy - e1.dy * e2.dx)
        if cr != 0:
            return -cr
    # same tangent direction: larger left-curvature is above just right of p
    return _cmp_curvature(e1, e2)


# -- intersections -------------------------------------------------------------

def same_support(c1: XMonotoneCurve, c2: XMonotoneCurve) -> bool:
    return (c1.kind == c2.kind and c1.support == c2.support
            and (c1.kind == "seg" or c1.branch == c2.branch))


def support_intersections(c1: XMonotoneCurve, c2: XMonotoneCurve):
    """Intersection points of the two distinct supports."""
    if c1.kind == "seg" and c2.kind == "seg":
        p = line_line_intersection(c1.support, c2.support)
        return [] if p is None else [p]
    if c1.kind == "seg":
        return line_circle_intersections(c1.support, c2.support)
    if c2.kind == "seg":
        return line_circle_intersections(c2.support, c1.support)
    if c1.support == c2.support:
        # same circle, opposite branches: arcs can only meet at the extremes
        return [c1.support.left_point(), c1.support.right_point()]
    res = circle_circle_intersections(c1.support, c2.support)
    return res


def _cmp_along(c: XMonotoneCurve, p: Point2, q: Point2) -> int:
    if c.is_vertical():
        return scalar_cmp(p.y, q.y)
    return scalar_cmp(p.x, q.x)


def _range_clip(c1: XMonotoneCurve, c2: XMonotoneCurve):
    """Shared-support pieces: (lo, hi) endpoints of the common span, or None.

    lo/hi may be None when the overlap is unbounded on that side.
    Returns 'empty' when the spans are disjoint.
    """
    lo = c1.left
    if c2.left is not None and (lo is None or _cmp_along(c1, c2.left, lo) > 0):
        lo = c2.left
    hi = c1.right
    if c2.right is not None and (hi is None or _cmp_along(c1, c2.right, hi) < 0):
        hi = c2.right
    if lo is not None and hi is not None:
        c = _cmp_along(c1, lo, hi)
        if c > 0:
            return "empty"
    return (lo, hi)


def curve_intersections(c1: XMonotoneCurve, c2: XMonotoneCurve):
    """All intersections of the two pieces in xy-lexicographic order.

    The result list contains Point2 entries for isolated intersections and
    ("overlap", XMonotoneCurve) entries for shared subcurves.
    """
    if same_support(c1, c2):
        clip = _range_clip(c1, c2)
        if clip == "empty":
            return []
        lo, hi = clip
        if lo is not None and hi is not None and _cmp_along(c1, lo, hi) == 0:
            return [lo]
        return [("overlap", subcurve(c1, lo, hi))]
    pts = support_intersections(c1, c2)
    out = [p for p in pts if point_on_curve(p, c1) and point_on_curve(p, c2)]
    return out


# -- splitting -----------------------------------------------------------------

def subcurve(c: XMonotoneCurve, left: Optional[Point2],
             right: Optional[Point2]) -> XMonotoneCurve:
    return XMonotoneCurve(c.kind, c.support, c.branch, left, right)


def are_mergeable(c1: XMonotoneCurve, c2: XMonotoneCurve) -> bool:
    if c1.kind != c2.kind or c1.support != c2.support:
        return False
    if c1.kind == "arc" and c1.branch != c2.branch:
        return False
    # must share exactly one endpoint end-to-end
    return (c1.right is not None and c2.left is not None
            and cmp_xy(c1.right, c2.left) == 0) or \
           (c2.right is not None and c1.left is not None
            and cmp_xy(c2.right, c1.left) == 0)


def merge_curves(c1: XMonotoneCurve, c2: XMonotoneCurve) -> XMonotoneCurve:
    if not are_mergeable(c1, c2):
        raise ValueError("not mergeable")
    if c1.right is not None and c2.left is not None and \
            cmp_xy(c1.right, c2.left) == 0:
        return subcurve(c1, c1.left, c2.right)
    return subcurve(c1, c2.left, c1.right)


# -- interior point construction ------------------------------------------------

def _floor_minus_one(x: Scalar) -> mpq:
    import math as _m
    from envvor.numeric import scalar_interval
    f = mpq(_m.floor(scalar_interval(x).lo)) - 1
    assert scalar_cmp(f, x) < 0
    return f


def _ceil_plus_one(x: Scalar) -> mpq:
    import math as _m
    from envvor.numeric import scalar_interval
    f = mpq(_m.ceil(scalar_interval(x).hi)) + 1
    assert scalar_cmp(f, x) > 0
    return f


def interior_point(c: XMonotoneCurve) -> Point2:
    """A point strictly interior to the curve, in the curve's own field."""
    if c.is_vertical():
        x0 = c.support.x_at()
        if c.left is None and c.right is None:
            return Point2(x0, mpq(0))
        if c.left is None:
            return Point2(x0, _floor_minus_one(c.right.y))
        if c.right is None:
            return Point2(x0, _ceil_plus_one(c.left.y))
        return Point2(x0, rational_between(c.left.y, c.right.y))
    if c.left is None and c.right is None:
        x = mpq(0)
    elif c.left is None:
        x = _floor_minus_one(c.right.x)
    elif c.right is None:
        x = _ceil_plus_one(c.left.x)
    else:
        x = rational_between(c.left.x, c.right.x)
    return Point2(x, curve_y_at(c, x))
