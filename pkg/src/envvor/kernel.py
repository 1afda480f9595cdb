"""Exact geometric primitives shared by all diagram families.

Points may carry square-root-extension coordinates produced by
circle intersections; both coordinates are rational or share a single
radicand.  Lines and circles always have rational data, stored in a
canonical form so that equality is structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from gmpy2 import mpq

from envvor.numeric import (
    COUNTERS,
    IncompatibleExtensions,
    Interval,
    Scalar,
    SqrtExt,
    as_rational,
    counted_sign,
    is_rational_scalar,
    iv_add,
    iv_mul,
    iv_sub,
    iv_from_rational,
    make_scalar,
    scalar_cmp,
    scalar_interval,
    scalar_sign,
    scalar_to_json,
    scalar_from_json,
)


class CoincidentSites(ValueError):
    """A bisector of two identical point sites was requested."""


class DegenerateSite(ValueError):
    """A site violates its family's non-degeneracy requirements."""


class PredicateFailure(RuntimeError):
    """Inconsistency propagated from a traits implementation."""


class Point2:
    __slots__ = ("x", "y", "_ivx", "_ivy")

    def __init__(self, x, y):
        if isinstance(x, int):
            x = mpq(x)
        if isinstance(y, int):
            y = mpq(y)
        if isinstance(x, SqrtExt) and isinstance(y, SqrtExt):
            if not x.is_rational() and not y.is_rational() and x.c != y.c:
                raise IncompatibleExtensions("point coordinates mix radicands")
        self.x = x
        self.y = y
        self._ivx = None
        self._ivy = None

    def ivx(self) -> Interval:
        if self._ivx is None:
            self._ivx = scalar_interval(self.x)
        return self._ivx

    def ivy(self) -> Interval:
        if self._ivy is None:
            self._ivy = scalar_interval(self.y)
        return self._ivy

    def is_rational(self) -> bool:
        return is_rational_scalar(self.x) and is_rational_scalar(self.y)

    def __repr__(self):
        return f"Point2({self.x}, {self.y})"

    def __eq__(self, other):
        if not isinstance(other, Point2):
            return NotImplemented
        return cmp_xy(self, other) == 0

    __hash__ = None

    def to_json(self):
        return {"x": scalar_to_json(self.x), "y": scalar_to_json(self.y)}

    @staticmethod
    def from_json(obj) -> "Point2":
        return Point2(scalar_from_json(obj["x"]), scalar_from_json(obj["y"]))


def pt(x, y) -> Point2:
    return Point2(mpq(x), mpq(y))


def cmp_xy(p: Point2, q: Point2) -> int:
    """xy-lexicographic exact comparison (interval-prefiltered, uncounted)."""
    c = scalar_cmp(p.x, q.x)
    if c:
        return c
    return scalar_cmp(p.y, q.y)


def cmp_yx(p: Point2, q: Point2) -> int:
    c = scalar_cmp(p.y, q.y)
    if c:
        return c
    return scalar_cmp(p.x, q.x)


def orientation(p: Point2, q: Point2, r: Point2) -> int:
    """Sign of det(q - p, r - p); +1 = left turn."""
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return scalar_sign(d)


def sq_dist(p: Point2, q: Point2) -> Scalar:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


@dataclass(frozen=True)
class Line2:
    """ax + by + c = 0 in canonical scaling: integral, gcd-reduced
    coefficients with the first nonzero of (a, b) positive."""

    a: mpq
    b: mpq
    c: mpq

    @staticmethod
    def of(a, b, c) -> "Line2":
        a, b, c = mpq(a), mpq(b), mpq(c)
        if a == 0 and b == 0:
            raise ValueError("degenerate line")
        m = mpq(math.lcm(int(a.denominator), int(b.denominator),
                         int(c.denominator)))
        a, b, c = a * m, b * m, c * m
        g = math.gcd(int(a.numerator), int(b.numerator), int(c.numerator))
        if g > 1:
            a, b, c = a / g, b / g, c / g
        lead = a if a != 0 else b
        if lead < 0:
            a, b, c = -a, -b, -c
        return Line2(a, b, c)

    @staticmethod
    def through(p: Point2, q: Point2) -> "Line2":
        # rational points only
        px, py = as_rational(p.x), as_rational(p.y)
        qx, qy = as_rational(q.x), as_rational(q.y)
        if px == qx and py == qy:
            raise ValueError("identical points")
        return Line2.of(py - qy, qx - px, px * qy - py * qx)

    def is_vertical(self) -> bool:
        return self.b == 0

    def slope(self) -> mpq:
        if self.b == 0:
            raise ZeroDivisionError("vertical line")
        return -self.a / self.b

    def y_intercept(self) -> mpq:
        if self.b == 0:
            raise ZeroDivisionError("vertical line")
        return -self.c / self.b

    def x_at(self) -> mpq:
        # vertical line position
        return -self.c / self.a

    def y_at(self, x: Scalar) -> Scalar:
        return (-self.c - self.a * x) / self.b

    def eval_at(self, p: Point2) -> Scalar:
        return self.a * p.x + self.b * p.y + self.c

    def side_of(self, p: Point2) -> int:
        return scalar_sign(self.eval_at(p))

    def direction(self):
        # canonical direction vector (dx, dy): rightward, or upward if vertical
        if self.b == 0:
            return (mpq(0), mpq(1))
        if self.b > 0:
            return (self.b, -self.a)
        return (-self.b, self.a)

    def to_json(self):
        from envvor.numeric import rational_str
        return {"a": rational_str(self.a), "b": rational_str(self.b),
                "c": rational_str(self.c)}


@dataclass(frozen=True)
class Circle2:
    """Circle with rational center and rational squared radius."""

    cx: mpq
    cy: mpq
    sq_r: mpq

    @staticmethod
    def of(cx, cy, sq_r) -> "Circle2":
        cx, cy, sq_r = mpq(cx), mpq(cy), mpq(sq_r)
        if sq_r < 0:
            raise ValueError("negative squared radius")
        return Circle2(cx, cy, sq_r)

    def center(self) -> Point2:
        return Point2(self.cx, self.cy)

    def power_of(self, p: Point2) -> Scalar:
        dx = p.x - self.cx
        dy = p.y - self.cy
        return dx * dx + dy * dy - self.sq_r

    def x_min(self) -> Scalar:
        return make_scalar(self.cx, -1, self.sq_r)

    def x_max(self) -> Scalar:
        return make_scalar(self.cx, 1, self.sq_r)

    def left_point(self) -> Point2:
        return Point2(self.x_min(), self.cy)

    def right_point(self) -> Point2:
        return Point2(self.x_max(), self.cy)

    def to_json(self):
        from envvor.numeric import rational_str
        return {"cx": rational_str(self.cx), "cy": rational_str(self.cy),
                "sq_r": rational_str(self.sq_r)}


EQUAL = 0
FIRST = -1   # comparison results follow cmp conventions: -1 first smaller
SECOND = 1


@dataclass(frozen=True)
class NoBisector:
    """Returned when two sites have no one-dimensional bisector.

    dominance < 0: first site dominates; > 0: second; == 0: tie everywhere.
    """

    dominance: int


def perpendicular_bisector(p: Point2, q: Point2) -> Line2:
    px, py = as_rational(p.x), as_rational(p.y)
    qx, qy = as_rational(q.x), as_rational(q.y)
    if px == qx and py == qy:
        raise CoincidentSites("identical points have no bisector")
    a = 2 * (qx - px)
    b = 2 * (qy - py)
    c = px * px + py * py - qx * qx - qy * qy
    return Line2.of(a, b, c)


def radical_axis(d1: Circle2, d2: Circle2) -> Union[Line2, NoBisector]:
    a = 2 * (d2.cx - d1.cx)
    b = 2 * (d2.cy - d1.cy)
    if a == 0 and b == 0:
        if d1.sq_r == d2.sq_r:
            return NoBisector(0)
        # larger disk has smaller power everywhere
        return NoBisector(-1 if d1.sq_r > d2.sq_r else 1)
    c = (d1.cx * d1.cx + d1.cy * d1.cy - d1.sq_r
         - d2.cx * d2.cx - d2.cy * d2.cy + d2.sq_r)
    return Line2.of(a, b, c)


@dataclass(frozen=True)
class MobiusSiteData:
    px: mpq
    py: mpq
    lam: mpq
    mu: mpq


def mobius_bisector(s1: MobiusSiteData, s2: MobiusSiteData):
    """Line, Circle2, or NoBisector for the distance lambda*(x-p)^2 - mu."""
    if s1.lam == s2.lam:
        lam = s1.lam
        a = 2 * lam * (s2.px - s1.px)
        b = 2 * lam * (s2.py - s1.py)
        if a == 0 and b == 0:
            if s1.mu == s2.mu:
                return NoBisector(0)
            # larger mu means smaller distance
            return NoBisector(-1 if s1.mu > s2.mu else 1)
        c = (lam * (s1.px * s1.px + s1.py * s1.py
                    - s2.px * s2.px - s2.py * s2.py)
             - s1.mu + s2.mu)
        return Line2.of(a, b, c)
    dl = s1.lam - s2.lam
    cx = (s1.lam * s1.px - s2.lam * s2.px) / dl
    cy = (s1.lam * s1.py - s2.lam * s2.py) / dl
    k = (s1.lam * (s1.px * s1.px + s1.py * s1.py)
         - s2.lam * (s2.px * s2.px + s2.py * s2.py)
         - s1.mu + s2.mu) / dl
    sq_r = cx * cx + cy * cy - k
    if sq_r <= 0:
        # empty or single-point bisector: the smaller-lambda site wins a.e.
        return NoBisector(-1 if s1.lam < s2.lam else 1)
    return Circle2.of(cx, cy, sq_r)


def _signed_area_coeffs(p: Point2, q: Point2):
    # L(x, y) = (qx-px)(y-py) - (qy-py)(x-px): vanishes on line pq,
    # |L| = 2 * area of the triangle (x,y), p, q
    px, py = as_rational(p.x), as_rational(p.y)
    qx, qy = as_rational(q.x), as_rational(q.y)
    a = -(qy - py)
    b = qx - px
    c = -(a * px + b * py)
    return a, b, c


def triangle_area_bisector(p1: Point2, q1: Point2, p2: Point2, q2: Point2):
    """Bisector of two pair-sites under the triangle-area distance.

    Returns (lines, meta) where lines is a list of 0-2 Line2 and meta flags
    the degenerate configurations, or NoBisector(0) when the two distance
    functions agree everywhere.
    """
    if cmp_xy(p1, q1) == 0 or cmp_xy(p2, q2) == 0:
        raise DegenerateSite("pair site with coincident points")
    a1, b1, c1 = _signed_area_coeffs(p1, q1)
    a2, b2, c2 = _signed_area_coeffs(p2, q2)
    lines = []
    everywhere_equal = False
    for (a, b, c) in ((a1 - a2, b1 - b2, c1 - c2),
                      (a1 + a2, b1 + b2, c1 + c2)):
        if a == 0 and b == 0:
            if c == 0:
                everywhere_equal = True
            continue
        lines.append(Line2.of(a, b, c))
    if everywhere_equal:
        return NoBisector(0)
    if len(lines) == 2 and lines[0] == lines[1]:
        lines = lines[:1]
    parallel = len(lines) == 2 and \
        lines[0].a * lines[1].b - lines[1].a * lines[0].b == 0
    return lines, {"parallel": parallel, "count": len(lines)}


def line_line_intersection(l1: Line2, l2: Line2) -> Optional[Point2]:
    den = l1.a * l2.b - l2.a * l1.b
    if den == 0:
        return None
    x = (l1.b * l2.c - l2.b * l1.c) / den
    y = (l2.a * l1.c - l1.a * l2.c) / den
    return Point2(x, y)


def line_circle_intersections(line: Line2, circ: Circle2) -> list[Point2]:
    """0, 1, or 2 points, xy-lexicographically sorted; shared radicand."""
    if line.b == 0:
        x0 = -line.c / line.a
        dx = x0 - circ.cx
        disc = circ.sq_r - dx * dx
        s = scalar_sign(disc)
        if s < 0:
            return []
        if s == 0:
            return [Point2(x0, circ.cy)]
        lo = make_scalar(circ.cy, -1, disc)
        hi = make_scalar(circ.cy, 1, disc)
        return [Point2(x0, lo), Point2(x0, hi)]
    # substitute y = (-c - a x)/b into the circle equation
    a, b, c = line.a, line.b, line.c
    # (x-cx)^2 + ((-c-ax)/b - cy)^2 = sq_r
    # expand with u = -c/b - cy, m = -a/b:  (x-cx)^2 + (m x + u)^2 = sq_r
    m = -a / b
    u = -c / b - circ.cy
    A = 1 + m * m
    B = 2 * (m * u - circ.cx)
    C = circ.cx * circ.cx + u * u - circ.sq_r
    disc = B * B - 4 * A * C
    s = scalar_sign(disc)
    if s < 0:
        return []
    if s == 0:
        x = -B / (2 * A)
        return [Point2(x, line.y_at(x))]
    inv = 1 / (2 * A)
    x1 = make_scalar(-B * inv, -inv, disc)
    x2 = make_scalar(-B * inv, inv, disc)
    pts = [Point2(x1, line.y_at(x1)), Point2(x2, line.y_at(x2))]
    pts.sort(key=_XYKey)
    return pts


def circle_circle_intersections(c1: Circle2, c2: Circle2):
    """Points of intersection, or 'overlap' for identical circles."""
    if c1 == c2:
        return "overlap"
    axis = radical_axis(c1, c2)
    if isinstance(axis, NoBisector):
        return []
    return line_circle_intersections(axis, c1)


class _XYKey:
    __slots__ = ("p",)

    def __init__(self, p: Point2):
        self.p = p

    def __lt__(self, other):
        return cmp_xy(self.p, other.p) < 0


# -- counted predicates -------------------------------------------------------
#
# These are the filter-instrumented predicates used by the merge engine.
# Each evaluates a float interval first; on an inconclusive sign it counts a
# filter failure and recomputes exactly.

def _iv_line_eval(line: Line2, p: Point2) -> Interval:
    return iv_add(iv_add(iv_mul(iv_from_rational(line.a), p.ivx()),
                         iv_mul(iv_from_rational(line.b), p.ivy())),
                  iv_from_rational(line.c))


def counted_side_of_line(p: Point2, line: Line2) -> int:
    return counted_sign(_iv_line_eval(line, p),
                        lambda: scalar_sign(line.eval_at(p)))


def _iv_circle_power(circ: Circle2, p: Point2) -> Interval:
    dx = iv_sub(p.ivx(), iv_from_rational(circ.cx))
    dy = iv_sub(p.ivy(), iv_from_rational(circ.cy))
    return iv_sub(iv_add(iv_mul(dx, dx), iv_mul(dy, dy)),
                  iv_from_rational(circ.sq_r))


def counted_power_sign(p: Point2, circ: Circle2) -> int:
    return counted_sign(_iv_circle_power(circ, p),
                        lambda: scalar_sign(circ.power_of(p)))


def counted_cmp_scalars(x: Scalar, y: Scalar) -> int:
    return counted_sign(iv_sub(scalar_interval(x), scalar_interval(y)),
                        lambda: scalar_cmp(x, y))


def counted_cmp_xy(p: Point2, q: Point2) -> int:
    c = counted_cmp_scalars(p.x, q.x)
    if c:
        return c
    return counted_cmp_scalars(p.y, q.y)
