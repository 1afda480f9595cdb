"""Concrete site families: point Voronoi, power diagrams of disks, two-point
triangle-area diagrams, and Moebius diagrams.

Each traits class wires the kernel bisector constructors and an
interval-filtered distance comparison into the framework interface.  The
side-dominance predicate uses an exact perpendicular rational offset from an
interior point of the bisector piece.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from envvor.curves import (
    UPPER,
    XMonotoneCurve,
    full_line_curve,
    interior_point,
    seg_curve,
    split_circle,
)
from envvor.envelope import VoronoiTraits
from envvor.kernel import (
    Circle2,
    Line2,
    MobiusSiteData,
    NoBisector,
    Point2,
    PredicateFailure,
    line_line_intersection,
    mobius_bisector,
    perpendicular_bisector,
    radical_axis,
    triangle_area_bisector,
    _signed_area_coeffs,
)
from envvor.numeric import (
    Interval,
    counted_sign,
    iv_add,
    iv_from_rational,
    iv_mul,
    iv_square,
    iv_sub,
    scalar_sign,
)


class NotABisectorPiece(ValueError):
    pass


@dataclass(frozen=True)
class PointSite:
    x: mpq
    y: mpq

    @staticmethod
    def of(x, y) -> "PointSite":
        return PointSite(mpq(x), mpq(y))

    def point(self) -> Point2:
        return Point2(self.x, self.y)


@dataclass(frozen=True)
class DiskSite:
    cx: mpq
    cy: mpq
    sq_radius: mpq

    @staticmethod
    def of(cx, cy, sq_radius) -> "DiskSite":
        sq_radius = mpq(sq_radius)
        if sq_radius < 0:
            raise ValueError("negative squared radius")
        return DiskSite(mpq(cx), mpq(cy), sq_radius)

    def circle(self) -> Circle2:
        return Circle2.of(self.cx, self.cy, self.sq_radius)


@dataclass(frozen=True)
class PairSite:
    px: mpq
    py: mpq
    qx: mpq
    qy: mpq

    @staticmethod
    def of(px, py, qx, qy) -> "PairSite":
        px, py, qx, qy = mpq(px), mpq(py), mpq(qx), mpq(qy)
        if px == qx and py == qy:
            raise ValueError("pair site needs two distinct points")
        return PairSite(px, py, qx, qy)

    def points(self):
        return Point2(self.px, self.py), Point2(self.qx, self.qy)


@dataclass(frozen=True)
class MobiusSite:
    px: mpq
    py: mpq
    lam: mpq
    mu: mpq

    @staticmethod
    def of(px, py, lam, mu) -> "MobiusSite":
        lam = mpq(lam)
        if lam <= 0:
            raise ValueError("multiplier must be positive")
        return MobiusSite(mpq(px), mpq(py), lam, mpq(mu))

    def data(self) -> MobiusSiteData:
        return MobiusSiteData(self.px, self.py, self.lam, self.mu)


# -- filtered squared-distance expressions ------------------------------------------

def _iv_sqdist(p: Point2, x, y) -> Interval:
    dx = iv_sub(p.ivx(), iv_from_rational(x))
    dy = iv_sub(p.ivy(), iv_from_rational(y))
    return iv_add(iv_square(dx), iv_square(dy))


def _sqdist(p: Point2, x, y):
    dx = p.x - x
    dy = p.y - y
    return dx * dx + dy * dy


def _generic_above(traits, s1, s2, curve: XMonotoneCurve) -> int:
    """Side dominance via an exact perpendicular offset from an interior
    point of the piece toward its "above" (left-of-traversal) side.

    The offset step is bounded so the sample stays within the region
    adjacent to the piece: below half the crossing parameter of any other
    straight bisector branch, and below the circle diameter for arcs."""
    p = interior_point(curve)
    if curve.kind == "seg":
        dx, dy = curve.support.direction()
    else:
        from envvor.curves import direction_into
        e = direction_into(curve, p, True)
        dx, dy = e.dx, e.dy
    nx, ny = -dy, dx
    eps = mpq(1)
    if curve.kind == "arc":
        sq_r = curve.support.sq_r
        if sq_r < 1:
            eps = sq_r   # eps^2 < 4 sq_r keeps the sample short of re-entry
    else:
        for other in traits.construct_bisector(s1, s2):
            if other.kind != "seg" or other.support == curve.support:
                continue
            line = other.support
            den = line.a * nx + line.b * ny
            if den == 0:
                continue
            t = -(line.a * p.x + line.b * p.y + line.c) / den
            if scalar_sign(t) > 0:
                half = t / 2
                from envvor.numeric import scalar_cmp
                if scalar_cmp(half, eps) < 0:
                    eps = half
    q = Point2(p.x + nx * eps, p.y + ny * eps)
    c = traits.compare_distance_at_point(s1, s2, q)
    if c == 0:
        raise PredicateFailure("offset sample landed on the bisector")
    return c


class PointsTraits(VoronoiTraits):
    """Standard Euclidean diagram of points (squared distances compared)."""

    def construct_bisector(self, s1: PointSite, s2: PointSite):
        if s1 == s2:
            return []
        line = perpendicular_bisector(s1.point(), s2.point())
        return [full_line_curve(line)]

    def compare_distance_at_point(self, s1, s2, p: Point2) -> int:
        iv = iv_sub(_iv_sqdist(p, s1.x, s1.y), _iv_sqdist(p, s2.x, s2.y))
        return counted_sign(iv, lambda: scalar_sign(
            _sqdist(p, s1.x, s1.y) - _sqdist(p, s2.x, s2.y)))

    def compare_distance_above(self, s1, s2, curve) -> int:
        return compare_distance_above_affine(self, s1, s2, curve)

    def compare_dominance(self, s1, s2) -> int:
        if s1 == s2:
            return 0
        raise PredicateFailure("distinct points always have a bisector")

    def sort_key(self, site: PointSite):
        return (site.x, site.y)


class PowerTraits(VoronoiTraits):
    """Power diagram of disks: distance (x - c)^2 - r^2."""

    def construct_bisector(self, s1: DiskSite, s2: DiskSite):
        axis = radical_axis(s1.circle(), s2.circle())
        if isinstance(axis, NoBisector):
            return []
        return [full_line_curve(axis)]

    def compare_distance_at_point(self, s1, s2, p: Point2) -> int:
        iv = iv_sub(
            iv_sub(_iv_sqdist(p, s1.cx, s1.cy),
                   iv_from_rational(s1.sq_radius)),
            iv_sub(_iv_sqdist(p, s2.cx, s2.cy),
                   iv_from_rational(s2.sq_radius)))
        return counted_sign(iv, lambda: scalar_sign(
            _sqdist(p, s1.cx, s1.cy) - s1.sq_radius
            - _sqdist(p, s2.cx, s2.cy) + s2.sq_radius))

    def compare_distance_above(self, s1, s2, curve) -> int:
        return compare_distance_above_affine(self, s1, s2, curve)

    def compare_dominance(self, s1, s2) -> int:
        axis = radical_axis(s1.circle(), s2.circle())
        if not isinstance(axis, NoBisector):
            raise PredicateFailure("sites have a bisector")
        return axis.dominance

    def sort_key(self, site: DiskSite):
        return (site.cx, site.cy, site.sq_radius)


class TriangleAreaTraits(VoronoiTraits):
    """Two-point sites under the triangle-area distance."""

    def construct_bisector(self, s1: PairSite, s2: PairSite):
        p1, q1 = s1.points()
        p2, q2 = s2.points()
        res = triangle_area_bisector(p1, q1, p2, q2)
        if isinstance(res, NoBisector):
            return []
        lines, meta = res
        if len(lines) == 1:
            return [full_line_curve(lines[0])]
        if meta["parallel"]:
            return [full_line_curve(lines[0]), full_line_curve(lines[1])]
        # split the two crossing lines at their common point into four
        # interior-disjoint rays
        z = line_line_intersection(lines[0], lines[1])
        pieces = []
        for line in lines:
            pieces.append(seg_curve(line, None, z))
            pieces.append(seg_curve(line, z, None))
        return pieces

    def _iv_area_sq(self, p: Point2, site: PairSite) -> Interval:
        a, b, c = _signed_area_coeffs(*site.points())
        val = iv_add(iv_add(iv_mul(iv_from_rational(a), p.ivx()),
                            iv_mul(iv_from_rational(b), p.ivy())),
                     iv_from_rational(c))
        return iv_square(val)

    def _area_sq(self, p: Point2, site: PairSite):
        a, b, c = _signed_area_coeffs(*site.points())
        v = a * p.x + b * p.y + c
        return v * v

    def compare_distance_at_point(self, s1, s2, p: Point2) -> int:
        iv = iv_sub(self._iv_area_sq(p, s1), self._iv_area_sq(p, s2))
        return counted_sign(iv, lambda: scalar_sign(
            self._area_sq(p, s1) - self._area_sq(p, s2)))

    def compare_distance_above(self, s1, s2, curve) -> int:
        return compare_distance_above_affine(self, s1, s2, curve)

    def compare_dominance(self, s1, s2) -> int:
        res = triangle_area_bisector(*s1.points(), *s2.points())
        if not isinstance(res, NoBisector):
            raise PredicateFailure("sites have a bisector")
        return res.dominance

    def sort_key(self, site: PairSite):
        a = (site.px, site.py)
        b = (site.qx, site.qy)
        lo, hi = (a, b) if a <= b else (b, a)
        return lo + hi


class MobiusTraits(VoronoiTraits):
    """Moebius sites: distance lambda * (x - p)^2 - mu."""

    def construct_bisector(self, s1: MobiusSite, s2: MobiusSite):
        res = mobius_bisector(s1.data(), s2.data())
        if isinstance(res, NoBisector):
            return []
        if isinstance(res, Line2):
            return [full_line_curve(res)]
        return split_circle(res)

    def compare_distance_at_point(self, s1, s2, p: Point2) -> int:
        iv = iv_sub(
            iv_sub(iv_mul(iv_from_rational(s1.lam),
                          _iv_sqdist(p, s1.px, s1.py)),
                   iv_from_rational(s1.mu)),
            iv_sub(iv_mul(iv_from_rational(s2.lam),
                          _iv_sqdist(p, s2.px, s2.py)),
                   iv_from_rational(s2.mu)))
        return counted_sign(iv, lambda: scalar_sign(
            s1.lam * _sqdist(p, s1.px, s1.py) - s1.mu
            - s2.lam * _sqdist(p, s2.px, s2.py) + s2.mu))

    def compare_distance_above(self, s1, s2, curve) -> int:
        if curve.kind == "seg":
            return compare_distance_above_affine(self, s1, s2, curve)
        return _generic_above(self, s1, s2, curve)

    def compare_dominance(self, s1, s2) -> int:
        res = mobius_bisector(s1.data(), s2.data())
        if not isinstance(res, NoBisector):
            raise PredicateFailure("sites have a bisector")
        return res.dominance

    def sort_key(self, site: MobiusSite):
        return (site.px, site.py, site.lam, site.mu)


def compare_distance_above_affine(traits, s1, s2,
                                  curve: XMonotoneCurve) -> int:
    """Dominance of the left-of-traversal side of a straight bisector piece.

    Offsets an interior point perpendicularly toward the "above" side by an
    exact rational step; the step shrinks until the comparison is strict,
    which for one-dimensional bisectors happens at every off-curve point.
    """
    if curve.kind != "seg":
        raise NotABisectorPiece("affine side predicate on a curved piece")
    return _generic_above(traits, s1, s2, curve)


def points_traits() -> PointsTraits:
    return PointsTraits()


def power_traits() -> PowerTraits:
    return PowerTraits()


def triangle_area_traits() -> TriangleAreaTraits:
    return TriangleAreaTraits()


def mobius_traits() -> MobiusTraits:
    return MobiusTraits()
