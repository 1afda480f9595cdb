"""Plane sweep over x-monotone pieces.

The sweep finds every vertex of the arrangement induced by the input curves:
endpoints, pairwise interior intersections, and the symbolic positions where
unbounded ends meet the fictitious border.  Curves sharing a support are
resolved into interior-disjoint atomic pieces first, so the event loop never
sees overlaps.  Vertical pieces are handled in per-x batches after all
regular events at that x, the usual "verticals last" convention.  The DCEL
itself is assembled afterwards from the recorded split points.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional

from envvor.curves import (
    XMonotoneCurve,
    cmp_curves_right_of,
    cmp_point_to_curve,
    curve_intersections,
    curve_y_at,
    point_in_y_range_vertical,
    subcurve,
)
from envvor.kernel import Point2, PredicateFailure, cmp_xy
from envvor.numeric import scalar_cmp


@dataclass
class Piece:
    """Atomic sweep curve: interior-disjoint from every other piece of the
    same support; tags carry the input curves covering it."""

    curve: XMonotoneCurve
    tags: list
    uid: int = field(default=0)


class _PointKey:
    __slots__ = ("p",)

    def __init__(self, p: Point2):
        self.p = p

    def __lt__(self, other):
        return cmp_xy(self.p, other.p) < 0

    def __eq__(self, other):
        return cmp_xy(self.p, other.p) == 0

    __hash__ = None


class _ScalarKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return scalar_cmp(self.v, other.v) < 0

    def __eq__(self, other):
        return scalar_cmp(self.v, other.v) == 0

    __hash__ = None


class _Event:
    __slots__ = ("point", "starts", "ends", "has_cross")

    def __init__(self, point: Point2):
        self.point = point
        self.starts: list[Piece] = []
        self.ends: list[Piece] = []
        self.has_cross = False


@dataclass
class SweepResult:
    pieces: list[Piece]
    vertices: list[Point2]                  # sorted xy-lexicographically
    splits: dict                            # piece uid -> [Point2] (unordered)
    left_border: list                       # (BorderKey, piece) bottom-to-top
    right_border: list
    bottom_border: list
    top_border: list


def _param_of(curve: XMonotoneCurve, p: Point2):
    return p.y if curve.is_vertical() else p.x


def build_pieces(items: list[tuple[XMonotoneCurve, object]]) -> list[Piece]:
    """Group curves by support and emit interior-disjoint atomic pieces."""
    groups: dict = {}
    for curve, tag in items:
        groups.setdefault(curve.support_key(), []).append((curve, tag))
    pieces: list[Piece] = []
    uid = 0
    for group in groups.values():
        rep = group[0][0]
        if len(group) == 1:
            curve, tag = group[0]
            pieces.append(Piece(subcurve(curve, curve.left, curve.right),
                                [tag], uid))
            uid += 1
            continue
        marks: list[tuple] = []
        for curve, _tag in group:
            for pt_ in (curve.left, curve.right):
                if pt_ is not None:
                    marks.append((_param_of(rep, pt_), pt_))
        marks.sort(key=lambda m: _ScalarKey(m[0]))
        dedup: list[tuple] = []
        for prm, pt_ in marks:
            if dedup and scalar_cmp(dedup[-1][0], prm) == 0:
                continue
            dedup.append((prm, pt_))
        bounds: list[tuple] = []
        if not dedup:
            bounds.append((None, None))
        else:
            if any(c.left is None for c, _ in group):
                bounds.append((None, dedup[0][1]))
            for k in range(len(dedup) - 1):
                bounds.append((dedup[k][1], dedup[k + 1][1]))
            if any(c.right is None for c, _ in group):
                bounds.append((dedup[-1][1], None))
        for lo, hi in bounds:
            tags = [tag for curve, tag in group if _covers(rep, curve, lo, hi)]
            if tags:
                pieces.append(Piece(subcurve(rep, lo, hi), tags, uid))
                uid += 1
    return pieces


def _covers(rep: XMonotoneCurve, curve: XMonotoneCurve,
            lo: Optional[Point2], hi: Optional[Point2]) -> bool:
    if curve.left is not None:
        if lo is None:
            return False
        if scalar_cmp(_param_of(rep, curve.left), _param_of(rep, lo)) > 0:
            return False
    if curve.right is not None:
        if hi is None:
            return False
        if scalar_cmp(_param_of(rep, curve.right), _param_of(rep, hi)) < 0:
            return False
    return True


class Sweep:
    def __init__(self, pieces: list[Piece]):
        self.pieces = pieces
        self.status: list[Piece] = []
        self.event_keys: list[_PointKey] = []
        self.events: list[_Event] = []
        self.splits: dict = {p.uid: [] for p in pieces}
        self.vertices: list[Point2] = []
        self._pair_memo: set = set()
        self.left_border: list = []
        self.right_border: list = []
        self.bottom_border: list = []
        self.top_border: list = []
        self.verticals: list[Piece] = []
        self._recent_x = None
        self._recent_pts: list[Point2] = []

    def _event_at(self, p: Point2) -> _Event:
        key = _PointKey(p)
        i = bisect.bisect_left(self.event_keys, key)
        if i < len(self.event_keys) and self.event_keys[i] == key:
            return self.events[i]
        ev = _Event(p)
        self.event_keys.insert(i, key)
        self.events.insert(i, ev)
        return ev

    def _status_span(self, p: Point2) -> tuple[int, int]:
        lo, hi = 0, len(self.status)
        while lo < hi:
            mid = (lo + hi) // 2
            if cmp_point_to_curve(p, self.status[mid].curve) > 0:
                lo = mid + 1
            else:
                hi = mid
        i = lo
        hi = len(self.status)
        while lo < hi:
            mid = (lo + hi) // 2
            if cmp_point_to_curve(p, self.status[mid].curve) >= 0:
                lo = mid + 1
            else:
                hi = mid
        return i, lo

    def _schedule(self, a: Piece, b: Piece, after: Optional[Point2]):
        key = (min(a.uid, b.uid), max(a.uid, b.uid))
        if key in self._pair_memo:
            return
        self._pair_memo.add(key)
        res = curve_intersections(a.curve, b.curve)
        for item in res:
            if isinstance(item, tuple):
                raise PredicateFailure("unexpected overlap between pieces")
            if after is None or cmp_xy(item, after) > 0:
                self._event_at(item).has_cross = True

    def run(self) -> SweepResult:
        vertical_xs: list = []
        for piece in self.pieces:
            c = piece.curve
            if c.is_vertical():
                self.verticals.append(piece)
                x0 = c.support.x_at()
                if not any(scalar_cmp(x0, x) == 0 for x in vertical_xs):
                    vertical_xs.append(x0)
                if c.left is None:
                    self.bottom_border.append((c.end_key("left"), piece))
                if c.right is None:
                    self.top_border.append((c.end_key("right"), piece))
                continue
            if c.left is None:
                self.left_border.append((c.end_key("left"), piece))
            else:
                self._event_at(c.left).starts.append(piece)
            if c.right is None:
                self.right_border.append((c.end_key("right"), piece))
            else:
                self._event_at(c.right).ends.append(piece)
        vertical_xs.sort(key=_ScalarKey)

        self.left_border.sort(key=lambda e: e[0].sort_key())
        self.status = [piece for _, piece in self.left_border]
        for k in range(len(self.status) - 1):
            self._schedule(self.status[k], self.status[k + 1], None)

        vx_i = 0
        idx = 0
        while idx < len(self.events):
            ev = self.events[idx]
            idx += 1
            while vx_i < len(vertical_xs) and \
                    scalar_cmp(vertical_xs[vx_i], ev.point.x) < 0:
                self._vertical_batch(vertical_xs[vx_i])
                vx_i += 1
            self._process(ev)
        while vx_i < len(vertical_xs):
            self._vertical_batch(vertical_xs[vx_i])
            vx_i += 1

        self.right_border.sort(key=lambda e: e[0].sort_key())
        self.bottom_border.sort(key=lambda e: e[0].sort_key())
        self.top_border.sort(key=lambda e: e[0].sort_key())
        return SweepResult(self.pieces, self.vertices, self.splits,
                           self.left_border, self.right_border,
                           self.bottom_border, self.top_border)

    def _process(self, ev: _Event):
        p = ev.point
        i, j = self._status_span(p)
        span = self.status[i:j]
        if not span and not ev.starts and not ev.ends:
            return  # stale crossing event, nothing actually passes here
        if self._recent_x is None or scalar_cmp(self._recent_x, p.x) != 0:
            self._recent_x = p.x
            self._recent_pts = []
        self._recent_pts.append(p)
        self.vertices.append(p)
        ends_set = {e.uid for e in ev.ends}
        through = []
        for piece in span:
            self.splits[piece.uid].append(p)
            if piece.uid not in ends_set:
                c = piece.curve
                if c.right is not None and cmp_xy(c.right, p) == 0:
                    raise PredicateFailure("end event missing from queue")
                through.append(piece)
        for piece in ev.starts:
            self.splits[piece.uid].append(p)
        new_block = sorted(
            through + ev.starts,
            key=cmp_to_key(lambda a, b: cmp_curves_right_of(a.curve, b.curve, p)),
        )
        self.status[i:j] = new_block
        if new_block:
            if i > 0:
                self._schedule(self.status[i - 1], new_block[0], p)
            for k in range(len(new_block) - 1):
                self._schedule(new_block[k], new_block[k + 1], p)
            last = i + len(new_block)
            if last < len(self.status):
                self._schedule(new_block[-1], self.status[last], p)
        elif 0 < i < len(self.status):
            self._schedule(self.status[i - 1], self.status[i], p)

    def _vertical_batch(self, x):
        batch = [v for v in self.verticals
                 if scalar_cmp(v.curve.support.x_at(), x) == 0]
        if not batch:
            return
        for piece in batch:
            c = piece.curve
            for pt_ in (c.left, c.right):
                if pt_ is not None:
                    self.splits[piece.uid].append(pt_)
                    self.vertices.append(pt_)
        # event points already created at this x (endpoints landing on us)
        recent = self._recent_pts if (self._recent_x is not None and
                                      scalar_cmp(self._recent_x, x) == 0) else []
        for piece in batch:
            vcurve = piece.curve
            for q in recent:
                if point_in_y_range_vertical(vcurve, q):
                    self.splits[piece.uid].append(q)
            for other in self.status:
                oc = other.curve
                if not _x_in_closed_range(oc, x):
                    continue
                q = Point2(x, curve_y_at(oc, x))
                if point_in_y_range_vertical(vcurve, q):
                    self.splits[piece.uid].append(q)
                    self.splits[other.uid].append(q)
                    self.vertices.append(q)


def _x_in_closed_range(c: XMonotoneCurve, x) -> bool:
    if c.left is not None and scalar_cmp(x, c.left.x) < 0:
        return False
    if c.right is not None and scalar_cmp(x, c.right.x) > 0:
        return False
    return True


def sweep_pieces(items: list[tuple[XMonotoneCurve, object]]) -> SweepResult:
    """Full phase-1 sweep: atomic pieces, vertices, and per-piece splits."""
    pieces = build_pieces(items)
    result = Sweep(pieces).run()
    result.vertices.sort(key=_PointKey)
    dedup: list[Point2] = []
    for p in result.vertices:
        if dedup and cmp_xy(dedup[-1], p) == 0:
            continue
        dedup.append(p)
    result.vertices = dedup
    return result
