"""Incremental arrangement operations: edge splits, in-face curve insertion,
edge removal, and the zone-based insertion entry points.

The heavy lifting is the DCEL case analysis when an edge is inserted between
two boundary vertices of a face (split the face, close a hole into a new
face, or merge two boundary cycles) and its inverse when an edge is removed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from gmpy2 import mpq

from envvor.curves import (
    BOTTOM,
    LEFT,
    RIGHT,
    TOP,
    BorderKey,
    XMonotoneCurve,
    cmp_angular,
    cmp_point_to_curve,
    curve_y_at,
    interior_point,
    merge_curves,
    point_on_curve,
    same_support,
    subcurve,
    support_intersections,
)
from envvor.kernel import (
    Point2,
    PredicateFailure,
    _iv_circle_power,
    _iv_line_eval,
    cmp_xy,
)
from envvor.numeric import (
    COUNTERS,
    iv_sub,
    rational_between,
    scalar_cmp,
    scalar_interval,
)

from envvor.arrangement.dcel import (
    Arrangement,
    Face,
    Halfedge,
    Vertex,
    attach_out,
    compute_end,
    cycle_halfedges,
    cycle_is_outer,
    detach_out,
    locate,
)


class FallbackRequired(RuntimeError):
    """simplified_convex_zone preconditions could not be verified."""


# -- counted predicates ----------------------------------------------------------

def counted_point_on_curve(p: Point2, c: XMonotoneCurve) -> bool:
    """Filtered on-curve test for a vertex against an inserted curve."""
    COUNTERS.predicate_calls += 1
    if c.is_vertical():
        iv = iv_sub(p.ivx(), scalar_interval(c.support.x_at()))
    elif c.kind == "seg":
        iv = _iv_line_eval(c.support, p)
    else:
        iv = _iv_circle_power(c.support, p)
    if iv.lo > 0 or iv.hi < 0:
        return False
    COUNTERS.filter_failures += 1
    return point_on_curve(p, c)


def counted_cmp_along(vertical: bool, a: Point2, b: Point2) -> int:
    """Filtered comparison of positions along a curve (x, or y if vertical)."""
    COUNTERS.predicate_calls += 1
    iv = iv_sub(a.ivy(), b.ivy()) if vertical else iv_sub(a.ivx(), b.ivx())
    if iv.lo > 0:
        return 1
    if iv.hi < 0:
        return -1
    COUNTERS.filter_failures += 1
    return scalar_cmp(a.y, b.y) if vertical else scalar_cmp(a.x, b.x)


# -- parity tests ------------------------------------------------------------------

def _upward_crossing(q: Point2, h: Halfedge) -> int:
    """1 when the vertical up-ray from q crosses this boundary halfedge.

    Half-open x-span convention [left, right); border edges count only on
    the TOP side.  Each halfedge is counted independently, so an antenna
    edge appearing twice on a boundary contributes 2 (no parity change).
    """
    if h.is_border():
        if h.border[0] != TOP:
            return 0
        return 1 if _border_spans_halfopen(h, q.x) else 0
    c = h.curve
    if c.is_vertical():
        return 0
    if c.left is not None and scalar_cmp(q.x, c.left.x) < 0:
        return 0
    if c.right is not None and scalar_cmp(q.x, c.right.x) >= 0:
        return 0
    return 1 if cmp_point_to_curve(q, c) < 0 else 0


def _border_spans_halfopen(h: Halfedge, x) -> bool:
    """Does the border edge's x-span contain x (half-open convention)?

    Normalizes on the forward-direction halfedge so corners are known to be
    the unbounded end on their own side.
    """
    hf = h if h.border[1] > 0 else h.twin
    lo_v, hi_v = hf.source, hf.twin.source
    xl = None if lo_v.is_corner() else lo_v.at_inf[1].primary
    xh = None if hi_v.is_corner() else hi_v.at_inf[1].primary
    if xl is not None and scalar_cmp(x, xl) < 0:
        return False
    if xh is not None and scalar_cmp(x, xh) >= 0:
        return False
    return True


def point_in_cycle(q: Point2, anchor: Halfedge) -> bool:
    crossings = 0
    for h in cycle_halfedges(anchor):
        crossings += _upward_crossing(q, h)
    return crossings % 2 == 1


def point_in_face(arr: Arrangement, face: Face, q: Point2) -> bool:
    if face.is_fictitious():
        return False
    crossings = 0
    for h in face.boundary_halfedges():
        crossings += _upward_crossing(q, h)
    return crossings % 2 == 1


# -- structural primitives ----------------------------------------------------------

def _replace_ring_slot(v: Vertex, old_out: Halfedge, new_out: Halfedge):
    """Substitute one outgoing halfedge with another at the same slot."""
    i = v.outs.index(old_out)
    v.outs[i] = new_out
    new_out.source = v
    new_out.end = old_out.end
    new_out.prv = old_out.prv
    new_out.prv.nxt = new_out
    new_in = new_out.twin
    old_in = old_out.twin
    new_in.nxt = old_in.nxt
    new_in.nxt.prv = new_in


def split_edge(arr: Arrangement, h: Halfedge, p: Point2,
               vertex: Optional[Vertex] = None):
    """Split a real edge at interior point p.

    Returns (left_halfedge, right_halfedge, middle_vertex); the original
    halfedge pair is reused for the left part.
    """
    hf = h if h.forward else h.twin
    hb = hf.twin
    c = hf.curve
    v2 = hb.source
    w = vertex if vertex is not None else arr.new_vertex(p)
    left_part = subcurve(c, c.left, p)
    right_part = subcurve(c, p, c.right)
    gf, gb = arr.new_halfedge_pair()
    gf.curve = right_part
    gb.curve = right_part
    gf.forward = True
    gb.forward = False
    gf.label = hf.label
    gb.label = hb.label
    gf.tags = hf.tags
    gb.tags = hb.tags
    gf.data = hf.data
    gb.data = hb.data
    gf.face = hf.face
    gb.face = hb.face
    _replace_ring_slot(v2, hb, gb)
    hf.curve = left_part
    hb.curve = left_part
    hb.source = w
    hb.end = compute_end(hb)
    gf.source = w
    gf.end = compute_end(gf)
    if cmp_angular(hb.end, gf.end) < 0:
        w.outs = [hb, gf]
    else:
        w.outs = [gf, hb]
    hf.nxt = gf
    gf.prv = hf
    gb.nxt = hb
    hb.prv = gb
    return hf, gf, w


def _fix_anchor(face: Face, stale: Halfedge, substitute: Halfedge):
    if face is None:
        return
    if face.outer is stale:
        face.outer = substitute
    face.holes = [substitute if a is stale else a for a in face.holes]


def split_border_edge(arr: Arrangement, side: str, key: BorderKey) -> Vertex:
    """Insert a new at-infinity vertex on the given border side."""
    host = None
    for h in arr.halfedges:
        if not h.alive or h.border is None:
            continue
        if h.border[0] == side and h.border[1] > 0:
            if _key_between(h, key):
                host = h
                break
    if host is None:
        raise PredicateFailure("no border edge hosts the key")
    w = arr.new_vertex(None, (side, key))
    entry = (key, w)
    lst = arr.border_lists[side]
    pos = 0
    while pos < len(lst) and lst[pos][0].sort_key() < key.sort_key():
        pos += 1
    lst.insert(pos, entry)
    hf, hb = host, host.twin
    gf, gb = arr.new_halfedge_pair()
    gf.border = hf.border
    gb.border = hb.border
    gf.face = hf.face
    gb.face = hb.face
    v2 = hb.source
    _replace_ring_slot(v2, hb, gb)
    hb.source = w
    hb.end = compute_end(hb)
    gf.source = w
    gf.end = compute_end(gf)
    if cmp_angular(hb.end, gf.end) < 0:
        w.outs = [hb, gf]
    else:
        w.outs = [gf, hb]
    hf.nxt = gf
    gf.prv = hf
    gb.nxt = hb
    hb.prv = gb
    return w


def _key_between(h: Halfedge, key: BorderKey) -> bool:
    """Is the key strictly inside the border edge's span along its side?"""
    hf = h if h.border[1] > 0 else h.twin
    lo_v, hi_v = hf.source, hf.twin.source
    ka = None if lo_v.is_corner() else lo_v.at_inf[1].sort_key()
    kb = None if hi_v.is_corner() else hi_v.at_inf[1].sort_key()
    if ka is not None and key.sort_key() <= ka:
        return False
    if kb is not None and key.sort_key() >= kb:
        return False
    return True


def insert_between(arr: Arrangement, face: Face, piece: XMonotoneCurve,
                   v_left: Vertex, v_right: Vertex):
    """Insert a curve piece whose interior lies inside `face` between two
    vertices (existing, new-isolated, or at-infinity).

    Returns (forward halfedge, new face or None).
    """
    hf, hb = arr.new_halfedge_pair()
    hf.curve = piece
    hb.curve = piece
    hf.forward = True
    hb.forward = False
    hf.face = face
    hb.face = face
    attach_out(v_left, hf)
    attach_out(v_right, hb)
    cyc1 = []
    has_twin = False
    for x in cycle_halfedges(hf):
        cyc1.append(x)
        if x is hb:
            has_twin = True
    if has_twin:
        anchors = [face.outer] + face.holes + [hf]
        _rebuild_face(arr, face, anchors)
        return hf, None
    cyc2 = list(cycle_halfedges(hb))
    o1 = cycle_is_outer(cyc1)
    o2 = cycle_is_outer(cyc2)
    new_face = arr.new_face()
    new_face.label = face.label
    new_face.data = face.data
    if o1 and o2:
        old_outer = face.outer
        in1 = any(x is old_outer for x in cyc1)
        keep_cyc, new_cyc = (cyc1, cyc2) if in1 else (cyc2, cyc1)
    elif o1 != o2:
        new_cyc, keep_cyc = (cyc1, cyc2) if o1 else (cyc2, cyc1)
    else:
        raise PredicateFailure("face split produced two hole cycles")
    # the split CCB's old anchors are superseded by the two new cycles
    new_ids = {x.id for x in cyc1} | {x.id for x in cyc2}
    old_holes = [a for a in face.holes if a.id not in new_ids]
    if o1 and o2:
        face.outer = keep_cyc[0]
        new_face.outer = new_cyc[0]
        face.holes = []
    else:
        # a hole CCB was closed into a loop: keep_cyc stays a hole of face
        new_face.outer = new_cyc[0]
        face.holes = [keep_cyc[0]]
        if face.outer is not None and face.outer.id in new_ids:
            raise PredicateFailure("outer anchor unexpectedly consumed")
    for x in keep_cyc:
        x.face = face
    for x in new_cyc:
        x.face = new_face
    new_face.holes = []
    for a in old_holes:
        q = _cycle_sample_point(a)
        if point_in_cycle(q, new_face.outer):
            new_face.holes.append(a)
            for x in cycle_halfedges(a):
                x.face = new_face
        else:
            face.holes.append(a)
    return hf, new_face


def _cycle_sample_point(anchor: Halfedge) -> Point2:
    for h in cycle_halfedges(anchor):
        if not h.is_border():
            from envvor.curves import interior_point
            return interior_point(h.curve)
    raise PredicateFailure("cycle without real edges")


def _rebuild_face(arr: Arrangement, face: Face, anchors: list[Halfedge]):
    seen = set()
    cycles = []
    for a in anchors:
        if a is None or not a.alive or a.id in seen:
            continue
        cyc = []
        ok = True
        for h in cycle_halfedges(a):
            if h.id in seen:
                ok = False
                break
            cyc.append(h)
        if not ok:
            continue
        for h in cyc:
            seen.add(h.id)
        cycles.append(cyc)
    outer = None
    holes = []
    for cyc in cycles:
        if cycle_is_outer(cyc):
            if outer is not None:
                raise PredicateFailure("face with two outer cycles")
            outer = cyc
        else:
            holes.append(cyc)
    if face.is_fictitious():
        if outer is not None:
            raise PredicateFailure("fictitious face acquired an outer cycle")
        face.outer = None
    else:
        if outer is None:
            raise PredicateFailure("face lost its outer cycle")
        face.outer = outer[0]
    face.holes = [cyc[0] for cyc in holes]
    for cyc in cycles:
        for h in cyc:
            h.face = face


def remove_edge(arr: Arrangement, h: Halfedge) -> Face:
    """Delete a real edge; merge faces when it separated two."""
    if h.is_border():
        raise PredicateFailure("cannot remove a border edge")
    t = h.twin
    f1, f2 = h.face, t.face
    v1, v2 = h.source, t.source
    neighbors = [x for x in (h.prv, h.nxt, t.prv, t.nxt)
                 if x is not h and x is not t]
    detach_out(v1, h)
    detach_out(v2, t)
    h.alive = False
    t.alive = False
    if f1 is f2:
        keep = f1
        anchors = [f1.outer] + f1.holes + neighbors
    else:
        if f1.is_fictitious() or f2.is_fictitious():
            raise PredicateFailure("merge with fictitious face")
        keep, gone = f1, f2
        gone.alive = False
        anchors = [f1.outer, f2.outer] + f1.holes + f2.holes + neighbors
    _rebuild_face(arr, keep, anchors)
    for v in (v1, v2):
        if not v.outs and v.is_finite():
            v.alive = False
    return keep


def merge_at_vertex(arr: Arrangement, v: Vertex) -> Halfedge:
    """Fuse the two mergeable edges at a degree-2 vertex, deleting it."""
    if len(v.outs) != 2:
        raise PredicateFailure("merge needs a degree-2 vertex")
    out_a, out_b = v.outs[0], v.outs[1]
    h1 = out_a.twin          # arrives at v
    g = out_b                # leaves v
    merged = merge_curves(h1.curve, g.curve)
    far = g.twin.source
    _replace_ring_slot(far, g.twin, h1.twin)
    h1.curve = merged
    h1.twin.curve = merged
    # re-derive orientation flags from the merged geometry
    src = h1.source
    if merged.left is not None and src.is_finite() and \
            cmp_xy(src.point, merged.left) == 0:
        h1.forward = True
    elif merged.right is not None and src.is_finite() and \
            cmp_xy(src.point, merged.right) == 0:
        h1.forward = False
    else:
        h1.forward = src.at_inf is not None and \
            src.at_inf[0] in (LEFT, BOTTOM)
    h1.twin.forward = not h1.forward
    for f in {h1.face, h1.twin.face}:
        _fix_anchor(f, g, h1)
        _fix_anchor(f, g.twin, h1.twin)
    g.alive = False
    g.twin.alive = False
    v.alive = False
    v.outs = []
    return h1


def remove_border_vertex(arr: Arrangement, v: Vertex):
    """Fuse the two border edges at a curve-free border vertex."""
    if v.is_finite() or v.is_corner() or len(v.outs) != 2:
        raise PredicateFailure("not a removable border vertex")
    out_a, out_b = v.outs
    if out_a.border is None or out_b.border is None:
        raise PredicateFailure("border vertex still carries a curve end")
    h1 = out_a.twin
    g = out_b
    far = g.twin.source
    _replace_ring_slot(far, g.twin, h1.twin)
    for f in {h1.face, h1.twin.face}:
        _fix_anchor(f, g, h1)
        _fix_anchor(f, g.twin, h1.twin)
    g.alive = False
    g.twin.alive = False
    v.alive = False
    v.outs = []
    side = v.at_inf[0]
    arr.border_lists[side] = [(k, w) for (k, w) in arr.border_lists[side]
                              if w is not v]


# -- face crossing scan -------------------------------------------------------------

@dataclass
class ZoneOpts:
    three_bisector: bool = True
    simple_zone: bool = True
    # annotation oracle: vertex -> bool ("known to lie on the curve")
    known_on_curve: Optional[Callable[[Vertex], bool]] = None


@dataclass
class Crossing:
    kind: str                      # vertex | edge | border | free_end
    pos_class: int                 # -1 left-infinite, 0 finite, 1 right-infinite
    pos: object = None             # finite sort position along the curve
    vertex: Optional[Vertex] = None
    halfedge: Optional[Halfedge] = None
    point: Optional[Point2] = None
    border_side: Optional[str] = None
    border_key: Optional[BorderKey] = None


@dataclass
class FaceScan:
    crossings: list
    occupied: list                 # (pos_lo, pos_hi, halfedge) overlap spans


def _pos_of_point(piece: XMonotoneCurve, p: Point2):
    return p.y if piece.is_vertical() else p.x


def _boundary_edges(face: Face):
    seen = set()
    out = []
    for h in face.boundary_halfedges():
        eid = min(h.id, h.twin.id)
        if eid in seen:
            continue
        seen.add(eid)
        out.append(h)
    return out


def _boundary_vertices(face: Face):
    seen = set()
    out = []
    for h in face.boundary_halfedges():
        v = h.source
        if v.is_finite() and v.id not in seen:
            seen.add(v.id)
            out.append(v)
    return out


def scan_face(arr: Arrangement, face: Face, piece: XMonotoneCurve,
              opts: ZoneOpts) -> FaceScan:
    """All meeting points of the piece with the face boundary.

    Implements the three instrumentation regimes: without optimizations every
    boundary vertex is tested on-curve exactly when the filter fails; with
    the three-bisector annotations those tests are skipped for known
    vertices; the simplified traversal additionally skips the edges incident
    to known crossing vertices (sound for straight supports).
    """
    crossings: list[Crossing] = []
    occupied = []
    known: set[int] = set()
    simple_mode = opts.simple_zone and piece.kind == "seg"

    for v in _boundary_vertices(face):
        if opts.three_bisector and opts.known_on_curve is not None \
                and opts.known_on_curve(v):
            known.add(v.id)
            crossings.append(Crossing("vertex", 0, vertex=v, point=v.point))
            continue
        if simple_mode:
            continue
        if counted_point_on_curve(v.point, piece):
            known.add(v.id)
            crossings.append(Crossing("vertex", 0, vertex=v, point=v.point))

    for h in _boundary_edges(face):
        if h.is_border():
            continue
        e = h.curve
        if same_support(piece, e):
            occ = _overlap_span(piece, e, h)
            if occ is not None:
                occupied.append(occ)
            continue
        if simple_mode and e.kind == "seg" and (
                h.source.id in known or h.twin.source.id in known):
            continue
        for z in support_intersections(piece, e):
            cls = _classify_on_edge(e, h, z)
            if cls is None:
                continue
            kind, obj = cls
            if kind == "vertex":
                if obj.id in known:
                    continue
                known.add(obj.id)
                if not point_on_curve(obj.point, piece):
                    continue
                crossings.append(Crossing("vertex", 0, vertex=obj,
                                          point=obj.point))
            else:
                if not point_on_curve(z, piece):
                    continue
                crossings.append(Crossing("edge", 0, halfedge=h, point=z))

    # unbounded piece ends meeting this face's border stretch
    for which in ("left", "right"):
        end = piece.left if which == "left" else piece.right
        if end is not None:
            continue
        key = piece.end_key(which)
        for h in _boundary_edges(face):
            if h.border is not None and h.border[0] == key.side and \
                    _key_between(h, key):
                crossings.append(Crossing(
                    "border", -1 if which == "left" else 1,
                    border_side=key.side, border_key=key))
                break

    for cr in crossings:
        if cr.kind in ("vertex", "edge"):
            cr.pos = _pos_of_point(piece, cr.point)
    _sort_crossings(piece, crossings)
    return FaceScan(crossings, occupied)


def _classify_on_edge(e: XMonotoneCurve, h: Halfedge, z: Point2):
    """Classify a support-intersection point against the edge piece.

    Counted comparisons: position of z against the piece's endpoints; a tie
    with an endpoint reports a vertex crossing.  For arcs, points on the
    other branch of the supporting circle are rejected.
    """
    vertical = e.is_vertical()
    if e.left is not None:
        c = counted_cmp_along(vertical, z, e.left)
        if c < 0:
            return None
        if c == 0:
            if e.kind == "arc" and scalar_cmp(z.y, e.left.y) != 0:
                return None
            return ("vertex", _endpoint_vertex(h, e.left))
    if e.right is not None:
        c = counted_cmp_along(vertical, z, e.right)
        if c > 0:
            return None
        if c == 0:
            if e.kind == "arc" and scalar_cmp(z.y, e.right.y) != 0:
                return None
            return ("vertex", _endpoint_vertex(h, e.right))
    if e.kind == "arc" and not point_on_curve(z, e):
        return None
    return ("edge", h)


def _endpoint_vertex(h: Halfedge, p: Point2) -> Vertex:
    for v in (h.source, h.twin.source):
        if v.is_finite() and cmp_xy(v.point, p) == 0:
            return v
    raise PredicateFailure("edge endpoint vertex missing")


def _overlap_span(piece: XMonotoneCurve, e: XMonotoneCurve, h: Halfedge):
    from envvor.curves import _range_clip
    clip = _range_clip(piece, e)
    if clip == "empty":
        return None
    lo, hi = clip
    if lo is not None and hi is not None and \
            scalar_cmp(_pos_of_point(piece, lo), _pos_of_point(piece, hi)) == 0:
        return None
    return (lo, hi, h)


class _CrossKey:
    __slots__ = ("pc", "pos")

    def __init__(self, cr: Crossing):
        self.pc = cr.pos_class
        self.pos = cr.pos

    def __lt__(self, other):
        if self.pc != other.pc:
            return self.pc < other.pc
        if self.pc != 0:
            return False
        return scalar_cmp(self.pos, other.pos) < 0


def _sort_crossings(piece: XMonotoneCurve, crossings: list[Crossing]):
    crossings.sort(key=_CrossKey)
    # dedupe identical positions (vertex duplicates)
    out = []
    for cr in crossings:
        if out and cr.pos_class == 0 and out[-1].pos_class == 0 and \
                scalar_cmp(cr.pos, out[-1].pos) == 0:
            continue
        out.append(cr)
    crossings[:] = out


# -- span insertion driver -----------------------------------------------------------

@dataclass
class InsertRecord:
    """What a curve insertion created or touched."""

    new_vertices: list = field(default_factory=list)   # (Vertex, on_halfedge|None)
    new_edges: list = field(default_factory=list)      # inserted forward halfedges
    face_splits: list = field(default_factory=list)    # (old_face, new_face)
    overlaps: list = field(default_factory=list)       # existing halfedges reused


def _span_sample(piece: XMonotoneCurve, b1, b2):
    """A point on the piece strictly between two boundary crossings."""
    if piece.is_vertical():
        x0 = piece.support.x_at()
        lo = b1.pos if b1.pos_class == 0 else None
        hi = b2.pos if b2.pos_class == 0 else None
        y = _between_or_beyond(lo, hi)
        return Point2(x0, y)
    lo = b1.pos if b1.pos_class == 0 else None
    hi = b2.pos if b2.pos_class == 0 else None
    x = _between_or_beyond(lo, hi)
    return Point2(x, curve_y_at(piece, x))


def _between_or_beyond(lo, hi):
    from envvor.curves import _ceil_plus_one, _floor_minus_one
    if lo is None and hi is None:
        return mpq(0)
    if lo is None:
        return _floor_minus_one(hi)
    if hi is None:
        return _ceil_plus_one(lo)
    return rational_between(lo, hi)


def _boundaries_with_free_ends(piece: XMonotoneCurve, scan: FaceScan):
    bounds = list(scan.crossings)
    for which in ("left", "right"):
        end = piece.left if which == "left" else piece.right
        if end is None:
            continue
        pos = _pos_of_point(piece, end)
        dup = any(b.pos_class == 0 and scalar_cmp(b.pos, pos) == 0
                  for b in bounds if b.pos is not None)
        if not dup:
            bounds.append(Crossing("free_end", 0, pos=pos, point=end))
    _sort_crossings(piece, bounds)
    return bounds


def _span_occupied(scan: FaceScan, piece: XMonotoneCurve, q: Point2):
    for lo, hi, h in scan.occupied:
        pos = _pos_of_point(piece, q)
        if lo is not None and scalar_cmp(pos, _pos_of_point(piece, lo)) <= 0:
            continue
        if hi is not None and scalar_cmp(pos, _pos_of_point(piece, hi)) >= 0:
            continue
        return h
    return None


def _find_boundary_edge_containing(faces, support_key, p: Point2):
    for f in faces:
        for h in f.boundary_halfedges():
            if h.is_border() or not h.alive:
                continue
            if h.curve.support_key() == support_key and \
                    point_on_curve(p, h.curve):
                return h
    raise PredicateFailure("crossed edge fragment not found")


def _materialize(arr: Arrangement, cands, piece: XMonotoneCurve, b,
                 record: InsertRecord):
    if b.kind == "vertex":
        return b.vertex
    if b.kind == "edge":
        h = b.halfedge
        if not (h.alive and point_on_curve(b.point, h.curve)):
            h = _find_boundary_edge_containing(cands, h.curve.support_key(),
                                               b.point)
        _, _, w = split_edge(arr, h, b.point)
        record.new_vertices.append((w, h))
        return w
    if b.kind == "border":
        w = split_border_edge(arr, b.border_side, b.border_key)
        record.new_vertices.append((w, None))
        return w
    if b.kind == "free_end":
        w = arr.new_vertex(b.point)
        record.new_vertices.append((w, None))
        return w
    raise PredicateFailure(f"unknown boundary kind {b.kind}")


def insert_piece_into_face(arr: Arrangement, face: Face,
                           piece: XMonotoneCurve, opts: ZoneOpts,
                           record: Optional[InsertRecord] = None,
                           cands: Optional[list] = None) -> InsertRecord:
    """Insert the parts of `piece` that lie inside the face (or, when a
    candidate list is passed, inside any of the subfaces the original face
    has been split into by earlier pieces)."""
    if record is None:
        record = InsertRecord()
    if cands is None:
        cands = [face]
    crossings: list[Crossing] = []
    occupied = []
    seen_vertices: set = set()
    for f in list(cands):
        if not f.alive:
            continue
        scan = scan_face(arr, f, piece, opts)
        occupied.extend(scan.occupied)
        for cr in scan.crossings:
            if cr.kind == "vertex":
                if cr.vertex.id in seen_vertices:
                    continue
                seen_vertices.add(cr.vertex.id)
            crossings.append(cr)
    _sort_crossings(piece, crossings)
    scan = FaceScan(crossings, occupied)
    bounds = _boundaries_with_free_ends(piece, scan)
    memo: dict = {}

    def materialize(b):
        v = memo.get(id(b))
        if v is None:
            v = _materialize(arr, cands, piece, b, record)
            memo[id(b)] = v
        return v

    for i in range(len(bounds) - 1):
        b1, b2 = bounds[i], bounds[i + 1]
        q = _span_sample(piece, b1, b2)
        occ = _span_occupied(scan, piece, q)
        if occ is not None:
            record.overlaps.append(occ)
            continue
        target = None
        for f in cands:
            if f.alive and point_in_face(arr, f, q):
                target = f
                break
        if target is None:
            continue
        v1 = materialize(b1)
        v2 = materialize(b2)
        left_pt = v1.point if v1.is_finite() else None
        right_pt = v2.point if v2.is_finite() else None
        sub = subcurve(piece, left_pt, right_pt)
        h, new_face = insert_between(arr, target, sub, v1, v2)
        record.new_edges.append(h)
        if new_face is not None:
            record.face_splits.append((target, new_face))
            cands.append(new_face)
    return record


def simplified_convex_zone(arr: Arrangement, curve: XMonotoneCurve,
                           face: Face, hint: Optional[Vertex] = None,
                           opts: Optional[ZoneOpts] = None) -> InsertRecord:
    """Insert a straight curve into a bounded convex hole-free face.

    Walks at most the face boundary, stops after two crossings, starts from
    annotated/hinted vertices, and never tests hinted vertices on-curve.
    Raises FallbackRequired when the preconditions cannot be verified.
    """
    if face.is_fictitious() or face.holes:
        raise FallbackRequired("face has holes or is fictitious")
    if curve.kind != "seg":
        raise FallbackRequired("curve is not straight")
    boundary = list(face.outer_halfedges())
    for h in boundary:
        if h.is_border() or not h.source.is_finite():
            raise FallbackRequired("face is unbounded")
        if h.curve.kind != "seg":
            raise FallbackRequired("curved boundary")
    from envvor.numeric import scalar_sign
    for h in boundary:
        d1 = h.end
        d2 = h.nxt.end
        cr = scalar_sign(d1.dx * d2.dy - d1.dy * d2.dx)
        if cr < 0:
            raise FallbackRequired("face is not convex")
    known = opts.known_on_curve if opts is not None else None

    def known_fn(v: Vertex) -> bool:
        if hint is not None and v is hint:
            return True
        return known(v) if known is not None else False

    local = ZoneOpts(three_bisector=True, simple_zone=True,
                     known_on_curve=known_fn)
    record = InsertRecord()
    scan = scan_face(arr, face, curve, local)
    crossings = [c for c in scan.crossings if c.pos_class == 0][:2]
    if scan.occupied:
        record.overlaps.extend(h for _, _, h in scan.occupied)
        return record
    if len(crossings) < 2:
        return record
    b1, b2 = crossings
    v1 = _materialize(arr, [face], curve, b1, record)
    v2 = _materialize(arr, [face], curve, b2, record)
    sub = subcurve(curve, v1.point, v2.point)
    h, new_face = insert_between(arr, face, sub, v1, v2)
    record.new_edges.append(h)
    if new_face is not None:
        record.face_splits.append((face, new_face))
    return record


def insert_with_zone(arr: Arrangement, curve: XMonotoneCurve,
                     payload_hook: Optional[Callable] = None,
                     opts: Optional[ZoneOpts] = None) -> InsertRecord:
    """General zone insertion of one x-monotone curve into the arrangement.

    Splits every face the curve crosses, reuses existing vertices and edges
    it passes through, and reports overlapped edges through `payload_hook`.
    """
    if opts is None:
        opts = ZoneOpts(three_bisector=False, simple_zone=False)
    record = InsertRecord()
    crossings: list[Crossing] = []
    occupied = []
    known: set[int] = set()
    for h in arr.real_edges():
        e = h.curve
        if same_support(curve, e):
            occ = _overlap_span(curve, e, h)
            if occ is not None:
                occupied.append(occ)
            continue
        for z in support_intersections(curve, e):
            if not point_on_curve(z, curve):
                continue
            cls = _classify_on_edge(e, h, z)
            if cls is None:
                continue
            kind, obj = cls
            if kind == "vertex":
                if obj.id in known:
                    continue
                known.add(obj.id)
                crossings.append(Crossing("vertex", 0, vertex=obj,
                                          point=obj.point))
            else:
                crossings.append(Crossing("edge", 0, halfedge=h, point=z))
    for which in ("left", "right"):
        end = curve.left if which == "left" else curve.right
        if end is not None:
            continue
        key = curve.end_key(which)
        crossings.append(Crossing("border", -1 if which == "left" else 1,
                                  border_side=key.side, border_key=key))
    for cr in crossings:
        if cr.kind in ("vertex", "edge"):
            cr.pos = _pos_of_point(curve, cr.point)
    scan = FaceScan(crossings, occupied)
    _sort_crossings(curve, crossings)
    bounds = _boundaries_with_free_ends(curve, scan)
    memo: dict = {}
    for i in range(len(bounds) - 1):
        b1, b2 = bounds[i], bounds[i + 1]
        q = _span_sample(curve, b1, b2)
        occ = _span_occupied(scan, curve, q)
        if occ is not None:
            record.overlaps.append(occ)
            if payload_hook is not None:
                payload_hook(occ)
            continue
        target = locate(arr, q)
        if not isinstance(target, Face):
            raise PredicateFailure("span sample landed on a feature")
        if target.is_fictitious():
            continue
        v1 = memo.get(id(b1))
        if v1 is None:
            v1 = _materialize(arr, [target], curve, b1, record)
            memo[id(b1)] = v1
        v2 = memo.get(id(b2))
        if v2 is None:
            v2 = _materialize(arr, [target], curve, b2, record)
            memo[id(b2)] = v2
        left_pt = v1.point if v1.is_finite() else None
        right_pt = v2.point if v2.is_finite() else None
        sub = subcurve(curve, left_pt, right_pt)
        h, new_face = insert_between(arr, target, sub, v1, v2)
        record.new_edges.append(h)
        if new_face is not None:
            record.face_splits.append((target, new_face))
    return record
