"""Half-edge (DCEL) planar subdivision with a symbolic fictitious border.

Unbounded curves terminate at vertices "at infinity" living on one of the
four border sides; the border itself is a cycle of fictitious edges through
four corner vertices.  With that convention every real face has an outer
boundary cycle and Euler's formula holds over the full structure, fictitious
features included.

Construction is two-phase: the sweep (sweep.py) finds all vertices and the
per-curve split points; `assemble` then builds the half-edge structure by
sorting edge ends angularly around each vertex, tracing boundary cycles,
classifying them, and attaching hole cycles to their containing faces via
vertical ray shooting.
"""

from __future__ import annotations

from functools import cmp_to_key
from typing import Callable, Iterable, Optional

from gmpy2 import mpq

from envvor.curves import (
    BOTTOM,
    LEFT,
    RIGHT,
    TOP,
    BorderKey,
    EdgeEnd,
    XMonotoneCurve,
    cmp_angular,
    cmp_point_to_curve,
    curve_y_at,
    direction_into,
    interior_point,
    point_on_curve,
    same_support,
    subcurve,
)
from envvor.kernel import Point2, PredicateFailure, cmp_xy
from envvor.numeric import rational_between, scalar_cmp, scalar_interval

from envvor.arrangement.sweep import sweep_pieces

BL, BR, TR, TL = "BL", "BR", "TR", "TL"

_CARDINAL = {
    "E": EdgeEnd(mpq(1), mpq(0), 0, None),
    "N": EdgeEnd(mpq(0), mpq(1), 0, None),
    "W": EdgeEnd(mpq(-1), mpq(0), 0, None),
    "S": EdgeEnd(mpq(0), mpq(-1), 0, None),
}

# direction a curve points when leaving its at-infinity vertex into the plane
_INTO_PLANE = {LEFT: "E", RIGHT: "W", BOTTOM: "N", TOP: "S"}


class Vertex:
    __slots__ = ("id", "point", "at_inf", "outs", "label", "data", "alive")

    def __init__(self, vid: int, point: Optional[Point2], at_inf=None):
        self.id = vid
        self.point = point
        self.at_inf = at_inf      # None | (side, BorderKey) | ("corner", name)
        self.outs: list[Halfedge] = []   # outgoing halfedges, CCW from east
        self.label = None
        self.data = None
        self.alive = True

    def is_finite(self) -> bool:
        return self.at_inf is None

    def is_corner(self) -> bool:
        return self.at_inf is not None and self.at_inf[0] == "corner"

    def degree(self) -> int:
        return len(self.outs)

    def real_degree(self) -> int:
        return sum(1 for h in self.outs if not h.is_border())

    def __repr__(self):
        return f"V{self.id}({self.point if self.point else self.at_inf})"


class Halfedge:
    __slots__ = ("id", "source", "twin", "nxt", "prv", "curve", "forward",
                 "border", "face", "end", "label", "tags", "alive", "data")

    def __init__(self, hid: int, source: Vertex):
        self.id = hid
        self.source = source
        self.alive = True
        self.data = None
        self.twin: Halfedge = None
        self.nxt: Halfedge = None
        self.prv: Halfedge = None
        self.curve: Optional[XMonotoneCurve] = None
        self.forward = True        # source is the curve's left end
        self.border = None         # (side, +1/-1) for fictitious edges
        self.face: Face = None
        self.end: EdgeEnd = None   # outgoing direction at source
        self.label = None
        self.tags = None           # origin tags (overlay bookkeeping)

    def target(self) -> Vertex:
        return self.twin.source

    def is_border(self) -> bool:
        return self.border is not None

    def __repr__(self):
        return f"H{self.id}({self.source}->{self.twin.source if self.twin else '?'})"


class Face:
    __slots__ = ("id", "outer", "holes", "label", "data", "alive")

    def __init__(self, fid: int):
        self.id = fid
        self.outer: Optional[Halfedge] = None   # None only for the fictitious face
        self.holes: list[Halfedge] = []
        self.label = None
        self.data = None
        self.alive = True

    def is_fictitious(self) -> bool:
        return self.outer is None

    def outer_halfedges(self) -> Iterable["Halfedge"]:
        if self.outer is not None:
            yield from cycle_halfedges(self.outer)

    def hole_halfedges(self) -> Iterable["Halfedge"]:
        for h in self.holes:
            yield from cycle_halfedges(h)

    def boundary_halfedges(self) -> Iterable["Halfedge"]:
        yield from self.outer_halfedges()
        yield from self.hole_halfedges()

    def __repr__(self):
        return f"F{self.id}"


def cycle_halfedges(start: Halfedge) -> Iterable[Halfedge]:
    h = start
    seen = 0
    while True:
        yield h
        h = h.nxt
        seen += 1
        if h is start:
            return
        if seen > 10_000_000:
            raise PredicateFailure("runaway cycle walk")


class Arrangement:
    def __init__(self):
        self.vertices: list[Vertex] = []
        self.halfedges: list[Halfedge] = []
        self.faces: list[Face] = []
        self.corners: dict = {}
        self.border_lists: dict = {LEFT: [], RIGHT: [], BOTTOM: [], TOP: []}
        self.fictitious_face: Face = None
        self._vid = 0
        self._hid = 0
        self._fid = 0

    # -- factories -------------------------------------------------------------

    def new_vertex(self, point: Optional[Point2], at_inf=None) -> Vertex:
        v = Vertex(self._vid, point, at_inf)
        self._vid += 1
        self.vertices.append(v)
        return v

    def new_halfedge_pair(self) -> tuple[Halfedge, Halfedge]:
        h1 = Halfedge(self._hid, None)
        h2 = Halfedge(self._hid + 1, None)
        self._hid += 2
        h1.twin = h2
        h2.twin = h1
        self.halfedges.extend((h1, h2))
        return h1, h2

    def new_face(self) -> Face:
        f = Face(self._fid)
        self._fid += 1
        self.faces.append(f)
        return f

    # -- views -------------------------------------------------------------------

    def alive_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices if v.alive]

    def alive_halfedges(self) -> list["Halfedge"]:
        return [h for h in self.halfedges if h.alive]

    def alive_faces(self) -> list[Face]:
        return [f for f in self.faces if f.alive]

    def real_vertices(self) -> list[Vertex]:
        return [v for v in self.vertices if v.alive and v.is_finite()]

    def real_edges(self) -> list[Halfedge]:
        return [h for h in self.halfedges
                if h.alive and not h.is_border() and h.id < h.twin.id]

    def real_faces(self) -> list[Face]:
        return [f for f in self.faces if f.alive and not f.is_fictitious()]

    def counts(self) -> tuple[int, int, int]:
        return (len(self.real_vertices()), len(self.real_edges()),
                len(self.real_faces()))

    def full_counts(self) -> tuple[int, int, int]:
        return (len(self.alive_vertices()), len(self.alive_halfedges()) // 2,
                len(self.alive_faces()))

    def compact(self) -> None:
        self.vertices = [v for v in self.vertices if v.alive]
        self.halfedges = [h for h in self.halfedges if h.alive]
        self.faces = [f for f in self.faces if f.alive]


# -- vertex ordering -----------------------------------------------------------

_SIDE_CLASS = {LEFT: -1, RIGHT: 1}
_CORNER_KEY = {BL: (-1, -1), TL: (-1, 1), BR: (1, -1), TR: (1, 1)}


def vertex_key_cmp(a: Vertex, b: Vertex) -> int:
    ka, kb = _vertex_class(a), _vertex_class(b)
    if ka[0] != kb[0]:
        return -1 if ka[0] < kb[0] else 1
    cls = ka[0]
    if cls in (-1, 1):
        # within a side group: bottom corner < side vertices < top corner
        if ka[1] != kb[1]:
            return -1 if ka[1] < kb[1] else 1
        if ka[1] == 0:
            sa = a.at_inf[1].sort_key()
            sb = b.at_inf[1].sort_key()
            if sa == sb:
                return 0
            return -1 if sa < sb else 1
        return 0
    # middle class: compare x, then bottom < finite(y) < top
    xa = a.at_inf[1].primary if not a.is_finite() else a.point.x
    xb = b.at_inf[1].primary if not b.is_finite() else b.point.x
    c = scalar_cmp(xa, xb)
    if c:
        return c
    ya = 0 if a.is_finite() else (-1 if a.at_inf[0] == BOTTOM else 1)
    yb = 0 if b.is_finite() else (-1 if b.at_inf[0] == BOTTOM else 1)
    if ya != yb:
        return -1 if ya < yb else 1
    if ya == 0:
        return scalar_cmp(a.point.y, b.point.y)
    return 0


def _vertex_class(v: Vertex):
    if v.is_finite():
        return (0, 0)
    kind, info = v.at_inf
    if kind == "corner":
        return _CORNER_KEY[info]
    if kind in (LEFT, RIGHT):
        return (_SIDE_CLASS[kind], 0)
    return (0, -1 if kind == BOTTOM else 1)


# -- edge ends -----------------------------------------------------------------

def compute_end(h: Halfedge) -> EdgeEnd:
    v = h.source
    if h.is_border():
        side, direction = h.border
        if side in (BOTTOM, TOP):
            return _CARDINAL["E"] if direction > 0 else _CARDINAL["W"]
        return _CARDINAL["N"] if direction > 0 else _CARDINAL["S"]
    if not v.is_finite():
        return _CARDINAL[_INTO_PLANE[v.at_inf[0]]]
    return direction_into(h.curve, v.point, h.forward)


def attach_out(v: Vertex, h: Halfedge):
    """Insert an outgoing halfedge into v's CCW ring and relink around it.

    Ring invariant: for consecutive outs [.., A, B, ..] (B counterclockwise
    after A), B.twin.nxt is A.  h.twin must already exist.
    """
    h.source = v
    if h.end is None:
        h.end = compute_end(h)
    outs = v.outs
    lo = 0
    for i, o in enumerate(outs):
        if cmp_angular(h.end, o.end) < 0:
            break
        lo = i + 1
    outs.insert(lo, h)
    n = len(outs)
    if n == 1:
        h.twin.nxt = h
        h.prv = h.twin
        return
    prev_out = outs[(lo - 1) % n]
    next_out = outs[(lo + 1) % n]
    h.twin.nxt = prev_out
    prev_out.prv = h.twin
    next_out.twin.nxt = h
    h.prv = next_out.twin


def detach_out(v: Vertex, h: Halfedge):
    """Remove an outgoing halfedge from v's ring, relinking its neighbors."""
    outs = v.outs
    i = outs.index(h)
    n = len(outs)
    if n > 1:
        prev_out = outs[(i - 1) % n]
        next_out = outs[(i + 1) % n]
        if prev_out is not h:
            next_out.twin.nxt = prev_out
            prev_out.prv = next_out.twin
    outs.pop(i)


def make_border_vertex(arr: Arrangement, side: str, key: BorderKey) -> Vertex:
    return arr.new_vertex(None, (side, key))


# -- assembly -------------------------------------------------------------------

class _PtKey:
    __slots__ = ("p",)

    def __init__(self, p: Point2):
        self.p = p

    def __lt__(self, other):
        return cmp_xy(self.p, other.p) < 0

    def __eq__(self, other):
        return cmp_xy(self.p, other.p) == 0


def _along_key(curve: XMonotoneCurve):
    if curve.is_vertical():
        return lambda p: _YKey(p)
    return lambda p: _PtKey(p)


class _YKey:
    __slots__ = ("p",)

    def __init__(self, p: Point2):
        self.p = p

    def __lt__(self, other):
        return scalar_cmp(self.p.y, other.p.y) < 0

    def __eq__(self, other):
        return scalar_cmp(self.p.y, other.p.y) == 0


def assemble(result, tag_hook: Optional[Callable] = None) -> Arrangement:
    """Build the DCEL from a sweep result."""
    arr = Arrangement()

    vlist: list[Vertex] = []
    keys: list[_PtKey] = []
    for p in result.vertices:
        vlist.append(arr.new_vertex(p))
        keys.append(_PtKey(p))

    import bisect as _bisect

    def vertex_of(p: Point2) -> Vertex:
        i = _bisect.bisect_left(keys, _PtKey(p))
        if i >= len(keys) or not (keys[i] == _PtKey(p)):
            raise PredicateFailure("sweep missed a vertex")
        return vlist[i]

    for side in (LEFT, RIGHT, BOTTOM, TOP):
        entries = {LEFT: result.left_border, RIGHT: result.right_border,
                   BOTTOM: result.bottom_border, TOP: result.top_border}[side]
        for key, piece in entries:
            v = make_border_vertex(arr, side, key)
            arr.border_lists[side].append((key, v))
    for name in (BL, BR, TR, TL):
        arr.corners[name] = arr.new_vertex(None, ("corner", name))

    border_vertex_of: dict = {}
    for side in (LEFT, RIGHT, BOTTOM, TOP):
        for key, v in arr.border_lists[side]:
            border_vertex_of[(side, key.primary, key.secondary)] = v

    # real edges from piece split chains
    for piece in result.pieces:
        c = piece.curve
        pts = result.splits.get(piece.uid, [])
        pts = _sorted_unique_along(c, pts)
        chain: list = []
        if c.left is None:
            k = c.end_key("left")
            chain.append(border_vertex_of[(k.side, k.primary, k.secondary)])
        for p in pts:
            chain.append(vertex_of(p))
        if c.right is None:
            k = c.end_key("right")
            chain.append(border_vertex_of[(k.side, k.primary, k.secondary)])
        if len(chain) < 2:
            raise PredicateFailure("piece with no extent")
        for i in range(len(chain) - 1):
            v1, v2 = chain[i], chain[i + 1]
            left_pt = v1.point if v1.is_finite() else None
            right_pt = v2.point if v2.is_finite() else None
            sub = subcurve(c, left_pt, right_pt)
            h = _raw_edge(arr, v1, v2, sub)
            h.tags = list(piece.tags)
            h.twin.tags = h.tags

    # border edges along each side, in border-cycle order
    def side_chain(side, first_corner, last_corner, reverse=False):
        vs = [v for _, v in arr.border_lists[side]]
        return [arr.corners[first_corner]] + vs + [arr.corners[last_corner]]

    for side, c0, c1, positive in ((BOTTOM, BL, BR, 1), (RIGHT, BR, TR, 1),
                                   (TOP, TL, TR, 1), (LEFT, BL, TL, 1)):
        chain = side_chain(side, c0, c1)
        for i in range(len(chain) - 1):
            h1, h2 = arr.new_halfedge_pair()
            h1.source = chain[i]
            h2.source = chain[i + 1]
            h1.border = (side, 1)
            h2.border = (side, -1)
            h1.end = compute_end(h1)
            h2.end = compute_end(h2)

    # angular rings
    for h in arr.halfedges:
        h.source.outs.append(h)
    for v in arr.vertices:
        v.outs.sort(key=cmp_to_key(lambda a, b: cmp_angular(a.end, b.end)))
        n = len(v.outs)
        for i in range(n):
            out_i = v.outs[i]
            out_prev = v.outs[(i - 1) % n]
            out_i.twin.nxt = out_prev
            out_prev.prv = out_i.twin

    _build_faces(arr)
    return arr


def _raw_edge(arr: Arrangement, v1: Vertex, v2: Vertex,
              curve: XMonotoneCurve) -> Halfedge:
    h1, h2 = arr.new_halfedge_pair()
    h1.source = v1
    h2.source = v2
    h1.curve = curve
    h2.curve = curve
    h1.forward = True
    h2.forward = False
    h1.end = compute_end(h1)
    h2.end = compute_end(h2)
    return h1


def _sorted_unique_along(curve: XMonotoneCurve, pts: list[Point2]):
    mk = _along_key(curve)
    pts = sorted(pts, key=mk)
    out = []
    for p in pts:
        if out and mk(out[-1]) == mk(p):
            continue
        out.append(p)
    return out


# -- cycles and faces ------------------------------------------------------------

def trace_cycles(arr: Arrangement) -> list[list[Halfedge]]:
    seen = set()
    cycles = []
    for h in arr.halfedges:
        if h.id in seen:
            continue
        cyc = []
        cur = h
        while cur.id not in seen:
            seen.add(cur.id)
            cyc.append(cur)
            cur = cur.nxt
        cycles.append(cyc)
    return cycles


def cycle_is_outer(cycle: list[Halfedge]) -> bool:
    """Orientation test at the extended-lex minimal vertex of the cycle."""
    vmin = None
    for h in cycle:
        if vmin is None or vertex_key_cmp(h.source, vmin) < 0:
            vmin = h.source
    # collect cycle's undirected edge-ends at vmin with their roles
    ends = {}
    for h in cycle:
        if h.source is vmin:
            eid = min(h.id, h.twin.id)
            ends.setdefault(eid, [h.end, False, False])[1] = True   # outgoing
        if h.twin.source is vmin:
            eid = min(h.id, h.twin.id)
            ends.setdefault(eid, [h.twin.end, False, False])[2] = True  # incoming
    best = None
    for eid, (end, out_flag, in_flag) in ends.items():
        if best is None or cmp_angular(end, best[0], from_quadrant=6) < 0:
            best = (end, out_flag, in_flag)
    _, out_flag, in_flag = best
    return out_flag and not in_flag


def _cycle_has_border(cycle: list[Halfedge]) -> bool:
    return any(h.is_border() for h in cycle)


def _cycle_top_anchor(cycle: list[Halfedge]):
    """Rational x and the silhouette y for the upward ray shoot."""
    xs = [h.source.point.x for h in cycle]
    xmin = xs[0]
    xmax = xs[0]
    for x in xs[1:]:
        if scalar_cmp(x, xmin) < 0:
            xmin = x
        if scalar_cmp(x, xmax) > 0:
            xmax = x
    if scalar_cmp(xmin, xmax) == 0:
        # purely vertical component: anchor at its top vertex
        top = None
        for h in cycle:
            v = h.source
            if top is None or scalar_cmp(v.point.y, top.point.y) > 0:
                top = v
        return top.point.x, top.point.y
    xstar = rational_between(xmin, xmax)
    best_y = None
    for h in cycle:
        if h.id > h.twin.id:
            continue
        c = h.curve
        if c.is_vertical():
            if scalar_cmp(c.support.x_at(), xstar) == 0 and \
                    (best_y is None or scalar_cmp(c.right.y, best_y) > 0):
                best_y = c.right.y
            continue
        if not _x_in_closed(c, xstar):
            continue
        y = curve_y_at(c, xstar)
        if best_y is None or scalar_cmp(y, best_y) > 0:
            best_y = y
    if best_y is None:
        raise PredicateFailure("silhouette anchor not found")
    return xstar, best_y


def _x_in_closed(c: XMonotoneCurve, x) -> bool:
    if c.left is not None and scalar_cmp(x, c.left.x) < 0:
        return False
    if c.right is not None and scalar_cmp(x, c.right.x) > 0:
        return False
    return True


def first_hit_above(arr: Arrangement, x, y, skip=None):
    """First feature strictly above (x, y) along the vertical ray.

    Returns ("edge", halfedge-facing-down) or ("vertex", v).  The top border
    guarantees a hit.  `skip` is an optional predicate on halfedges.
    """
    best_kind = None
    best = None
    best_y = None

    def consider_edge(h: Halfedge, ey):
        nonlocal best_kind, best, best_y
        if best_y is None or scalar_cmp(ey, best_y) < 0:
            best_kind, best, best_y = "edge", h, ey

    def consider_vertex(v: Vertex, vy):
        nonlocal best_kind, best, best_y
        if best_y is None or scalar_cmp(vy, best_y) < 0:
            best_kind, best, best_y = "vertex", v, vy
        elif scalar_cmp(vy, best_y) == 0 and best_kind == "edge":
            best_kind, best = "vertex", v

    for h in arr.halfedges:
        if not h.alive or h.id > h.twin.id:
            continue
        if skip is not None and skip(h):
            continue
        if h.is_border():
            continue
        c = h.curve
        if c.is_vertical():
            if scalar_cmp(c.support.x_at(), x) != 0:
                continue
            bottom = c.left
            if bottom is None:
                continue
            if scalar_cmp(bottom.y, y) > 0:
                consider_vertex(_vertex_at(h, bottom), bottom.y)
            continue
        if not _x_in_closed(c, x):
            continue
        ey = curve_y_at(c, x)
        if scalar_cmp(ey, y) <= 0:
            continue
        # endpoint exactly above means a vertex hit
        hit_vertex = None
        for v in (h.source, h.twin.source):
            if v.is_finite() and scalar_cmp(v.point.x, x) == 0 and \
                    scalar_cmp(v.point.y, ey) == 0:
                hit_vertex = v
        if hit_vertex is not None:
            consider_vertex(hit_vertex, ey)
        else:
            down = h if not h.forward else h.twin
            consider_edge(down, ey)
    if best_kind is not None:
        return best_kind, best
    # fall back to the top border edge spanning x
    for h in arr.halfedges:
        if not h.alive:
            continue
        if h.border is not None and h.border[0] == TOP and h.border[1] > 0:
            lo = h.source
            hi = h.twin.source
            if _border_x_spans(lo, hi, x):
                # the downward-facing side of the top border is the reversed one
                return "edge", h.twin
    raise PredicateFailure("vertical ray found no feature above")


def _vertex_at(h: Halfedge, p: Point2) -> Vertex:
    for v in (h.source, h.twin.source):
        if v.is_finite() and cmp_xy(v.point, p) == 0:
            return v
    raise PredicateFailure("vertex lookup failed")


def _border_x_spans(lo: Vertex, hi: Vertex, x) -> bool:
    def xk(v):
        if v.is_corner():
            return None
        return v.at_inf[1].primary
    xl, xh = xk(lo), xk(hi)
    if xl is not None and scalar_cmp(x, xl) < 0:
        return False
    if xh is not None and scalar_cmp(x, xh) > 0:
        return False
    return True


def face_below_hit(arr: Arrangement, kind, obj) -> Face:
    if kind == "edge":
        return obj.face
    # vertex: the face in the wedge containing straight-down direction
    v: Vertex = obj
    south = _CARDINAL["S"]
    outs = v.outs
    n = len(outs)
    if n == 0:
        raise PredicateFailure("isolated vertex in wedge lookup")
    # find last end with angular key (from east) <= south, cyclically
    idx = None
    for i, o in enumerate(outs):
        if cmp_angular(o.end, south) <= 0:
            idx = i
    if idx is None:
        idx = n - 1   # south precedes all ends: wedge wraps from last to first
    nxt = outs[(idx + 1) % n]
    return nxt.twin.face


def _build_faces(arr: Arrangement):
    cycles = trace_cycles(arr)
    outer_cycles = []
    hole_cycles = []
    for cyc in cycles:
        if cycle_is_outer(cyc):
            outer_cycles.append(cyc)
        else:
            hole_cycles.append(cyc)

    cyc_index = {}
    for i, cyc in enumerate(cycles):
        for h in cyc:
            cyc_index[h.id] = i

    parent = list(range(len(cycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    outside_cycle_id = None
    for cyc in hole_cycles:
        ci = cyc_index[cyc[0].id]
        if _cycle_has_border(cyc):
            outside_cycle_id = ci
            continue
        x, y = _cycle_top_anchor(cyc)
        in_cycle = {h.id for h in cyc} | {h.twin.id for h in cyc}
        kind, obj = first_hit_above(arr, x, y,
                                    skip=lambda h: h.id in in_cycle)
        if kind == "edge":
            union(ci, cyc_index[obj.id])
        else:
            f_h = _south_wedge_in(obj)
            union(ci, cyc_index[f_h.id])

    face_of_root: dict = {}
    fict = arr.new_face()
    arr.fictitious_face = fict
    if outside_cycle_id is not None:
        face_of_root[find(outside_cycle_id)] = fict
    for cyc in outer_cycles:
        ci = cyc_index[cyc[0].id]
        f = arr.new_face()
        f.outer = cyc[0]
        root = find(ci)
        if root in face_of_root:
            raise PredicateFailure("two outer cycles in one face component")
        face_of_root[root] = f
    for cyc in hole_cycles:
        ci = cyc_index[cyc[0].id]
        root = find(ci)
        f = face_of_root.get(root)
        if f is None:
            raise PredicateFailure("hole cycle with no containing face")
        f.holes.append(cyc[0])
    for cyc in cycles:
        f = face_of_root[find(cyc_index[cyc[0].id])]
        for h in cyc:
            h.face = f


def _south_wedge_in(v: Vertex) -> Halfedge:
    south = _CARDINAL["S"]
    outs = v.outs
    n = len(outs)
    idx = None
    for i, o in enumerate(outs):
        if cmp_angular(o.end, south) <= 0:
            idx = i
    if idx is None:
        idx = n - 1
    return outs[(idx + 1) % n].twin


# -- public construction ---------------------------------------------------------

def sweep_construct(curves: list[XMonotoneCurve],
                    tags: Optional[list] = None) -> Arrangement:
    """Arrangement of the given x-monotone curves via plane sweep."""
    if tags is None:
        tags = list(range(len(curves)))
    items = list(zip(curves, tags))
    result = sweep_pieces(items)
    return assemble(result)


# -- point location ----------------------------------------------------------------

def locate(arr: Arrangement, p: Point2):
    """The feature (Vertex, Halfedge, or Face) containing point p."""
    for h in arr.halfedges:
        if not h.alive or h.id > h.twin.id or h.is_border():
            continue
        c = h.curve
        for v in (h.source, h.twin.source):
            if v.is_finite() and cmp_xy(v.point, p) == 0:
                return v
        if point_on_curve(p, c):
            return h
    kind, obj = first_hit_above(arr, p.x, p.y)
    return face_below_hit(arr, kind, obj)


def _component_count(arr: Arrangement) -> int:
    verts = arr.alive_vertices()
    index = {id(v): i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for h in arr.alive_halfedges():
        a = find(index[id(h.source)])
        b = find(index[id(h.twin.source)])
        if a != b:
            parent[a] = b
    return len({find(i) for i in range(len(verts))})


# -- validation ---------------------------------------------------------------------

def validate(arr: Arrangement, resweep: bool = False):
    """Structural invariants; raises PredicateFailure on violation."""
    for h in arr.alive_halfedges():
        if h.twin.twin is not h:
            raise PredicateFailure("twin involution broken")
        if h.nxt is None or h.prv is None:
            raise PredicateFailure("dangling next/prev")
        if h.nxt.prv is not h or h.prv.nxt is not h:
            raise PredicateFailure("next/prev inconsistency")
        if h.nxt.source is not h.twin.source:
            raise PredicateFailure("next does not continue at target")
        if h.face is None:
            raise PredicateFailure("halfedge without face")
        if h.face is not h.nxt.face:
            raise PredicateFailure("face changes along cycle")
    for v in arr.alive_vertices():
        for h in v.outs:
            if not h.alive:
                raise PredicateFailure("dead halfedge in vertex ring")
            if h.source is not v:
                raise PredicateFailure("outs entry with wrong source")
        if v.is_finite() and not v.outs:
            raise PredicateFailure("isolated vertex present")
    seen_faces = set()
    for f in arr.alive_faces():
        anchors = ([] if f.outer is None else [f.outer]) + list(f.holes)
        for a in anchors:
            for h in cycle_halfedges(a):
                if h.face is not f:
                    raise PredicateFailure("cycle anchored to wrong face")
        seen_faces.add(f.id)
    v, e, fcount = arr.full_counts()
    c = _component_count(arr)
    if v - e + fcount != 1 + c:
        raise PredicateFailure(
            f"Euler formula violated: V={v} E={e} F={fcount} C={c}")
    if resweep:
        curves = [h.curve for h in arr.real_edges()]
        result = sweep_pieces([(c, i) for i, c in enumerate(curves)])
        want = sorted((v2.point for v2 in arr.real_vertices()),
                      key=_PtKey)
        got = result.vertices
        if len(want) != len(got) or any(
                cmp_xy(a, b) != 0 for a, b in zip(want, got)):
            raise PredicateFailure("resweep found different vertex set")
    return True
