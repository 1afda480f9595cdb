"""Randomized divide-and-conquer construction of labeled Voronoi diagrams.

A traits object turns a site family into bisector curves and distance
predicates; the recursion splits the sites, builds the two sub-diagrams, and
merges them in three stages: sweep overlay, per-face refinement by inserting
the representative pair's bisector, and removal of redundant features.

The merge honors two optimizations from the construction's instrumentation
story: the three-bisector annotation (a vertex created on a bisector records
the sites known equidistant there, short-circuiting later on-curve tests)
and the simplified traversal for bounded convex faces.  Both change only the
exact-evaluation counters, never the output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from gmpy2 import mpq

from envvor.curves import XMonotoneCurve, interior_point
from envvor.kernel import Point2, PredicateFailure
from envvor.numeric import COUNTERS, scalar_cmp

from envvor.arrangement.dcel import (
    Arrangement,
    Face,
    Halfedge,
    Vertex,
    locate,
    sweep_construct,
)
from envvor.arrangement.overlay import OverlayStats, overlay
from envvor.arrangement.zone import (
    FallbackRequired,
    InsertRecord,
    ZoneOpts,
    insert_piece_into_face,
    merge_at_vertex,
    point_in_face,
    remove_border_vertex,
    remove_edge,
    simplified_convex_zone,
)


class EmptyInput(ValueError):
    pass


class VoronoiTraits:
    """Interface a diagram family implements for the framework.

    Methods mirror the bisector/proximity functor set: bisector
    construction, distance comparison at a point, side dominance along a
    bisector piece, dominance without a bisector, and interior point
    construction on a curve.
    """

    def construct_bisector(self, s1, s2) -> list[XMonotoneCurve]:
        raise NotImplementedError

    def compare_distance_at_point(self, s1, s2, p: Point2) -> int:
        raise NotImplementedError

    def compare_distance_above(self, s1, s2, curve: XMonotoneCurve) -> int:
        raise NotImplementedError

    def compare_dominance(self, s1, s2) -> int:
        raise NotImplementedError

    def construct_point_on_curve(self, curve: XMonotoneCurve) -> Point2:
        return interior_point(curve)

    def sort_key(self, site) -> tuple:
        """Lexicographic key of the site's primary point (for partitions)."""
        raise NotImplementedError


class ReversedTraits(VoronoiTraits):
    """Order-reversal wrapper: turns nearest- into farthest-site semantics."""

    def __init__(self, base: VoronoiTraits):
        self.base = base

    def construct_bisector(self, s1, s2):
        return self.base.construct_bisector(s1, s2)

    def compare_distance_at_point(self, s1, s2, p):
        return -self.base.compare_distance_at_point(s1, s2, p)

    def compare_distance_above(self, s1, s2, curve):
        return -self.base.compare_distance_above(s1, s2, curve)

    def compare_dominance(self, s1, s2):
        return -self.base.compare_dominance(s1, s2)

    def construct_point_on_curve(self, curve):
        return self.base.construct_point_on_curve(curve)

    def sort_key(self, site):
        return self.base.sort_key(site)


@dataclass
class MergeOptions:
    three_bisector: bool = True
    simple_zone: bool = True


@dataclass
class Instrumentation:
    merge_stats: list = field(default_factory=list)

    @property
    def overlay_crossings_total(self) -> int:
        return sum(s.crossings for s in self.merge_stats)

    @property
    def final_merge_stats(self) -> Optional[OverlayStats]:
        return self.merge_stats[-1] if self.merge_stats else None


class LabeledDiagram:
    """An arrangement whose every real feature carries the set of sites
    attaining the minimum (or maximum, in farthest mode) over it."""

    def __init__(self, arr: Arrangement, n_sites: int):
        self.arr = arr
        self.n_sites = n_sites

    def counts(self):
        return self.arr.counts()

    def locate_label(self, p: Point2) -> frozenset:
        feat = locate(self.arr, p)
        if isinstance(feat, Face):
            return feat.label
        if isinstance(feat, Halfedge):
            return feat.label
        return feat.label

    def canonical_form(self):
        return canonical_form(self.arr)

    def to_json(self):
        return diagram_to_json(self.arr)


# -- partition strategies ---------------------------------------------------------

RANDOMIZED, LEX_SORTED, SPATIAL_SORTED = "randomized", "lex", "spatial"


def _hilbert_d(x: int, y: int, order: int = 16) -> int:
    rx = ry = 0
    d = 0
    s = 1 << (order - 1)
    while s > 0:
        rx = 1 if (x & s) > 0 else 0
        ry = 1 if (y & s) > 0 else 0
        d += s * s * ((3 * rx) ^ ry)
        if ry == 0:
            if rx == 1:
                x = s - 1 - x
                y = s - 1 - y
            x, y = y, x
        s //= 2
    return d


def partition(indices: Sequence[int], strategy: str, rng: random.Random,
              keys: Sequence[tuple]) -> tuple[list[int], list[int]]:
    """Split site indices into two nonempty halves.

    keys[i] is the site's lexicographic sort key (floats are derived from it
    for the spatial order).
    """
    n = len(indices)
    if n < 2:
        raise ValueError("partition needs at least two sites")
    if strategy == RANDOMIZED:
        while True:
            flags = [rng.random() < 0.5 for _ in indices]
            if any(flags) and not all(flags):
                break
        s1 = [i for i, f in zip(indices, flags) if f]
        s2 = [i for i, f in zip(indices, flags) if not f]
        return s1, s2
    if strategy == LEX_SORTED:
        order = sorted(indices, key=lambda i: keys[i])
        half = (n + 1) // 2
        return order[:half], order[half:]
    if strategy == SPATIAL_SORTED:
        pts = []
        for i in indices:
            fx = float(mpq(keys[i][0]))
            fy = float(mpq(keys[i][1]))
            pts.append((fx, fy, i))
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        dx = (x1 - x0) or 1.0
        dy = (y1 - y0) or 1.0
        scale = (1 << 16) - 1

        def hkey(p):
            qx = int((p[0] - x0) / dx * scale)
            qy = int((p[1] - y0) / dy * scale)
            return (_hilbert_d(qx, qy), keys[p[2]])
        order = [p[2] for p in sorted(pts, key=hkey)]
        half = (n + 1) // 2
        return order[:half], order[half:]
    raise ValueError(f"unknown strategy {strategy!r}")


# -- merge --------------------------------------------------------------------------


def _single_site_diagram(i: int) -> Arrangement:
    arr = sweep_construct([])
    for f in arr.real_faces():
        f.label = frozenset([i])
    return arr


def _scratch_vertex_label(traits, sites, cand: frozenset, p: Point2) -> frozenset:
    """No-optimization label recomputation: pairwise distance comparisons
    over all incident sites (exact fallbacks at every tie)."""
    order = sorted(cand)
    best = [order[0]]
    for s in order[1:]:
        c = traits.compare_distance_at_point(sites[best[0]], sites[s], p)
        if c > 0:
            best = [s]
        elif c == 0:
            best.append(s)
    return frozenset(best)


def _face_sample_point(arr: Arrangement, face: Face,
                       skip_edges: set) -> Point2:
    """A point usable to classify the face's interior: a boundary-edge
    interior point, falling back to a perpendicular inward offset."""
    for h in face.boundary_halfedges():
        if h.is_border() or min(h.id, h.twin.id) in skip_edges:
            continue
        return interior_point(h.curve)
    raise PredicateFailure("face has no usable boundary edge")


def _face_interior_point(arr: Arrangement, face: Face) -> Point2:
    """A point strictly inside the face (inward offset with verification)."""
    for h in face.boundary_halfedges():
        if h.is_border():
            continue
        p = interior_point(h.curve)
        # offset to the left of h's travel direction, shrinking until inside
        e = h.end if h.source.is_finite() else None
        d = _travel_direction(h)
        nx, ny = -d[1], d[0]
        eps = mpq(1)
        for _ in range(64):
            q = Point2(p.x + nx * eps, p.y + ny * eps)
            if point_in_face(arr, face, q):
                return q
            eps /= 4
    raise PredicateFailure("no interior point found")


def _travel_direction(h: Halfedge):
    from envvor.arrangement.dcel import compute_end
    e = compute_end(h)
    return (e.dx, e.dy)


class _Merger:
    def __init__(self, traits: VoronoiTraits, sites, opts: MergeOptions,
                 instr: Optional[Instrumentation]):
        self.traits = traits
        self.sites = sites
        self.opts = opts
        self.instr = instr
        self._bisector_cache: dict = {}

    def bisector(self, i: int, j: int):
        key = (i, j) if i < j else (j, i)
        got = self._bisector_cache.get(key)
        if got is None:
            got = self.traits.construct_bisector(self.sites[key[0]],
                                                 self.sites[key[1]])
            self._bisector_cache[key] = got
        return got

    def merge(self, d1: Arrangement, d2: Arrangement) -> Arrangement:
        out, stats = overlay(d1, d2, merge_payload=lambda fa, fb: (fa, fb))
        if self.instr is not None:
            self.instr.merge_stats.append(stats)
        self._label_overlay_vertices(out)
        for face in list(out.real_faces()):
            if not face.alive:
                continue
            self._process_face(out, face)
        self._label_leftover_edges(out)
        self._remove_redundant(out)
        out.compact()
        return out

    # stage 2a: minimization label over every original overlay vertex
    def _label_overlay_vertices(self, out: Arrangement):
        for v in out.real_vertices():
            fa, fb = v.data
            la, lb = fa.label, fb.label
            rep_a, rep_b = min(la), min(lb)
            c = self.traits.compare_distance_at_point(
                self.sites[rep_a], self.sites[rep_b], v.point)
            v.label = la if c < 0 else (lb if c > 0 else la | lb)

    # stage 2b: refine one overlay face with its representative bisector
    def _process_face(self, out: Arrangement, face: Face):
        fa, fb = face.data
        la, lb = fa.label, fb.label
        i, j = min(la), min(lb)
        pieces = self.bisector(i, j)
        if not pieces:
            dom = self.traits.compare_dominance(self.sites[i], self.sites[j])
            face.label = la if dom < 0 else (lb if dom > 0 else la | lb)
            return

        def known_fn(v: Vertex) -> bool:
            return v.label is not None and i in v.label and j in v.label

        # the equidistance annotation pins a vertex to the bisector locus,
        # which identifies the inserted curve only when the bisector is a
        # single piece (the affine families the optimization targets)
        use_known = self.opts.three_bisector and len(pieces) == 1
        zopts = ZoneOpts(three_bisector=self.opts.three_bisector,
                         simple_zone=False,
                         known_on_curve=known_fn if use_known else None)
        record = InsertRecord()
        cands = [face]
        edge_piece: dict = {}
        for piece in pieces:
            rec_piece = InsertRecord()
            done = False
            if self.opts.simple_zone and len(pieces) == 1:
                try:
                    rec_piece = simplified_convex_zone(out, piece, face,
                                                       opts=zopts)
                    for _, nf in rec_piece.face_splits:
                        cands.append(nf)
                    done = True
                except FallbackRequired:
                    done = False
            if not done:
                rec_piece = InsertRecord()
                insert_piece_into_face(out, face, piece, zopts,
                                       record=rec_piece, cands=cands)
            for h in rec_piece.new_edges:
                edge_piece[h.id] = piece
            self._absorb(record, rec_piece)
        self._apply_labels(out, face, record, cands, la, lb, i, j, pieces,
                           edge_piece)

    def _absorb(self, record: InsertRecord, rec2: InsertRecord):
        record.new_vertices.extend(rec2.new_vertices)
        record.new_edges.extend(rec2.new_edges)
        record.face_splits.extend(rec2.face_splits)
        record.overlaps.extend(rec2.overlaps)

    def _apply_labels(self, out, face, record, cands, la, lb, i, j, pieces,
                      edge_piece):
        union = la | lb
        scratch = not self.opts.three_bisector
        # vertices created on the bisector
        for w, on_h in record.new_vertices:
            if not w.is_finite():
                continue
            base = union
            if on_h is not None and on_h.data is not None:
                ea_feat, eb_feat = on_h.data
                base = ea_feat.label | eb_feat.label | union
            if scratch:
                w.label = _scratch_vertex_label(self.traits, self.sites,
                                                base, w.point)
            else:
                w.label = base
        # existing vertices found on the bisector: extend (or recompute)
        seen_edges = {min(h.id, h.twin.id) for h in record.new_edges}
        for h in record.new_edges:
            for v in (h.source, h.twin.source):
                if v.is_finite() and v.label is not None and \
                        not (i in v.label and j in v.label):
                    if scratch:
                        v.label = _scratch_vertex_label(
                            self.traits, self.sites, v.label | union, v.point)
                    else:
                        v.label = v.label | union
        # inserted bisector edges
        for h in record.new_edges:
            if scratch:
                p = interior_point(h.curve)
                c = self.traits.compare_distance_at_point(
                    self.sites[i], self.sites[j], p)
                lab = la if c < 0 else (lb if c > 0 else union)
            else:
                lab = union
            h.label = lab
            h.twin.label = lab
        # overlapped existing edges: the bisector runs along them
        for h in record.overlaps:
            ea_feat, eb_feat = h.data
            lab = ea_feat.label | eb_feat.label
            h.label = lab
            h.twin.label = lab
        # subface labels
        sides: dict = {}
        for piece in pieces:
            sides[id(piece)] = self.traits.compare_distance_above(
                self.sites[i], self.sites[j], piece)
        labeled = set()
        for h in record.new_edges:
            piece = edge_piece.get(h.id)
            if piece is None:
                raise PredicateFailure("inserted edge with unknown piece")
            piece_side = sides[id(piece)]
            above = la if piece_side < 0 else (lb if piece_side > 0 else union)
            below = lb if piece_side < 0 else (la if piece_side > 0 else union)
            hf = h if h.forward else h.twin
            if hf.face.alive and hf.face.id not in labeled:
                hf.face.label = above
                labeled.add(hf.face.id)
            tf = hf.twin.face
            if tf.alive and tf.id not in labeled:
                tf.label = below
                labeled.add(tf.id)
        for f in cands:
            if not f.alive or f.id in labeled:
                continue
            skip = {min(h.id, h.twin.id) for h in record.overlaps}
            p = _face_sample_point(out, f, skip)
            c = self.traits.compare_distance_at_point(
                self.sites[i], self.sites[j], p)
            if c == 0:
                p = _face_interior_point(out, f)
                c = self.traits.compare_distance_at_point(
                    self.sites[i], self.sites[j], p)
            f.label = la if c < 0 else (lb if c > 0 else union)

    # stage 2c: leftover overlay edges, now split at all bisector crossings
    def _label_leftover_edges(self, out: Arrangement):
        for h in out.real_edges():
            if h.label is not None:
                continue
            fa_feat, fb_feat = h.data
            la, lb = fa_feat.label, fb_feat.label
            p = interior_point(h.curve)
            c = self.traits.compare_distance_at_point(
                self.sites[min(la)], self.sites[min(lb)], p)
            lab = la if c < 0 else (lb if c > 0 else la | lb)
            h.label = lab
            h.twin.label = lab

    # stage 3: removal of redundant features
    def _remove_redundant(self, out: Arrangement):
        changed = True
        while changed:
            changed = False
            for h in out.real_edges():
                if not h.alive:
                    continue
                if h.label == h.face.label == h.twin.face.label:
                    remove_edge(out, h)
                    changed = True
        for v in list(out.real_vertices()):
            if not v.alive or len(v.outs) != 2:
                continue
            e1, e2 = v.outs[0], v.outs[1]
            if e1.is_border() or e2.is_border():
                continue
            from envvor.curves import are_mergeable
            if e1.label == e2.label == v.label and \
                    are_mergeable(e1.curve, e2.curve):
                merge_at_vertex(out, v)
        for v in list(out.vertices):
            if v.alive and not v.is_finite() and not v.is_corner():
                if all(h.is_border() for h in v.outs):
                    remove_border_vertex(out, v)


def _merge_labels(d1: Arrangement, d2: Arrangement, traits, sites, opts,
                  instr) -> Arrangement:
    return _Merger(traits, sites, opts, instr).merge(d1, d2)


def merge(d1: LabeledDiagram, d2: LabeledDiagram, traits: VoronoiTraits,
          sites=None, opts: Optional[MergeOptions] = None,
          instr: Optional[Instrumentation] = None) -> LabeledDiagram:
    """Merge two labeled diagrams over disjoint site-index sets."""
    if sites is None:
        raise ValueError("merge requires the site list")
    opts = opts or MergeOptions()
    arr = _merge_labels(d1.arr, d2.arr, traits, sites, opts, instr)
    return LabeledDiagram(arr, max(d1.n_sites, d2.n_sites))


def voronoi(sites: Sequence, traits: VoronoiTraits,
            strategy: str = RANDOMIZED, seed: int = 0,
            opts: Optional[MergeOptions] = None,
            instr: Optional[Instrumentation] = None) -> LabeledDiagram:
    """Nearest-site Voronoi diagram of the sites as a labeled arrangement."""
    if not sites:
        raise EmptyInput("no sites")
    opts = opts or MergeOptions()
    rng = random.Random(seed)
    keys = [traits.sort_key(s) for s in sites]
    merger = _Merger(traits, sites, opts, instr)

    def build(indices: list[int]) -> Arrangement:
        if len(indices) == 1:
            return _single_site_diagram(indices[0])
        s1, s2 = partition(indices, strategy, rng, keys)
        a1 = build(s1)
        a2 = build(s2)
        return merger.merge(a1, a2)

    arr = build(list(range(len(sites))))
    return LabeledDiagram(arr, len(sites))


def farthest_voronoi(sites: Sequence, traits: VoronoiTraits,
                     strategy: str = RANDOMIZED, seed: int = 0,
                     opts: Optional[MergeOptions] = None,
                     instr: Optional[Instrumentation] = None) -> LabeledDiagram:
    """Farthest-site diagram: the same pipeline with reversed comparisons."""
    return voronoi(sites, ReversedTraits(traits), strategy, seed, opts, instr)


def overlay_stats(d1: LabeledDiagram, d2: LabeledDiagram) -> OverlayStats:
    """Overlay feature counts without merging."""
    _, stats = overlay(d1.arr, d2.arr)
    return stats


# -- serialization --------------------------------------------------------------------

def _end_key(curve: XMonotoneCurve, which: str):
    end = curve.left if which == "left" else curve.right
    if end is not None:
        from envvor.numeric import scalar_to_json
        return ("pt", str(scalar_to_json(end.x)), str(scalar_to_json(end.y)))
    k = curve.end_key(which)
    from envvor.numeric import rational_str
    return ("inf", k.side, rational_str(k.primary), rational_str(k.secondary))


def _edge_key(h: Halfedge):
    lab = tuple(sorted(h.label)) if h.label else ()
    return (h.curve.descriptor(), _end_key(h.curve, "left"),
            _end_key(h.curve, "right"), lab)


def canonical_form(arr: Arrangement):
    """Order-independent serialization of the labeled subdivision."""
    from envvor.numeric import scalar_to_json
    verts = sorted(
        ((str(scalar_to_json(v.point.x)), str(scalar_to_json(v.point.y)),
          tuple(sorted(v.label)) if v.label else ())
         for v in arr.real_vertices()))
    edges = sorted(_edge_key(h) for h in arr.real_edges())
    faces = []
    for f in arr.real_faces():
        ekeys = sorted(_edge_key(h) for h in f.boundary_halfedges()
                       if not h.is_border())
        faces.append((tuple(ekeys),
                      tuple(sorted(f.label)) if f.label else ()))
    faces.sort()
    return {"vertices": tuple(verts), "edges": tuple(edges),
            "faces": tuple(faces)}


def diagram_to_json(arr: Arrangement):
    """Arrangement dump with ids by creation order plus label arrays."""
    from envvor.numeric import scalar_to_json
    vjson = []
    vindex = {}
    for v in arr.alive_vertices():
        vindex[v.id] = len(vjson)
        entry = {"id": len(vjson)}
        if v.is_finite():
            entry["x"] = scalar_to_json(v.point.x)
            entry["y"] = scalar_to_json(v.point.y)
        else:
            kind, info = v.at_inf
            entry["at_infinity"] = (info if kind == "corner"
                                    else {"side": info.side})
        if v.label is not None:
            entry["label"] = sorted(v.label)
        vjson.append(entry)
    hjson = []
    hindex = {}
    for h in arr.alive_halfedges():
        hindex[h.id] = len(hjson)
        hjson.append(h)
    hout = []
    for h in arr.alive_halfedges():
        entry = {
            "id": hindex[h.id],
            "twin": hindex[h.twin.id],
            "next": hindex[h.nxt.id],
            "source": vindex[h.source.id],
            "fictitious": h.is_border(),
        }
        if h.curve is not None:
            entry["curve"] = h.curve.descriptor()
        if h.label is not None:
            entry["label"] = sorted(h.label)
        hout.append(entry)
    fjson = []
    for f in arr.alive_faces():
        entry = {"id": len(fjson), "fictitious": f.is_fictitious()}
        if f.outer is not None:
            entry["outer"] = hindex[f.outer.id]
        entry["holes"] = [hindex[a.id] for a in f.holes]
        if f.label is not None:
            entry["label"] = sorted(f.label)
        fjson.append(entry)
    return {"vertices": vjson, "halfedges": hout, "faces": fjson}
