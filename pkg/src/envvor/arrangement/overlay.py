"""Sweep-based overlay of two arrangements with payload propagation.

Every feature of the result knows its originating feature in each input
(vertex, edge, or face), covering all ten feature-pair cases.  Face origins
are derived without geometric sampling: faces touching the fictitious border
are seeded by merging the border orderings of the inputs, and the rest are
reached by crossing real edges whose input halfedges know their two sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from envvor.curves import BOTTOM, LEFT, RIGHT, TOP, cmp_xy
from envvor.kernel import PredicateFailure

from envvor.arrangement.dcel import (
    BL, BR, TL, TR,
    Arrangement,
    Face,
    Halfedge,
    Vertex,
    assemble,
)
from envvor.arrangement.sweep import sweep_pieces


@dataclass
class OverlayStats:
    vertices: int = 0
    edges: int = 0
    faces: int = 0
    crossings: int = 0          # proper edge-edge interior crossings
    a_only_vertices: int = 0
    b_only_vertices: int = 0
    vertex_on_edge: int = 0
    coincident_vertices: int = 0


def _corner_face(arr: Arrangement, name: str) -> Face:
    v = arr.corners[name]
    want = {"BL": "E", "BR": "N", "TR": "W", "TL": "S"}[name]
    dirs = {(1, 0): "E", (0, 1): "N", (-1, 0): "W", (0, -1): "S"}
    for h in v.outs:
        dx = 1 if h.end.dx > 0 else (-1 if h.end.dx < 0 else 0)
        dy = 1 if h.end.dy > 0 else (-1 if h.end.dy < 0 else 0)
        if dirs[(dx, dy)] == want:
            return h.face
    raise PredicateFailure("corner ring incomplete")


def _border_curve_faces(v: Vertex):
    """(before, after) input faces around a hosted curve end, in the walk
    direction of its border side (bottom-to-top for LEFT/RIGHT, west-to-east
    for BOTTOM/TOP)."""
    side = v.at_inf[0]
    hc = None
    for h in v.outs:
        if not h.is_border():
            hc = h
            break
    if hc is None:
        raise PredicateFailure("border vertex without curve end")
    if side == LEFT:
        return hc.twin.face, hc.face        # below the curve, above it
    if side == RIGHT:
        return hc.face, hc.twin.face
    if side == BOTTOM:
        return hc.face, hc.twin.face        # west of the vertical, east of it
    return hc.twin.face, hc.face


def _side_walk(arr: Arrangement, side: str):
    """Faces between consecutive border vertices along one side, plus the
    crossing vertices; starts at the side's first corner region."""
    start_corner = {BOTTOM: BL, LEFT: BL, RIGHT: BR, TOP: TL}[side]
    faces = [_corner_face(arr, start_corner)]
    verts = [v for _, v in arr.border_lists[side]]
    for v in verts:
        _, after = _border_curve_faces(v)
        faces.append(after)
    return verts, faces


def _match_key(key):
    return (key.side, key.primary, key.secondary)


def overlay(arr_a: Arrangement, arr_b: Arrangement,
            merge_payload: Optional[Callable] = None):
    """Superimpose two arrangements; returns (result, OverlayStats)."""
    if merge_payload is None:
        merge_payload = lambda fa, fb: (fa, fb)
    items = []
    for h in arr_a.real_edges():
        items.append((h.curve, ("A", h)))
    for h in arr_b.real_edges():
        items.append((h.curve, ("B", h)))
    result = sweep_pieces(items)
    out = assemble(result)

    # --- vertex origins -------------------------------------------------------
    vertex_origin: dict = {}
    for v in out.real_vertices():
        found = {"A": None, "B": None}
        for h in v.outs:
            if h.is_border() or not h.tags:
                continue
            for side_name, ih in h.tags:
                cur = found[side_name]
                if cur is not None and cur[0] == "vertex":
                    continue
                iv = _input_vertex_at(ih, v)
                if iv is not None:
                    found[side_name] = ("vertex", iv)
                elif cur is None:
                    found[side_name] = ("edge", ih)
        vertex_origin[v.id] = found

    # --- face origins ---------------------------------------------------------
    face_a: dict = {}
    face_b: dict = {}
    fict = out.fictitious_face
    face_a[fict.id] = arr_a.fictitious_face
    face_b[fict.id] = arr_b.fictitious_face

    for side in (BOTTOM, LEFT, RIGHT, TOP):
        o_verts, _ = _side_walk(out, side)
        a_verts, a_faces = _side_walk(arr_a, side)
        b_verts, b_faces = _side_walk(arr_b, side)
        a_keys = [_match_key(v.at_inf[1]) for v in a_verts]
        b_keys = [_match_key(v.at_inf[1]) for v in b_verts]
        ai = bi = 0
        start = {BOTTOM: BL, LEFT: BL, RIGHT: BR, TOP: TL}[side]
        cur_face = _corner_face(out, start)
        _assign_face(face_a, face_b, cur_face, a_faces[ai], b_faces[bi])
        for ov in o_verts:
            key = _match_key(ov.at_inf[1])
            if ai < len(a_keys) and a_keys[ai] == key:
                ai += 1
            if bi < len(b_keys) and b_keys[bi] == key:
                bi += 1
            _, region = _border_curve_faces(ov)
            _assign_face(face_a, face_b, region, a_faces[ai], b_faces[bi])

    # BFS across real edges
    queue = [f for f in out.real_faces() if f.id in face_a]
    seen = set(f.id for f in queue)
    while queue:
        f = queue.pop()
        fa, fb = face_a[f.id], face_b[f.id]
        for h in f.boundary_halfedges():
            if h.is_border():
                continue
            g = h.twin.face
            if g.id in face_a or g.is_fictitious():
                continue
            ga, gb = fa, fb
            a_tag = _tag_of(h, "A")
            b_tag = _tag_of(h, "B")
            if a_tag is not None:
                ga = _other_side_face(h, a_tag)
            if b_tag is not None:
                gb = _other_side_face(h, b_tag)
            face_a[g.id] = ga
            face_b[g.id] = gb
            if g.id not in seen:
                seen.add(g.id)
                queue.append(g)
    for f in out.real_faces():
        if f.id not in face_a:
            raise PredicateFailure("overlay face missed by propagation")

    # --- payloads ----------------------------------------------------------------
    for f in out.real_faces():
        f.data = merge_payload(face_a[f.id], face_b[f.id])
    stats = OverlayStats()
    stats.faces = len(out.real_faces())
    stats.edges = len(out.real_edges())
    stats.vertices = len(out.real_vertices())
    for h in out.real_edges():
        a_tag = _tag_of(h, "A")
        b_tag = _tag_of(h, "B")
        fa = a_tag if a_tag is not None else face_a[h.face.id]
        fb = b_tag if b_tag is not None else face_b[h.face.id]
        payload = merge_payload(fa, fb)
        h.data = payload
        h.twin.data = payload
    for v in out.real_vertices():
        found = vertex_origin[v.id]
        fa = found["A"]
        fb = found["B"]
        fa_obj = fa[1] if fa is not None else face_a[v.outs[0].face.id]
        fb_obj = fb[1] if fb is not None else face_b[v.outs[0].face.id]
        v.data = merge_payload(fa_obj, fb_obj)
        a_kind = fa[0] if fa is not None else "face"
        b_kind = fb[0] if fb is not None else "face"
        if a_kind == "edge" and b_kind == "edge":
            stats.crossings += 1
        elif a_kind == "vertex" and b_kind == "vertex":
            stats.coincident_vertices += 1
        elif a_kind == "vertex" and b_kind == "face":
            stats.a_only_vertices += 1
        elif b_kind == "vertex" and a_kind == "face":
            stats.b_only_vertices += 1
        else:
            stats.vertex_on_edge += 1
    return out, stats


def _assign_face(face_a, face_b, f: Face, fa, fb):
    if f.is_fictitious():
        return
    prev_a = face_a.get(f.id)
    if prev_a is not None and prev_a is not fa:
        raise PredicateFailure("inconsistent border seeding")
    face_a[f.id] = fa
    face_b[f.id] = fb


def _tag_of(h: Halfedge, side_name: str):
    if not h.tags:
        return None
    for name, ih in h.tags:
        if name == side_name:
            return ih
    return None


def _input_vertex_at(ih: Halfedge, v: Vertex):
    """The input vertex coinciding with v, if v sits at an end of ih."""
    for iv in (ih.source, ih.twin.source):
        if iv.is_finite() and cmp_xy(iv.point, v.point) == 0:
            return iv
    return None


def _other_side_face(h: Halfedge, ih: Halfedge) -> Face:
    """Input face on the far side of output halfedge h's edge.

    The forward halfedge of either structure travels left-to-right along the
    shared support, so "geometrically above" is the face of the forward one.
    h.face is the near side; we return the input face opposite it.
    """
    above = ih.face if ih.forward else ih.twin.face
    below = ih.twin.face if ih.forward else ih.face
    return below if h.forward else above
