"""Planar subdivisions as doubly connected edge lists.

One implementation serves both subdivisions the index needs: the curved
arrangement of the input pieces and the straight-edge polygonal overlay.
Half-edges are paired as ``h ^ 1``; a half-edge's incident face lies to its
left.  Curved edges carry a (piece, parameter range) reference; straight
edges carry None.

Construction is incremental-insertion style: all pairwise intersections are
computed up front, elements are split at the merged vertices, and the DCEL
is stitched by sorting outgoing directions around each vertex (tangent
angle with a curvature tie-break, so tangential contacts order correctly).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry_core import (
    BoundingBox,
    GeometryError,
    MonotonePiece,
    Point,
    element_intersections,
    piece_green_integral,
    piece_segment_hits,
    piece_signed_curvature,
    pieces_overlap,
)


class ArrangementError(Exception):
    pass


class DegenerateOverlap(ArrangementError):
    """Two input pieces coincide along a positive-length stretch."""


class CurvedCell(ArrangementError):
    """Triangulation was asked to split a cell with a curved boundary edge."""


class OnBoundary(ArrangementError):
    """Query point lies within epsilon of a subdivision edge."""


class TriangulationError(ArrangementError):
    pass


@dataclass(frozen=True)
class FaceLabel:
    """Face identity plus the per-curve side classification of its points."""
    face_id: int
    sign_vector: tuple[int, ...]
    representative: Point


class PlanarSubdivision:
    """Index-based DCEL.  twin(h) == h ^ 1."""

    def __init__(self, eps: float):
        self.eps = eps
        self.vx: list[float] = []
        self.vy: list[float] = []
        self.v_out: list[list[int]] = []
        self.he_origin: list[int] = []
        self.he_next: list[int] = []
        self.he_prev: list[int] = []
        self.he_face: list[int] = []
        # geometry per half-edge: None = straight, else (piece, t_origin, t_dest)
        self.he_geom: list[tuple[MonotonePiece, float, float] | None] = []
        self.face_outer: list[int] = []      # -1 for the unbounded face
        self.face_inner: list[list[int]] = []
        self.unbounded_face: int = -1
        self._face_grid: dict | None = None

    # -- basic accessors ---------------------------------------------------

    def num_vertices(self) -> int:
        return len(self.vx)

    def num_edges(self) -> int:
        return len(self.he_origin) // 2

    def num_faces(self) -> int:
        return len(self.face_outer)

    def twin(self, h: int) -> int:
        return h ^ 1

    def dest(self, h: int) -> int:
        return self.he_origin[h ^ 1]

    def vertex_point(self, v: int) -> Point:
        return Point(self.vx[v], self.vy[v])

    def he_points(self, h: int) -> tuple[Point, Point]:
        return (self.vertex_point(self.he_origin[h]),
                self.vertex_point(self.dest(h)))

    def face_cycle(self, h0: int) -> list[int]:
        cycle = [h0]
        h = self.he_next[h0]
        guard = len(self.he_origin) + 1
        while h != h0:
            cycle.append(h)
            h = self.he_next[h]
            if len(cycle) > guard:
                raise ArrangementError("next-cycle does not close")
        return cycle

    def face_boundary_edges(self, fid: int) -> list[int]:
        out = []
        if self.face_outer[fid] >= 0:
            out.extend(self.face_cycle(self.face_outer[fid]))
        for h in self.face_inner[fid]:
            out.extend(self.face_cycle(h))
        return out

    def face_complexity(self, fid: int) -> int:
        return len(self.face_boundary_edges(fid))

    def edge_is_straight(self, h: int) -> bool:
        return self.he_geom[h] is None

    def he_direction(self, h: int) -> tuple[float, float]:
        """Unit direction leaving the origin, tangent for curved edges."""
        g = self.he_geom[h]
        if g is None:
            p, q = self.he_points(h)
            d = math.hypot(q.x - p.x, q.y - p.y)
            return (q.x - p.x) / d, (q.y - p.y) / d
        piece, ta, tb = g
        tx, ty = piece.tangent_at(ta)
        if tb < ta:
            tx, ty = -tx, -ty
        return tx, ty

    def he_curvature(self, h: int) -> float:
        g = self.he_geom[h]
        if g is None:
            return 0.0
        piece, ta, tb = g
        return piece_signed_curvature(piece, ta, 1 if tb >= ta else -1)

    def he_green(self, h: int) -> float:
        g = self.he_geom[h]
        if g is None:
            p, q = self.he_points(h)
            return p.x * q.y - q.x * p.y
        piece, ta, tb = g
        return piece_green_integral(piece, ta, tb)

    def cycle_area(self, cycle: list[int]) -> float:
        return 0.5 * sum(self.he_green(h) for h in cycle)

    def he_midpoint(self, h: int) -> Point:
        g = self.he_geom[h]
        if g is None:
            p, q = self.he_points(h)
            return Point(0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
        piece, ta, tb = g
        return piece.point_at(0.5 * (ta + tb))

    def bbox(self) -> BoundingBox:
        return BoundingBox(min(self.vx), min(self.vy), max(self.vx), max(self.vy))

    # -- vertex / edge primitives ------------------------------------------

    def add_vertex(self, x: float, y: float) -> int:
        self.vx.append(x)
        self.vy.append(y)
        self.v_out.append([])
        return len(self.vx) - 1

    def _he_sort_key(self, h: int) -> tuple[float, float]:
        dx, dy = self.he_direction(h)
        return (math.atan2(dy, dx), self.he_curvature(h))

    def add_edge_pair(self, va: int, vb: int,
                      geom: tuple[MonotonePiece, float, float] | None) -> int:
        h = len(self.he_origin)
        self.he_origin.extend([va, vb])
        self.he_next.extend([-1, -1])
        self.he_prev.extend([-1, -1])
        self.he_face.extend([-1, -1])
        if geom is None:
            self.he_geom.extend([None, None])
        else:
            piece, ta, tb = geom
            self.he_geom.extend([(piece, ta, tb), (piece, tb, ta)])
        self.v_out[va].append(h)
        self.v_out[vb].append(h + 1)
        return h

    def stitch(self):
        """Compute next/prev from rotations around each vertex."""
        for v, outs in enumerate(self.v_out):
            outs.sort(key=self._he_sort_key)
            deg = len(outs)
            for i, h in enumerate(outs):
                # next of the half-edge arriving along twin(h):
                # rotate clockwise from h
                arriving = h ^ 1
                nxt = outs[(i - 1) % deg]
                self.he_next[arriving] = nxt
                self.he_prev[nxt] = arriving

    def extract_faces(self):
        """Walk next-cycles, classify by signed area, assign holes."""
        n_he = len(self.he_origin)
        cycle_of = [-1] * n_he
        cycles: list[list[int]] = []
        for h in range(n_he):
            if cycle_of[h] >= 0:
                continue
            cyc = self.face_cycle(h)
            for e in cyc:
                cycle_of[e] = len(cycles)
            cycles.append(cyc)
        areas = [self.cycle_area(c) for c in cycles]
        self.face_outer = []
        self.face_inner = []
        face_of_cycle = [-1] * len(cycles)
        for ci, (cyc, area) in enumerate(zip(cycles, areas)):
            if area > 0.0:
                face_of_cycle[ci] = len(self.face_outer)
                self.face_outer.append(cyc[0])
                self.face_inner.append([])
        # unbounded face comes last; holes attach to their container
        self.unbounded_face = len(self.face_outer)
        self.face_outer.append(-1)
        self.face_inner.append([])
        container: dict[int, int] = {}

        def resolve(ci: int, seen: set[int]) -> int:
            if face_of_cycle[ci] >= 0:
                return face_of_cycle[ci]
            if ci in seen:
                return self.unbounded_face
            seen.add(ci)
            hit = self._containing_half_edge(cycles[ci], cycle_of)
            if hit < 0:
                face_of_cycle[ci] = self.unbounded_face
            else:
                face_of_cycle[ci] = resolve(cycle_of[hit], seen)
            return face_of_cycle[ci]

        for ci, area in enumerate(areas):
            if areas[ci] > 0.0:
                continue
            fid = resolve(ci, set())
            self.face_inner[fid].append(cycles[ci][0])
        for ci, cyc in enumerate(cycles):
            fid = face_of_cycle[ci]
            for h in cyc:
                self.he_face[h] = fid
        self._face_grid = None

    def _containing_half_edge(self, cycle: list[int], cycle_of: list[int]) -> int:
        """Half-edge of another cycle immediately left of this cycle."""
        vs = [self.he_origin[h] for h in cycle]
        v = min(vs, key=lambda u: (self.vx[u], self.vy[u]))
        px, py = self.vx[v], self.vy[v]
        my_cycle = cycle_of[cycle[0]]
        span = max(self.bbox().width, self.bbox().height, 1.0)
        for ang_i in range(8):
            ang = math.pi + ang_i * 0.77
            dx, dy = math.cos(ang), math.sin(ang)
            best = None
            degenerate = False
            ex = px + dx * 3.0 * span
            ey = py + dy * 3.0 * span
            for h in range(0, len(self.he_origin), 2):
                if cycle_of[h] == my_cycle and cycle_of[h ^ 1] == my_cycle:
                    continue
                for t, u in self._he_hits(h, px, py, ex, ey):
                    if u <= 1e-12:
                        continue
                    if t <= 1e-9 or t >= 1.0 - 1e-9:
                        degenerate = True
                    if best is None or u < best[0]:
                        best = (u, h, t)
            if degenerate and ang_i < 7:
                continue
            if best is None:
                return -1
            u, h, t = best
            hx, hy = px + u * dx * 3.0 * span, py + u * dy * 3.0 * span
            tx, ty = self._he_dir_at(h, t)
            toward = (px - hx, py - hy)
            cross = tx * toward[1] - ty * toward[0]
            return h if cross > 0 else h ^ 1
        return -1

    def _he_hits(self, h: int, x1, y1, x2, y2) -> list[tuple[float, float]]:
        """(edge param fraction, segment param) hits of edge h with a segment."""
        g = self.he_geom[h]
        if g is None:
            p, q = self.he_points(h)
            piece = MonotonePiece(-1, 0, "seg", (p.x, p.y, q.x, q.y), 0.0, 1.0, "linear")
            return piece_segment_hits(piece, x1, y1, x2, y2, self.eps)
        piece, ta, tb = g
        lo, hi = min(ta, tb), max(ta, tb)
        out = []
        for t, u in piece_segment_hits(piece, x1, y1, x2, y2, self.eps):
            if lo - 1e-12 <= t <= hi + 1e-12:
                span = hi - lo
                frac = 0.5 if span == 0 else (t - lo) / span
                if tb < ta:
                    frac = 1.0 - frac
                out.append((frac, u))
        return out

    def _he_dir_at(self, h: int, frac: float) -> tuple[float, float]:
        g = self.he_geom[h]
        if g is None:
            return self.he_direction(h)
        piece, ta, tb = g
        t = ta + frac * (tb - ta)
        tx, ty = piece.tangent_at(t)
        if tb < ta:
            tx, ty = -tx, -ty
        return tx, ty

    # -- queries -------------------------------------------------------------

    def _ensure_face_grid(self, res: int = 64):
        if self._face_grid is not None:
            return
        box = self.bbox()
        gw = max(box.width, 1e-12)
        gh = max(box.height, 1e-12)
        buckets: dict[tuple[int, int], list[int]] = {}
        for fid in range(self.num_faces()):
            if fid == self.unbounded_face:
                continue
            xs, ys = [], []
            for h in self.face_boundary_edges(fid):
                p = self.vertex_point(self.he_origin[h])
                xs.append(p.x)
                ys.append(p.y)
                m = self.he_midpoint(h)
                xs.append(m.x)
                ys.append(m.y)
            i0 = int((min(xs) - box.xmin) / gw * res)
            i1 = int((max(xs) - box.xmin) / gw * res)
            j0 = int((min(ys) - box.ymin) / gh * res)
            j1 = int((max(ys) - box.ymin) / gh * res)
            for i in range(max(i0, 0), min(i1, res - 1) + 1):
                for j in range(max(j0, 0), min(j1, res - 1) + 1):
                    buckets.setdefault((i, j), []).append(fid)
        self._face_grid = (box, gw, gh, res, buckets)

    def face_candidates(self, q: Point) -> list[int]:
        self._ensure_face_grid()
        box, gw, gh, res, buckets = self._face_grid
        i = int((q.x - box.xmin) / gw * res)
        j = int((q.y - box.ymin) / gh * res)
        return buckets.get((i, j), [])

    def point_in_face(self, fid: int, q: Point) -> bool:
        if fid == self.unbounded_face:
            raise ArrangementError("use face_walk_locate for the unbounded face")
        if not self._cycle_contains(self.face_cycle(self.face_outer[fid]), q):
            return False
        for h in self.face_inner[fid]:
            cyc = self.face_cycle(h)
            if abs(self.cycle_area(cyc)) <= 0.0:
                continue
            if self._cycle_contains(cyc, q, reverse=True):
                return False
        return True

    def _cycle_contains(self, cycle: list[int], q: Point, reverse=False) -> bool:
        span = 3.0 * max(self.bbox().width, self.bbox().height, 1.0)
        for ang_i in range(8):
            ang = 0.123 + ang_i * 0.779
            ex = q.x + span * math.cos(ang)
            ey = q.y + span * math.sin(ang)
            crossings = 0
            degenerate = False
            for h in cycle:
                hits = self._he_hits(h, q.x, q.y, ex, ey)
                for t, u in hits:
                    if u <= 1e-12:
                        return True   # on the boundary counts as inside
                    if t <= 1e-9 or t >= 1.0 - 1e-9:
                        degenerate = True
                    crossings += 1
            if degenerate and ang_i < 7:
                continue
            # each geometric crossing was counted once per half-edge pair in
            # the cycle; hole cycles and slit cycles visit both half-edges
            return crossings % 2 == 1
        return False

    def distance_to_boundary(self, q: Point, fid: int) -> float:
        best = math.inf
        for h in self.face_boundary_edges(fid):
            best = min(best, self._he_distance(h, q))
        return best

    def _he_distance(self, h: int, q: Point) -> float:
        g = self.he_geom[h]
        if g is None:
            p1, p2 = self.he_points(h)
            dx, dy = p2.x - p1.x, p2.y - p1.y
            L2 = dx * dx + dy * dy
            t = 0.0 if L2 == 0 else ((q.x - p1.x) * dx + (q.y - p1.y) * dy) / L2
            t = min(max(t, 0.0), 1.0)
            return math.hypot(q.x - p1.x - t * dx, q.y - p1.y - t * dy)
        piece, ta, tb = g
        lo, hi = min(ta, tb), max(ta, tb)
        if piece.kind == "arc":
            cx, cy, r = piece.params
            ang = math.atan2(q.y - cy, q.x - cx)
            from .geometry_core import _arc_contains_angle
            a = _arc_contains_angle(piece, ang, 0.0)
            if a is not None and lo <= a <= hi:
                return abs(math.hypot(q.x - cx, q.y - cy) - r)
        else:
            if lo <= q.x <= hi:
                m = piece.tangent_at(min(max(q.x, lo), hi))
                res = q.y - piece.graph_y(q.x)
                return abs(res) * abs(m[0])
        pa = piece.point_at(lo)
        pb = piece.point_at(hi)
        return min(q.dist(pa), q.dist(pb))


# ---------------------------------------------------------------------------
# construction from element soup


def _snap_registry(eps: float):
    cell = max(eps * 2.0, 1e-300)
    grid: dict[tuple[int, int], list[int]] = {}
    xs: list[float] = []
    ys: list[float] = []

    def get(x: float, y: float) -> int:
        ki, kj = math.floor(x / cell), math.floor(y / cell)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for vid in grid.get((ki + di, kj + dj), ()):
                    if math.hypot(xs[vid] - x, ys[vid] - y) <= eps:
                        return vid
        vid = len(xs)
        xs.append(x)
        ys.append(y)
        grid.setdefault((ki, kj), []).append(vid)
        return vid

    return get, xs, ys


def build_from_elements(elements: list[MonotonePiece], eps: float,
                        check_overlap: bool = True) -> PlanarSubdivision:
    """Arrangement of monotone pieces and straight segments as a DCEL."""
    elements = [e for e in elements if e.t1 - e.t0 > 0.0]
    n = len(elements)
    boxes = np.empty((n, 4))
    for i, e in enumerate(elements):
        b = e.bbox() if e.kind != "par" else _par_piece_bbox(e)
        if e.kind == "arc":
            b = _arc_piece_bbox(e)
        boxes[i] = (b.xmin - eps, b.ymin - eps, b.xmax + eps, b.ymax + eps)
    splits: list[list[tuple[float, float, float]]] = [[] for _ in range(n)]
    for i in range(n):
        if n > 1:
            others = np.arange(i + 1, n)
            bi = boxes[i]
            mask = ~((boxes[i + 1:, 0] > bi[2]) | (boxes[i + 1:, 2] < bi[0])
                     | (boxes[i + 1:, 1] > bi[3]) | (boxes[i + 1:, 3] < bi[1]))
            cands = others[mask]
        else:
            cands = []
        for j in cands:
            e1, e2 = elements[i], elements[int(j)]
            if check_overlap and pieces_overlap(e1, e2, eps):
                raise DegenerateOverlap(
                    f"elements {i} and {j} coincide along a stretch")
            for t1, t2, p in element_intersections(e1, e2, eps):
                splits[i].append((t1, p.x, p.y))
                splits[int(j)].append((t2, p.x, p.y))
    sub = PlanarSubdivision(eps)
    getv, xs, ys = _snap_registry(eps)
    sub.vx = xs
    sub.vy = ys
    edge_seen: dict[tuple, int] = {}
    for i, e in enumerate(elements):
        p0 = e.point_at(e.t0)
        p1 = e.point_at(e.t1)
        events = [(e.t0, p0.x, p0.y), (e.t1, p1.x, p1.y)] + splits[i]
        events.sort(key=lambda ev: ev[0])
        chain: list[tuple[float, int]] = []
        for t, x, y in events:
            vid = getv(x, y)
            while len(sub.v_out) < len(xs):
                sub.v_out.append([])
            if chain and chain[-1][1] == vid:
                continue
            chain.append((t, vid))
        for (ta, va), (tb, vb) in zip(chain, chain[1:]):
            if va == vb:
                continue
            mid = e.point_at(0.5 * (ta + tb))
            key = (min(va, vb), max(va, vb),
                   round(mid.x / (2 * eps)), round(mid.y / (2 * eps)))
            if key in edge_seen:
                continue
            edge_seen[key] = 1
            geom = None if e.kind == "seg" and _is_straight_chord(e) else (e, ta, tb)
            sub.add_edge_pair(va, vb, geom)
    sub.stitch()
    sub.extract_faces()
    return sub


def _is_straight_chord(e: MonotonePiece) -> bool:
    return e.kind == "seg"


def _arc_piece_bbox(e: MonotonePiece) -> BoundingBox:
    cx, cy, r = e.params
    xs = [e.point_at(e.t0).x, e.point_at(e.t1).x]
    ys = [e.point_at(e.t0).y, e.point_at(e.t1).y]
    k0 = math.ceil(e.t0 / (0.5 * math.pi))
    k = k0
    while k * 0.5 * math.pi <= e.t1 + 1e-12:
        ang = k * 0.5 * math.pi
        xs.append(cx + r * math.cos(ang))
        ys.append(cy + r * math.sin(ang))
        k += 1
    return BoundingBox(min(xs), min(ys), max(xs), max(ys))


def _par_piece_bbox(e: MonotonePiece) -> BoundingBox:
    a, b, c = e.params
    ys = [e.graph_y(e.t0), e.graph_y(e.t1)]
    if a != 0.0:
        xv = -b / (2.0 * a)
        if e.t0 < xv < e.t1:
            ys.append(e.graph_y(xv))
    return BoundingBox(e.t0, min(ys), e.t1, max(ys))


def segments_to_pieces(segments: list[tuple[float, float, float, float]],
                       eps: float) -> list[MonotonePiece]:
    out = []
    for (x1, y1, x2, y2) in segments:
        if math.hypot(x2 - x1, y2 - y1) <= eps:
            continue
        out.append(MonotonePiece(-1, 0, "seg", (x1, y1, x2, y2), 0.0, 1.0, "linear"))
    return out


def build_overlay(segments: list[tuple[float, float, float, float]],
                  eps: float) -> PlanarSubdivision:
    """Arrangement of straight segments (the polygonal subdivision C)."""
    return build_from_elements(segments_to_pieces(segments, eps), eps,
                               check_overlap=False)


def build_arrangement(pieces: list[MonotonePiece],
                      extra_segments: list[tuple[float, float, float, float]],
                      eps: float) -> PlanarSubdivision:
    """Arrangement of curve pieces plus optional straight segments."""
    elements = list(pieces) + segments_to_pieces(extra_segments, eps)
    return build_from_elements(elements, eps, check_overlap=True)


# ---------------------------------------------------------------------------
# DCEL surgery: diagonals, edge splits, triangulation


def add_diagonal(sub: PlanarSubdivision, ha: int, hb: int) -> tuple[int, int]:
    """Connect origin(ha) to origin(hb) inside their common face.

    When ha and hb lie on the same cycle the face is split in two (a new
    face id is allocated for the cycle through the new u->w half-edge).
    When they lie on different cycles of the same face (hole bridging) the
    cycles merge and no face is added.  Returns (u->w, w->u) half-edges.
    """
    fid = sub.he_face[ha]
    if sub.he_face[hb] != fid:
        raise ArrangementError("diagonal endpoints on different faces")
    u = sub.he_origin[ha]
    w = sub.he_origin[hb]
    same_cycle = False
    h = ha
    guard = 0
    while True:
        if h == hb:
            same_cycle = True
            break
        h = sub.he_next[h]
        guard += 1
        if h == ha or guard > len(sub.he_origin):
            break
    n1 = len(sub.he_origin)
    sub.he_origin.extend([u, w])
    sub.he_geom.extend([None, None])
    sub.he_face.extend([fid, fid])
    pa = sub.he_prev[ha]
    pb = sub.he_prev[hb]
    sub.he_next.extend([hb, ha])
    sub.he_prev.extend([pa, pb])
    sub.he_next[pa] = n1
    sub.he_next[pb] = n1 + 1
    sub.he_prev[ha] = n1 + 1
    sub.he_prev[hb] = n1
    sub.v_out[u].append(n1)
    sub.v_out[w].append(n1 + 1)
    if not same_cycle:
        # merged a hole cycle into the outer cycle
        merged = set(sub.face_cycle(n1))
        sub.face_inner[fid] = [h for h in sub.face_inner[fid] if h not in merged]
        rep = sub.face_outer[fid]
        if rep >= 0 and rep not in merged:
            # outer rep still valid
            pass
        elif rep >= 0:
            sub.face_outer[fid] = n1
        sub._face_grid = None
        return n1, n1 + 1
    new_fid = len(sub.face_outer)
    cyc_new = sub.face_cycle(n1)
    for h in cyc_new:
        sub.he_face[h] = new_fid
    sub.face_outer.append(n1)
    sub.face_inner.append([])
    # the old face keeps the cycle through n1+1
    sub.face_outer[fid] = n1 + 1
    for h in sub.face_cycle(n1 + 1):
        sub.he_face[h] = fid
    sub._face_grid = None
    return n1, n1 + 1


def split_edge(sub: PlanarSubdivision, h: int, x: float, y: float) -> int:
    """Insert a vertex at (x, y) on edge h; returns the new vertex id.

    Only straight edges are split (refinement operates on the polygonal
    overlay).
    """
    if sub.he_geom[h] is not None:
        raise ArrangementError("split_edge supports straight edges only")
    t = h ^ 1
    v = sub.add_vertex(x, y)
    u_dest = sub.dest(h)
    # h now ends at v; new pair n1: v -> old dest, n2: old dest -> v
    n1 = len(sub.he_origin)
    sub.he_origin.extend([v, u_dest])
    sub.he_geom.extend([None, None])
    sub.he_face.extend([sub.he_face[h], sub.he_face[t]])
    nh = sub.he_next[h]
    pt = sub.he_prev[t]
    sub.he_next.extend([nh, t])
    sub.he_prev.extend([h, pt])
    sub.he_next[h] = n1
    sub.he_prev[nh] = n1
    sub.he_next[pt] = n1 + 1
    sub.he_prev[t] = n1 + 1
    # rewire origins: twin's origin moves to v
    sub.he_origin[t] = v
    sub.v_out[u_dest] = [n1 + 1 if e == t else e for e in sub.v_out[u_dest]]
    sub.v_out[v].extend([n1, t])
    sub._face_grid = None
    return v


def _poly_area(pts: list[tuple[float, float]]) -> float:
    s = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def _point_in_triangle(px, py, ax, ay, bx, by, cx, cy, tol) -> bool:
    d1 = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    d2 = (cx - bx) * (py - by) - (cy - by) * (px - bx)
    d3 = (ax - cx) * (py - cy) - (ay - cy) * (px - cx)
    has_neg = d1 < -tol or d2 < -tol or d3 < -tol
    has_pos = d1 > tol or d2 > tol or d3 > tol
    return not (has_neg and has_pos)


def _earclip_cycle(sub: PlanarSubdivision, cycle: list[int],
                   area_tol: float) -> list[tuple[int, int]]:
    """Diagonals (as half-edge handles refreshed on the fly) via ear clipping.

    Returns the list of performed add_diagonal results; the polygon is
    consumed ear by ear, lowest vertex index first for determinism.
    """
    entries = list(cycle)
    created = []
    stall = 0
    while len(entries) > 3:
        k = len(entries)
        pts = [(sub.vx[sub.he_origin[h]], sub.vy[sub.he_origin[h]]) for h in entries]
        best = None
        order = sorted(range(k), key=lambda i: sub.he_origin[entries[i]])
        for i in order:
            ax, ay = pts[(i - 1) % k]
            bx, by = pts[i]
            cx, cy = pts[(i + 1) % k]
            cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if cross <= area_tol:
                continue
            blocked = False
            for j in range(k):
                if j in ((i - 1) % k, i, (i + 1) % k):
                    continue
                qx, qy = pts[j]
                if (qx, qy) in ((ax, ay), (bx, by), (cx, cy)):
                    continue
                if _point_in_triangle(qx, qy, ax, ay, bx, by, cx, cy, area_tol):
                    blocked = True
                    break
            if not blocked:
                best = i
                break
        if best is None:
            raise TriangulationError(
                f"no ear found in cycle of length {k}")
        i = best
        ha = entries[(i - 1) % k]
        hb = entries[(i + 1) % k]
        n1, _ = add_diagonal(sub, ha, hb)
        # remaining polygon: replace ha by the new half-edge, drop entry i
        entries[(i - 1) % k] = n1
        del entries[i]
        created.append((ha, hb))
        stall += 1
        if stall > 4 * len(cycle) + 16:
            raise TriangulationError("ear clipping did not make progress")
    return created


def _bridge_holes(sub: PlanarSubdivision, fid: int):
    while sub.face_inner[fid]:
        hole_rep = sub.face_inner[fid][0]
        hole_cycle = sub.face_cycle(hole_rep)
        outer_cycle = sub.face_cycle(sub.face_outer[fid])
        hw = max(hole_cycle, key=lambda h: sub.vx[sub.he_origin[h]])
        w = sub.he_origin[hw]
        wx, wy = sub.vx[w], sub.vy[w]
        cands = sorted(outer_cycle,
                       key=lambda h: (math.hypot(sub.vx[sub.he_origin[h]] - wx,
                                                 sub.vy[sub.he_origin[h]] - wy),
                                      sub.he_origin[h]))
        done = False
        for hu in cands:
            u = sub.he_origin[hu]
            if _diagonal_clear(sub, fid, u, w):
                add_diagonal(sub, hu, hw)
                done = True
                break
        if not done:
            raise TriangulationError("cannot bridge hole to outer boundary")


def _diagonal_clear(sub: PlanarSubdivision, fid: int, u: int, w: int) -> bool:
    ux, uy = sub.vx[u], sub.vy[u]
    wx, wy = sub.vx[w], sub.vy[w]
    seg = MonotonePiece(-1, 0, "seg", (ux, uy, wx, wy), 0.0, 1.0, "linear")
    for h in sub.face_boundary_edges(fid):
        if sub.he_origin[h] in (u, w) or sub.dest(h) in (u, w):
            continue
        p, q = sub.he_points(h)
        if piece_segment_hits(seg, p.x, p.y, q.x, q.y, sub.eps):
            return False
    mx, my = 0.5 * (ux + wx), 0.5 * (uy + wy)
    return sub.point_in_face(fid, Point(mx, my))


def triangulate_cells(sub: PlanarSubdivision, max_sides: int = 3) -> None:
    """Split every bounded cell with more than max_sides boundary segments.

    Straight-edge cells only; a curved boundary edge raises CurvedCell.
    Triangulation is in place (the subdivision is extended with diagonals).
    """
    area_tol = (10.0 * sub.eps) ** 2
    fid = 0
    while fid < sub.num_faces():
        if fid == sub.unbounded_face:
            fid += 1
            continue
        edges = sub.face_boundary_edges(fid)
        if len(edges) <= max_sides and not sub.face_inner[fid]:
            fid += 1
            continue
        for h in edges:
            if not sub.edge_is_straight(h):
                raise CurvedCell(f"face {fid} has a curved boundary edge")
        if sub.face_inner[fid]:
            _bridge_holes(sub, fid)
        cycle = sub.face_cycle(sub.face_outer[fid])
        if len(cycle) > max_sides:
            _earclip_cycle(sub, cycle, area_tol)
        fid += 1
    sub._face_grid = None


# ---------------------------------------------------------------------------
# point location by walking (reference locator) and validation


def face_walk_locate(sub: PlanarSubdivision, q: Point,
                     eps: float | None = None) -> int:
    """Face containing q by crossing-parity tests; OnBoundary near edges."""
    eps = sub.eps if eps is None else eps
    cands = sub.face_candidates(q)
    for fid in cands:
        if sub.point_in_face(fid, q):
            if sub.distance_to_boundary(q, fid) <= eps:
                raise OnBoundary(f"query {q} within eps of an edge")
            return fid
    # not in any bounded face: it is the unbounded face (check boundary)
    for h in sub.face_inner[sub.unbounded_face]:
        for e in sub.face_cycle(h):
            if sub._he_distance(e, q) <= eps:
                raise OnBoundary(f"query {q} within eps of an edge")
    return sub.unbounded_face


def validate_dcel(sub: PlanarSubdivision) -> list[str]:
    """Structural invariant check; empty list means valid."""
    report: list[str] = []
    n_he = len(sub.he_origin)
    if n_he % 2:
        report.append("odd number of half-edges")
    for h in range(n_he):
        if sub.he_origin[h ^ 1 ^ 1] != sub.he_origin[h]:
            report.append(f"twin pairing broken at {h}")
            break
    for h in range(n_he):
        if sub.he_next[h] < 0 or sub.he_prev[h] < 0:
            report.append(f"half-edge {h} missing next/prev")
            continue
        if sub.he_prev[sub.he_next[h]] != h:
            report.append(f"next/prev not inverse at {h}")
        if sub.he_origin[sub.he_next[h]] != sub.dest(h):
            report.append(f"next origin mismatch at {h}")
    seen = [False] * n_he
    for h in range(n_he):
        if seen[h]:
            continue
        try:
            cyc = sub.face_cycle(h)
        except ArrangementError:
            report.append(f"cycle from {h} does not close")
            break
        fids = {sub.he_face[e] for e in cyc}
        if len(fids) != 1:
            report.append(f"mixed face ids on cycle of {h}: {fids}")
        for e in cyc:
            seen[e] = True
    for fid in range(sub.num_faces()):
        rep = sub.face_outer[fid]
        if fid == sub.unbounded_face:
            if rep != -1:
                report.append("unbounded face has an outer cycle")
            continue
        if rep < 0 or sub.he_face[rep] != fid:
            report.append(f"face {fid} outer rep invalid")
        for h in sub.face_inner[fid]:
            if sub.he_face[h] != fid:
                report.append(f"face {fid} inner rep invalid")
    # Euler characteristic: V - E + F = 1 + components
    parent = list(range(sub.num_vertices()))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for h in range(0, n_he, 2):
        a, b = find(sub.he_origin[h]), find(sub.he_origin[h ^ 1])
        if a != b:
            parent[a] = b
    comps = len({find(v) for v in range(sub.num_vertices())})
    V, E, F = sub.num_vertices(), sub.num_edges(), sub.num_faces()
    if sub.num_vertices() and V - E + F != 1 + comps:
        report.append(f"Euler formula violated: V={V} E={E} F={F} comps={comps}")
    count_unbounded = sum(1 for fid in range(F) if sub.face_outer[fid] == -1)
    if sub.num_vertices() and count_unbounded != 1:
        report.append(f"expected exactly one unbounded face, got {count_unbounded}")
    return report


def face_representative(sub: PlanarSubdivision, fid: int) -> Point:
    """A point strictly inside the face, found by inward offsets."""
    if fid == sub.unbounded_face:
        box = sub.bbox()
        return Point(box.xmax + max(box.width, 1.0), box.ymax + max(box.height, 1.0))
    cycle = sub.face_cycle(sub.face_outer[fid])
    scale = max(sub.bbox().width, sub.bbox().height, 1.0)
    for h in cycle:
        m = sub.he_midpoint(h)
        dx, dy = sub._he_dir_at(h, 0.5)
        # left of the direction points into the face
        nx, ny = -dy, dx
        for k in range(4, 40, 4):
            d = scale * (0.5 ** k)
            cand = Point(m.x + nx * d, m.y + ny * d)
            try:
                if sub.point_in_face(fid, cand) and \
                        sub.distance_to_boundary(cand, fid) > sub.eps:
                    return cand
            except ArrangementError:
                pass
    raise ArrangementError(f"no representative found for face {fid}")
