"""Curve-monotone polygonal subdivision and per-segment crossing lists.

The polygonal overlay C is built from straight separators: the working box,
bounding-box segments resolved through the nested/intersecting/disjoint
cases, pairwise tangents, and connector chords.  After triangulation every
bounded cell is analyzed against the supporting loci of the input curves:

* each support crossing a cell must do so in a single arc component, and
* the crossing supports must admit a total order by distance from at least
  one boundary segment of the cell (the curve-monotone property).

Cells that fail either condition are split (midpoint refinement) and
re-analyzed; the certified result is exact for query points farther than
epsilon from every curve.  Queries then binary search the per-segment list
and land in a "gap" whose arrangement face and full sign vector were
precomputed from a verified representative point.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .arrangement import (
    FaceLabel,
    OnBoundary,
    PlanarSubdivision,
    add_diagonal,
    build_arrangement,
    build_overlay,
    face_representative,
    face_walk_locate,
    split_edge,
    triangulate_cells,
)
from .geometry_core import (
    BoundingBox,
    Curve,
    DiskBoundary,
    MonotonePiece,
    ParabolaArc,
    Point,
    Segment,
    _quadratic_roots,
    clip_line_to_box,
    common_tangents,
    disk_tangents,
    circle_circle_points,
    intersect_pieces,
    monotone_decompose,
    piece_segment_hits,
    scene_epsilon,
    support_sign,
    tangent_line_at,
    NoSeparatingTangent,
)

WORK_BOX_MARGIN = 0.10
FULL_PAIR_LIMIT = 24
MAX_REFINE_ROUNDS = 25


class SubdivisionError(Exception):
    pass


class AmbiguousOrder(SubdivisionError):
    """A cell's crossing curves admit no monotone order from any segment."""


class NonDisjointInput(SubdivisionError):
    """Arc-scene curves must be pairwise disjoint."""


class SeparationFailure(SubdivisionError):
    """Two pieces could not be separated by box edges or tangents."""


class UnsupportedScene(SubdivisionError):
    """Mixed disk/graph scenes are rejected."""


# ---------------------------------------------------------------------------
# working box and support pieces


def working_box_of(curves: list[Curve],
                   default: BoundingBox | None = None) -> BoundingBox:
    if not curves:
        return default or BoundingBox(0.0, 0.0, 1.0, 1.0)
    box = BoundingBox.union([c.bbox() for c in curves])
    margin = WORK_BOX_MARGIN * max(box.width, box.height, 1e-9)
    return box.inflated(margin)


def support_piece(curve: Curve, box: BoundingBox) -> MonotonePiece:
    """The full supporting locus as a single analysis element."""
    if isinstance(curve, DiskBoundary):
        c = curve.center
        return MonotonePiece(curve.id, 0, "arc", (c.x, c.y, curve.radius),
                             0.0, 2.0 * math.pi, "convex")
    if isinstance(curve, ParabolaArc):
        pad = 0.01 * max(box.width, 1e-9)
        return MonotonePiece(curve.id, 0, "par", (curve.a, curve.b, curve.c),
                             box.xmin - pad, box.xmax + pad, "convex")
    p1, p2 = curve.p1, curve.p2
    d = p1.dist(p2)
    a, b = clip_line_to_box(p1, (p2.x - p1.x) / d, (p2.y - p1.y) / d, box)
    return MonotonePiece(curve.id, 0, "seg", (a.x, a.y, b.x, b.y),
                         0.0, 1.0, "linear")


def support_key(curve: Curve, eps: float) -> tuple:
    """Canonical key so curves sharing one supporting locus group together."""
    q = max(eps, 1e-300)
    if isinstance(curve, DiskBoundary):
        return ("circ", round(curve.center.x / q), round(curve.center.y / q),
                round(curve.radius / q))
    if isinstance(curve, ParabolaArc):
        return ("par", round(curve.a / q), round(curve.b / q), round(curve.c / q))
    p1, p2 = curve.p1, curve.p2
    dx, dy = p2.x - p1.x, p2.y - p1.y
    L = math.hypot(dx, dy)
    nx, ny = -dy / L, dx / L
    if (nx, ny) < (-nx, -ny):
        nx, ny = -nx, -ny
    d = nx * p1.x + ny * p1.y
    return ("line", round(nx / 1e-12), round(ny / 1e-12), round(d / q))


# ---------------------------------------------------------------------------
# separator construction


def _box_edges(box: BoundingBox) -> list[tuple[float, float, float, float]]:
    return [(box.xmin, box.ymin, box.xmax, box.ymin),
            (box.xmax, box.ymin, box.xmax, box.ymax),
            (box.xmax, box.ymax, box.xmin, box.ymax),
            (box.xmin, box.ymax, box.xmin, box.ymin)]


def _seg_line_param(px, py, dx, dy, seg, eps) -> float | None:
    """Parameter t where the line p + t d crosses the segment, else None."""
    x1, y1, x2, y2 = seg
    rx, ry = x2 - x1, y2 - y1
    denom = dx * ry - dy * rx
    if abs(denom) <= 1e-14 * math.hypot(dx, dy) * math.hypot(rx, ry):
        return None
    t = ((x1 - px) * ry - (y1 - py) * rx) / denom
    u = ((x1 - px) * dy - (y1 - py) * dx) / denom
    slack = eps / max(math.hypot(rx, ry), 1e-300)
    if -slack <= u <= 1.0 + slack:
        return t
    return None


def extend_first_hit(p: Point, q: Point, network, eps: float
                     ) -> tuple[float, float, float, float]:
    """Extend segment p-q beyond both endpoints to the first network hit."""
    dx, dy = q.x - p.x, q.y - p.y
    L = math.hypot(dx, dy)
    dx, dy = dx / L, dy / L
    fwd = math.inf
    back = -math.inf
    for seg in network:
        t = _seg_line_param(p.x, p.y, dx, dy, seg, eps)
        if t is None:
            continue
        if t >= L - eps:
            fwd = min(fwd, t)
        if t <= eps:
            back = max(back, t)
    if not math.isfinite(fwd):
        fwd = L
    if not math.isfinite(back):
        back = 0.0
    return (p.x + back * dx, p.y + back * dy,
            p.x + fwd * dx, p.y + fwd * dy)


def resolve_boxes(boxes: list[BoundingBox], pieces: list[MonotonePiece],
                  work_box: BoundingBox, eps: float
                  ) -> list[tuple[float, float, float, float]]:
    """Bounding-box separators: nested merge, edges, first-hit extensions.

    Boxes strictly inside another box are dropped unless they intersect an
    unrelated box (the pure-nest merge).  Remaining rectangle edges are
    drawn, then extended beyond their corners until they hit previously
    inserted geometry, processing order: intersecting pairs' boxes first,
    then disjoint, then nested, lexicographic within each class.
    """
    n = len(boxes)
    keep = []
    for i, b in enumerate(boxes):
        dropped = False
        for j, other in enumerate(boxes):
            if i == j or not b.strictly_inside(other):
                continue
            clean = True
            for k, third in enumerate(boxes):
                if k in (i, j) or third.strictly_inside(other):
                    continue
                if third.intersects(b):
                    clean = False
                    break
            if clean:
                dropped = True
                break
        if not dropped:
            keep.append(i)
    inter, nested, disjoint = set(), set(), set()
    for a_i, i in enumerate(keep):
        for j in keep[a_i + 1:]:
            if boxes[i].strictly_inside(boxes[j]) or boxes[j].strictly_inside(boxes[i]):
                nested.update((i, j))
            elif boxes[i].intersects(boxes[j]):
                inter.update((i, j))
            else:
                disjoint.update((i, j))

    def cls(i):
        if i in inter:
            return 0
        if i in disjoint:
            return 1
        return 2

    order = sorted(keep, key=lambda i: (cls(i), boxes[i].xmin, boxes[i].ymin,
                                        boxes[i].height))
    network = _box_edges(work_box)
    out = []
    for i in order:
        b = boxes[i]
        edges = _box_edges(b)
        for (x1, y1, x2, y2) in edges:
            ext = extend_first_hit(Point(x1, y1), Point(x2, y2), network, eps)
            out.append(ext)
            network.append(ext)
    return out


def disk_separators(disks: list[DiskBoundary], box: BoundingBox, eps: float
                    ) -> tuple[list[tuple[float, float, float, float]], int]:
    """Straight separators of the disk subdivision and the tangent count.

    Box edges, per-disk axis chords through the center, per-pair center
    connector, intersection chords extended to the network, and the common
    tangent segments (trimmed at the first network hit).  Beyond
    FULL_PAIR_LIMIT disks, connectors and tangents are restricted to
    intersecting and nearest-neighbor pairs to keep the overlay tractable.
    """
    segs = _box_edges(box)
    network = list(segs)
    for d in disks:
        c = d.center
        v = (c.x, box.ymin, c.x, box.ymax)
        h = (box.xmin, c.y, box.xmax, c.y)
        segs += [v, h]
        network += [v, h]
    n = len(disks)
    if n <= FULL_PAIR_LIMIT:
        pair_list = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        centers = np.array([[d.center.x, d.center.y] for d in disks])
        pair_set = set()
        d2 = ((centers[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        for i in range(n):
            for j in range(i + 1, n):
                gap = math.sqrt(d2[i, j]) - disks[i].radius - disks[j].radius
                if gap < eps:
                    pair_set.add((i, j))
        for i in range(n):
            nearest = np.argsort(d2[i])[1:5]
            for j in nearest:
                pair_set.add((min(i, int(j)), max(i, int(j))))
        pair_list = sorted(pair_set)
    tangent_count = 0
    for i, j in pair_list:
        di, dj = disks[i], disks[j]
        if di.center.dist(dj.center) > eps:
            segs.append((di.center.x, di.center.y, dj.center.x, dj.center.y))
        pts = circle_circle_points(di.center, di.radius, dj.center, dj.radius, eps)
        if len(pts) == 2:
            segs.append(extend_first_hit(pts[0], pts[1], network, eps))
        elif len(pts) == 1:
            # tangential contact: the radical axis through the touch point
            p = pts[0]
            dx, dy = dj.center.x - di.center.x, dj.center.y - di.center.y
            L = math.hypot(dx, dy)
            q = Point(p.x - dy / L, p.y + dx / L)
            segs.append(extend_first_hit(p, q, network, eps))
        for t1, t2 in disk_tangents(di, dj, eps):
            segs.append(extend_first_hit(t1, t2, network, eps))
            tangent_count += 1
    return segs, tangent_count


def _parabola_pair_crossings(c1: Curve, c2: Curve, box: BoundingBox,
                             eps: float) -> list[Point]:
    a = (getattr(c1, "a", 0.0) - getattr(c2, "a", 0.0))
    b = (getattr(c1, "b", 0.0) - getattr(c2, "b", 0.0))
    c = (getattr(c1, "c", 0.0) - getattr(c2, "c", 0.0))
    pts = []
    for x in _quadratic_roots(a, b, c, 0.0):
        y = c1.y_at(x)
        if box.contains(Point(x, y)):
            pts.append(Point(x, y))
    return pts


def arc_separators(curves: list[Curve], pieces: list[MonotonePiece],
                   box: BoundingBox, eps: float
                   ) -> list[tuple[float, float, float, float]]:
    """Separators for disjoint graph-family scenes.

    Segment curves contribute their full supporting chord (their sign is
    then constant per cell).  Piece bounding boxes go through the nested /
    intersecting / disjoint resolution; intersecting-box pairs of distinct
    curves get curve tangents at box crossings plus one separating common
    tangent when one exists; parabola supports crossing inside the working
    box get both tangent lines at the crossing so the crossing point lands
    on cell boundaries.
    """
    segs = _box_edges(box)
    network = list(segs)
    for c in curves:
        if isinstance(c, Segment):
            a, b = clip_line_to_box(c.p1, c.p2.x - c.p1.x, c.p2.y - c.p1.y, box)
            chord = (a.x, a.y, b.x, b.y)
            segs.append(chord)
            network.append(chord)
    boxes = [p.bbox() for p in pieces]
    rect_segs = resolve_boxes(boxes, pieces, box, eps)
    segs += rect_segs
    network += rect_segs
    # case (b): tangents where curves meet intersecting bounding rectangles
    handled_pairs = set()
    for i, pi in enumerate(pieces):
        for j in range(i + 1, len(pieces)):
            pj = pieces[j]
            if pi.parent == pj.parent or not boxes[i].intersects(boxes[j]):
                continue
            for piece, other_box in ((pi, boxes[j]), (pj, boxes[i])):
                for pt in _piece_box_crossings(piece, other_box, eps):
                    try:
                        a, b = tangent_line_at(piece, pt, box, eps)
                    except Exception:
                        continue
                    seg = extend_first_hit(a, b, network, eps)
                    segs.append(seg)
                    network.append(seg)
            key = tuple(sorted((pi.parent, pj.parent)))
            if key in handled_pairs:
                continue
            handled_pairs.add(key)
            ca = curves[key[0]]
            cb = curves[key[1]]
            try:
                for a, b in common_tangents(ca, cb, box, eps):
                    seg = extend_first_hit(a, b, network, eps)
                    segs.append(seg)
                    network.append(seg)
            except NoSeparatingTangent:
                pass   # nested curves are exempt; certification still guards
    # supporting parabolas crossing inside the box
    paras = [c for c in curves if isinstance(c, ParabolaArc)]
    for i, ca in enumerate(paras):
        for cb in paras[i + 1:]:
            if (ca.a, ca.b, ca.c) == (cb.a, cb.b, cb.c):
                continue
            for pt in _parabola_pair_crossings(ca, cb, box, eps):
                for curve in (ca, cb):
                    m = curve.slope_at(pt.x)
                    d = math.hypot(1.0, m)
                    a, b = clip_line_to_box(pt, 1.0 / d, m / d, box)
                    seg = extend_first_hit(a, b, network, eps)
                    segs.append(seg)
                    network.append(seg)
    return segs


def _piece_box_crossings(piece: MonotonePiece, b: BoundingBox,
                         eps: float) -> list[Point]:
    pts = []
    for (x1, y1, x2, y2) in _box_edges(b):
        for t, _u in piece_segment_hits(piece, x1, y1, x2, y2, eps):
            pts.append(piece.point_at(t))
    out = []
    for p in pts:
        if all(p.dist(q) > 4 * eps for q in out):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# cell analysis: crossings, stack order, gaps


@dataclass
class CrossingList:
    """Sorted list of curves crossing a cell, keyed by a boundary segment."""
    segment_id: int
    cell_id: int
    order: tuple[int, ...]        # positions into the cell's canonical entries
    near_signs: tuple[int, ...]   # sign on the segment's side, per entry
    gap_of_count: tuple[int, ...]  # canonical gap index per beyond-count

    def entry_curves(self, cell: "CellData") -> tuple[int, ...]:
        return tuple(cell.entry_curves[i] for i in self.order)


@dataclass
class CellData:
    cell_id: int
    edge_ids: tuple[int, ...]
    entry_curves: tuple[int, ...]      # canonical order, one per support group
    entry_reps: tuple[tuple[float, float], ...]
    lists: dict[int, CrossingList]
    gap_signs: np.ndarray              # (gaps, n_curves) int8 of +-1
    gap_reps: tuple[tuple[float, float], ...]
    gap_faces: tuple[int, ...]         # arrangement face per gap

    @property
    def num_entries(self) -> int:
        return len(self.entry_curves)


@dataclass
class BuildStats:
    build_time: float = 0.0
    size: int = 0
    cell_complexity_max: int = 0
    tangent_count: int = 0
    refinement_rounds: int = 0
    num_cells: int = 0
    list_entries: int = 0

    def lines(self) -> list[str]:
        return [f"build_time_s={self.build_time:.6f}",
                f"size={self.size}",
                f"cell_complexity_max={self.cell_complexity_max}",
                f"tangent_count={self.tangent_count}",
                f"refinement_rounds={self.refinement_rounds}",
                f"num_cells={self.num_cells}",
                f"list_entries={self.list_entries}"]


@dataclass
class AugmentedSubdivision:
    curves: list[Curve]
    scene_kind: str                    # "disks" | "arcs"
    working_box: BoundingBox
    eps: float
    C: PlanarSubdivision
    A: PlanarSubdivision
    face_labels: list[FaceLabel]
    cells: dict[int, CellData]
    build_stats: BuildStats
    unbounded_cell: CellData | None = None

    def cell_for_face(self, fid: int) -> CellData | None:
        if fid == self.C.unbounded_face:
            return self.unbounded_cell
        return self.cells.get(fid)


class _CellGeometry:
    """Outer-cycle polygon of a bounded cell plus inside tests."""

    def __init__(self, sub: PlanarSubdivision, fid: int):
        self.fid = fid
        cyc = sub.face_cycle(sub.face_outer[fid])
        self.half_edges = cyc
        self.edge_ids = tuple(h // 2 for h in cyc)
        self.pts = [(sub.vx[sub.he_origin[h]], sub.vy[sub.he_origin[h]])
                    for h in cyc]
        xs = [p[0] for p in self.pts]
        ys = [p[1] for p in self.pts]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))
        self.diam = math.hypot(self.bbox[2] - self.bbox[0],
                               self.bbox[3] - self.bbox[1])

    def edges(self):
        k = len(self.pts)
        for i in range(k):
            x1, y1 = self.pts[i]
            x2, y2 = self.pts[(i + 1) % k]
            yield (x1, y1, x2, y2)

    def contains(self, x: float, y: float, margin: float) -> bool:
        for (x1, y1, x2, y2) in self.edges():
            if (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) <= margin:
                return False
        return True

    def boundary_distance(self, x: float, y: float) -> float:
        best = math.inf
        for (x1, y1, x2, y2) in self.edges():
            dx, dy = x2 - x1, y2 - y1
            L2 = dx * dx + dy * dy
            t = 0.0 if L2 == 0 else ((x - x1) * dx + (y - y1) * dy) / L2
            t = min(max(t, 0.0), 1.0)
            best = min(best, math.hypot(x - x1 - t * dx, y - y1 - t * dy))
        return best

    def centroid(self) -> tuple[float, float]:
        sx = sum(p[0] for p in self.pts)
        sy = sum(p[1] for p in self.pts)
        return sx / len(self.pts), sy / len(self.pts)


class _BadCell(Exception):
    def __init__(self, reason: str):
        self.reason = reason


def _support_components(sp: MonotonePiece, geom: _CellGeometry, eps: float
                        ) -> list[tuple[float, float]]:
    """Parameter intervals where the support runs inside the open cell.

    Raises _BadCell on configurations the query structure cannot express:
    a closed loop inside the cell or two or more separate components.
    """
    hits = []
    for (x1, y1, x2, y2) in geom.edges():
        for t, _u in piece_segment_hits(sp, x1, y1, x2, y2, eps):
            hits.append(t)
    circle = sp.kind == "arc" and sp.t1 - sp.t0 > 1.9 * math.pi
    hits.sort()
    merged: list[float] = []
    ttol = _param_tol(sp, eps)
    for t in hits:
        if merged and t - merged[-1] <= ttol:
            continue
        merged.append(t)
    if circle and len(merged) >= 2 and \
            (merged[0] - sp.t0) + (sp.t1 - merged[-1]) <= ttol:
        merged.pop()
    if not merged:
        if circle:
            probe = sp.point_at(0.0)
            if geom.contains(probe.x, probe.y, eps):
                raise _BadCell("support loop inside cell")
        return []
    intervals = []
    if circle:
        k = len(merged)
        for i in range(k):
            a = merged[i]
            b = merged[(i + 1) % k] + (2.0 * math.pi if i == k - 1 else 0.0)
            intervals.append((a, b))
    else:
        bounds = [sp.t0] + merged + [sp.t1]
        intervals = list(zip(bounds, bounds[1:]))
    inside = []
    for a, b in intervals:
        if b - a <= ttol:
            continue
        mid = sp.point_at(0.5 * (a + b))
        if geom.contains(mid.x, mid.y, eps):
            d = geom.boundary_distance(mid.x, mid.y)
            if d <= eps:
                continue   # grazing sliver within tolerance of the boundary
            inside.append((a, b))
    if len(inside) > 1:
        raise _BadCell(f"support crosses cell in {len(inside)} components")
    return inside


def _param_tol(sp: MonotonePiece, eps: float) -> float:
    if sp.kind == "arc":
        return 4.0 * eps / sp.params[2]
    return 4.0 * eps


def _entry_rep(sp: MonotonePiece, interval: tuple[float, float],
               geom: _CellGeometry, eps: float) -> tuple[float, float]:
    a, b = interval
    for f in (0.5, 0.35, 0.65, 0.2, 0.8):
        p = sp.point_at(a + f * (b - a))
        if geom.contains(p.x, p.y, eps):
            return (p.x, p.y)
    raise _BadCell("no interior representative on crossing component")


def _candidate_curve_mask(curves: list[Curve], cell_boxes: np.ndarray,
                          eps: float) -> list[np.ndarray]:
    """Per curve, boolean mask of cells whose bbox the support may cross."""
    x0, y0, x1, y1 = (cell_boxes[:, 0], cell_boxes[:, 1],
                      cell_boxes[:, 2], cell_boxes[:, 3])
    masks = []
    for c in curves:
        if isinstance(c, DiskBoundary):
            cx, cy, r = c.center.x, c.center.y, c.radius
            nx = np.clip(cx, x0, x1) - cx
            ny = np.clip(cy, y0, y1) - cy
            dmin = np.hypot(nx, ny)
            fx = np.maximum(np.abs(x0 - cx), np.abs(x1 - cx))
            fy = np.maximum(np.abs(y0 - cy), np.abs(y1 - cy))
            dmax = np.hypot(fx, fy)
            masks.append((dmin <= r + eps) & (dmax >= r - eps))
        elif isinstance(c, ParabolaArc):
            ya = (c.a * x0 + c.b) * x0 + c.c
            yb = (c.a * x1 + c.b) * x1 + c.c
            lo = np.minimum(ya, yb)
            hi = np.maximum(ya, yb)
            if c.a != 0.0:
                xv = -c.b / (2.0 * c.a)
                yv = c.y_at(xv)
                vin = (x0 <= xv) & (xv <= x1)
                if c.a > 0:
                    lo = np.where(vin, np.minimum(lo, yv), lo)
                else:
                    hi = np.where(vin, np.maximum(hi, yv), hi)
            masks.append((y1 >= lo - eps) & (y0 <= hi + eps))
        else:
            p1, p2 = c.p1, c.p2
            dx, dy = p2.x - p1.x, p2.y - p1.y
            s1 = dx * (y0 - p1.y) - dy * (x0 - p1.x)
            s2 = dx * (y0 - p1.y) - dy * (x1 - p1.x)
            s3 = dx * (y1 - p1.y) - dy * (x0 - p1.x)
            s4 = dx * (y1 - p1.y) - dy * (x1 - p1.x)
            pos = (s1 > 0) & (s2 > 0) & (s3 > 0) & (s4 > 0)
            neg = (s1 < 0) & (s2 < 0) & (s3 < 0) & (s4 < 0)
            masks.append(~(pos | neg))
    return masks


def _certify_stack(curves, group_curve_ids, reps, edge_mids, eps):
    """Try to order crossing groups from each boundary segment.

    Returns dict: edge position -> (order, near_signs) for segments that
    certify; the caller builds CrossingLists from them.
    """
    m = len(group_curve_ids)
    sig = np.zeros((m, m), dtype=np.int8)   # sig[i][j] = sign of curve i at rep j
    for i, cid in enumerate(group_curve_ids):
        for j, (rx, ry) in enumerate(reps):
            if i == j:
                continue
            s = support_sign(curves[cid], rx, ry, eps)
            if s == 0:
                raise _BadCell("crossing supports nearly touch inside cell")
            sig[i][j] = s
    out = {}
    for e_pos, (mx, my) in enumerate(edge_mids):
        near = []
        ok = True
        for cid in group_curve_ids:
            s = support_sign(curves[cid], mx, my, eps)
            if s == 0:
                ok = False
                break
            near.append(s)
        if not ok:
            continue
        beyond_count = [0] * m
        for i in range(m):
            for j in range(m):
                if i != j and sig[i][j] == -near[i]:
                    beyond_count[j] += 1
        order = sorted(range(m), key=lambda i: beyond_count[i])
        if [beyond_count[i] for i in order] != list(range(m)):
            continue
        valid = True
        for a in range(m):
            for b in range(a + 1, m):
                i, j = order[a], order[b]
                if sig[i][j] != -near[i] or sig[j][i] != near[j]:
                    valid = False
                    break
            if not valid:
                break
        if valid:
            out[e_pos] = (tuple(order), tuple(near))
    return out


def _gap_representatives(curves, group_curve_ids, reps, near_signs, order,
                         s_mid, geom, eps):
    """One interior point per gap, profile-verified.  order is canonical."""
    m = len(order)
    chain = [s_mid] + [reps[i] for i in order]

    def profile_at(x, y):
        sig = []
        for cid in group_curve_ids:
            s = support_sign(curves[cid], x, y, eps)
            if s == 0:
                return None
            sig.append(s)
        return sig

    def expected(k):
        # far side of the first k stack entries, near side of the rest
        prof = [0] * m
        for pos, i in enumerate(order):
            prof[i] = -near_signs[i] if pos < k else near_signs[i]
        return prof

    gaps = []
    for k in range(m + 1):
        if k < m:
            ax, ay = chain[k]
            bx, by = chain[k + 1]
            cands = [(ax + f * (bx - ax), ay + f * (by - ay))
                     for f in (0.5, 0.25, 0.75, 0.1, 0.9, 0.03, 0.97,
                               0.006, 0.994, 0.0012, 0.9988)]
        else:
            ax, ay = chain[m - 1] if m else s_mid
            bx, by = chain[m]
            cands = [(bx + f * (bx - ax), by + f * (by - ay))
                     for f in (0.5, 0.25, 0.1, 0.04, 0.012, 0.003, 6e-4)]
        want = expected(k)
        found = None
        for (x, y) in cands:
            if not geom.contains(x, y, eps):
                continue
            if profile_at(x, y) == want:
                found = (x, y)
                break
        if found is None:
            raise _BadCell(f"no representative for gap {k}")
        gaps.append(found)
    return gaps


def _analyze_cell(curves, support_pieces, groups, geom: _CellGeometry,
                  cand_ids, eps) -> CellData:
    """Certify one cell; raises _BadCell when refinement is needed."""
    entries = []        # (group key, interval, rep)
    seen_groups = {}
    for gi in cand_ids:
        sp = support_pieces[gi]
        comps = _support_components(sp, geom, eps)
        if comps:
            rep = _entry_rep(sp, comps[0], geom, eps)
            seen_groups[gi] = rep
    group_ids = sorted(seen_groups)
    reps = [seen_groups[g] for g in group_ids]
    group_curve_ids = [groups[g][0] for g in group_ids]
    k = len(geom.half_edges)
    edge_mids = []
    for (x1, y1, x2, y2) in geom.edges():
        edge_mids.append((0.5 * (x1 + x2), 0.5 * (y1 + y2)))
    m = len(group_ids)
    n_curves = len(curves)
    if m == 0:
        cx, cy = geom.centroid()
        if not geom.contains(cx, cy, eps):
            raise _BadCell("degenerate cell without interior centroid")
        sig = np.zeros((1, n_curves), dtype=np.int8)
        for cid in range(n_curves):
            s = support_sign(curves[cid], cx, cy, eps)
            if s == 0:
                raise _BadCell("cell centroid within eps of a curve")
            sig[0][cid] = s
        return CellData(geom.fid, geom.edge_ids, (), (), {}, sig,
                        ((cx, cy),), ())
    certs = _certify_stack(curves, group_curve_ids, reps, edge_mids, eps)
    if not certs:
        raise _BadCell("no boundary segment certifies a monotone order")
    # canonical order: from the lowest certifying edge id
    canon_pos = min(certs, key=lambda p: geom.edge_ids[p])
    canon_order, canon_near = certs[canon_pos]
    gap_reps = _gap_representatives(curves, group_curve_ids, reps, canon_near,
                                    canon_order, edge_mids[canon_pos], geom, eps)
    gap_sig = np.zeros((m + 1, n_curves), dtype=np.int8)
    for g, (x, y) in enumerate(gap_reps):
        for cid in range(n_curves):
            s = support_sign(curves[cid], x, y, eps)
            if s == 0:
                raise _BadCell("gap representative within eps of a curve")
            gap_sig[g][cid] = s
    # consistency: grouped curves share signs with their group leader
    lists = {}
    for e_pos, (order, near) in certs.items():
        if order == canon_order:
            gap_map = tuple(range(m + 1))
        elif order == tuple(reversed(canon_order)):
            gap_map = tuple(m - i for i in range(m + 1))
        else:
            continue   # a non-linear relabeling; skip this segment
        eid = geom.edge_ids[e_pos]
        lists[eid] = CrossingList(eid, geom.fid, order,
                                  tuple(near[i] for i in order), gap_map)
    if not lists:
        raise _BadCell("certified orders disagree with the canonical stack")
    entry_curves = tuple(group_curve_ids)
    entry_reps = tuple(reps)
    return CellData(geom.fid, geom.edge_ids, entry_curves, entry_reps, lists,
                    gap_sig, tuple(gap_reps), ())


def _refine_cell(sub: PlanarSubdivision, fid: int, eps: float) -> None:
    """Midpoint-split every boundary edge and cut the corners off."""
    cyc = sub.face_cycle(sub.face_outer[fid])
    mids = []
    for h in list(cyc):
        p, q = sub.he_points(h)
        if p.dist(q) <= 32.0 * eps:
            mids.append(None)
            continue
        v = split_edge(sub, h, 0.5 * (p.x + q.x), 0.5 * (p.y + q.y))
        mids.append(v)
    mid_set = {v for v in mids if v is not None}
    if len(mid_set) < 2:
        return
    # connect consecutive midpoints around the refreshed cycle
    cyc = sub.face_cycle(sub.face_outer[fid])
    positions = [i for i, h in enumerate(cyc) if sub.he_origin[h] in mid_set]
    k = len(cyc)
    current_face = fid
    for idx in range(len(positions)):
        a = positions[idx]
        b = positions[(idx + 1) % len(positions)]
        if (b - a) % k <= 1:
            continue
        cyc_now = sub.face_cycle(sub.face_outer[current_face])
        ha = next((h for h in cyc_now if sub.he_origin[h] == sub.he_origin[cyc[a]]),
                  None)
        hb = next((h for h in cyc_now if sub.he_origin[h] == sub.he_origin[cyc[b]]),
                  None)
        if ha is None or hb is None:
            continue
        add_diagonal(sub, ha, hb)
        # the remaining (central) part keeps growing from the new edge's face
        current_face = sub.he_face[sub.he_prev[hb]]


def _green_pass(sub: PlanarSubdivision, eps: float) -> None:
    """Fan-split any bounded face with more than 3 boundary edges."""
    area_tol = (10.0 * eps) ** 2
    fid = 0
    while fid < sub.num_faces():
        if fid == sub.unbounded_face:
            fid += 1
            continue
        cyc = sub.face_cycle(sub.face_outer[fid])
        if len(cyc) <= 3:
            fid += 1
            continue
        pts = [(sub.vx[sub.he_origin[h]], sub.vy[sub.he_origin[h]]) for h in cyc]
        k = len(pts)
        anchor = None
        for i in sorted(range(k), key=lambda i: sub.he_origin[cyc[i]]):
            ok = True
            ax, ay = pts[i]
            for j in range(k):
                a = (i + j) % k
                b = (i + j + 1) % k
                if a == i or b == i:
                    continue
                cross = ((pts[a][0] - ax) * (pts[b][1] - ay)
                         - (pts[a][1] - ay) * (pts[b][0] - ax))
                if cross <= area_tol:
                    ok = False
                    break
            if ok:
                anchor = i
                break
        if anchor is None:
            from .arrangement import _earclip_cycle
            _earclip_cycle(sub, cyc, area_tol)
            fid += 1
            continue
        i = anchor
        h_anchor = cyc[i]
        # fan: diagonals from anchor to all non-adjacent cycle vertices
        for j in range(2, k - 1):
            target_origin = sub.he_origin[cyc[(i + j) % k]]
            cyc_now = sub.face_cycle(h_anchor)
            hb = next(h for h in cyc_now if sub.he_origin[h] == target_origin)
            add_diagonal(sub, h_anchor, hb)
            h_anchor = next(h for h in sub.face_cycle(sub.he_prev[hb])
                            if sub.he_origin[h] == sub.he_origin[cyc[i]])
        fid += 1


def build_crossing_lists(C: PlanarSubdivision, A: PlanarSubdivision,
                         curves: list[Curve], box: BoundingBox, eps: float,
                         allow_refine: bool = True
                         ) -> tuple[dict[int, CellData], int]:
    """Analyze every bounded cell of C; refine until all cells certify.

    Returns the per-cell data and the number of refinement rounds.  Raises
    AmbiguousOrder when refinement cannot fix a cell.
    """
    groups: dict[int, list[int]] = {}
    key_to_gi: dict[tuple, int] = {}
    for c in curves:
        key = support_key(c, eps)
        gi = key_to_gi.setdefault(key, len(key_to_gi))
        groups.setdefault(gi, []).append(c.id)
    support_pieces = [support_piece(curves[members[0]], box)
                      for gi, members in sorted(groups.items())]
    rounds = 0
    while True:
        bounded = [f for f in range(C.num_faces()) if f != C.unbounded_face]
        geoms = {fid: _CellGeometry(C, fid) for fid in bounded}
        cell_boxes = np.array([geoms[f].bbox for f in bounded]) \
            if bounded else np.zeros((0, 4))
        group_leader_curves = [curves[groups[gi][0]] for gi in sorted(groups)]
        masks = _candidate_curve_mask(group_leader_curves, cell_boxes, eps)
        cand: dict[int, list[int]] = {fid: [] for fid in bounded}
        for gi, mask in enumerate(masks):
            for row in np.nonzero(mask)[0]:
                cand[bounded[int(row)]].append(gi)
        cells: dict[int, CellData] = {}
        bad: list[int] = []
        for fid in bounded:
            try:
                cells[fid] = _analyze_cell(curves, support_pieces, groups,
                                           geoms[fid], cand[fid], eps)
            except _BadCell:
                bad.append(fid)
        if not bad:
            _fill_gap_faces(cells, A, curves, eps)
            return cells, rounds
        if not allow_refine or rounds >= MAX_REFINE_ROUNDS:
            raise AmbiguousOrder(
                f"{len(bad)} cells failed certification after {rounds} rounds")
        for fid in bad:
            _refine_cell(C, fid, eps)
        _green_pass(C, eps)
        rounds += 1


def _fill_gap_faces(cells: dict[int, CellData], A: PlanarSubdivision,
                    curves, eps: float) -> None:
    for cd in cells.values():
        faces = []
        for (x, y) in cd.gap_reps:
            try:
                faces.append(face_walk_locate(A, Point(x, y), eps))
            except OnBoundary:
                faces.append(A.unbounded_face)
        cd.gap_faces = tuple(faces)


# ---------------------------------------------------------------------------
# top-level builders


def _face_labels(A: PlanarSubdivision, curves: list[Curve],
                 cells: dict[int, CellData], eps: float) -> list[FaceLabel]:
    reps: dict[int, Point] = {}
    for cd in cells.values():
        for fid, (x, y) in zip(cd.gap_faces, cd.gap_reps):
            reps.setdefault(fid, Point(x, y))
    labels = []
    for fid in range(A.num_faces()):
        rep = reps.get(fid)
        if rep is None:
            rep = face_representative(A, fid)
        sig = tuple(support_sign(c, rep.x, rep.y, eps) for c in curves)
        labels.append(FaceLabel(fid, sig, rep))
    return labels


def _assemble(curves: list[Curve], kind: str, box: BoundingBox, eps: float,
              C: PlanarSubdivision, A: PlanarSubdivision,
              tangent_count: int, t_start: float) -> AugmentedSubdivision:
    cells, rounds = build_crossing_lists(C, A, curves, box, eps)
    labels = _face_labels(A, curves, cells, eps)
    n_entries = sum(len(lst.order) for cd in cells.values()
                    for lst in cd.lists.values())
    bounded = [f for f in range(C.num_faces()) if f != C.unbounded_face]
    c_max = max((C.face_complexity(f) for f in bounded), default=0)
    size = C.num_vertices() + C.num_edges() + C.num_faces() + n_entries
    stats = BuildStats(build_time=time.perf_counter() - t_start, size=size,
                       cell_complexity_max=c_max, tangent_count=tangent_count,
                       refinement_rounds=rounds, num_cells=len(bounded),
                       list_entries=n_entries)
    # pseudo-cell for queries that fall outside the working box
    out_rep = Point(box.xmax + max(box.width, 1.0),
                    box.ymax + max(box.height, 1.0))
    out_sig = np.array([[support_sign(c, out_rep.x, out_rep.y, eps) or 1
                         for c in curves]], dtype=np.int8)
    unbounded_cell = CellData(C.unbounded_face, (), (), (), {}, out_sig,
                              ((out_rep.x, out_rep.y),), (A.unbounded_face,))
    return AugmentedSubdivision(curves, kind, box, eps, C, A, labels, cells,
                                stats, unbounded_cell)


def disk_subdivision(disks: list[Curve]) -> AugmentedSubdivision:
    """Polygonal subdivision and crossing lists for a disk scene."""
    t0 = time.perf_counter()
    for c in disks:
        if not isinstance(c, DiskBoundary):
            raise UnsupportedScene("disk_subdivision expects DiskBoundary curves")
    for i, a in enumerate(disks):
        for b in disks[i + 1:]:
            if a.center.dist(b.center) <= 0 and a.radius == b.radius:
                raise UnsupportedScene("coincident disks are rejected")
    eps = scene_epsilon(disks)
    box = working_box_of(disks)
    pieces = [p for c in disks for p in monotone_decompose(c)]
    A = build_arrangement(pieces, [], eps)
    segs, tangent_count = disk_separators(disks, box, eps)
    C = build_overlay(segs, eps)
    triangulate_cells(C, 3)
    return _assemble(disks, "disks", box, eps, C, A, tangent_count, t0)


def curve_monotone_subdivision(curves: list[Curve]) -> AugmentedSubdivision:
    """Polygonal subdivision for disjoint segments and parabola arcs."""
    t0 = time.perf_counter()
    for c in curves:
        if isinstance(c, DiskBoundary):
            raise UnsupportedScene("graph scene cannot contain disks")
    pieces = [p for c in curves for p in monotone_decompose(c)]
    for i, pa in enumerate(pieces):
        for pb in pieces[i + 1:]:
            if pa.parent == pb.parent:
                continue
            eps0 = scene_epsilon(curves)
            if intersect_pieces(pa, pb, eps0):
                raise NonDisjointInput(
                    f"curves {pa.parent} and {pb.parent} intersect")
    eps = scene_epsilon(curves)
    box = working_box_of(curves)
    A = build_arrangement(pieces, [], eps)
    segs = arc_separators(curves, pieces, box, eps)
    C = build_overlay(segs, eps)
    triangulate_cells(C, 3)
    return _assemble(curves, "arcs", box, eps, C, A, 0, t0)


# ---------------------------------------------------------------------------
# empirical verification


@dataclass
class MonotoneReport:
    cells_checked: int = 0
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_curve_monotone(aug: AugmentedSubdivision,
                          samples_per_cell: int = 100) -> MonotoneReport:
    """Sample boundary segments and re-check the stored list order.

    For every cell with crossings, take the cell's first stored segment,
    draw random points on it and verify (a) every listed curve keeps its
    stored near-side sign at the sample and (b) casting the inward
    perpendicular orders the crossings exactly as stored.
    """
    report = MonotoneReport()
    C = aug.C
    for fid, cd in sorted(aug.cells.items()):
        if not cd.entry_curves:
            continue
        report.cells_checked += 1
        eid = min(cd.lists)
        lst = cd.lists[eid]
        geom = _CellGeometry(C, fid)
        e_pos = geom.edge_ids.index(eid)
        pts = geom.pts
        k = len(pts)
        x1, y1 = pts[e_pos]
        x2, y2 = pts[(e_pos + 1) % k]
        rng = np.random.default_rng(fid + 1)
        ex, ey = x2 - x1, y2 - y1
        L = math.hypot(ex, ey)
        nx, ny = -ey / L, ex / L   # cell lies left of the CCW boundary
        supports = {cid: support_piece(aug.curves[cid], aug.working_box)
                    for cid in cd.entry_curves}
        for f in rng.uniform(0.05, 0.95, samples_per_cell):
            px, py = x1 + f * ex, y1 + f * ey
            sig_ok = True
            for pos, idx in enumerate(lst.order):
                cid = cd.entry_curves[idx]
                s = support_sign(aug.curves[cid], px, py, aug.eps)
                if s == 0:
                    sig_ok = False
                    break
                if s != lst.near_signs[pos]:
                    report.failures.append(
                        (fid, f"near-side sign flip for curve {cid}"))
                    sig_ok = False
                    break
            if not sig_ok:
                continue
            ray_len = 3.0 * geom.diam
            qx, qy = px + nx * ray_len, py + ny * ray_len
            t_exit = ray_len
            for j, (sx1, sy1, sx2, sy2) in enumerate(geom.edges()):
                if j == e_pos:
                    continue
                rxx, ryy = sx2 - sx1, sy2 - sy1
                denom = nx * ryy - ny * rxx
                if abs(denom) < 1e-300:
                    continue
                t = ((sx1 - px) * ryy - (sy1 - py) * rxx) / denom
                u = ((sx1 - px) * ny - (sy1 - py) * nx) / denom
                if -1e-12 <= u <= 1 + 1e-12 and 0 < t < t_exit:
                    t_exit = t
            ts = {}
            usable = True
            for pos, idx in enumerate(lst.order):
                cid = cd.entry_curves[idx]
                hits = [u * math.hypot(qx - px, qy - py)
                        for _t, u in piece_segment_hits(
                            supports[cid], px, py, qx, qy, aug.eps)]
                hits = [h for h in hits if 0 < h < t_exit - aug.eps]
                if len(hits) != 1:
                    usable = False
                    break
                ts[pos] = hits[0]
            if usable and len(ts) >= 2:
                seq = [ts[pos] for pos in range(len(lst.order))]
                if seq != sorted(seq):
                    report.failures.append((fid, "ray order != stored order"))
    return report
