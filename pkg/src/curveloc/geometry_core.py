"""Geometric primitives for disks, segments and vertical-axis parabola arcs.

Everything here works in plain float64 with a scene-relative tolerance.
Curves are immutable; all predicates are pure functions, so concurrent use
is safe.  The three supported curve families are

* ``Segment``      -- a straight segment between two distinct points,
* ``DiskBoundary`` -- a full circle (boundary of a disk),
* ``ParabolaArc``  -- the graph of y = a*x^2 + b*x + c over [x_lo, x_hi].

A scene may mix segments and parabola arcs, but circles never mix with the
graph family (see ``UnsupportedPair``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


# Relative tolerance applied to the scene diameter (see scene_epsilon).
EPS_RELATIVE = 1e-9

ABOVE = 1
BELOW = -1
ON = 0
OUTSIDE_SPAN = 2

CONVEX = "convex"
CONCAVE = "concave"
LINEAR = "linear"


class GeometryError(Exception):
    pass


class UnsupportedPair(GeometryError):
    """Intersection of a circle arc with a graph-family piece was requested."""


class PointNotOnCurve(GeometryError):
    pass


class NoSeparatingTangent(GeometryError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class BoundingBox:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise GeometryError("bounding box min corner exceeds max corner")

    def contains(self, p: Point, slack: float = 0.0) -> bool:
        return (self.xmin - slack <= p.x <= self.xmax + slack
                and self.ymin - slack <= p.y <= self.ymax + slack)

    def intersects(self, other: "BoundingBox") -> bool:
        return not (self.xmax < other.xmin or other.xmax < self.xmin
                    or self.ymax < other.ymin or other.ymax < self.ymin)

    def strictly_inside(self, other: "BoundingBox") -> bool:
        return (other.xmin < self.xmin and self.xmax < other.xmax
                and other.ymin < self.ymin and self.ymax < other.ymax)

    def inflated(self, margin: float) -> "BoundingBox":
        return BoundingBox(self.xmin - margin, self.ymin - margin,
                           self.xmax + margin, self.ymax + margin)

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @staticmethod
    def union(boxes: list["BoundingBox"]) -> "BoundingBox":
        return BoundingBox(min(b.xmin for b in boxes), min(b.ymin for b in boxes),
                           max(b.xmax for b in boxes), max(b.ymax for b in boxes))


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class Curve:
    id: int = field(default=-1)


@dataclass(frozen=True)
class Segment(Curve):
    p1: Point = Point(0.0, 0.0)
    p2: Point = Point(1.0, 0.0)

    def __post_init__(self):
        if self.p1.x == self.p2.x and self.p1.y == self.p2.y:
            raise GeometryError("segment endpoints coincide")

    def bbox(self) -> BoundingBox:
        return BoundingBox(min(self.p1.x, self.p2.x), min(self.p1.y, self.p2.y),
                           max(self.p1.x, self.p2.x), max(self.p1.y, self.p2.y))


@dataclass(frozen=True)
class DiskBoundary(Curve):
    center: Point = Point(0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise GeometryError(f"radius must be positive, got {self.radius}")

    def bbox(self) -> BoundingBox:
        c, r = self.center, self.radius
        return BoundingBox(c.x - r, c.y - r, c.x + r, c.y + r)

    def point_at(self, angle: float) -> Point:
        return Point(self.center.x + self.radius * math.cos(angle),
                     self.center.y + self.radius * math.sin(angle))


@dataclass(frozen=True)
class ParabolaArc(Curve):
    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    x_lo: float = -1.0
    x_hi: float = 1.0

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise GeometryError("parabola arc needs x_lo < x_hi")
        for v in (self.a, self.b, self.c):
            if not math.isfinite(v):
                raise GeometryError("non-finite parabola coefficient")

    def y_at(self, x: float) -> float:
        return (self.a * x + self.b) * x + self.c

    def slope_at(self, x: float) -> float:
        return 2.0 * self.a * x + self.b

    def bbox(self) -> BoundingBox:
        ys = [self.y_at(self.x_lo), self.y_at(self.x_hi)]
        if self.a != 0.0:
            xv = -self.b / (2.0 * self.a)
            if self.x_lo < xv < self.x_hi:
                ys.append(self.y_at(xv))
        return BoundingBox(self.x_lo, min(ys), self.x_hi, max(ys))


def curve_bbox(curve: Curve) -> BoundingBox:
    return curve.bbox()


def scene_epsilon(curves: list[Curve], default_diameter: float = 1.0) -> float:
    """Scene-relative tolerance: EPS_RELATIVE times the input bbox diameter."""
    if not curves:
        return EPS_RELATIVE * default_diameter
    box = BoundingBox.union([curve_bbox(c) for c in curves])
    return EPS_RELATIVE * max(box.diameter(), default_diameter * 1e-12)


# ---------------------------------------------------------------------------
# supporting-curve sign predicate (shared with the brute-force oracle)


def support_sign(curve: Curve, x: float, y: float, eps: float) -> int:
    """Sign of (x, y) against the curve's supporting locus.

    For a disk boundary: +1 outside the circle, -1 inside.
    For a parabola arc:  +1 above the full graph, -1 below.
    For a segment:       +1 left of the lexicographically directed support
    line (equals "above" for non-vertical lines).  0 when the residual is
    within eps of the locus.
    """
    if isinstance(curve, DiskBoundary):
        d = math.hypot(x - curve.center.x, y - curve.center.y) - curve.radius
        if abs(d) <= eps:
            return 0
        return 1 if d > 0 else -1
    if isinstance(curve, ParabolaArc):
        r = y - curve.y_at(x)
        # convert y-residual to approximate distance via the local slope
        m = curve.slope_at(x)
        d = r / math.hypot(1.0, m)
        if abs(d) <= eps:
            return 0
        return 1 if r > 0 else -1
    if isinstance(curve, Segment):
        p1, p2 = _lex_sorted(curve.p1, curve.p2)
        dx, dy = p2.x - p1.x, p2.y - p1.y
        cr = dx * (y - p1.y) - dy * (x - p1.x)
        d = cr / math.hypot(dx, dy)
        if abs(d) <= eps:
            return 0
        return 1 if cr > 0 else -1
    raise GeometryError(f"unknown curve type {type(curve)!r}")


def _lex_sorted(p1: Point, p2: Point) -> tuple[Point, Point]:
    if (p1.x, p1.y) <= (p2.x, p2.y):
        return p1, p2
    return p2, p1


# ---------------------------------------------------------------------------
# monotone pieces


@dataclass(frozen=True)
class MonotonePiece:
    """An xy-monotone, totally convex/concave fragment of one input curve.

    ``kind`` is one of ``seg`` / ``arc`` / ``par``:
      * seg: straight segment from (x1, y1) to (x2, y2),
      * arc: circular arc of circle (cx, cy, r) over angles [t0, t1], with
        t1 - t0 <= pi/2 and the arc inside a single axis quadrant,
      * par: parabola graph over x in [t0, t1].
    """
    parent: int
    piece_index: int
    kind: str
    params: tuple
    t0: float
    t1: float
    convexity: str

    # -- geometry helpers -------------------------------------------------

    def point_at(self, t: float) -> Point:
        if self.kind == "seg":
            x1, y1, x2, y2 = self.params
            return Point(x1 + t * (x2 - x1), y1 + t * (y2 - y1))
        if self.kind == "arc":
            cx, cy, r = self.params
            return Point(cx + r * math.cos(t), cy + r * math.sin(t))
        a, b, c = self.params
        return Point(t, (a * t + b) * t + c)

    def midpoint(self) -> Point:
        return self.point_at(0.5 * (self.t0 + self.t1))

    def endpoints(self) -> tuple[Point, Point]:
        return self.point_at(self.t0), self.point_at(self.t1)

    def tangent_at(self, t: float) -> tuple[float, float]:
        """Unit tangent in the direction of increasing parameter."""
        if self.kind == "seg":
            x1, y1, x2, y2 = self.params
            d = math.hypot(x2 - x1, y2 - y1)
            return (x2 - x1) / d, (y2 - y1) / d
        if self.kind == "arc":
            return -math.sin(t), math.cos(t)
        a, b, _ = self.params
        m = 2.0 * a * t + b
        d = math.hypot(1.0, m)
        return 1.0 / d, m / d

    def bbox(self) -> BoundingBox:
        p0, p1 = self.endpoints()
        return BoundingBox(min(p0.x, p1.x), min(p0.y, p1.y),
                           max(p0.x, p1.x), max(p0.y, p1.y))

    def as_graph(self) -> tuple[float, float] | None:
        """x-range when the piece is a function graph over x, else None."""
        if self.kind == "par":
            return self.t0, self.t1
        if self.kind == "seg":
            x1, _, x2, _ = self.params
            if x1 == x2:
                return None
            return min(x1, x2), max(x1, x2)
        cx, cy, r = self.params
        p0, p1 = self.endpoints()
        if abs(p0.x - p1.x) <= 0.0:
            return None
        return min(p0.x, p1.x), max(p0.x, p1.x)

    def graph_y(self, x: float) -> float:
        """y on the piece at abscissa x (caller checks the span)."""
        if self.kind == "par":
            a, b, c = self.params
            return (a * x + b) * x + c
        if self.kind == "seg":
            x1, y1, x2, y2 = self.params
            if x1 == x2:
                raise GeometryError("vertical segment is not a graph")
            t = (x - x1) / (x2 - x1)
            return y1 + t * (y2 - y1)
        cx, cy, r = self.params
        inside = r * r - (x - cx) ** 2
        inside = max(inside, 0.0)
        root = math.sqrt(inside)
        # which branch: decided by the quadrant of the arc
        mid = 0.5 * (self.t0 + self.t1)
        return cy + root if math.sin(mid) > 0 else cy - root


def monotone_decompose(curve: Curve) -> list[MonotonePiece]:
    """Split a curve at its x- and y-extreme points.

    Circles give four quarter arcs, parabola arcs split at the vertex,
    segments pass through unchanged.
    """
    if isinstance(curve, Segment):
        return [MonotonePiece(curve.id, 0, "seg",
                              (curve.p1.x, curve.p1.y, curve.p2.x, curve.p2.y),
                              0.0, 1.0, LINEAR)]
    if isinstance(curve, DiskBoundary):
        c, r = curve.center, curve.radius
        quarters = [(0.0, 0.5 * math.pi, CONCAVE),      # right-top: upper branch
                    (0.5 * math.pi, math.pi, CONCAVE),  # top-left: upper branch
                    (math.pi, 1.5 * math.pi, CONVEX),   # left-bottom: lower branch
                    (1.5 * math.pi, 2.0 * math.pi, CONVEX)]
        return [MonotonePiece(curve.id, i, "arc", (c.x, c.y, r), t0, t1, conv)
                for i, (t0, t1, conv) in enumerate(quarters)]
    if isinstance(curve, ParabolaArc):
        conv = LINEAR if curve.a == 0.0 else (CONVEX if curve.a > 0 else CONCAVE)
        cuts = [curve.x_lo, curve.x_hi]
        if curve.a != 0.0:
            xv = -curve.b / (2.0 * curve.a)
            if curve.x_lo < xv < curve.x_hi:
                cuts = [curve.x_lo, xv, curve.x_hi]
        pieces = []
        for i in range(len(cuts) - 1):
            pieces.append(MonotonePiece(curve.id, i, "par",
                                        (curve.a, curve.b, curve.c),
                                        cuts[i], cuts[i + 1], conv))
        return pieces
    raise GeometryError(f"unknown curve type {type(curve)!r}")


def above_below(piece: MonotonePiece, q: Point, eps: float) -> int:
    """Classify q vertically against the piece viewed as a function graph.

    Returns ABOVE / BELOW / ON, or OUTSIDE_SPAN when q.x (q.y for vertical
    segments) falls outside the piece's parameter range.
    """
    if piece.kind == "seg":
        x1, y1, x2, y2 = piece.params
        if x1 == x2:
            if not (min(y1, y2) - eps <= q.y <= max(y1, y2) + eps):
                return OUTSIDE_SPAN
            d = x1 - q.x   # left of a vertical segment counts as above
            if abs(d) <= eps:
                return ON
            return ABOVE if d > 0 else BELOW
        lo, hi = min(x1, x2), max(x1, x2)
        if not (lo - eps <= q.x <= hi + eps):
            return OUTSIDE_SPAN
        r = q.y - piece.graph_y(q.x)
        m = (y2 - y1) / (x2 - x1)
        d = r / math.hypot(1.0, m)
        if abs(d) <= eps:
            return ON
        return ABOVE if r > 0 else BELOW
    if piece.kind == "par":
        if not (piece.t0 - eps <= q.x <= piece.t1 + eps):
            return OUTSIDE_SPAN
        a, b, _ = piece.params
        r = q.y - piece.graph_y(q.x)
        m = 2.0 * a * q.x + b
        d = r / math.hypot(1.0, m)
        if abs(d) <= eps:
            return ON
        return ABOVE if r > 0 else BELOW
    # circular arc: combine the supporting-circle sign with the branch
    cx, cy, r = piece.params
    span = piece.as_graph()
    if span is None or not (span[0] - eps <= q.x <= span[1] + eps):
        return OUTSIDE_SPAN
    d = math.hypot(q.x - cx, q.y - cy) - r
    if abs(d) <= eps:
        # on the circle; make sure it is this arc's branch
        mid = 0.5 * (piece.t0 + piece.t1)
        branch_y = cy + math.copysign(1.0, math.sin(mid)) * abs(q.y - cy)
        if abs((cy + (q.y - cy)) - branch_y) <= 2 * eps or q.y == cy:
            return ON
        d = 0.0
    mid = 0.5 * (piece.t0 + piece.t1)
    upper = math.sin(mid) > 0
    if upper:
        # above an upper branch means outside the circle
        return ABOVE if d > 0 else BELOW
    return ABOVE if d < 0 else BELOW


def bounding_box(piece: MonotonePiece) -> BoundingBox:
    """Tight axis-aligned box; monotone pieces are spanned by their endpoints."""
    return piece.bbox()


# ---------------------------------------------------------------------------
# intersections


def circle_circle_points(c1: Point, r1: float, c2: Point, r2: float,
                         eps: float) -> list[Point]:
    """Intersection points of two full circles (0, 1 or 2 points)."""
    dx, dy = c2.x - c1.x, c2.y - c1.y
    d = math.hypot(dx, dy)
    if d <= eps:
        return []    # concentric (equal circles rejected upstream)
    if d > r1 + r2 + eps or d < abs(r1 - r2) - eps:
        return []
    # distance from c1 to the radical line along (dx, dy)
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h2 = r1 * r1 - a * a
    ux, uy = dx / d, dy / d
    px, py = c1.x + a * ux, c1.y + a * uy
    if h2 <= (eps * max(r1, r2)) :
        return [Point(px, py)]   # tangential contact, reported once
    h = math.sqrt(max(h2, 0.0))
    return [Point(px - h * uy, py + h * ux), Point(px + h * uy, py - h * ux)]


def _quadratic_roots(A: float, B: float, C: float, eps: float) -> list[float]:
    """Real roots of A t^2 + B t + C, stable for small A."""
    if abs(A) <= eps * max(1.0, abs(B), abs(C)) * 1e-6:
        if B == 0.0:
            return []
        return [-C / B]
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    if B >= 0:
        q = -0.5 * (B + sq)
    else:
        q = -0.5 * (B - sq)
    roots = []
    if q != 0.0:
        roots.append(q / A)
        if sq > 0.0:
            roots.append(C / q)
    else:
        roots.append(0.0)
        if sq > 0.0:
            roots.append(-B / A)
    roots.sort()
    return roots


def _arc_contains_angle(piece: MonotonePiece, ang: float, tol: float) -> float | None:
    """Normalized angle within [t0, t1] (tolerance in radians), else None."""
    t0, t1 = piece.t0, piece.t1
    a = ang
    while a < t0 - tol:
        a += 2.0 * math.pi
    while a > t1 + tol:
        a -= 2.0 * math.pi
    if t0 - tol <= a <= t1 + tol:
        return min(max(a, t0), t1)
    return None


def intersect_pieces(p1: MonotonePiece, p2: MonotonePiece, eps: float) -> list[Point]:
    """Transversal/tangential intersections of two same-family pieces.

    Circle arcs pair with circle arcs; graph pieces (segments, parabola
    arcs) pair with each other.  A circle/graph pairing raises
    UnsupportedPair, mirroring the scene homogeneity restriction.
    """
    fam1 = "circ" if p1.kind == "arc" else "graph"
    fam2 = "circ" if p2.kind == "arc" else "graph"
    if fam1 != fam2:
        raise UnsupportedPair("circle and polynomial pieces cannot be mixed")
    if fam1 == "circ":
        cx1, cy1, r1 = p1.params
        cx2, cy2, r2 = p2.params
        if (cx1, cy1, r1) == (cx2, cy2, r2):
            # same supporting circle: shared endpoints only
            pts = []
            for e1 in p1.endpoints():
                for e2 in p2.endpoints():
                    if e1.dist(e2) <= eps:
                        pts.append(e1)
            return _dedupe_points(pts, eps)
        ang_tol = 10.0 * eps / min(r1, r2)
        pts = []
        for pt in circle_circle_points(Point(cx1, cy1), r1, Point(cx2, cy2), r2, eps):
            a1 = math.atan2(pt.y - cy1, pt.x - cx1)
            a2 = math.atan2(pt.y - cy2, pt.x - cx2)
            if (_arc_contains_angle(p1, a1, ang_tol) is not None
                    and _arc_contains_angle(p2, a2, ang_tol) is not None):
                pts.append(pt)
        return _dedupe_points(pts, eps)
    return _intersect_graph_pieces(p1, p2, eps)


def _graph_coeffs(piece: MonotonePiece) -> tuple[float, float, float] | None:
    """(a, b, c) of y = a x^2 + b x + c for non-vertical graph pieces."""
    if piece.kind == "par":
        return piece.params
    x1, y1, x2, y2 = piece.params
    if x1 == x2:
        return None
    m = (y2 - y1) / (x2 - x1)
    return (0.0, m, y1 - m * x1)


def _graph_span(piece: MonotonePiece) -> tuple[float, float]:
    g = piece.as_graph()
    if g is not None:
        return g
    # vertical segment: span in y, caller handles specially
    x1, y1, x2, y2 = piece.params
    return min(y1, y2), max(y1, y2)


def _intersect_graph_pieces(p1: MonotonePiece, p2: MonotonePiece,
                            eps: float) -> list[Point]:
    c1 = _graph_coeffs(p1)
    c2 = _graph_coeffs(p2)
    if c1 is None and c2 is None:
        x1 = p1.params[0]
        x2 = p2.params[0]
        if abs(x1 - x2) > eps:
            return []
        lo1, hi1 = _graph_span(p1)
        lo2, hi2 = _graph_span(p2)
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi + eps:
            return []
        # collinear vertical overlap: endpoints of the shared stretch
        pts = [Point(x1, lo)] if abs(hi - lo) <= eps else [Point(x1, lo), Point(x1, hi)]
        return pts
    if c1 is None or c2 is None:
        vert, graph = (p1, p2) if c1 is None else (p2, p1)
        xv = vert.params[0]
        glo, ghi = _graph_span(graph)
        if not (glo - eps <= xv <= ghi + eps):
            return []
        y = graph.graph_y(min(max(xv, glo), ghi))
        vlo, vhi = _graph_span(vert)
        if vlo - eps <= y <= vhi + eps:
            return [Point(xv, y)]
        return []
    a1, b1, cc1 = c1
    a2, b2, cc2 = c2
    if (a1, b1, cc1) == (a2, b2, cc2):
        lo1, hi1 = _graph_span(p1)
        lo2, hi2 = _graph_span(p2)
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi + eps:
            return []
        pts = [Point(lo, p1.graph_y(lo))]
        if abs(hi - lo) > eps:
            pts.append(Point(hi, p1.graph_y(hi)))
        return pts
    roots = _quadratic_roots(a1 - a2, b1 - b2, cc1 - cc2, eps)
    lo1, hi1 = _graph_span(p1)
    lo2, hi2 = _graph_span(p2)
    pts = []
    for x in roots:
        if lo1 - eps <= x <= hi1 + eps and lo2 - eps <= x <= hi2 + eps:
            pts.append(Point(x, p1.graph_y(min(max(x, lo1), hi1))))
    return _dedupe_points(pts, eps)


def _dedupe_points(pts: list[Point], eps: float) -> list[Point]:
    out: list[Point] = []
    for p in pts:
        if all(p.dist(q) > 2.0 * eps for q in out):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# tangents


def tangent_line_at(piece: MonotonePiece, p: Point, box: BoundingBox,
                    eps: float) -> tuple[Point, Point]:
    """Tangent line of the piece at a point on it, clipped to *box*."""
    if piece.kind == "seg":
        x1, y1, x2, y2 = piece.params
        d = math.hypot(x2 - x1, y2 - y1)
        residual = abs((x2 - x1) * (p.y - y1) - (y2 - y1) * (p.x - x1)) / d
        if residual > 10.0 * eps:
            raise PointNotOnCurve(f"{p} not on segment piece")
        dx, dy = (x2 - x1) / d, (y2 - y1) / d
    elif piece.kind == "par":
        a, b, _ = piece.params
        if abs(p.y - piece.graph_y(p.x)) > 10.0 * eps * (1.0 + abs(2 * a * p.x + b)):
            raise PointNotOnCurve(f"{p} not on parabola piece")
        m = 2.0 * a * p.x + b
        d = math.hypot(1.0, m)
        dx, dy = 1.0 / d, m / d
    else:
        cx, cy, r = piece.params
        if abs(math.hypot(p.x - cx, p.y - cy) - r) > 10.0 * eps:
            raise PointNotOnCurve(f"{p} not on circle piece")
        nx, ny = (p.x - cx) / r, (p.y - cy) / r
        dx, dy = -ny, nx
    return clip_line_to_box(p, dx, dy, box)


def clip_line_to_box(p: Point, dx: float, dy: float,
                     box: BoundingBox) -> tuple[Point, Point]:
    """Chord of *box* along the line through p with direction (dx, dy)."""
    ts = []
    if dx != 0.0:
        ts += [(box.xmin - p.x) / dx, (box.xmax - p.x) / dx]
    if dy != 0.0:
        ts += [(box.ymin - p.y) / dy, (box.ymax - p.y) / dy]
    hits = []
    for t in ts:
        x, y = p.x + t * dx, p.y + t * dy
        slack = 1e-9 * max(box.width, box.height, 1.0)
        if (box.xmin - slack <= x <= box.xmax + slack
                and box.ymin - slack <= y <= box.ymax + slack):
            hits.append(t)
    if not hits:
        raise GeometryError("line does not meet the working box")
    t0, t1 = min(hits), max(hits)
    return (Point(p.x + t0 * dx, p.y + t0 * dy),
            Point(p.x + t1 * dx, p.y + t1 * dy))


def disk_tangents(d1: DiskBoundary, d2: DiskBoundary,
                  eps: float) -> list[tuple[Point, Point]]:
    """Common tangent lines of two disks as (touch point 1, touch point 2).

    Disjoint disks have 4 (2 external + 2 internal); overlapping disks keep
    only the geometrically existing subset; nested or concentric disks have
    none.
    """
    c1, r1 = d1.center, d1.radius
    c2, r2 = d2.center, d2.radius
    d = c1.dist(c2)
    if d <= eps:
        return []
    ux, uy = (c2.x - c1.x) / d, (c2.y - c1.y) / d
    out = []
    for sign_r in (1.0, -1.0):       # external (+) and internal (-) families
        cosphi = (r1 - sign_r * r2) / d
        if abs(cosphi) > 1.0 + 1e-12:
            continue
        cosphi = min(max(cosphi, -1.0), 1.0)
        sinphi = math.sqrt(max(0.0, 1.0 - cosphi * cosphi))
        for s in (1.0, -1.0):
            nx = ux * cosphi - s * uy * sinphi
            ny = uy * cosphi + s * ux * sinphi
            t1 = Point(c1.x + r1 * nx, c1.y + r1 * ny)
            t2 = Point(c2.x + sign_r * r2 * nx, c2.y + sign_r * r2 * ny)
            out.append((t1, t2))
        if sinphi == 0.0:
            out.pop()    # tangent circles: the two internal tangents coincide
    # drop duplicates (tangential configurations)
    dedup: list[tuple[Point, Point]] = []
    for t1, t2 in out:
        dup = False
        for u1, u2 in dedup:
            if t1.dist(u1) <= 10 * eps and t2.dist(u2) <= 10 * eps:
                dup = True
                break
        if not dup and t1.dist(t2) > 10 * eps:
            dedup.append((t1, t2))
    return dedup


def _parabola_common_tangents(q1: ParabolaArc, q2: ParabolaArc,
                              eps: float) -> list[tuple[Point, float]]:
    """Tangent lines shared by two full parabolas as (touch on q1, slope)."""
    a1, b1, c1 = q1.a, q1.b, q1.c
    a2, b2, c2 = q2.a, q2.b, q2.c
    if a1 == 0.0 and a2 == 0.0:
        return []
    if a1 == 0.0:
        # line vs parabola: the unique tangent parallel to the line
        if a2 == 0.0:
            return []
        x2 = (b1 - b2) / (2.0 * a2)
        return [(Point(x2, q2.y_at(x2)), b1)]
    # tangent at x0 on q1: y = m(x - x0) + y1, m = 2 a1 x0 + b1
    # tangency to q2: discriminant of a2 x^2 + (b2 - m) x + (c2 - k) = 0
    # with k = c1 - a1 x0^2; expand to a quadratic in x0
    A = 4.0 * a1 * (a1 - a2) if a2 != 0.0 else None
    if a2 == 0.0:
        x0 = (b2 - b1) / (2.0 * a1)
        return [(Point(x0, q1.y_at(x0)), b2)]
    B = 4.0 * a1 * (b1 - b2)
    C = (b2 - b1) ** 2 - 4.0 * a2 * (c2 - c1)
    # derivation: disc(x0) = (b2-b1-2 a1 x0)^2 - 4 a2 (c2 - c1 + a1 x0^2)
    A = 4.0 * a1 * a1 - 4.0 * a2 * a1
    B = -4.0 * a1 * (b2 - b1)
    C = (b2 - b1) ** 2 - 4.0 * a2 * (c2 - c1)
    out = []
    for x0 in _quadratic_roots(A, B, C, eps):
        m = 2.0 * a1 * x0 + b1
        out.append((Point(x0, q1.y_at(x0)), m))
    return out


def common_tangents(c1: Curve, c2: Curve, box: BoundingBox | None = None,
                    eps: float | None = None) -> list[tuple[Point, Point]]:
    """Common supporting tangent lines of two curves, clipped to *box*.

    Returns a list of segments (point pairs).  For disks the classical 0/2/4
    lines; for graph-family curves the separating tangents of the supports,
    falling back to the perpendicular bisector of the closest approach when
    no analytic tangent separates.  Raises NoSeparatingTangent when the
    curves overlap.
    """
    if eps is None:
        eps = scene_epsilon([c1, c2])
    if box is None:
        b = BoundingBox.union([curve_bbox(c1), curve_bbox(c2)])
        box = b.inflated(0.1 * max(b.width, b.height, 1.0))
    if isinstance(c1, DiskBoundary) and isinstance(c2, DiskBoundary):
        out = []
        for t1, t2 in disk_tangents(c1, c2, eps):
            mid = Point(0.5 * (t1.x + t2.x), 0.5 * (t1.y + t2.y))
            d = t1.dist(t2)
            out.append(clip_line_to_box(mid, (t2.x - t1.x) / d, (t2.y - t1.y) / d, box))
        return out
    if isinstance(c1, DiskBoundary) or isinstance(c2, DiskBoundary):
        raise UnsupportedPair("tangents of mixed disk/graph pairs are unsupported")
    # graph family: try analytic parabola tangents, else closest-pair bisector
    pieces1 = monotone_decompose(c1)
    pieces2 = monotone_decompose(c2)
    for pa in pieces1:
        for pb in pieces2:
            if intersect_pieces(pa, pb, eps):
                raise NoSeparatingTangent("arcs overlap; no separating tangent")
    out = []
    if isinstance(c1, ParabolaArc) and isinstance(c2, ParabolaArc):
        for pt, m in _parabola_common_tangents(c1, c2, eps):
            d = math.hypot(1.0, m)
            line = clip_line_to_box(pt, 1.0 / d, m / d, box)
            if _separates(line, c1, c2, eps):
                out.append(line)
    if not out:
        line = _closest_pair_bisector(c1, c2, box, eps)
        if line is not None and _separates(line, c1, c2, eps):
            out.append(line)
    if not out:
        raise NoSeparatingTangent(f"no separating tangent for curves {c1.id}, {c2.id}")
    return out


def _separates(line: tuple[Point, Point], c1: Curve, c2: Curve, eps: float) -> bool:
    lp = Segment(-1, line[0], line[1])
    s1 = _curve_side_of(lp, c1, eps)
    s2 = _curve_side_of(lp, c2, eps)
    return s1 != 0 and s2 != 0 and s1 != s2


def _curve_side_of(line_seg: Segment, curve: Curve, eps: float) -> int:
    """Which side of the line a curve lies on: +1/-1, 0 when straddling."""
    samples = []
    for piece in monotone_decompose(curve):
        for f in (0.0, 0.25, 0.5, 0.75, 1.0):
            t = piece.t0 + f * (piece.t1 - piece.t0)
            samples.append(piece.point_at(t))
    signs = {support_sign(line_seg, p.x, p.y, eps) for p in samples}
    signs.discard(0)
    if len(signs) != 1:
        return 0
    return signs.pop()


def _closest_pair_bisector(c1: Curve, c2: Curve, box: BoundingBox,
                           eps: float) -> tuple[Point, Point] | None:
    """Perpendicular bisector of the closest approach of two disjoint curves."""
    best = None
    for pa in monotone_decompose(c1):
        for pb in monotone_decompose(c2):
            pbest = _piece_closest_pair(pa, pb)
            if pbest is not None and (best is None or pbest[0] < best[0]):
                best = pbest
    if best is None:
        return None
    _, p, q = best
    mx, my = 0.5 * (p.x + q.x), 0.5 * (p.y + q.y)
    dx, dy = q.x - p.x, q.y - p.y
    d = math.hypot(dx, dy)
    if d <= eps:
        return None
    return clip_line_to_box(Point(mx, my), -dy / d, dx / d, box)


def _piece_closest_pair(pa: MonotonePiece, pb: MonotonePiece,
                        samples: int = 33) -> tuple[float, Point, Point] | None:
    """Sampled closest pair between two pieces (coarse but deterministic)."""
    pts_a = [pa.point_at(pa.t0 + (pa.t1 - pa.t0) * i / (samples - 1.0))
             for i in range(samples)]
    pts_b = [pb.point_at(pb.t0 + (pb.t1 - pb.t0) * i / (samples - 1.0))
             for i in range(samples)]
    best = None
    for p in pts_a:
        for q in pts_b:
            d = p.dist(q)
            if best is None or d < best[0]:
                best = (d, p, q)
    return best


# ---------------------------------------------------------------------------
# element-level helpers used by the arrangement builder


def piece_param_of_point(piece: MonotonePiece, p: Point) -> float:
    """Parameter of a point assumed to lie on the piece, clamped to range."""
    if piece.kind == "seg":
        x1, y1, x2, y2 = piece.params
        dx, dy = x2 - x1, y2 - y1
        t = ((p.x - x1) * dx + (p.y - y1) * dy) / (dx * dx + dy * dy)
    elif piece.kind == "arc":
        cx, cy, _ = piece.params
        ang = math.atan2(p.y - cy, p.x - cx)
        while ang < piece.t0 - 1e-9:
            ang += 2.0 * math.pi
        while ang > piece.t1 + 1e-9:
            ang -= 2.0 * math.pi
        t = ang
    else:
        t = p.x
    return min(max(t, piece.t0), piece.t1)


def piece_signed_curvature(piece: MonotonePiece, t: float, direction: int) -> float:
    """Signed curvature along travel (positive bends left)."""
    if piece.kind == "seg":
        return 0.0
    if piece.kind == "arc":
        r = piece.params[2]
        return direction / r
    a = piece.params[0]
    m = 2.0 * a * t + piece.params[1]
    return direction * 2.0 * a / (1.0 + m * m) ** 1.5


def piece_green_integral(piece: MonotonePiece, ta: float, tb: float) -> float:
    """Integral of (x dy - y dx) along the piece from parameter ta to tb.

    Twice the signed area contribution of the edge to a face cycle.
    """
    if piece.kind == "seg":
        pa = piece.point_at(ta)
        pb = piece.point_at(tb)
        return pa.x * pb.y - pb.x * pa.y
    if piece.kind == "arc":
        cx, cy, r = piece.params
        return (r * r * (tb - ta)
                + cx * r * (math.sin(tb) - math.sin(ta))
                + cy * r * (math.cos(ta) - math.cos(tb)))
    a, _, c = piece.params
    return a * (tb ** 3 - ta ** 3) / 3.0 - c * (tb - ta)


def piece_segment_hits(piece: MonotonePiece, x1: float, y1: float,
                       x2: float, y2: float, eps: float
                       ) -> list[tuple[float, float]]:
    """Intersections of a piece with the segment (x1,y1)-(x2,y2).

    Returns (piece parameter, segment parameter in [0,1]) pairs, the segment
    parameter slack-tolerant by eps.  Tangential double contacts collapse to
    a single hit when the curve stays within eps of the segment between the
    roots.
    """
    dx, dy = x2 - x1, y2 - y1
    L = math.hypot(dx, dy)
    if L <= eps:
        return []
    u_slack = eps / L
    hits: list[tuple[float, float]] = []
    if piece.kind == "seg":
        sx1, sy1, sx2, sy2 = piece.params
        rx, ry = sx2 - sx1, sy2 - sy1
        denom = rx * dy - ry * dx
        if abs(denom) <= 1e-14 * math.hypot(rx, ry) * L:
            return []    # parallel; collinear overlap handled by edge dedupe
        t = ((x1 - sx1) * dy - (y1 - sy1) * dx) / denom
        u = ((x1 - sx1) * ry - (y1 - sy1) * rx) / denom
        t_slack = eps / math.hypot(rx, ry)
        if -t_slack <= t <= 1.0 + t_slack and -u_slack <= u <= 1.0 + u_slack:
            hits.append((min(max(t, 0.0), 1.0), min(max(u, 0.0), 1.0)))
        return hits
    if piece.kind == "arc":
        cx, cy, r = piece.params
        fx, fy = x1 - cx, y1 - cy
        A = dx * dx + dy * dy
        B = 2.0 * (fx * dx + fy * dy)
        C = fx * fx + fy * fy - r * r
        disc = B * B - 4.0 * A * C
        if disc < 0.0:
            return []
        sq = math.sqrt(disc)
        us = [(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)]
        # tangential graze: max gap between curve and chord ~ A*(du)^2/(8r)
        if len(us) == 2:
            depth = A * (us[1] - us[0]) ** 2 / (8.0 * r)
            if depth <= eps:
                us = [0.5 * (us[0] + us[1])]
        ang_tol = 4.0 * eps / r
        for u in us:
            if not (-u_slack <= u <= 1.0 + u_slack):
                continue
            px, py = x1 + u * dx, y1 + u * dy
            ang = math.atan2(py - cy, px - cx)
            a = _arc_contains_angle(piece, ang, ang_tol)
            if a is not None:
                hits.append((a, min(max(u, 0.0), 1.0)))
        return hits
    # parabola graph
    a, b, c = piece.params
    if abs(dx) <= 1e-14 * L:
        # vertical segment: single candidate at x = x1
        x = x1
        if not (piece.t0 - eps <= x <= piece.t1 + eps):
            return []
        y = (a * x + b) * x + c
        u = (y - y1) / dy
        if -u_slack <= u <= 1.0 + u_slack:
            hits.append((min(max(x, piece.t0), piece.t1),
                         min(max(u, 0.0), 1.0)))
        return hits
    # param by u: x(u) = x1 + u dx; y(u) = y1 + u dy; solve y(u) = f(x(u))
    A = a * dx * dx
    B = 2.0 * a * x1 * dx + b * dx - dy
    C = (a * x1 + b) * x1 + c - y1
    us = _quadratic_roots(A, B, C, 0.0)
    if len(us) == 2 and A != 0.0:
        depth = abs(A) * (us[1] - us[0]) ** 2 / 4.0
        m = 2.0 * a * (x1 + 0.5 * (us[0] + us[1]) * dx) + b
        if depth / math.hypot(1.0, m) <= eps:
            us = [0.5 * (us[0] + us[1])]
    for u in us:
        if not (-u_slack <= u <= 1.0 + u_slack):
            continue
        x = x1 + u * dx
        if piece.t0 - eps <= x <= piece.t1 + eps:
            hits.append((min(max(x, piece.t0), piece.t1),
                         min(max(u, 0.0), 1.0)))
    return hits


def element_intersections(e1: MonotonePiece, e2: MonotonePiece, eps: float
                          ) -> list[tuple[float, float, Point]]:
    """Pairwise intersections with parameters on both elements.

    Unlike ``intersect_pieces`` this also pairs circle arcs with straight
    segments (needed when straight connectors are merged into a curved
    arrangement).  Circle/parabola pairs remain unsupported.
    """
    if e1.kind != "arc" and e2.kind == "arc":
        return [(t1, t2, p) for (t2, t1, p) in element_intersections(e2, e1, eps)]
    if e1.kind == "arc" and e2.kind == "seg":
        x1, y1, x2, y2 = e2.params
        out = []
        for t_arc, u in piece_segment_hits(e1, x1, y1, x2, y2, eps):
            out.append((t_arc, u, e1.point_at(t_arc)))
        return out
    pts = intersect_pieces(e1, e2, eps)
    return [(piece_param_of_point(e1, p), piece_param_of_point(e2, p), p)
            for p in pts]


def pieces_overlap(e1: MonotonePiece, e2: MonotonePiece, eps: float) -> bool:
    """True when two pieces share a positive-length stretch of geometry."""
    if e1.kind != e2.kind:
        if {e1.kind, e2.kind} == {"seg", "par"}:
            pass  # a linear "parabola" (a == 0) may coincide with a segment
        else:
            return False
    g1, g2 = _graph_coeffs(e1) if e1.kind != "arc" else None, None
    if e1.kind == "arc" and e2.kind == "arc":
        if e1.params != e2.params:
            return False
        lo, hi = max(e1.t0, e2.t0), min(e1.t1, e2.t1)
        return hi - lo > 10.0 * eps / e1.params[2]
    c1 = _graph_coeffs(e1)
    c2 = _graph_coeffs(e2)
    if c1 is None and c2 is None:   # both vertical segments
        if abs(e1.params[0] - e2.params[0]) > eps:
            return False
        lo1, hi1 = _graph_span(e1)
        lo2, hi2 = _graph_span(e2)
        return min(hi1, hi2) - max(lo1, lo2) > 10.0 * eps
    if c1 is None or c2 is None:
        return False
    if any(abs(a - b) > eps for a, b in zip(c1, c2)):
        return False
    lo1, hi1 = _graph_span(e1)
    lo2, hi2 = _graph_span(e2)
    return min(hi1, hi2) - max(lo1, lo2) > 10.0 * eps
