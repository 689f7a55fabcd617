import math

import pytest
from hypothesis import given, settings, strategies as st

from curveloc.geometry_core import (
    ABOVE, BELOW, ON, OUTSIDE_SPAN, CONVEX, CONCAVE, LINEAR,
    Point, BoundingBox, Segment, DiskBoundary, ParabolaArc,
    monotone_decompose, above_below, intersect_pieces, common_tangents,
    tangent_line_at, bounding_box, disk_tangents, support_sign,
    UnsupportedPair, PointNotOnCurve, NoSeparatingTangent, scene_epsilon,
)

EPS = 1e-9


def piece_samples(piece, k=1000, seed=7):
    import random
    rng = random.Random(seed)
    ts = sorted(rng.uniform(piece.t0, piece.t1) for _ in range(k))
    return [piece.point_at(t) for t in ts]


# ---------------------------------------------------------------------------
# monotone_decompose


def test_decompose_circle_quarters():
    disk = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    pieces = monotone_decompose(disk)
    assert len(pieces) == 4
    ends = set()
    for p in pieces:
        e0, e1 = p.endpoints()
        ends.add((round(e0.x, 9), round(e0.y, 9)))
        ends.add((round(e1.x, 9), round(e1.y, 9)))
    assert ends == {(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)}


def test_decompose_parabola_splits_at_vertex():
    arc = ParabolaArc(0, 1.0, 0.0, 0.0, -1.0, 2.0)
    pieces = monotone_decompose(arc)
    assert len(pieces) == 2
    assert pieces[0].t0 == -1.0 and pieces[0].t1 == 0.0
    assert pieces[1].t0 == 0.0 and pieces[1].t1 == 2.0
    assert all(p.convexity == CONVEX for p in pieces)


def test_decompose_segment_single_linear():
    seg = Segment(0, Point(0.0, 0.0), Point(1.0, 1.0))
    pieces = monotone_decompose(seg)
    assert len(pieces) == 1
    assert pieces[0].convexity == LINEAR


def test_decompose_pieces_cover_curve():
    arc = ParabolaArc(0, 2.0, -3.0, 1.0, -2.0, 3.0)
    pieces = monotone_decompose(arc)
    assert pieces[0].t0 == -2.0
    assert pieces[-1].t1 == 3.0
    for a, b in zip(pieces, pieces[1:]):
        assert a.t1 == b.t0


def test_pieces_strictly_monotone_on_samples():
    curves = [
        DiskBoundary(0, Point(0.3, -0.2), 1.7),
        ParabolaArc(1, -0.8, 1.0, 2.0, -1.5, 2.5),
        Segment(2, Point(0.0, 0.0), Point(2.0, 5.0)),
    ]
    for curve in curves:
        for piece in monotone_decompose(curve):
            pts = piece_samples(piece, k=1000)
            xs = [p.x for p in pts]
            ys = [p.y for p in pts]
            sx = set(math.copysign(1, b - a) for a, b in zip(xs, xs[1:]) if b != a)
            sy = set(math.copysign(1, b - a) for a, b in zip(ys, ys[1:]) if b != a)
            assert len(sx) <= 1 and len(sy) <= 1


def test_piece_convexity_sign_constant():
    disk = DiskBoundary(0, Point(0.0, 0.0), 2.0)
    for piece in monotone_decompose(disk):
        mid = 0.5 * (piece.t0 + piece.t1)
        upper = math.sin(mid) > 0
        assert piece.convexity == (CONCAVE if upper else CONVEX)


# ---------------------------------------------------------------------------
# above_below


def test_above_below_parabola_trivial():
    piece = monotone_decompose(ParabolaArc(0, 1.0, 0.0, 0.0, 0.0, 3.0))[0]
    assert above_below(piece, Point(2.0, 5.0), EPS) == ABOVE
    assert above_below(piece, Point(1.0, 1.0), EPS) == ON
    assert above_below(piece, Point(2.0, 3.0), EPS) == BELOW
    assert above_below(piece, Point(5.0, 1.0), EPS) == OUTSIDE_SPAN


def test_above_below_lower_left_arc_derived():
    # brute-force oracle: the lower-left quarter arc is the graph
    # y = -sqrt(1 - x^2) over [-1, 0]; q=(-0.5,-0.5) sits above that graph,
    # which coincides with being inside the circle for a lower arc.
    disk = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    lower_left = monotone_decompose(disk)[2]
    q = Point(-0.5, -0.5)
    assert q.x ** 2 + q.y ** 2 < 1.0
    assert -math.sqrt(1 - 0.25) < q.y
    assert above_below(lower_left, q, EPS) == ABOVE
    # sampled cross-check against the graph
    for x in [-0.9, -0.7, -0.5, -0.3, -0.1]:
        g = -math.sqrt(1 - x * x)
        assert above_below(lower_left, Point(x, g + 0.05), EPS) == ABOVE
        assert above_below(lower_left, Point(x, g - 0.05), EPS) == BELOW


def test_above_below_vertical_segment():
    piece = monotone_decompose(Segment(0, Point(1.0, 0.0), Point(1.0, 2.0)))[0]
    assert above_below(piece, Point(0.5, 1.0), EPS) == ABOVE
    assert above_below(piece, Point(1.5, 1.0), EPS) == BELOW
    assert above_below(piece, Point(0.5, 5.0), EPS) == OUTSIDE_SPAN


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-0.99, 2.99), dy=st.floats(0.01, 5.0))
def test_above_below_antisymmetry(x, dy):
    arc = ParabolaArc(0, 0.7, -0.4, 0.3, -1.0, 3.0)
    for piece in monotone_decompose(arc):
        if not (piece.t0 <= x <= piece.t1):
            continue
        f = piece.graph_y(x)
        up = above_below(piece, Point(x, f + dy), EPS)
        dn = above_below(piece, Point(x, f - dy), EPS)
        assert up == ABOVE and dn == BELOW


# ---------------------------------------------------------------------------
# intersect_pieces


def all_pair_intersections(c1, c2, eps=EPS):
    pts = []
    for a in monotone_decompose(c1):
        for b in monotone_decompose(c2):
            pts.extend(intersect_pieces(a, b, eps))
    uniq = []
    for p in pts:
        if all(p.dist(q) > 10 * eps for q in uniq):
            uniq.append(p)
    return uniq


def test_intersect_two_circles_symmetric():
    c1 = DiskBoundary(0, Point(0.0, 0.0), 2.0)
    c2 = DiskBoundary(1, Point(2.0, 0.0), 2.0)
    pts = sorted(all_pair_intersections(c1, c2), key=lambda p: p.y)
    assert len(pts) == 2
    assert pts[0].x == pytest.approx(1.0, abs=1e-9)
    assert pts[0].y == pytest.approx(-math.sqrt(3.0), abs=1e-9)
    assert pts[1].y == pytest.approx(math.sqrt(3.0), abs=1e-9)


def test_intersect_two_parabolas_symmetric():
    q1 = ParabolaArc(0, 1.0, 0.0, 0.0, -3.0, 3.0)
    q2 = ParabolaArc(1, -1.0, 0.0, 2.0, -3.0, 3.0)
    pts = sorted(all_pair_intersections(q1, q2), key=lambda p: p.x)
    assert len(pts) == 2
    assert pts[0].x == pytest.approx(-1.0, abs=1e-9)
    assert pts[0].y == pytest.approx(1.0, abs=1e-9)
    assert pts[1].x == pytest.approx(1.0, abs=1e-9)


def test_intersect_disjoint_circles_empty():
    c1 = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    c2 = DiskBoundary(1, Point(5.0, 0.0), 1.0)
    assert all_pair_intersections(c1, c2) == []


def test_intersect_mixed_family_rejected():
    arc = monotone_decompose(DiskBoundary(0, Point(0.0, 0.0), 1.0))[0]
    par = monotone_decompose(ParabolaArc(1, 1.0, 0.0, 0.0, 0.0, 1.0))[0]
    with pytest.raises(UnsupportedPair):
        intersect_pieces(arc, par, EPS)


def test_intersections_satisfy_both_equations():
    c1 = DiskBoundary(0, Point(0.1, -0.3), 1.7)
    c2 = DiskBoundary(1, Point(1.2, 0.4), 1.1)
    eps = scene_epsilon([c1, c2])
    for p in all_pair_intersections(c1, c2, eps):
        for c in (c1, c2):
            r = math.hypot(p.x - c.center.x, p.y - c.center.y) - c.radius
            assert abs(r) <= 10 * eps
    # swapping arguments yields the same point set
    a = {(round(p.x, 7), round(p.y, 7)) for p in all_pair_intersections(c1, c2, eps)}
    b = {(round(p.x, 7), round(p.y, 7)) for p in all_pair_intersections(c2, c1, eps)}
    assert a == b


# ---------------------------------------------------------------------------
# tangents


def test_unit_disk_tangents_derived():
    # unit disks at (0,0) and (4,0): y=1, y=-1 and two lines through (2,0)
    # with slopes +-1/sqrt(3); verified below by touch-point residuals.
    d1 = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    d2 = DiskBoundary(1, Point(4.0, 0.0), 1.0)
    tangs = disk_tangents(d1, d2, EPS)
    assert len(tangs) == 4
    for t1, t2 in tangs:
        assert abs(math.hypot(*(t1.x - 0.0, t1.y - 0.0)) - 1.0) < 1e-9
        assert abs(math.hypot(t2.x - 4.0, t2.y) - 1.0) < 1e-9
    # identify the external pair y=+-1 and internal slopes +-1/sqrt(3)
    slopes = []
    for t1, t2 in tangs:
        dx, dy = t2.x - t1.x, t2.y - t1.y
        slopes.append(dy / dx if abs(dx) > 1e-12 else math.inf)
    slopes.sort()
    assert slopes[0] == pytest.approx(-1.0 / math.sqrt(3.0), abs=1e-9)
    assert slopes[1] == pytest.approx(0.0, abs=1e-12)
    assert slopes[2] == pytest.approx(0.0, abs=1e-12)
    assert slopes[3] == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-9)


def test_tangent_count_pair_in_general_position():
    d1 = DiskBoundary(0, Point(0.3, 0.7), 0.9)
    d2 = DiskBoundary(1, Point(4.1, -0.6), 1.4)
    assert len(disk_tangents(d1, d2, EPS)) == 4 == 4 * math.comb(2, 2)


def test_concentric_disks_no_tangents():
    d1 = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    d2 = DiskBoundary(1, Point(0.0, 0.0), 2.0)
    assert disk_tangents(d1, d2, EPS) == []


def test_disk_tangent_distance_and_sides():
    d1 = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    d2 = DiskBoundary(1, Point(5.0, 1.0), 2.0)
    eps = scene_epsilon([d1, d2])
    lines = common_tangents(d1, d2, eps=eps)
    assert len(lines) == 4
    external = internal = 0
    for a, b in lines:
        dx, dy = b.x - a.x, b.y - a.y
        L = math.hypot(dx, dy)
        for dsk in (d1, d2):
            dist = abs(dx * (dsk.center.y - a.y) - dy * (dsk.center.x - a.x)) / L
            assert abs(dist - dsk.radius) <= 10 * eps
        s1 = dx * (d1.center.y - a.y) - dy * (d1.center.x - a.x)
        s2 = dx * (d2.center.y - a.y) - dy * (d2.center.x - a.x)
        if s1 * s2 > 0:
            external += 1
        else:
            internal += 1
    assert external == 2 and internal == 2


def test_tangent_line_at_parabola_and_circle():
    box = BoundingBox(-10, -10, 10, 10)
    par = monotone_decompose(ParabolaArc(0, 1.0, 0.0, 0.0, 0.0, 2.0))[0]
    a, b = tangent_line_at(par, Point(1.0, 1.0), box, EPS)
    slope = (b.y - a.y) / (b.x - a.x)
    assert slope == pytest.approx(2.0, abs=1e-9)
    disk = DiskBoundary(1, Point(0.0, 0.0), 1.0)
    top = monotone_decompose(disk)[0]
    a, b = tangent_line_at(top, Point(0.0, 1.0), box, EPS)
    assert a.y == pytest.approx(1.0) and b.y == pytest.approx(1.0)
    right = monotone_decompose(disk)[3]
    a, b = tangent_line_at(right, Point(1.0, 0.0), box, EPS)
    assert a.x == pytest.approx(1.0) and b.x == pytest.approx(1.0)
    with pytest.raises(PointNotOnCurve):
        tangent_line_at(par, Point(1.0, 3.0), box, EPS)


def test_overlapping_arcs_have_no_separating_tangent():
    q1 = ParabolaArc(0, 1.0, 0.0, 0.0, -2.0, 2.0)
    q2 = ParabolaArc(1, -1.0, 0.0, 1.0, -2.0, 2.0)
    with pytest.raises(NoSeparatingTangent):
        common_tangents(q1, q2)


def test_disjoint_parabola_arcs_separating_tangent():
    q1 = ParabolaArc(0, 1.0, 0.0, 0.0, -1.0, 1.0)
    q2 = ParabolaArc(1, -1.0, 0.0, 5.0, -1.0, 1.0)
    lines = common_tangents(q1, q2)
    assert len(lines) >= 1


# ---------------------------------------------------------------------------
# bounding boxes


def test_bbox_quarter_arc():
    disk = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    first_quadrant = monotone_decompose(disk)[0]
    box = bounding_box(first_quadrant)
    assert box.xmin == pytest.approx(0.0, abs=1e-12)
    assert box.ymin == pytest.approx(0.0, abs=1e-12)
    assert box.xmax == pytest.approx(1.0) and box.ymax == pytest.approx(1.0)


def test_bbox_parabola_piece():
    piece = monotone_decompose(ParabolaArc(0, 1.0, 0.0, 0.0, 0.0, 2.0))[0]
    box = bounding_box(piece)
    assert (box.xmin, box.ymin, box.xmax, box.ymax) == (0.0, 0.0, 2.0, 4.0)


def test_bbox_segment():
    piece = monotone_decompose(Segment(0, Point(0.0, 0.0), Point(3.0, 1.0)))[0]
    box = bounding_box(piece)
    assert (box.xmin, box.ymin, box.xmax, box.ymax) == (0.0, 0.0, 3.0, 1.0)


@settings(max_examples=30, deadline=None)
@given(cx=st.floats(-3, 3), cy=st.floats(-3, 3), r=st.floats(0.1, 3))
def test_bbox_contains_samples(cx, cy, r):
    disk = DiskBoundary(0, Point(cx, cy), r)
    for piece in monotone_decompose(disk):
        box = bounding_box(piece)
        for p in piece_samples(piece, k=200):
            assert box.contains(p, slack=1e-9)


def test_support_sign_basics():
    d = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    assert support_sign(d, 0.0, 0.0, EPS) == -1
    assert support_sign(d, 2.0, 0.0, EPS) == 1
    assert support_sign(d, 1.0, 0.0, EPS) == 0
    s = Segment(1, Point(0.0, 0.0), Point(1.0, 0.0))
    assert support_sign(s, 0.5, 0.5, EPS) == 1
    assert support_sign(s, 0.5, -0.5, EPS) == -1
