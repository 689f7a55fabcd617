import math

import numpy as np
import pytest

from curveloc.geometry_core import (
    Point, DiskBoundary, Segment, MonotonePiece, monotone_decompose,
    support_sign,
)
from curveloc.arrangement import (
    PlanarSubdivision, build_overlay, build_arrangement, triangulate_cells,
    face_walk_locate, validate_dcel, add_diagonal, split_edge, DegenerateOverlap,
    CurvedCell, OnBoundary, face_representative,
)

EPS = 1e-9


def box_segments(x0, y0, x1, y1):
    return [(x0, y0, x1, y0), (x1, y0, x1, y1), (x1, y1, x0, y1), (x0, y1, x0, y0)]


def flood_fill_region_count(curves, box, res=512):
    """Grid flood fill of sign-vector classes: independent face-count oracle."""
    from scipy import ndimage
    xs = np.linspace(box[0], box[2], res)
    ys = np.linspace(box[1], box[3], res)
    X, Y = np.meshgrid(xs, ys)
    key = np.zeros(X.shape, dtype=np.int64)
    for i, c in enumerate(curves):
        s = np.sign((X - c.center.x) ** 2 + (Y - c.center.y) ** 2 - c.radius ** 2)
        key = key * 3 + (s.astype(np.int64) + 1)
    regions = 0
    for val in np.unique(key):
        lab, n = ndimage.label(key == val)
        regions += n
    return regions


# ---------------------------------------------------------------------------
# straight overlays


def test_overlay_single_box():
    sub = build_overlay(box_segments(0, 0, 1, 1), EPS)
    assert sub.num_vertices() == 4
    assert sub.num_edges() == 4
    assert sub.num_faces() == 2
    assert validate_dcel(sub) == []


def test_overlay_box_with_cross():
    segs = box_segments(0, 0, 2, 2) + [(0, 1, 2, 1), (1, 0, 1, 2)]
    sub = build_overlay(segs, EPS)
    # 4 corners + 4 edge midpoints + 1 center
    assert sub.num_vertices() == 9
    assert sub.num_edges() == 12
    assert sub.num_faces() == 5   # 4 quadrants + unbounded
    assert validate_dcel(sub) == []


def test_overlay_crossing_diagonals():
    segs = box_segments(0, 0, 2, 2) + [(0, 0, 2, 2), (0, 2, 2, 0)]
    sub = build_overlay(segs, EPS)
    assert validate_dcel(sub) == []
    assert sub.num_faces() == 5


def test_overlay_t_junction():
    segs = box_segments(0, 0, 2, 2) + [(1, 0, 1, 1), (0, 1, 2, 1)]
    sub = build_overlay(segs, EPS)
    assert validate_dcel(sub) == []
    # lower-left, lower-right, upper cell, unbounded
    assert sub.num_faces() == 4


def test_overlay_two_disjoint_segments():
    segs = [(0, 0, 1, 0), (3, 1, 4, 1)]
    sub = build_overlay(segs, EPS)
    assert validate_dcel(sub) == []
    assert sub.num_faces() == 1   # only the unbounded face
    assert sub.num_vertices() == 4 and sub.num_edges() == 2


def test_overlay_collinear_overlap_dedupe():
    segs = [(0, 0, 2, 0), (1, 0, 3, 0), (0, 0, 0, 1)]
    sub = build_overlay(segs, EPS)
    assert validate_dcel(sub) == []
    # collinear overlap splits into 0-1, 1-2, 2-3 without duplicates
    xs = sorted(round(x, 9) for x in sub.vx)
    assert xs.count(1.0) == 1 and xs.count(2.0) == 1


# ---------------------------------------------------------------------------
# curved arrangements


def circle_pieces(*disks):
    out = []
    for d in disks:
        out.extend(monotone_decompose(d))
    return out


def test_single_circle_arrangement():
    sub = build_arrangement(circle_pieces(DiskBoundary(0, Point(0, 0), 1.0)), [], EPS)
    assert sub.num_vertices() == 4
    assert sub.num_edges() == 4
    assert sub.num_faces() == 2
    assert validate_dcel(sub) == []


def test_two_intersecting_circles_faces():
    d1 = DiskBoundary(0, Point(0.0, 0.0), 2.0)
    d2 = DiskBoundary(1, Point(2.0, 0.0), 2.0)
    sub = build_arrangement(circle_pieces(d1, d2), [], EPS)
    assert validate_dcel(sub) == []
    # derived oracle: flood fill of the sign-vector grid finds 4 regions
    assert flood_fill_region_count([d1, d2], (-3, -3, 5, 3)) == 4
    assert sub.num_faces() == 4
    # V: 8 quarter endpoints + 2 intersections; E: 6 arcs per circle
    assert sub.num_vertices() == 10
    assert sub.num_edges() == 12


def test_two_disjoint_circles_flood_fill_agreement():
    d1 = DiskBoundary(0, Point(0.0, 0.0), 1.0)
    d2 = DiskBoundary(1, Point(4.0, 0.5), 1.2)
    sub = build_arrangement(circle_pieces(d1, d2), [], EPS)
    assert validate_dcel(sub) == []
    assert sub.num_faces() == flood_fill_region_count([d1, d2], (-2, -2, 6, 3))


def test_disjoint_arcs_single_face():
    seg1 = monotone_decompose(Segment(0, Point(0, 0), Point(1, 0.2)))
    seg2 = monotone_decompose(Segment(1, Point(3, 1), Point(4, 1.3)))
    sub = build_arrangement(seg1 + seg2, [], EPS)
    assert validate_dcel(sub) == []
    assert sub.num_faces() == 1
    assert sub.num_vertices() - sub.num_edges() + sub.num_faces() == 1 + 2


def test_degenerate_overlap_detected():
    s1 = monotone_decompose(Segment(0, Point(0, 0), Point(2, 0)))
    s2 = monotone_decompose(Segment(1, Point(1, 0), Point(3, 0)))
    with pytest.raises(DegenerateOverlap):
        build_arrangement(s1 + s2, [], EPS)


def test_arrangement_with_extra_segments():
    d = DiskBoundary(0, Point(0, 0), 1.0)
    sub = build_arrangement(circle_pieces(d), [(-2, 0, 2, 0)], EPS)
    assert validate_dcel(sub) == []
    # the chord splits the disk into two bounded faces
    assert sub.num_faces() == 3


# ---------------------------------------------------------------------------
# triangulation


def test_triangulate_convex_pentagon():
    pts = [(math.cos(a), math.sin(a))
           for a in [2 * math.pi * i / 5 for i in range(5)]]
    segs = [(pts[i][0], pts[i][1], pts[(i + 1) % 5][0], pts[(i + 1) % 5][1])
            for i in range(5)]
    sub = build_overlay(segs, EPS)
    assert sub.num_faces() == 2
    triangulate_cells(sub, 3)
    assert validate_dcel(sub) == []
    bounded = [f for f in range(sub.num_faces()) if f != sub.unbounded_face]
    assert len(bounded) == 3
    assert all(sub.face_complexity(f) == 3 for f in bounded)


def test_triangulate_triangle_unchanged():
    segs = [(0, 0, 2, 0), (2, 0, 1, 2), (1, 2, 0, 0)]
    sub = build_overlay(segs, EPS)
    n_faces = sub.num_faces()
    triangulate_cells(sub, 3)
    assert sub.num_faces() == n_faces


def test_triangulate_square_max4_unchanged():
    sub = build_overlay(box_segments(0, 0, 1, 1), EPS)
    triangulate_cells(sub, 4)
    assert sub.num_faces() == 2   # complexity not more than the bound


def test_triangulate_nonconvex():
    pts = [(0, 0), (4, 0), (4, 3), (2, 1), (0, 3)]
    segs = [(pts[i][0], pts[i][1], pts[(i + 1) % 5][0], pts[(i + 1) % 5][1])
            for i in range(5)]
    sub = build_overlay(segs, EPS)
    triangulate_cells(sub, 3)
    assert validate_dcel(sub) == []
    bounded = [f for f in range(sub.num_faces()) if f != sub.unbounded_face]
    assert all(sub.face_complexity(f) == 3 for f in bounded)
    # area preserved
    total = sum(sub.cycle_area(sub.face_cycle(sub.face_outer[f])) for f in bounded)
    assert total == pytest.approx(8.0)


def test_triangulate_square_with_hole():
    segs = box_segments(0, 0, 6, 6) + box_segments(2, 2, 4, 4)
    sub = build_overlay(segs, EPS)
    assert validate_dcel(sub) == []
    ring = [f for f in range(sub.num_faces())
            if f != sub.unbounded_face and sub.face_inner[f]]
    assert len(ring) == 1
    triangulate_cells(sub, 3)
    assert validate_dcel(sub) == []
    bounded = [f for f in range(sub.num_faces()) if f != sub.unbounded_face]
    assert all(sub.face_complexity(f) == 3 for f in bounded)
    total = sum(sub.cycle_area(sub.face_cycle(sub.face_outer[f])) for f in bounded)
    assert total == pytest.approx(36.0 - 4.0 + 4.0)


def test_triangulate_rejects_curved():
    d = DiskBoundary(0, Point(0, 0), 1.0)
    sub = build_arrangement(circle_pieces(d), [(-2, -2, 2, -2), (2, -2, 2, 2),
                                               (2, 2, -2, 2), (-2, 2, -2, -2)], EPS)
    with pytest.raises(CurvedCell):
        triangulate_cells(sub, 3)


# ---------------------------------------------------------------------------
# face walk and validation


def test_face_walk_unit_circle():
    d = DiskBoundary(0, Point(0, 0), 1.0)
    sub = build_arrangement(circle_pieces(d), [], EPS)
    inside = face_walk_locate(sub, Point(0.0, 0.1))
    outside = face_walk_locate(sub, Point(10.0, 10.0))
    assert outside == sub.unbounded_face
    assert inside != sub.unbounded_face


def test_face_walk_on_boundary():
    sub = build_overlay(box_segments(0, 0, 1, 1), EPS)
    with pytest.raises(OnBoundary):
        face_walk_locate(sub, Point(0.5, 1e-12))


def test_face_walk_matches_sign_vector_grouping():
    d1 = DiskBoundary(0, Point(0.0, 0.0), 1.5)
    d2 = DiskBoundary(1, Point(1.4, 0.3), 1.0)
    sub = build_arrangement(circle_pieces(d1, d2), [], EPS)
    rng = np.random.default_rng(3)
    face_to_signs = {}
    for _ in range(300):
        q = Point(rng.uniform(-2, 3), rng.uniform(-2, 2))
        s1 = support_sign(d1, q.x, q.y, EPS)
        s2 = support_sign(d2, q.x, q.y, EPS)
        if s1 == 0 or s2 == 0:
            continue
        try:
            fid = face_walk_locate(sub, q)
        except OnBoundary:
            continue
        key = (s1, s2)
        face_to_signs.setdefault(fid, set()).add(key)
    for fid, signs in face_to_signs.items():
        assert len(signs) == 1


def test_face_walk_insertion_order_invariance():
    d1 = DiskBoundary(0, Point(0.0, 0.0), 1.5)
    d2 = DiskBoundary(1, Point(1.4, 0.3), 1.0)
    s1 = build_arrangement(circle_pieces(d1, d2), [], EPS)
    s2 = build_arrangement(circle_pieces(d2, d1), [], EPS)
    rng = np.random.default_rng(4)
    pairs = []
    for _ in range(200):
        q = Point(rng.uniform(-2, 3), rng.uniform(-2, 2))
        try:
            pairs.append((face_walk_locate(s1, q), face_walk_locate(s2, q)))
        except OnBoundary:
            continue
    mapping = {}
    for a, b in pairs:
        assert mapping.setdefault(a, b) == b


def test_validate_detects_corruption():
    sub = build_overlay(box_segments(0, 0, 1, 1), EPS)
    assert validate_dcel(sub) == []
    sub.he_next[0] = sub.he_next[2]
    assert validate_dcel(sub) != []


def test_face_representative_lands_inside():
    segs = box_segments(0, 0, 2, 2) + [(0, 0, 2, 2)]
    sub = build_overlay(segs, EPS)
    for fid in range(sub.num_faces()):
        if fid == sub.unbounded_face:
            continue
        rep = face_representative(sub, fid)
        assert sub.point_in_face(fid, rep)


def test_split_edge_and_diagonal():
    sub = build_overlay(box_segments(0, 0, 2, 2), EPS)
    inner = [f for f in range(sub.num_faces()) if f != sub.unbounded_face][0]
    cyc = sub.face_cycle(sub.face_outer[inner])
    h_bottom = next(h for h in cyc
                    if sub.vy[sub.he_origin[h]] == 0 and sub.vy[sub.dest(h)] == 0)
    v = split_edge(sub, h_bottom, 1.0, 0.0)
    assert validate_dcel(sub) == []
    assert sub.num_vertices() == 5
    cyc = sub.face_cycle(sub.face_outer[inner])
    assert len(cyc) == 5
    h_new = next(h for h in cyc if sub.he_origin[h] == v)
    h_top = next(h for h in cyc
                 if sub.vy[sub.he_origin[h]] == 2 and sub.vx[sub.he_origin[h]] == 2)
    add_diagonal(sub, h_new, h_top)
    assert validate_dcel(sub) == []
    assert sub.num_faces() == 3
