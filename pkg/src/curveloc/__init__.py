"""curveloc: point location in arrangements of disks, segments and parabola arcs."""

from .geometry_core import (
    Point,
    BoundingBox,
    Curve,
    Segment,
    DiskBoundary,
    ParabolaArc,
    MonotonePiece,
    monotone_decompose,
    above_below,
    intersect_pieces,
    common_tangents,
    tangent_line_at,
    bounding_box,
    scene_epsilon,
)

__version__ = "0.1.0"
