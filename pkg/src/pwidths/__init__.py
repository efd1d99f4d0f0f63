"""Widths, billiards and sweepout certificates for convex polygons."""

from .domains import square, tetrahedron, triangle
from .geometry import ConvexPolygon, Line2, Plane3, Tetrahedron
from .widths import geometric_width, lattice_lengths, ls_lower_bound, min_sum_at_least

__all__ = [
    "ConvexPolygon",
    "Line2",
    "Plane3",
    "Tetrahedron",
    "geometric_width",
    "lattice_lengths",
    "ls_lower_bound",
    "min_sum_at_least",
    "square",
    "tetrahedron",
    "triangle",
]

__version__ = "0.1.0"
