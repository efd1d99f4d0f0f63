"""Canonical domains: the triangle and square inscribed in the unit circle."""

import math

from .geometry import ConvexPolygon, Point2, Tetrahedron, lerp
from .io import parse_number

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


def triangle() -> ConvexPolygon:
    """Equilateral triangle with circumradius 1: A=(0,0), B=(sqrt3,0), C=(sqrt3/2,3/2)."""
    return ConvexPolygon([(0.0, 0.0), (SQRT3, 0.0), (SQRT3 / 2, 1.5)])


def square() -> ConvexPolygon:
    """Axis-aligned square of side sqrt2 centred at the origin."""
    r = SQRT2 / 2
    return ConvexPolygon([(-r, -r), (r, -r), (r, r), (-r, r)])


def tetrahedron(side: float = SQRT3 / 2) -> Tetrahedron:
    """Regular tetrahedron folded from the triangle's medial net (edge sqrt3/2)."""
    return Tetrahedron.regular(side)


BUILTIN = {"T": triangle, "S": square}


def vertex_label(i: int) -> str:
    return chr(ord("A") + i)


def named_point(P: ConvexPolygon, name: str) -> Point2:
    """Resolve ``A``, ``mid:AB`` or ``x,y`` against ``P``'s vertex labels."""
    name = name.strip()
    labels = {vertex_label(i): v for i, v in enumerate(P.vertices)}
    if name in labels:
        return labels[name]
    if name.startswith("mid:"):
        pair = name[4:]
        if len(pair) != 2 or pair[0] not in labels or pair[1] not in labels:
            raise ValueError(f"unknown edge {pair!r}")
        return lerp(labels[pair[0]], labels[pair[1]], 0.5)
    parts = name.split(",")
    if len(parts) != 2:
        raise ValueError(f"cannot resolve point {name!r}")
    return Point2(parse_number(parts[0]), parse_number(parts[1]))
