"""Masses of the explicit sweepout families.

Mass is relative perimeter: only length inside the open domain counts, so
pieces running along the boundary contribute nothing.  Chains are mod 2, so
overlapping collinear pieces cancel in pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .geometry import (
    EPS,
    VERTEX_SNAP,
    BoundaryHit,
    ConvexPolygon,
    GeometryError,
    Line2,
    Plane3,
    Point2,
    Segment2,
    Tetrahedron,
    add,
    clip_segment,
    dot,
    plane_tetrahedron_section,
    polygon_chord,
    scale,
    sub,
)
from .quadrature import branch_length


class NotOnBoundary(GeometryError):
    pass


class NonMonotone(ValueError):
    pass


class ChainMass(NamedTuple):
    """Mass of a slice and the pieces that carry it.

    ``pieces`` holds :class:`Segment2` objects or polylines (tuples of points).
    ``note`` flags special slices, e.g. ``"face"`` for a plane containing a
    tetrahedron face.
    """

    mass: float
    pieces: tuple
    note: str | None = None


def _on_boundary(P: ConvexPolygon, seg: Segment2, tol: float) -> bool:
    for i in range(P.n):
        if abs(P.edge_slack(i, seg.a)) <= tol and abs(P.edge_slack(i, seg.b)) <= tol:
            return True
    return False


def relative_pieces(P: ConvexPolygon, segments: Sequence[Segment2], tol: float = 1e-12):
    """Clip segments to ``P`` and drop what lies in ``dP`` or has no length."""
    out = []
    for s in segments:
        c = clip_segment(P, s)
        if c is None or c.length <= tol:
            continue
        if _on_boundary(P, c, tol):
            continue
        out.append(c)
    return out


def mod2_reduce(segments: Sequence[Segment2], tol: float = 1e-9) -> list[Segment2]:
    """Cancel collinear overlaps pairwise (coverage parity)."""
    groups: list[tuple[Line2, Point2, list]] = []
    for s in segments:
        if s.length <= tol:
            continue
        line = Line2.through(s.a, s.b)
        for g in groups:
            if (
                abs(g[0].a - line.a) <= tol
                and abs(g[0].b - line.b) <= tol
                and abs(g[0].c - line.c) <= tol
            ):
                g[2].append(s)
                break
        else:
            groups.append((line, s.a, [s]))
    out = []
    for line, anchor, segs in groups:
        if len(segs) == 1:
            out.append(segs[0])
            continue
        d = line.direction
        events = []
        for s in segs:
            t0, t1 = sorted((dot(sub(s.a, anchor), d), dot(sub(s.b, anchor), d)))
            events += [t0, t1]
        events.sort()
        merged = []
        for t in events:
            # equal endpoints toggle parity twice and vanish
            if merged and abs(merged[-1] - t) <= tol:
                merged.pop()
            else:
                merged.append(t)
        for k in range(0, len(merged) - 1, 2):
            a = add(anchor, scale(d, merged[k]))
            b = add(anchor, scale(d, merged[k + 1]))
            if merged[k + 1] - merged[k] > tol:
                out.append(Segment2(a, b))
    return out


def chain_mass(P: ConvexPolygon, segments: Sequence[Segment2]) -> ChainMass:
    pieces = mod2_reduce(relative_pieces(P, segments))
    return ChainMass(math.fsum(s.length for s in pieces), tuple(pieces))


# --- the phi map on the triangle ------------------------------------------------


def _locate(T: ConvexPolygon, p) -> BoundaryHit:
    if isinstance(p, BoundaryHit):
        return p
    hit = T.locate(p, VERTEX_SNAP)
    if hit is None:
        raise NotOnBoundary(f"{tuple(p)} is not on the boundary")
    return hit


def _perpendicular(T: ConvexPolygon, hit: BoundaryHit) -> Line2:
    return Line2.from_point_direction(hit.point, T.outward_normal(hit.index))


def phi_segments(T: ConvexPolygon, p1, p2) -> list[Segment2]:
    """Raw pieces of the slice for a pair of boundary points (before clipping).

    Same edge (two vertices count as sharing one): nothing.  One vertex: the
    chord through the other point perpendicular to its edge.  Otherwise the
    two perpendiculars run from ``p1`` and ``p2`` to their crossing point.
    """
    if T.n != 3:
        raise GeometryError("phi is defined on triangles")
    h1, h2 = _locate(T, p1), _locate(T, p2)
    if set(T.edges_at(h1)) & set(T.edges_at(h2)):
        return []
    if h1.kind == "vertex" or h2.kind == "vertex":
        h = h2 if h1.kind == "vertex" else h1
        chord = polygon_chord(T, _perpendicular(T, h))
        return [chord.segment] if chord.kind == "segment" else []
    l1, l2 = _perpendicular(T, h1), _perpendicular(T, h2)
    p = l1.intersect(l2)
    if p is None:  # pragma: no cover - sides of a triangle are never parallel
        raise GeometryError("perpendiculars do not meet")
    return [Segment2(h1.point, p), Segment2(h2.point, p)]


def phi_mass(T: ConvexPolygon, p1, p2) -> ChainMass:
    return chain_mass(T, phi_segments(T, p1, p2))


def phi_mass_at(T: ConvexPolygon, s1: float, s2: float) -> ChainMass:
    """``phi_mass`` at boundary arc-length coordinates measured from vertex 0."""
    return phi_mass(T, T.boundary_point(s1), T.boundary_point(s2))


def pair_phi_mass(T: ConvexPolygon, x, y) -> ChainMass:
    """Mass of the mod 2 sum of two phi slices; ``x``, ``y`` are (s1, s2) pairs."""
    sx = phi_segments(T, T.boundary_point(x[0]), T.boundary_point(x[1]))
    sy = phi_segments(T, T.boundary_point(y[0]), T.boundary_point(y[1]))
    return chain_mass(T, sx + sy)


# --- lines ------------------------------------------------------------------------


def line_sweepout_mass(P: ConvexPolygon, line: Line2) -> ChainMass:
    chord = polygon_chord(P, line)
    if chord.kind != "segment" or chord.length <= EPS:
        return ChainMass(0.0, (), chord.kind)
    return ChainMass(chord.length, (chord.segment,))


# --- hyperbolas on the square -----------------------------------------------------


def _box(S: ConvexPolygon):
    xs = [v.x for v in S.vertices]
    ys = [v.y for v in S.vertices]
    box = (min(xs), max(xs), min(ys), max(ys))
    if S.n != 4 or any(
        min(abs(v.x - box[0]), abs(v.x - box[1])) > EPS
        or min(abs(v.y - box[2]), abs(v.y - box[3])) > EPS
        for v in S.vertices
    ):
        raise GeometryError("hyperbola family needs an axis-aligned rectangle")
    return box


@dataclass(frozen=True)
class HyperbolaBranch:
    """One arc of ``(x - x0)(y - y0) = k`` inside the open rectangle."""

    x0: float
    y0: float
    k: float
    sign: int  # sign of x - x0 on this branch
    u1: float  # |x - x0| range
    u2: float
    length: float

    def endpoints(self) -> tuple[Point2, Point2]:
        return self.point(self.u1), self.point(self.u2)

    def point(self, u: float) -> Point2:
        x = self.x0 + self.sign * u
        return Point2(x, self.y0 + self.k / (x - self.x0))

    def sample(self, n: int = 65) -> tuple:
        us = np.geomspace(self.u1, self.u2, n)
        return tuple(self.point(float(u)) for u in us)

    @property
    def increasing(self) -> bool:
        return self.k < 0

    @property
    def endpoint_bound(self) -> float:
        a, b = self.endpoints()
        return abs(b.x - a.x) + abs(b.y - a.y)


def _branch_ranges(box, x0, y0, k):
    xmin, xmax, ymin, ymax = box
    out = []
    for sign in (1, -1):
        # |X| range from the x extent
        xa, xb = sorted((sign * (xmin - x0), sign * (xmax - x0)))
        xa = max(xa, 0.0)
        if xb <= xa:
            continue
        # Y = k / X has the sign of sign * k on this branch
        ysign = 1 if sign * k > 0 else -1
        ya, yb = sorted((ysign * (ymin - y0), ysign * (ymax - y0)))
        ya = max(ya, 0.0)
        if yb <= ya:
            continue
        lo = max(xa, abs(k) / yb)
        hi = min(xb, abs(k) / ya if ya > 0 else math.inf)
        if hi - lo > 1e-15 * max(1.0, hi):
            out.append((sign, lo, hi))
    return out


def hyperbola_branches(S: ConvexPolygon, params, method: str = "closed-form"):
    """Branches of the nondegenerate conic ``axy + bx + cy + d = 0`` inside ``S``."""
    a, b, c, d = params
    x0, y0 = -c / a, -b / a
    k = (b * c - a * d) / (a * a)
    return [
        HyperbolaBranch(x0, y0, k, sign, lo, hi, branch_length(k, lo, hi, method))
        for sign, lo, hi in _branch_ranges(_box(S), x0, y0, k)
    ]


def hyperbola_sweepout_mass(
    S: ConvexPolygon, params, method: str = "closed-form", sample: bool = True
) -> ChainMass:
    """Length of ``{axy + bx + cy + d = 0}`` inside the open rectangle ``S``.

    Degenerate members: ``a = 0`` gives a line; ``bc = ad`` gives the two
    axis-parallel lines through the centre.  Each hyperbola branch is audited
    against the monotone-graph bound before it is counted.  With
    ``sample=False`` the pieces are the :class:`HyperbolaBranch` objects
    instead of sampled polylines.
    """
    coeffs = tuple(float(v) for v in params)
    if len(coeffs) != 4:
        raise ValueError("need four coefficients")
    h = math.sqrt(sum(v * v for v in coeffs))
    if h == 0:
        raise ValueError("coefficients must not all vanish")
    a, b, c, d = (v / h for v in coeffs)
    if abs(a) <= 1e-14:
        if abs(b) <= 1e-14 and abs(c) <= 1e-14:
            return ChainMass(0.0, (), "empty")
        return line_sweepout_mass(S, Line2(b, c, d))
    x0, y0 = -c / a, -b / a
    k = (b * c - a * d) / (a * a)
    if abs(k) <= 1e-14:
        pieces = []
        for line in (Line2(1.0, 0.0, -x0), Line2(0.0, 1.0, -y0)):
            pieces += list(line_sweepout_mass(S, line).pieces)
        return chain_mass(S, pieces)
    branches = hyperbola_branches(S, (a, b, c, d), method)
    for br in branches:
        if br.length > br.endpoint_bound + 1e-9:
            raise AssertionError(f"branch violates the monotone graph bound: {br}")
    pieces = tuple(br.sample() for br in branches) if sample else tuple(branches)
    return ChainMass(math.fsum(br.length for br in branches), pieces)


def hyperbola_mass_value(S: ConvexPolygon, params) -> float:
    return hyperbola_sweepout_mass(S, params, sample=False).mass


def monotone_graph_bound_check(xs, fs, tol: float = 1e-9):
    """Polyline length of a nondecreasing sampled graph against ``(b-a) + (f(b)-f(a))``.

    Returns ``(length, bound, ok)``.
    """
    xs = np.asarray(xs, dtype=float)
    fs = np.asarray(fs, dtype=float)
    if xs.shape != fs.shape or xs.ndim != 1 or len(xs) < 2:
        raise ValueError("need matching 1-d sample arrays")
    if np.any(np.diff(xs) < 0):
        raise ValueError("abscissae must be sorted")
    if np.any(np.diff(fs) < -tol):
        raise NonMonotone("samples are not nondecreasing")
    length = float(np.sum(np.hypot(np.diff(xs), np.diff(fs))))
    bound = float((xs[-1] - xs[0]) + (fs[-1] - fs[0]))
    return length, bound, length <= bound + tol


def audit_branch(br: HyperbolaBranch, n: int = 257):
    """Run :func:`monotone_graph_bound_check` on a sampled hyperbola branch.

    Decreasing branches are mirrored so the graph is increasing.  The returned
    tuple is ``(polyline length, bound, ok)`` where ``ok`` also requires the
    exact branch length to respect the bound.
    """
    pts = sorted(br.sample(n))
    xs = [p.x for p in pts]
    fs = [p.y if br.increasing else -p.y for p in pts]
    length, bound, ok = monotone_graph_bound_check(xs, fs)
    return length, bound, ok and br.length <= bound + 1e-9


# --- planes through the tetrahedron ----------------------------------------------


def plane_sweepout_mass(Q: Tetrahedron, plane: Plane3) -> ChainMass:
    """Perimeter of the section; face-containing planes are flagged ``"face"``."""
    sec = plane_tetrahedron_section(Q, plane)
    return ChainMass(sec.perimeter, (sec.vertices,), sec.kind)
