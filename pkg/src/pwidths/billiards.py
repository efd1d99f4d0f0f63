"""Billiards in convex polygons, unfolding and the triangle reflection group.

Two reflection laws are supported.  ``"plain"`` stops at vertices.
``"t-billiard"`` (equilateral triangles only) reflects a vertex hit across the
line through the vertex parallel to the opposite side; that reflection maps
the triangle onto the tile diagonally across the vertex in the edge
tessellation, so such trajectories still unfold to straight lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .geometry import (
    VERTEX_SNAP,
    BoundaryHit,
    ConvexPolygon,
    GeometryError,
    Line2,
    Point2,
    Segment2,
    add,
    cross,
    dist,
    dot,
    norm,
    ray_polygon_exit,
    reflect_point,
    reflect_vector,
    scale,
    sub,
    unit,
)
from .widths import lattice_lengths

PLAIN = "plain"
T_BILLIARD = "t-billiard"

#: Phase-space closure tolerance for periodicity.
CLOSE_TOL = 1e-9
#: Angular tolerance (radians) for meeting the boundary orthogonally.
ANGLE_TOL = 1e-9
#: Incidence closer than this to edge-parallel is treated as unstable.
TANGENT_TOL = 1e-12


class NotEquilateral(GeometryError):
    pass


def is_equilateral(P: ConvexPolygon, tol: float = 1e-9) -> bool:
    if P.n != 3:
        return False
    sides = [e.length for e in P.edges]
    return max(sides) - min(sides) <= tol * max(sides)


def vertex_mirror(P: ConvexPolygon, i: int) -> Line2:
    """Line through vertex ``i`` parallel to the opposite side."""
    if not is_equilateral(P):
        raise NotEquilateral("vertex reflection is only defined for equilateral triangles")
    v = P.vertices[i]
    opp = P.edge(i + 1)
    return Line2.from_point_direction(v, sub(opp.b, opp.a))


def mirror_line(P: ConvexPolygon, hit: BoundaryHit, mode: str) -> Line2 | None:
    if hit.kind == "edge":
        return P.edge_line(hit.index)
    if mode == T_BILLIARD:
        return vertex_mirror(P, hit.index)
    return None


def step_reflect(P: ConvexPolygon, hit: BoundaryHit, dir_in, mode: str = PLAIN):
    """Outgoing direction after hitting ``hit``, or ``None`` if the trajectory stops."""
    if mode not in (PLAIN, T_BILLIARD):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == T_BILLIARD and not is_equilateral(P):
        raise NotEquilateral("t-billiard mode needs an equilateral triangle")
    mirror = mirror_line(P, hit, mode)
    if mirror is None:
        return None
    return reflect_vector(dir_in, mirror)


class Bounce(NamedTuple):
    point: Point2
    kind: str  # "edge" | "vertex"
    index: int
    dir_in: Point2
    dir_out: Point2 | None
    mirror: Line2 | None


@dataclass(frozen=True)
class TerminalClass:
    """How a trajectory ended.

    ``kind`` is one of ``periodic``, ``orthogonal-chord``, ``vertex-terminated``
    or ``truncated``.  ``residual`` is the closure residual for periodic
    orbits; ``vertex`` the vertex index for vertex termination; ``reason``
    says which budget ran out (``bounces``, ``length`` or ``tangential``).
    """

    kind: str
    residual: float | None = None
    vertex: int | None = None
    reason: str | None = None

    def __str__(self):
        return self.kind


@dataclass
class Trajectory:
    polygon: ConvexPolygon
    mode: str
    start: Point2
    direction: Point2
    segments: list = field(default_factory=list)
    bounces: list = field(default_factory=list)
    terminal: TerminalClass | None = None

    @property
    def length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    @property
    def points(self) -> list[Point2]:
        if not self.segments:
            return [self.start]
        return [self.segments[0].a] + [s.b for s in self.segments]

    def to_json(self) -> dict:
        return {
            "segments": [[list(s.a), list(s.b)] for s in self.segments],
            "terminal": self.terminal.kind if self.terminal else None,
            "length": self.length,
            "mode": self.mode,
            "bounces": len(self.bounces),
        }


def _meets_orthogonally(line: Line2, d) -> bool:
    # angle between d and the mirror's normal is within ANGLE_TOL of zero
    return abs(dot(unit(d), line.direction)) <= math.sin(ANGLE_TOL)


def _starts_orthogonally(P, start, d, mode):
    loc = P.locate(start)
    if loc is None:
        return False
    if loc.kind == "vertex":
        if mode == PLAIN:
            return True
        return _meets_orthogonally(vertex_mirror(P, loc.index), d)
    return _meets_orthogonally(P.edge_line(loc.index), d)


def simulate(
    P: ConvexPolygon,
    start,
    direction,
    mode: str = PLAIN,
    max_bounces: int = 10_000,
    max_length: float | None = None,
    stop_at_orthogonal: bool = True,
) -> Trajectory:
    """Follow a billiard from ``start`` until it stops, closes up or runs out of budget.

    A trajectory that leaves the boundary orthogonally and later meets it
    orthogonally ends there as an orthogonal chord (unless
    ``stop_at_orthogonal`` is false, in which case it retraces itself and is
    reported periodic).  Closure is tested in phase space: the path must pass
    through ``start`` again with the initial direction.
    """
    if mode not in (PLAIN, T_BILLIARD):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == T_BILLIARD and not is_equilateral(P):
        raise NotEquilateral("t-billiard mode needs an equilateral triangle")
    start = Point2(*start)
    d0 = unit(direction)
    if not P.contains(start, VERTEX_SNAP):
        raise GeometryError(f"start point {tuple(start)} is outside the polygon")
    if max_length is None:
        max_length = 1e3 * P.diameter
    traj = Trajectory(polygon=P, mode=mode, start=start, direction=d0)
    orth_start = stop_at_orthogonal and _starts_orthogonally(P, start, d0, mode)
    loc = P.locate(start)
    if loc is not None and any(
        abs(dot(d0, P.outward_normal(i))) <= TANGENT_TOL for i in P.edges_at(loc)
    ):
        # sliding along an edge never enters the interior
        traj.terminal = TerminalClass("truncated", reason="tangential")
        return traj

    q, d = start, d0
    total = 0.0
    while True:
        hit = ray_polygon_exit(P, q, d)
        if traj.bounces:
            closure = _closes(q, d, hit.point, start, d0)
            if closure is not None:
                if dist(q, start) > CLOSE_TOL:
                    traj.segments.append(Segment2(q, start))
                traj.terminal = TerminalClass("periodic", residual=closure)
                return traj
        seg = Segment2(q, hit.point)
        traj.segments.append(seg)
        total += seg.length
        mirror = mirror_line(P, hit, mode)
        if mirror is None:
            traj.bounces.append(Bounce(hit.point, hit.kind, hit.index, d, None, None))
            traj.terminal = TerminalClass("vertex-terminated", vertex=hit.index)
            return traj
        if orth_start and _meets_orthogonally(mirror, d):
            traj.bounces.append(Bounce(hit.point, hit.kind, hit.index, d, None, mirror))
            traj.terminal = TerminalClass("orthogonal-chord")
            return traj
        if hit.kind == "edge" and abs(dot(d, mirror.normal)) <= TANGENT_TOL:
            traj.terminal = TerminalClass("truncated", reason="tangential")
            return traj
        d_out = unit(reflect_vector(d, mirror))
        traj.bounces.append(Bounce(hit.point, hit.kind, hit.index, d, d_out, mirror))
        if len(traj.bounces) >= max_bounces:
            traj.terminal = TerminalClass("truncated", reason="bounces")
            return traj
        if total >= max_length:
            traj.terminal = TerminalClass("truncated", reason="length")
            return traj
        q, d = hit.point, d_out


def _closes(q, d, hit, start, d0):
    """Residual if the segment ``q -> hit`` along ``d`` repeats the initial state."""
    dd = norm(sub(d, d0))
    if dd > CLOSE_TOL:
        return None
    rel = sub(start, q)
    off = abs(cross(d, rel))
    t = dot(d, rel)
    if off > CLOSE_TOL or t < -CLOSE_TOL or t > dist(q, hit) + CLOSE_TOL:
        return None
    # boundary starts re-enter at q itself; interior starts are crossed mid-segment
    pos = dist(q, start) if t <= CLOSE_TOL else off
    return max(dd, pos)


# --- isometries and unfolding -------------------------------------------------


@dataclass(frozen=True)
class Isometry:
    """``x -> M x + t`` with ``M`` orthogonal; ``depth`` is the word length."""

    m: tuple = (1.0, 0.0, 0.0, 1.0)  # row-major 2x2
    t: tuple = (0.0, 0.0)
    depth: int = 0

    @classmethod
    def reflection(cls, line: Line2) -> "Isometry":
        nx, ny = line.normal
        m = (1 - 2 * nx * nx, -2 * nx * ny, -2 * nx * ny, 1 - 2 * ny * ny)
        t = reflect_point((0.0, 0.0), line)
        return cls(m, (t[0], t[1]), 1)

    def __call__(self, p) -> Point2:
        a, b, c, d = self.m
        return Point2(a * p[0] + b * p[1] + self.t[0], c * p[0] + d * p[1] + self.t[1])

    def linear(self, v) -> Point2:
        a, b, c, d = self.m
        return Point2(a * v[0] + b * v[1], c * v[0] + d * v[1])

    def compose(self, other: "Isometry") -> "Isometry":
        """``self o other``."""
        a, b, c, d = self.m
        e, f, g, h = other.m
        m = (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        t = self(other.t)
        return Isometry(m, (t[0], t[1]), self.depth + other.depth)

    def inverse(self) -> "Isometry":
        a, b, c, d = self.m
        mt = (a, c, b, d)
        inv = Isometry(mt, (0.0, 0.0), self.depth)
        t = inv.linear(self.t)
        return Isometry(mt, (-t[0], -t[1]), self.depth)

    @property
    def det(self) -> float:
        a, b, c, d = self.m
        return a * d - b * c


IDENTITY = Isometry()


class Unfolding(NamedTuple):
    points: list
    residual: float
    length: float


def unfold(traj: Trajectory, base: ConvexPolygon | None = None) -> Unfolding:
    """Straighten a trajectory by reflecting each later segment across the mirrors so far.

    ``residual`` is the largest distance of an unfolded breakpoint from the line
    through the first and last unfolded points.
    """
    pts = traj.points
    if base is not None and base != traj.polygon:
        raise ValueError("trajectory was simulated in a different polygon")
    g = IDENTITY
    out = [pts[0]]
    for k in range(1, len(pts)):
        out.append(g(pts[k]))
        if k - 1 < len(traj.bounces):
            b = traj.bounces[k - 1]
            if b.dir_out is not None and b.mirror is not None:
                g = g.compose(Isometry.reflection(b.mirror))
    length = math.fsum(dist(out[k], out[k + 1]) for k in range(len(out) - 1))
    residual = 0.0
    if len(out) > 2 and dist(out[0], out[-1]) > 0:
        line = Line2.through(out[0], out[-1])
        residual = max(abs(line.signed_distance(p)) for p in out)
    return Unfolding(out, residual, length)


def _tile_key(g: Isometry, verts, ndigits=8):
    return tuple(round(c, ndigits) + 0.0 for v in verts for c in g(v))


def tessellate(T: ConvexPolygon, depth: int) -> list[Isometry]:
    """Distinct elements of the edge-reflection group of words of length <= ``depth``.

    Elements are identified by where they send the vertices of ``T``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    gens = [Isometry.reflection(T.edge_line(i)) for i in range(T.n)]
    seen = {_tile_key(IDENTITY, T.vertices): IDENTITY}
    frontier = [IDENTITY]
    for level in range(1, depth + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = g.compose(s)
                key = _tile_key(h, T.vertices)
                if key not in seen:
                    h = Isometry(h.m, h.t, level)
                    seen[key] = h
                    nxt.append(h)
        frontier = nxt
    return list(seen.values())


def lattice_coordinates(p, basis=((0.0, 3.0), (1.5 * math.sqrt(3.0), 1.5))):
    """Real coordinates of ``p`` in ``basis`` and the residual to the nearest lattice point."""
    (ux, uy), (vx, vy) = basis
    det = ux * vy - uy * vx
    a = (p[0] * vy - p[1] * vx) / det
    b = (ux * p[1] - uy * p[0]) / det
    ia, ib = round(a), round(b)
    q = (ia * ux + ib * vx, ia * uy + ib * vy)
    return ia, ib, dist(p, q)


# --- length quantization ------------------------------------------------------


class LatticeMatch(NamedTuple):
    a: int
    b: int
    residual: float
    norm: int


def triangle_height(P: ConvexPolygon) -> float:
    if not is_equilateral(P):
        raise NotEquilateral("length lattice is defined for equilateral triangles")
    return 2.0 * P.area / P.edge(0).length


def nearest_lattice_length(length: float, unit: float = 1.5, kind: str = "triangle"):
    """Closest lattice length ``unit * sqrt(form(a, b))`` to ``length``."""
    L = lattice_lengths(kind, length + 2 * unit, unit)
    best = min(L.entries, key=lambda e: (abs(e.value - length), e.norm))
    return LatticeMatch(best.a, best.b, abs(best.value - length), best.norm)


def lattice_membership(traj: Trajectory) -> LatticeMatch | None:
    """Match a closed trajectory's length against the triangle's length lattice.

    Returns ``None`` unless the trajectory is periodic, an orthogonal chord, or
    (in t-billiard mode) ends at a vertex.
    """
    kinds = {"periodic", "orthogonal-chord"}
    if traj.mode == T_BILLIARD:
        kinds.add("vertex-terminated")
    if traj.terminal is None or traj.terminal.kind not in kinds:
        return None
    return nearest_lattice_length(traj.length, triangle_height(traj.polygon))


def symmetries(P: ConvexPolygon, tol: float = 1e-9) -> list[Isometry]:
    """Isometries mapping the vertex set of ``P`` onto itself (dihedral group)."""
    c = P.centroid
    out = []
    v = P.vertices
    n = P.n
    for flip in (False, True):
        for k in range(n):
            src = [v[0], v[1]]
            dst = [v[k], v[(k - 1) % n] if flip else v[(k + 1) % n]]
            g = _isometry_from_pairs(c, src, dst)
            if g is not None and all(
                min(dist(g(p), q) for q in v) <= tol for p in v
            ):
                out.append(g)
    return out


def _isometry_from_pairs(c, src, dst):
    # fixes c, sends src[0] -> dst[0], src[1] -> dst[1]
    u0, u1 = sub(src[0], c), sub(src[1], c)
    w0, w1 = sub(dst[0], c), sub(dst[1], c)
    det = u0[0] * u1[1] - u0[1] * u1[0]
    if abs(det) < 1e-15:
        return None
    # M [u0 u1] = [w0 w1]
    ia, ib, ic, id_ = u1[1] / det, -u1[0] / det, -u0[1] / det, u0[0] / det
    m = (
        w0[0] * ia + w1[0] * ic,
        w0[0] * ib + w1[0] * id_,
        w0[1] * ia + w1[1] * ic,
        w0[1] * ib + w1[1] * id_,
    )
    a, b, cc, d = m
    if abs(a * a + cc * cc - 1) > 1e-9 or abs(a * b + cc * d) > 1e-9:
        return None
    t = sub(c, Point2(a * c[0] + b * c[1], cc * c[0] + d * c[1]))
    return Isometry(m, (t[0], t[1]), 0)


def transform_state(g: Isometry, start, direction):
    """Image of an initial condition under an isometry."""
    return g(start), g.linear(direction)
