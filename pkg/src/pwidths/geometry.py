"""Planar and spatial primitives shared by the width, billiard and sweepout code.

Points and vectors are plain ``(x, y)`` / ``(x, y, z)`` float tuples.  Lines and
planes are projective coefficient vectors kept in a canonical normal form so they
can be compared and hashed.  Everything here is immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

#: Boundary hits closer than this to a vertex are vertex hits.
VERTEX_SNAP = 1e-9
#: Sign tolerance for orientation and side-of-line tests.
EPS = 1e-12


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class NonConvexError(GeometryError):
    pass


class RepeatedVertexError(GeometryError):
    pass


class RayLeavesImmediately(GeometryError):
    """The ray starts on the boundary and points out of the polygon."""


class Point2(NamedTuple):
    x: float
    y: float


Vector2 = Point2


def add(p, q):
    return Point2(p[0] + q[0], p[1] + q[1])


def sub(p, q):
    return Point2(p[0] - q[0], p[1] - q[1])


def scale(p, s):
    return Point2(p[0] * s, p[1] * s)


def dot(p, q):
    return p[0] * q[0] + p[1] * q[1]


def cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def norm(p):
    return math.hypot(p[0], p[1])


def dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def unit(v):
    n = norm(v)
    if not n > 0 or not math.isfinite(n):
        raise GeometryError(f"cannot normalize vector {tuple(v)!r}")
    return Point2(v[0] / n, v[1] / n)


def lerp(p, q, t):
    return Point2(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))


def orient(a, b, c):
    """Twice the signed area of triangle abc (positive for a left turn)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _canonical(coeffs):
    n = math.sqrt(sum(c * c for c in coeffs))
    out = [c / n for c in coeffs]
    for c in out:
        if c != 0.0:
            if c < 0:
                out = [-v for v in out]
            break
    return tuple(v + 0.0 for v in out)


@dataclass(frozen=True)
class Segment2:
    a: Point2
    b: Point2

    @property
    def length(self) -> float:
        return dist(self.a, self.b)

    @property
    def midpoint(self) -> Point2:
        return lerp(self.a, self.b, 0.5)

    def reversed(self) -> "Segment2":
        return Segment2(self.b, self.a)


@dataclass(frozen=True)
class Line2:
    """The line ``a*x + b*y + c = 0``.

    Coefficients are rescaled to a unit vector whose first nonzero entry is
    positive, so equal lines compare equal up to rounding.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and math.isfinite(self.c)):
            raise GeometryError("line coefficients must be finite")
        if self.a == 0 and self.b == 0:
            raise GeometryError("line needs (a, b) != (0, 0)")
        a, b, c = _canonical((self.a, self.b, self.c))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def through(cls, p, q) -> "Line2":
        d = sub(q, p)
        if norm(d) == 0:
            raise GeometryError("line through two equal points")
        return cls(-d[1], d[0], d[1] * p[0] - d[0] * p[1])

    @classmethod
    def from_point_normal(cls, p, n) -> "Line2":
        return cls(n[0], n[1], -(n[0] * p[0] + n[1] * p[1]))

    @classmethod
    def from_point_direction(cls, p, d) -> "Line2":
        return cls.from_point_normal(p, (-d[1], d[0]))

    @property
    def normal(self) -> Vector2:
        """Unit normal ``(a, b) / |(a, b)|``."""
        return unit((self.a, self.b))

    @property
    def direction(self) -> Vector2:
        n = self.normal
        return Point2(-n[1], n[0])

    def signed_distance(self, p) -> float:
        h = math.hypot(self.a, self.b)
        return (self.a * p[0] + self.b * p[1] + self.c) / h

    def project(self, p) -> Point2:
        return sub(p, scale(self.normal, self.signed_distance(p)))

    def intersect(self, other: "Line2"):
        """Intersection point, or ``None`` for parallel lines."""
        det = self.a * other.b - self.b * other.a
        scale_ = math.hypot(self.a, self.b) * math.hypot(other.a, other.b)
        if abs(det) <= EPS * scale_:
            return None
        x = (self.b * other.c - self.c * other.b) / det
        y = (self.c * other.a - self.a * other.c) / det
        return Point2(x, y)


def reflect_point(p, line: Line2) -> Point2:
    """Mirror image of ``p`` across ``line``."""
    return sub(p, scale(line.normal, 2.0 * line.signed_distance(p)))


def reflect_vector(v, line: Line2) -> Vector2:
    """Mirror a direction across ``line`` (linear part of the reflection)."""
    n = line.normal
    return sub(v, scale(n, 2.0 * dot(v, n)))


class BoundaryHit(NamedTuple):
    """A boundary point tagged with the feature it lies on.

    ``kind`` is ``"edge"`` (``index`` = edge i from vertex i to vertex i+1) or
    ``"vertex"`` (``index`` = vertex i).
    """

    point: Point2
    kind: str
    index: int


class ConvexPolygon:
    """Strictly convex polygon with counterclockwise vertices.

    Clockwise input is reversed; anything else that is not strictly convex is
    rejected.
    """

    __slots__ = ("vertices", "_normals", "_offsets")

    def __init__(self, vertices: Sequence[Sequence[float]]):
        pts = [Point2(float(v[0]), float(v[1])) for v in vertices]
        if len(pts) < 3:
            raise GeometryError("a polygon needs at least 3 vertices")
        for p in pts:
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                raise GeometryError("non-finite vertex coordinate")
        n = len(pts)
        for i in range(n):
            for j in range(i + 1, n):
                if dist(pts[i], pts[j]) <= VERTEX_SNAP:
                    raise RepeatedVertexError(f"vertices {i} and {j} coincide")
        area2 = sum(cross(pts[i], pts[(i + 1) % n]) for i in range(n))
        if area2 < 0:
            pts.reverse()
        diam = max(dist(p, q) for p in pts for q in pts)
        for i in range(n):
            turn = orient(pts[i - 1], pts[i], pts[(i + 1) % n])
            if turn <= EPS * diam * diam:
                raise NonConvexError(f"vertex {i} is not a strictly convex corner")
        # a star-shaped self-intersecting path also turns left everywhere
        total = 0.0
        for i in range(n):
            e0 = sub(pts[i], pts[i - 1])
            e1 = sub(pts[(i + 1) % n], pts[i])
            total += math.atan2(cross(e0, e1), dot(e0, e1))
        if abs(total - 2 * math.pi) > 1e-6:
            raise NonConvexError("vertex sequence winds more than once")
        self.vertices = tuple(pts)
        normals = []
        offsets = []
        for i in range(n):
            e = unit(sub(pts[(i + 1) % n], pts[i]))
            nrm = Point2(e.y, -e.x)
            normals.append(nrm)
            offsets.append(dot(nrm, pts[i]))
        self._normals = tuple(normals)
        self._offsets = tuple(offsets)

    def __repr__(self):
        return f"ConvexPolygon({[tuple(v) for v in self.vertices]!r})"

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __len__(self):
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> Segment2:
        return Segment2(self.vertices[i % self.n], self.vertices[(i + 1) % self.n])

    @property
    def edges(self) -> list[Segment2]:
        return [self.edge(i) for i in range(self.n)]

    def edge_line(self, i: int) -> Line2:
        return Line2.through(self.vertices[i % self.n], self.vertices[(i + 1) % self.n])

    def outward_normal(self, i: int) -> Vector2:
        return self._normals[i % self.n]

    @property
    def perimeter(self) -> float:
        return sum(e.length for e in self.edges)

    @property
    def area(self) -> float:
        v = self.vertices
        return 0.5 * sum(cross(v[i], v[(i + 1) % self.n]) for i in range(self.n))

    @property
    def diameter(self) -> float:
        return max(dist(p, q) for p in self.vertices for q in self.vertices)

    @property
    def centroid(self) -> Point2:
        v = self.vertices
        a6 = 0.0
        cx = cy = 0.0
        for i in range(self.n):
            p, q = v[i], v[(i + 1) % self.n]
            c = cross(p, q)
            a6 += c
            cx += (p.x + q.x) * c
            cy += (p.y + q.y) * c
        a6 *= 3.0
        return Point2(cx / a6, cy / a6)

    def support(self, v) -> tuple[float, float]:
        """``(min, max)`` of ``x . v`` over the polygon."""
        vals = [dot(p, v) for p in self.vertices]
        return min(vals), max(vals)

    def contains(self, p, tol: float = EPS) -> bool:
        return all(dot(self._normals[i], p) - self._offsets[i] <= tol for i in range(self.n))

    def edge_slack(self, i: int, p) -> float:
        """Signed distance of ``p`` outside edge ``i`` (negative inside)."""
        return dot(self._normals[i], p) - self._offsets[i]

    def locate(self, p, tol: float = VERTEX_SNAP) -> BoundaryHit | None:
        """Classify ``p`` as a vertex or edge point, or ``None`` if off the boundary."""
        for i, v in enumerate(self.vertices):
            if dist(p, v) <= tol:
                return BoundaryHit(v, "vertex", i)
        best = None
        for i in range(self.n):
            a, b = self.vertices[i], self.vertices[(i + 1) % self.n]
            ab = sub(b, a)
            t = dot(sub(p, a), ab) / dot(ab, ab)
            if 0.0 <= t <= 1.0:
                d = abs(self.edge_slack(i, p))
                if d <= tol and (best is None or d < best[0]):
                    best = (d, i, lerp(a, b, t))
        if best is None:
            return None
        return BoundaryHit(best[2], "edge", best[1])

    def boundary_point(self, s: float) -> BoundaryHit:
        """Point at arc length ``s`` (mod perimeter) from vertex 0, counterclockwise."""
        per = self.perimeter
        s = math.fmod(s, per)
        if s < 0:
            s += per
        for i in range(self.n):
            a, b = self.vertices[i], self.vertices[(i + 1) % self.n]
            L = dist(a, b)
            if s <= L:
                if s <= VERTEX_SNAP:
                    return BoundaryHit(a, "vertex", i)
                if L - s <= VERTEX_SNAP:
                    return BoundaryHit(b, "vertex", (i + 1) % self.n)
                return BoundaryHit(lerp(a, b, s / L), "edge", i)
            s -= L
        return BoundaryHit(self.vertices[0], "vertex", 0)

    def edges_at(self, hit: BoundaryHit) -> tuple[int, ...]:
        """Edges incident to a boundary feature."""
        if hit.kind == "edge":
            return (hit.index,)
        return ((hit.index - 1) % self.n, hit.index)

    def transformed(self, f) -> "ConvexPolygon":
        return ConvexPolygon([f(v) for v in self.vertices])


def ray_polygon_exit(P: ConvexPolygon, origin, direction) -> BoundaryHit:
    """First boundary point strictly ahead of ``origin`` along ``direction``.

    Hits within :data:`VERTEX_SNAP` of a vertex are snapped to it; edge hits are
    projected onto the edge line.
    """
    d = unit(direction)
    best_t = math.inf
    best_i = -1
    for i in range(P.n):
        nd = dot(P._normals[i], d)
        if nd <= EPS:
            continue
        t = (P._offsets[i] - dot(P._normals[i], origin)) / nd
        if t < best_t:
            best_t, best_i = t, i
    if best_i < 0 or best_t <= EPS * max(1.0, P.diameter):
        raise RayLeavesImmediately(
            f"ray from {tuple(origin)} along {tuple(d)} does not enter the polygon"
        )
    hit = add(origin, scale(d, best_t))
    for j, v in enumerate(P.vertices):
        if dist(hit, v) <= VERTEX_SNAP:
            return BoundaryHit(v, "vertex", j)
    hit = sub(hit, scale(P._normals[best_i], P.edge_slack(best_i, hit)))
    return BoundaryHit(hit, "edge", best_i)


class Chord(NamedTuple):
    """Intersection of a line with a polygon.

    ``kind`` is ``"empty"``, ``"segment"`` (possibly degenerate, touching a
    vertex) or ``"edge"`` when the line contains a whole edge.
    """

    kind: str
    segment: Segment2 | None

    @property
    def length(self) -> float:
        return 0.0 if self.segment is None else self.segment.length


def polygon_chord(P: ConvexPolygon, line: Line2) -> Chord:
    verts = P.vertices
    n = P.n
    tol = EPS * max(1.0, P.diameter)
    s = [line.signed_distance(v) for v in verts]
    zero = [abs(x) <= tol for x in s]
    if all(x > tol for x in s) or all(x < -tol for x in s):
        return Chord("empty", None)
    on = [i for i in range(n) if zero[i]]
    if len(on) == 2 and (on[1] - on[0] == 1 or (on[0] == 0 and on[1] == n - 1)):
        others = [s[i] for i in range(n) if not zero[i]]
        if all(x > 0 for x in others) or all(x < 0 for x in others):
            i, j = on
            if j - i != 1:
                i, j = j, i
            return Chord("edge", Segment2(verts[i], verts[j]))
    pts = [verts[i] for i in on]
    for i in range(n):
        j = (i + 1) % n
        if zero[i] or zero[j]:
            continue
        if (s[i] > 0) != (s[j] > 0):
            t = s[i] / (s[i] - s[j])
            pts.append(lerp(verts[i], verts[j], t))
    d = line.direction
    pts.sort(key=lambda p: dot(p, d))
    return Chord("segment", Segment2(pts[0], pts[-1]))


def clip_segment(P: ConvexPolygon, seg: Segment2) -> Segment2 | None:
    """Part of ``seg`` inside ``P`` (Cyrus-Beck), or ``None``."""
    d = sub(seg.b, seg.a)
    t0, t1 = 0.0, 1.0
    for i in range(P.n):
        num = -P.edge_slack(i, seg.a)
        den = dot(P._normals[i], d)
        if abs(den) <= EPS * max(norm(d), EPS):
            if num < -EPS:
                return None
            continue
        t = num / den
        if den > 0:
            t1 = min(t1, t)
        else:
            t0 = max(t0, t)
        if t0 > t1:
            return None
    return Segment2(lerp(seg.a, seg.b, t0), lerp(seg.a, seg.b, t1))


def clip_convex(subject: Sequence, clipper: ConvexPolygon) -> list[Point2]:
    """Sutherland-Hodgman clip of a convex vertex loop against ``clipper``."""
    out = [Point2(*p) for p in subject]
    for i in range(clipper.n):
        if not out:
            break
        inp, out = out, []
        for k in range(len(inp)):
            cur, prev = inp[k], inp[k - 1]
            sc, sp = clipper.edge_slack(i, cur), clipper.edge_slack(i, prev)
            if sc <= 0:
                if sp > 0:
                    out.append(lerp(prev, cur, sp / (sp - sc)))
                out.append(cur)
            elif sp <= 0:
                out.append(lerp(prev, cur, sp / (sp - sc)))
    return out


def loop_area(points: Sequence) -> float:
    n = len(points)
    if n < 3:
        return 0.0
    return 0.5 * sum(cross(points[i], points[(i + 1) % n]) for i in range(n))


def overlap_area(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    return abs(loop_area(clip_convex(P.vertices, Q)))


# --- 3D ---------------------------------------------------------------------


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def dot3(p, q):
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def sub3(p, q):
    return Point3(p[0] - q[0], p[1] - q[1], p[2] - q[2])


def cross3(p, q):
    return Point3(
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def norm3(p):
    return math.sqrt(dot3(p, p))


def dist3(p, q):
    return norm3(sub3(p, q))


def lerp3(p, q, t):
    return Point3(*(p[k] + t * (q[k] - p[k]) for k in range(3)))


@dataclass(frozen=True)
class Plane3:
    """The plane ``a*x + b*y + c*z + d = 0`` in canonical projective form."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise GeometryError("plane coefficients must be finite")
        if self.a == 0 and self.b == 0 and self.c == 0:
            raise GeometryError("plane needs (a, b, c) != 0")
        for name, v in zip("abcd", _canonical(vals)):
            object.__setattr__(self, name, v)

    @classmethod
    def from_point_normal(cls, p, n) -> "Plane3":
        return cls(n[0], n[1], n[2], -dot3(n, p))

    @classmethod
    def through(cls, p, q, r) -> "Plane3":
        return cls.from_point_normal(p, cross3(sub3(q, p), sub3(r, p)))

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def normal(self) -> Point3:
        h = norm3((self.a, self.b, self.c))
        return Point3(self.a / h, self.b / h, self.c / h)

    def signed_distance(self, p) -> float:
        return (self.a * p[0] + self.b * p[1] + self.c * p[2] + self.d) / norm3(
            (self.a, self.b, self.c)
        )


class Tetrahedron:
    __slots__ = ("vertices",)

    def __init__(self, vertices):
        pts = tuple(Point3(*map(float, v)) for v in vertices)
        if len(pts) != 4:
            raise GeometryError("a tetrahedron has 4 vertices")
        if abs(self._volume(pts)) <= EPS * max(dist3(p, q) for p in pts for q in pts) ** 3:
            raise GeometryError("degenerate tetrahedron")
        self.vertices = pts

    @staticmethod
    def _volume(pts):
        a, b, c, d = pts
        return dot3(sub3(b, a), cross3(sub3(c, a), sub3(d, a))) / 6.0

    @classmethod
    def regular(cls, side: float) -> "Tetrahedron":
        """Regular tetrahedron of edge ``side`` centred at the origin."""
        s = side / (2.0 * math.sqrt(2.0))
        return cls([(s, s, s), (s, -s, -s), (-s, s, -s), (-s, -s, s)])

    @property
    def volume(self) -> float:
        return abs(self._volume(self.vertices))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(4) for j in range(i + 1, 4)]

    @property
    def faces(self) -> list[tuple[int, int, int]]:
        return [tuple(k for k in range(4) if k != i) for i in range(4)]

    def __repr__(self):
        return f"Tetrahedron({[tuple(v) for v in self.vertices]!r})"

    def __eq__(self, other):
        return isinstance(other, Tetrahedron) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)


class Section(NamedTuple):
    """Plane section of a tetrahedron.

    ``kind``: ``"empty"``, ``"point"``, ``"segment"``, ``"polygon"`` or ``"face"``
    (the plane contains a face).  ``vertices`` are cyclically ordered.
    """

    kind: str
    vertices: tuple

    @property
    def perimeter(self) -> float:
        v = self.vertices
        if len(v) < 2:
            return 0.0
        if len(v) == 2:
            # limit of flat convex curves around a segment
            return 2.0 * dist3(v[0], v[1])
        return sum(dist3(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))


def plane_tetrahedron_section(Q: Tetrahedron, plane: Plane3, tol: float = EPS) -> Section:
    verts = Q.vertices
    s = [plane.signed_distance(v) for v in verts]
    zero = [abs(x) <= tol for x in s]
    if sum(zero) >= 3:
        return Section("face", tuple(verts[i] for i in range(4) if zero[i]))
    if all(x > tol for x in s) or all(x < -tol for x in s):
        return Section("empty", ())
    pts = [verts[i] for i in range(4) if zero[i]]
    for i, j in Q.edges:
        if zero[i] or zero[j]:
            continue
        if (s[i] > 0) != (s[j] > 0):
            pts.append(lerp3(verts[i], verts[j], s[i] / (s[i] - s[j])))
    uniq = []
    for p in pts:
        if all(dist3(p, q) > tol for q in uniq):
            uniq.append(p)
    if len(uniq) == 1:
        return Section("point", tuple(uniq))
    if len(uniq) == 2:
        return Section("segment", tuple(uniq))
    # order around the centroid inside the plane
    n = plane.normal
    cx = Point3(*(sum(p[k] for p in uniq) / len(uniq) for k in range(3)))
    ref = sub3(uniq[0], cx)
    e1 = Point3(*(r / norm3(ref) for r in ref))
    e2 = cross3(n, e1)
    uniq.sort(key=lambda p: math.atan2(dot3(sub3(p, cx), e2), dot3(sub3(p, cx), e1)))
    return Section("polygon", tuple(uniq))
