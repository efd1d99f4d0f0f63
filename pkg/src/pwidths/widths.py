"""Geometric width, Lusternik-Schnirelmann partition bounds and length lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .geometry import (
    EPS,
    ConvexPolygon,
    GeometryError,
    Point2,
    Vector2,
    lerp,
    overlap_area,
)


@dataclass(frozen=True)
class WidthResult:
    value: float
    direction: Vector2
    edge: int  # edge whose normal realizes the minimum
    vertex: int  # antipodal vertex


def _canonical_direction(v):
    """Flip ``v`` into the half-turn [0, pi); returns (angle, vector)."""
    x, y = v
    if y < 0 or (y == 0 and x < 0):
        x, y = -x, -y
    ang = math.atan2(y, x)
    if math.pi - ang < 1e-12:
        x, y, ang = -x, -y, 0.0
    return ang, Point2(x + 0.0, y + 0.0)


def geometric_width(P: ConvexPolygon) -> WidthResult:
    """Width of the narrowest slab containing ``P``.

    Rotating calipers: the minimum is attained with one slab line flush against
    an edge, so only the ``n`` edge normals and their antipodal vertices matter.
    Ties are broken toward the direction with the smallest angle in [0, pi).
    """
    n = P.n
    verts = P.vertices

    def depth(i, j):
        return -P.edge_slack(i, verts[j % n])

    j = max(range(n), key=lambda k: depth(0, k))
    candidates = []
    for i in range(n):
        while depth(i, j + 1) >= depth(i, j) and (j + 1) % n != (i + 1) % n:
            j += 1
        candidates.append((depth(i, j), i, j % n))
    best = min(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] <= best + 1e-12 * max(1.0, best)]
    choices = []
    for w, i, j in tied:
        ang, vec = _canonical_direction(P.outward_normal(i))
        choices.append((ang, w, i, j, vec))
    ang, w, i, j, vec = min(choices, key=lambda c: (c[0], c[1]))
    return WidthResult(value=best, direction=vec, edge=i, vertex=j)


def slab_width(P: ConvexPolygon, v) -> float:
    lo, hi = P.support(v)
    return hi - lo


# --- partitions -------------------------------------------------------------


def medial_split(P: ConvexPolygon) -> list[ConvexPolygon]:
    """Four triangles cut out by the midpoints of a triangle's sides.

    Order: the corner triangles at vertices 0, 1, 2, then the central one.
    """
    if P.n != 3:
        raise GeometryError("medial split needs a triangle")
    a, b, c = P.vertices
    mab, mbc, mca = lerp(a, b, 0.5), lerp(b, c, 0.5), lerp(c, a, 0.5)
    return [
        ConvexPolygon([a, mab, mca]),
        ConvexPolygon([mab, b, mbc]),
        ConvexPolygon([mca, mbc, c]),
        ConvexPolygon([mab, mbc, mca]),
    ]


def quarter_split(P: ConvexPolygon) -> list[ConvexPolygon]:
    """Four quadrilaterals joining the vertex average to the side midpoints."""
    if P.n != 4:
        raise GeometryError("quarter split needs a quadrilateral")
    v = P.vertices
    c = Point2(sum(p.x for p in v) / 4, sum(p.y for p in v) / 4)
    mids = [lerp(v[i], v[(i + 1) % 4], 0.5) for i in range(4)]
    return [ConvexPolygon([v[i], mids[i], c, mids[i - 1]]) for i in range(4)]


def diagonal_split(P: ConvexPolygon, i: int = 0, j: int = 2) -> list[ConvexPolygon]:
    """Split ``P`` along the diagonal between vertices ``i`` and ``j``."""
    n = P.n
    i, j = sorted((i % n, j % n))
    if j - i < 2 or (i == 0 and j == n - 1):
        raise GeometryError("vertices must not be adjacent")
    v = P.vertices
    return [ConvexPolygon(v[i : j + 1]), ConvexPolygon(v[j:] + v[: i + 1])]


class OverlapError(GeometryError):
    pass


def width_rule(piece: ConvexPolygon, p: int) -> float:
    """omega_p(piece) >= omega_1(piece) = W(piece)."""
    return geometric_width(piece).value


@dataclass(frozen=True)
class PartitionBound:
    pieces: tuple  # of (ConvexPolygon, p_j)
    total_p: int
    bound: float
    piece_values: tuple


def ls_lower_bound(
    pieces: Sequence[tuple[ConvexPolygon, int]],
    piece_bound: Callable[[ConvexPolygon, int], float] = width_rule,
    ambient: ConvexPolygon | None = None,
    tol: float = 1e-12,
) -> PartitionBound:
    """Sum of per-piece lower bounds over interior-disjoint pieces.

    Raises :class:`OverlapError` if two pieces share more than ``tol`` area or a
    piece pokes out of ``ambient``.
    """
    pieces = [(poly, int(p)) for poly, p in pieces]
    if not pieces:
        raise ValueError("need at least one piece")
    for poly, p in pieces:
        if p < 1:
            raise ValueError("every p_j must be a positive integer")
        if ambient is not None and not all(ambient.contains(v, tol) for v in poly.vertices):
            raise OverlapError("piece is not contained in the ambient polygon")
    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            area = overlap_area(pieces[a][0], pieces[b][0])
            if area > tol:
                raise OverlapError(f"pieces {a} and {b} overlap (area {area:.3g})")
    values = tuple(piece_bound(poly, p) for poly, p in pieces)
    return PartitionBound(
        pieces=tuple(pieces),
        total_p=sum(p for _, p in pieces),
        bound=math.fsum(values),
        piece_values=values,
    )


# --- length lattices --------------------------------------------------------

_KINDS = {
    # kind: (unit length squared, quadratic form)
    "triangle": (Fraction(9, 4), lambda a, b: a * a + a * b + b * b),
    "square": (Fraction(2), lambda a, b: a * a + b * b),
}


@dataclass(frozen=True)
class LatticeValue:
    norm: int  # integer value of the quadratic form
    value: float
    a: int
    b: int


@dataclass(frozen=True)
class LengthLattice:
    """Positive lattice lengths ``unit * sqrt(form(a, b))`` up to ``cutoff``.

    Triangle: ``(3/2) sqrt(a^2 + ab + b^2)``; square: ``sqrt2 sqrt(a^2 + b^2)``.
    """

    kind: str
    cutoff: float
    unit: float
    entries: tuple = field(default=())

    @property
    def values(self) -> list[float]:
        return [e.value for e in self.entries]

    @property
    def norms(self) -> list[int]:
        return [e.norm for e in self.entries]


def _unit_squared(kind, unit):
    if kind not in _KINDS:
        raise ValueError(f"unknown lattice kind {kind!r}")
    return _KINDS[kind][0] if unit is None else Fraction(unit) ** 2


def max_norm(kind: str, cutoff: float, unit: float | None = None) -> int:
    """Largest integer ``n`` with ``unit^2 * n <= cutoff^2`` (exact)."""
    if cutoff <= 0:
        return 0
    return math.floor(Fraction(cutoff) ** 2 / _unit_squared(kind, unit))


def lattice_lengths(kind: str, cutoff: float, unit: float | None = None) -> LengthLattice:
    """All lattice lengths in ``(0, cutoff]``, sorted, each with a witness.

    Enumeration is exact in integers: every value of either form is attained
    with ``a >= b >= 0``, and then ``a^2 <= form(a, b)``.  The witness is the
    representation with the largest ``a``.
    """
    u2 = _unit_squared(kind, unit)
    form = _KINDS[kind][1]
    nmax = max_norm(kind, cutoff, unit)
    u = math.sqrt(u2) if unit is None else float(unit)
    found: dict[int, tuple[int, int]] = {}
    for a in range(math.isqrt(nmax), 0, -1):
        for b in range(0, a + 1):
            n = form(a, b)
            if n > nmax:
                break
            found.setdefault(n, (a, b))
    entries = tuple(
        LatticeValue(norm=n, value=u * math.sqrt(n), a=ab[0], b=ab[1])
        for n, ab in sorted(found.items())
    )
    return LengthLattice(kind=kind, cutoff=float(cutoff), unit=u, entries=entries)


def min_sum_multiset(L: LengthLattice, threshold: float, tol: float = 1e-12):
    """Smallest sum of a multiset of lattice values that reaches ``threshold``.

    Returns ``(sum, entries)``.  Values are tried in ascending order with
    branch and bound; since every value is at least the smallest one, no
    optimal multiset has more than ``ceil(threshold / min) + 1`` members.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    entries = L.entries
    if not entries:
        raise ValueError("empty lattice")
    vals = [e.value for e in entries]
    slack = tol * max(1.0, threshold)
    cap = math.ceil(threshold / vals[0]) + 1
    best = [math.inf, ()]

    def search(start, total, chosen):
        if len(chosen) >= cap:
            return
        for k in range(start, len(vals)):
            s = total + vals[k]
            if s >= best[0] - slack:
                break
            if s >= threshold - slack:
                best[0], best[1] = s, chosen + (k,)
                break
            search(k, s, chosen + (k,))

    search(0, 0.0, ())
    if best[0] > L.cutoff + slack:
        raise ValueError(
            f"lattice cutoff {L.cutoff} is below the optimum {best[0]}; enumerate further"
        )
    return best[0], tuple(entries[k] for k in best[1])


def min_sum_at_least(L: LengthLattice, threshold: float) -> float:
    return min_sum_multiset(L, threshold)[0]


def gap_lift(kind: str, threshold: float) -> tuple[float, tuple]:
    """Quantization gap: the least lattice sum that is at least ``threshold``."""
    unit = float(math.sqrt(_unit_squared(kind, None)))
    L = lattice_lengths(kind, threshold + 2 * unit)
    return min_sum_multiset(L, threshold)
