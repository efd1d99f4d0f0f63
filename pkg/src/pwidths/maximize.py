"""Grid-plus-refinement maximization of slice mass over each sweepout family.

Every family is a compact box of chart parameters.  A uniform grid is
evaluated first; the best ``top_k`` grid points are then refined by a
shrinking ``3^d`` pattern search.  Ties are broken on the parameter tuple so
the result does not depend on evaluation order.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import domains
from .geometry import ConvexPolygon, Line2, Plane3, Tetrahedron
from .sweepouts import (
    hyperbola_mass_value,
    line_sweepout_mass,
    pair_phi_mass,
    phi_mass_at,
    phi_segments,
    plane_sweepout_mass,
)

DEFAULT_ROUNDS = 40
DEFAULT_SHRINK = 0.5
DEFAULT_TOP_K = 4


class BudgetExhausted(RuntimeError):
    """The maximizer would need more mass evaluations than allowed."""


@dataclass(frozen=True)
class FamilyPoint:
    family: str
    params: tuple

    def coefficients(self):
        """Projective coefficients of the slice, where the family has them."""
        cls = FAMILIES.get(self.family)
        return None if cls is None else cls().coefficients(self.params)


@dataclass
class MaximizerReport:
    family: str
    best: float
    argmax: FamilyPoint
    grid: tuple
    rounds: int
    samples: int
    history: list = field(default_factory=list)
    bound: float | None = None
    sampled: list | None = None  # (params, mass) when recorded

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "best": self.best,
            "argmax": list(self.argmax.params),
            "coefficients": _maybe_list(self.argmax.coefficients()),
            "grid": list(self.grid),
            "rounds": self.rounds,
            "samples": self.samples,
            "bound": self.bound,
        }


def _maybe_list(v):
    return None if v is None else [float(x) for x in v]


class Family:
    """Chart ``lower <= params <= upper`` with ``periodic`` axes wrapping around."""

    name = ""
    symmetric = False  # mass(p, q) == mass(q, p) on a 2-parameter chart

    def __init__(self, domain):
        self.domain = domain

    lower: tuple = ()
    upper: tuple = ()
    periodic: tuple = ()
    default_grid = 64

    @property
    def dim(self):
        return len(self.lower)

    def __call__(self, params):
        """Mass at ``params``, or ``None`` for slices excluded from the family."""
        raise NotImplementedError

    def coefficients(self, params):
        return None

    def axes(self, n):
        out = []
        for lo, hi, per in zip(self.lower, self.upper, self.periodic):
            if per:
                out.append(lo + (hi - lo) * np.arange(n) / n)
            else:
                out.append(np.linspace(lo, hi, n + 1))
        return out

    def clamp(self, params):
        out = []
        for x, lo, hi, per in zip(params, self.lower, self.upper, self.periodic):
            if per:
                x = lo + math.fmod(x - lo, hi - lo)
                if x < lo:
                    x += hi - lo
            else:
                x = min(max(x, lo), hi)
            out.append(float(x))
        return tuple(out)


class PhiFamily(Family):
    name = "phi-T"
    symmetric = True
    default_grid = 512

    def __init__(self, domain=None):
        super().__init__(domain or domains.triangle())
        per = self.domain.perimeter
        self.lower, self.upper, self.periodic = (0.0, 0.0), (per, per), (True, True)

    def __call__(self, params):
        return phi_mass_at(self.domain, params[0], params[1]).mass


class LinesFamily(Family):
    """Lines ``cos(t) x + sin(t) y = c`` with ``t`` in ``[0, pi]``, ``|c| <= R``."""

    name = "lines-P"

    def __init__(self, domain=None):
        super().__init__(domain or domains.square())
        R = max(math.hypot(*v) for v in self.domain.vertices)
        self.lower, self.upper, self.periodic = (0.0, -R), (math.pi, R), (False, False)

    def line(self, params):
        t, c = params
        return Line2(math.cos(t), math.sin(t), -c)

    def __call__(self, params):
        return line_sweepout_mass(self.domain, self.line(params)).mass

    def coefficients(self, params):
        line = self.line(params)
        return (line.a, line.b, line.c)


def _hemisphere(psi, theta, phi):
    s = math.sin(psi)
    return (
        math.cos(psi),
        s * math.cos(theta),
        s * math.sin(theta) * math.cos(phi),
        s * math.sin(theta) * math.sin(phi),
    )


class HyperbolaFamily(Family):
    """``[a:b:c:d]`` on the hemisphere ``a >= 0`` in hyperspherical angles."""

    name = "hyperbola-S"

    def __init__(self, domain=None):
        super().__init__(domain or domains.square())
        self.lower = (0.0, 0.0, 0.0)
        self.upper = (math.pi / 2, math.pi, 2 * math.pi)
        self.periodic = (False, False, True)

    def __call__(self, params):
        return hyperbola_mass_value(self.domain, _hemisphere(*params))

    def coefficients(self, params):
        return _hemisphere(*params)


class PlanesFamily(Family):
    """Planes ``n . x = h`` with unit normal on the upper hemisphere.

    The offset is charted by a level ``s`` in ``[0, 3]``: ``s = k`` puts the
    plane through the ``k``-th lowest vertex (counting from 0) and ``h`` is
    linear in ``s`` in between.  Section perimeter is convex in ``h`` between
    vertex levels, so its ridges sit at integer ``s``.
    """

    name = "planes-tet"

    def __init__(self, domain=None):
        super().__init__(domain or domains.tetrahedron())
        self.lower = (0.0, 0.0, 0.0)
        self.upper = (math.pi / 2, 2 * math.pi, 3.0)
        self.periodic = (False, True, False)

    def plane(self, params):
        th, ph, s = params
        n = (math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th))
        levels = sorted(sum(a * b for a, b in zip(n, v)) for v in self.domain.vertices)
        k = min(int(s), 2)
        h = levels[k] + (s - k) * (levels[k + 1] - levels[k])
        return Plane3(n[0], n[1], n[2], -h)

    def __call__(self, params):
        m = plane_sweepout_mass(self.domain, self.plane(params))
        if m.note == "face":
            return None
        return m.mass

    def coefficients(self, params):
        return self.plane(params).coefficients


FAMILIES = {
    "phi-T": PhiFamily,
    "lines-P": LinesFamily,
    "hyperbola-S": HyperbolaFamily,
    "planes-tet": PlanesFamily,
    "pair-phi-T": None,  # handled by maximize_pair_phi
}


def family_bound(name: str, domain=None) -> float | None:
    """Closed-form supremum of the family's mass on its default domain."""
    if name in ("phi-T",):
        return 1.5
    if name == "pair-phi-T":
        return 3.0
    if name == "hyperbola-S":
        return 2.0 * math.sqrt(2.0)
    if name == "lines-P":
        return (domain or domains.square()).diameter
    if name == "planes-tet":
        Q = domain or domains.tetrahedron()
        return 3.0 * max(
            math.dist(Q.vertices[i], Q.vertices[j]) for i, j in Q.edges
        )
    return None


def _evaluate_chunk(args):
    fam, points = args
    return [fam(p) for p in points]


def _grid_points(fam: Family, n: int):
    axes = fam.axes(n)
    pts = itertools.product(*[[float(x) for x in ax] for ax in axes])
    if fam.symmetric:
        return [p for p in pts if p[0] <= p[1]]
    return list(pts)


def _better(a, b):
    """Is ``a = (value, params)`` strictly preferable to ``b``?"""
    if b[0] is None:
        return a[0] is not None
    if a[0] is None:
        return False
    if a[0] != b[0]:
        return a[0] > b[0]
    return a[1] < b[1]


def maximize_family(
    fam: Family,
    grid: int | None = None,
    rounds: int = DEFAULT_ROUNDS,
    shrink: float = DEFAULT_SHRINK,
    top_k: int = DEFAULT_TOP_K,
    workers: int = 1,
    record: bool = False,
    max_samples: int | None = None,
) -> MaximizerReport:
    n = grid or fam.default_grid
    if n < 2:
        raise ValueError("grid resolution must be at least 2")
    points = _grid_points(fam, n)
    if max_samples is not None:
        planned = len(points) + rounds * top_k * (3**fam.dim - 1)
        if planned > max_samples:
            raise BudgetExhausted(
                f"{fam.name}: {planned} evaluations planned, budget is {max_samples}"
            )
    if workers > 1:
        size = math.ceil(len(points) / (4 * workers))
        chunks = [(fam, points[i : i + size]) for i in range(0, len(points), size)]
        with ProcessPoolExecutor(workers) as pool:
            values = [v for part in pool.map(_evaluate_chunk, chunks) for v in part]
    else:
        values = [fam(p) for p in points]
    sampled = list(zip(points, values)) if record else None
    ranked = sorted(
        ((v, p) for p, v in zip(points, values) if v is not None),
        key=lambda vp: (-vp[0], vp[1]),
    )
    if not ranked:
        raise RuntimeError(f"no admissible samples for family {fam.name}")
    best = ranked[0]
    history = [best[0]]
    samples = len(points)
    steps0 = [
        (hi - lo) / n for lo, hi in zip(fam.lower, fam.upper)
    ]
    seeds = []
    for v, p in ranked:
        if len(seeds) >= top_k:
            break
        if all(max(abs(a - b) for a, b in zip(p, q)) > 1e-15 for _, q in seeds):
            seeds.append((v, p))
    centres = list(seeds)
    steps = list(steps0)
    for _ in range(rounds):
        new_centres = []
        for v, c in centres:
            local = (v, c)
            for offs in itertools.product((-1, 0, 1), repeat=fam.dim):
                if not any(offs):
                    continue
                q = fam.clamp(tuple(ci + o * s for ci, o, s in zip(c, offs, steps)))
                val = fam(q)
                samples += 1
                if record:
                    sampled.append((q, val))
                if _better((val, q), local):
                    local = (val, q)
            new_centres.append(local)
            if _better(local, best):
                best = local
        centres = new_centres
        steps = [s * shrink for s in steps]
        history.append(best[0])
    return MaximizerReport(
        family=fam.name,
        best=best[0],
        argmax=FamilyPoint(fam.name, best[1]),
        grid=tuple([n] * fam.dim),
        rounds=rounds,
        samples=samples,
        history=history,
        bound=family_bound(fam.name, fam.domain),
        sampled=sampled,
    )


_CACHE: dict = {}


def maximize_mass(
    family: str,
    grid: int | None = None,
    domain=None,
    rounds: int = DEFAULT_ROUNDS,
    top_k: int = DEFAULT_TOP_K,
    workers: int = 1,
    record: bool = False,
    max_samples: int | None = None,
) -> MaximizerReport:
    """Maximize slice mass over a registered family.

    ``family`` is one of ``phi-T``, ``lines-P``, ``hyperbola-S``,
    ``planes-tet`` or ``pair-phi-T``.  Results without recorded samples are
    memoized per argument tuple.
    """
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    key = (family, grid, domain, rounds, top_k)
    if not record and key in _CACHE:
        if max_samples is not None and _CACHE[key].samples > max_samples:
            raise BudgetExhausted(f"{family}: budget of {max_samples} evaluations is too small")
        return _CACHE[key]
    if family == "pair-phi-T":
        report = maximize_pair_phi(domain, grid=grid, rounds=rounds, top_k=top_k)
        if max_samples is not None and report.samples > max_samples:
            raise BudgetExhausted(f"{family}: budget of {max_samples} evaluations is too small")
    else:
        fam = FAMILIES[family](domain)
        report = maximize_family(
            fam,
            grid=grid,
            rounds=rounds,
            top_k=top_k,
            workers=workers,
            record=record,
            max_samples=max_samples,
        )
    if not record:
        _CACHE[key] = report
    return report


def _distinct_slices(T, candidates, tol=1e-9):
    """Keep candidates whose phi slices differ as point sets."""
    kept = []
    for v, p in candidates:
        segs = phi_segments(T, T.boundary_point(p[0]), T.boundary_point(p[1]))
        mids = sorted((round(s.midpoint.x, 6), round(s.midpoint.y, 6)) for s in segs)
        if all(mids != m for _, _, m in kept):
            kept.append((v, p, mids))
    return [(v, p) for v, p, _ in kept]


def maximize_pair_phi(
    T: ConvexPolygon | None = None,
    grid: int | None = None,
    rounds: int = DEFAULT_ROUNDS,
    top_k: int = DEFAULT_TOP_K,
    coarse: int = 12,
) -> MaximizerReport:
    """Maximize the mod 2 sum of two phi slices.

    The pair mass never exceeds the sum of the two phi masses, so its supremum
    is at most twice the phi maximum.  Candidates are the refined phi maxima
    in each of the triangle's symmetric positions plus a coarse boundary grid;
    every pair of candidates is evaluated with mod 2 cancellation.
    """
    T = T or domains.triangle()
    phi = maximize_mass("phi-T", grid=grid, domain=None if T == domains.triangle() else T,
                        rounds=rounds, top_k=top_k)
    per = T.perimeter
    # the phi maxima come in orbits under rotation by a third of the perimeter
    s1, s2 = phi.argmax.params
    candidates = [
        (phi.best, ((s1 + k * per / 3) % per, (s2 + k * per / 3) % per)) for k in range(3)
    ]
    fam = PhiFamily(T)
    for p in _grid_points(fam, coarse):
        candidates.append((fam(p), p))
    candidates = _distinct_slices(T, candidates)
    best = (None, None)
    samples = 0
    for (_, x), (_, y) in itertools.combinations_with_replacement(candidates, 2):
        val = pair_phi_mass(T, x, y).mass
        samples += 1
        if _better((val, x + y), best):
            best = (val, x + y)
    return MaximizerReport(
        family="pair-phi-T",
        best=best[0],
        argmax=FamilyPoint("pair-phi-T", best[1]),
        grid=(coarse,) * 4,
        rounds=phi.rounds,
        samples=samples + phi.samples,
        history=[phi.best, best[0]],
        bound=2.0 * phi.best,
    )
