import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pwidths import domains
from pwidths.geometry import ConvexPolygon
from pwidths.widths import (
    OverlapError,
    diagonal_split,
    gap_lift,
    geometric_width,
    lattice_lengths,
    ls_lower_bound,
    medial_split,
    min_sum_at_least,
    min_sum_multiset,
    quarter_split,
    slab_width,
)
from conftest import SQRT2, SQRT3
from oracles import (
    brute_min_sum,
    lattice_norms,
    random_convex_polygon,
    slab_widths,
    width_by_edge_normals,
)


# --- geometric width -------------------------------------------------------


def test_width_examples(T, S):
    assert geometric_width(T).value == pytest.approx(1.5, abs=1e-12)
    w = geometric_width(S)
    assert w.value == pytest.approx(SQRT2, abs=1e-12)
    assert w.direction == pytest.approx((1.0, 0.0))
    half = diagonal_split(S)[0]
    assert geometric_width(half).value == pytest.approx(1.0, abs=1e-12)
    unit = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert geometric_width(unit).value == pytest.approx(1.0, abs=1e-12)


def test_width_direction_realizes_value(T):
    w = geometric_width(T)
    assert slab_width(T, w.direction) == pytest.approx(w.value, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_width_matches_edge_normal_oracle_and_slab_samples(seed):
    rng = np.random.default_rng(seed)
    verts = random_convex_polygon(rng, int(rng.integers(3, 12)))
    P = ConvexPolygon(verts)
    w = geometric_width(P).value
    assert w == pytest.approx(width_by_edge_normals(P.vertices), abs=1e-12)
    assert np.all(slab_widths(P.vertices, seed=seed) >= w - 1e-12)


@given(
    st.integers(0, 10_000),
    st.floats(-math.pi, math.pi),
    st.floats(0.1, 10.0),
)
def test_width_rigid_invariance_and_scaling(seed, theta, k):
    P = ConvexPolygon(random_convex_polygon(np.random.default_rng(seed), 7))
    c, s = math.cos(theta), math.sin(theta)
    R = P.transformed(lambda p: (c * p[0] - s * p[1] + 1.0, s * p[0] + c * p[1] - 2.0))
    D = P.transformed(lambda p: (k * p[0], k * p[1]))
    w = geometric_width(P).value
    assert geometric_width(R).value == pytest.approx(w, abs=1e-9)
    assert geometric_width(D).value == pytest.approx(k * w, rel=1e-12)


# --- Lusternik-Schnirelmann combination -----------------------------------------


def test_ls_examples(T, S):
    med = medial_split(T)
    assert ls_lower_bound([(p, 1) for p in med[:3]], ambient=T).bound == pytest.approx(9 / 4, abs=1e-12)
    four = ls_lower_bound([(p, 1) for p in med], ambient=T)
    assert four.bound == pytest.approx(3.0, abs=1e-12) and four.total_p == 4
    quarters = quarter_split(S)
    assert ls_lower_bound([(p, 1) for p in quarters[:3]]).bound == pytest.approx(3 * SQRT2 / 2, abs=1e-12)
    assert ls_lower_bound([(p, 1) for p in diagonal_split(S)], ambient=S).bound == pytest.approx(2.0, abs=1e-12)


def test_partitions_tile_the_domain(T, S):
    assert sum(p.area for p in medial_split(T)) == pytest.approx(T.area, abs=1e-12)
    assert sum(p.area for p in quarter_split(S)) == pytest.approx(S.area, abs=1e-12)


def test_ls_rejects_overlap_and_escape(T, S):
    with pytest.raises(OverlapError):
        ls_lower_bound([(T, 1), (medial_split(T)[0], 1)])
    with pytest.raises(OverlapError):
        ls_lower_bound([(S, 1)], ambient=medial_split(T)[0])
    with pytest.raises(ValueError):
        ls_lower_bound([(T, 0)])


def test_ls_custom_piece_rule(T):
    res = ls_lower_bound([(p, 2) for p in medial_split(T)[:2]], piece_bound=lambda P, p: p * 1.0)
    assert res.total_p == 4 and res.bound == 4.0


# --- length lattices ---------------------------------------------------------


def test_lattice_examples():
    L = lattice_lengths("triangle", 3)
    assert L.values == pytest.approx([1.5, 3 * SQRT3 / 2, 3.0], abs=1e-12)
    assert [(e.a, e.b) for e in L.entries] == [(1, 0), (1, 1), (2, 0)]
    L = lattice_lengths("square", 3)
    assert L.values == pytest.approx([SQRT2, 2.0, 2 * SQRT2], abs=1e-12)
    assert [(e.a, e.b) for e in L.entries] == [(1, 0), (1, 1), (2, 0)]
    assert lattice_lengths("triangle", 0.1).values == []
    assert lattice_lengths("square", 0.1).values == []


@given(st.sampled_from(["triangle", "square"]), st.floats(0.05, 25.0))
def test_lattice_equals_brute_force(kind, cutoff):
    L = lattice_lengths(kind, cutoff)
    assert set(L.norms) == lattice_norms(kind, cutoff)
    assert L.values == sorted(set(L.values))
    unit2 = Fraction(9, 4) if kind == "triangle" else Fraction(2)
    for e in L.entries:
        form = e.a * e.a + e.a * e.b + e.b * e.b if kind == "triangle" else e.a * e.a + e.b * e.b
        assert form == e.norm
        assert e.value == pytest.approx(math.sqrt(unit2 * e.norm), abs=1e-12)


def test_lattice_rejects_unknown_kind():
    with pytest.raises((KeyError, ValueError)):
        lattice_lengths("hexagon", 3)


# --- gap arguments -------------------------------------------------------------


@pytest.mark.parametrize(
    "kind, theta, expected",
    [
        ("triangle", 9 / 4, 3 * SQRT3 / 2),
        ("square", 3 * SQRT2 / 2, 2 * SQRT2),
        ("triangle", 1.0, 1.5),
        ("triangle", 3.0, 3.0),
        ("square", 2.0, 2.0),
    ],
)
def test_min_sum_examples_against_brute_force(kind, theta, expected):
    L = lattice_lengths(kind, 10.0)
    got = min_sum_at_least(L, theta)
    assert got == pytest.approx(expected, abs=1e-12)
    assert got == pytest.approx(brute_min_sum(kind, theta), abs=1e-12)


def test_min_sum_witness_sums_to_value():
    total, chosen = min_sum_multiset(lattice_lengths("triangle", 10.0), 9 / 4)
    assert [(e.a, e.b) for e in chosen] == [(1, 1)]
    assert math.fsum(e.value for e in chosen) == total


def test_min_sum_requires_exhaustive_lattice():
    with pytest.raises(ValueError):
        min_sum_at_least(lattice_lengths("triangle", 2.0), 9 / 4)


@given(st.sampled_from(["triangle", "square"]), st.floats(0.1, 6.0), st.floats(0.0, 1.0))
def test_min_sum_bounds_and_monotonicity(kind, theta, frac):
    L = lattice_lengths(kind, 12.0)
    hi = min_sum_at_least(L, theta)
    lo = min_sum_at_least(L, theta * frac + 1e-3)
    assert hi >= theta - 1e-12
    assert lo <= hi + 1e-12


def test_gap_lift():
    assert gap_lift("triangle", 9 / 4)[0] == pytest.approx(3 * SQRT3 / 2, abs=1e-12)
    assert gap_lift("square", 3 * SQRT2 / 2)[0] == pytest.approx(2 * SQRT2, abs=1e-12)
    assert gap_lift("triangle", 3.0)[0] == pytest.approx(3.0, abs=1e-12)
