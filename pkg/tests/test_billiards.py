import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pwidths import billiards as bl
from pwidths import domains
from pwidths.geometry import GeometryError, dot, lerp, reflect_point, sub, unit
from conftest import SQRT3


def mid(P, name):
    return domains.named_point(P, "mid:" + name)


def test_fagnano_orbit(T):
    a, b = mid(T, "AB"), mid(T, "BC")
    tr = bl.simulate(T, a, sub(b, a))
    assert tr.terminal.kind == "periodic"
    assert tr.length == pytest.approx(3 * SQRT3 / 2, abs=1e-9)
    assert len(tr.bounces) == 3
    assert tr.terminal.residual <= bl.CLOSE_TOL


def test_perpendicular_start_gives_orthogonal_chord(T):
    p = lerp(T.vertices[0], T.vertices[1], 0.3)
    tr = bl.simulate(T, p, (0.0, 1.0))
    assert tr.terminal.kind == "orthogonal-chord"
    assert tr.length == pytest.approx(1.5, abs=1e-9)


def test_altitude_ends_at_vertex_in_plain_mode(T):
    tr = bl.simulate(T, mid(T, "AB"), (0.0, 1.0), stop_at_orthogonal=False)
    assert tr.terminal.kind == "vertex-terminated" and tr.terminal.vertex == 2
    assert tr.length == pytest.approx(1.5, abs=1e-12)


def test_doubled_altitude_in_t_billiard_mode(T):
    tr = bl.simulate(T, mid(T, "AB"), (0.0, 1.0), mode=bl.T_BILLIARD, stop_at_orthogonal=False)
    assert tr.terminal.kind == "periodic"
    assert tr.length == pytest.approx(3.0, abs=1e-9)
    assert tr.bounces[0].kind == "vertex"


def test_sixty_degree_start_closes_after_six_bounces(T):
    p = lerp(T.vertices[0], T.vertices[1], 0.2)
    tr = bl.simulate(T, p, (0.5, SQRT3 / 2))
    assert tr.terminal.kind == "periodic"
    assert tr.length == pytest.approx(3 * SQRT3, abs=1e-9)
    assert len(tr.bounces) == 6


def test_generic_trajectory_is_truncated(T):
    tr = bl.simulate(T, (0.5, 0.3), (1.0, math.sqrt(2)), max_bounces=50)
    assert tr.terminal.kind == "truncated" and tr.terminal.reason == "bounces"
    assert len(tr.bounces) == 50
    tr = bl.simulate(T, (0.5, 0.3), (1.0, math.sqrt(2)), max_length=5.0)
    assert tr.terminal.reason == "length"


def test_sliding_along_an_edge_is_tangential(T):
    tr = bl.simulate(T, mid(T, "AB"), (1.0, 0.0))
    assert tr.terminal.kind == "truncated" and tr.terminal.reason == "tangential"


def test_errors(T, S):
    with pytest.raises(bl.NotEquilateral):
        bl.simulate(S, (0, 0), (1, 0.3), mode=bl.T_BILLIARD)
    with pytest.raises(GeometryError):
        bl.simulate(T, (5.0, 5.0), (1, 0))
    with pytest.raises(ValueError):
        bl.simulate(T, (1, 0.5), (1, 0), mode="other")


def test_vertex_mirror_is_parallel_to_opposite_side(T):
    for i in range(3):
        m = bl.vertex_mirror(T, i)
        opp = T.edge_line((i + 1) % 3)
        assert abs(m.signed_distance(T.vertices[i])) <= 1e-15
        assert abs(dot(m.normal, opp.direction)) <= 1e-12


def test_vertex_rule_maps_triangle_onto_a_tile(T):
    tiles = {bl._tile_key(g, T.vertices) for g in bl.tessellate(T, 4)}
    for i in range(3):
        g = bl.Isometry.reflection(bl.vertex_mirror(T, i))
        assert bl._tile_key(g, T.vertices) in tiles


@given(st.floats(0.05, 0.95), st.floats(0.2, 2.9))
def test_specular_reflection_preserves_angle(t, ang):
    T = domains.triangle()
    p = lerp(T.vertices[0], T.vertices[1], t)
    tr = bl.simulate(T, p, (math.cos(ang), math.sin(ang)), max_bounces=30)
    for b in tr.bounces:
        if b.dir_out is None or b.kind != "edge":
            continue
        n = T.outward_normal(b.index)
        assert dot(b.dir_in, n) == pytest.approx(-dot(b.dir_out, n), abs=1e-12)
        assert dot(b.dir_in, (-n[1], n[0])) == pytest.approx(dot(b.dir_out, (-n[1], n[0])), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_unfolding_is_straight(seed):
    rng = np.random.default_rng(seed)
    T = domains.triangle()
    start = (float(rng.uniform(0.6, 1.1)), float(rng.uniform(0.1, 0.5)))
    a = float(rng.uniform(0, 2 * math.pi))
    tr = bl.simulate(T, start, (math.cos(a), math.sin(a)), max_bounces=40)
    u = bl.unfold(tr)
    assert u.residual <= 1e-9
    assert u.length == pytest.approx(tr.length, abs=1e-9)
    ends = math.dist(u.points[0], u.points[-1])
    assert ends == pytest.approx(tr.length, abs=1e-8)


def test_unfold_rejects_other_polygon(T, S):
    tr = bl.simulate(T, (1.0, 0.5), (1.0, 0.2), max_bounces=3)
    with pytest.raises(ValueError):
        bl.unfold(tr, base=S)


def test_tessellation_depths(T):
    assert len(bl.tessellate(T, 0)) == 1
    assert len(bl.tessellate(T, 1)) == 4
    sizes = [len(bl.tessellate(T, d)) for d in range(5)]
    assert sizes == sorted(sizes)


def test_lattice_generators():
    assert bl.lattice_coordinates((0.0, 3.0)) == (1, 0, 0.0)
    ia, ib, r = bl.lattice_coordinates((1.5 * SQRT3 + 0.0, 1.5 + 3.0))
    assert (ia, ib) == (1, 1) and r == pytest.approx(0.0, abs=1e-12)


def test_nearest_lattice_length():
    m = bl.nearest_lattice_length(3 * SQRT3 / 2 + 1e-10)
    assert (m.a, m.b, m.norm) == (1, 1, 3)
    assert m.residual <= 2e-10


def test_lattice_membership_only_for_closed(T):
    tr = bl.simulate(T, (0.5, 0.3), (1.0, math.sqrt(2)), max_bounces=10)
    assert bl.lattice_membership(tr) is None
    a, b = mid(T, "AB"), mid(T, "BC")
    m = bl.lattice_membership(bl.simulate(T, a, sub(b, a)))
    assert (m.a, m.b) == (1, 1) and m.residual <= 1e-9


def test_symmetry_groups(T, S):
    assert len(bl.symmetries(T)) == 6
    assert len(bl.symmetries(S)) == 8
    dets = sorted(round(g.det) for g in bl.symmetries(T))
    assert dets == [-1, -1, -1, 1, 1, 1]


def test_trajectories_are_equivariant(T):
    start, d = (1.0, 0.4), (math.cos(1.1), math.sin(1.1))
    ref = bl.simulate(T, start, d, max_bounces=25)
    for g in bl.symmetries(T):
        s2, d2 = bl.transform_state(g, start, d)
        tr = bl.simulate(T, s2, d2, max_bounces=25)
        assert tr.length == pytest.approx(ref.length, abs=1e-9)
        assert tr.terminal.kind == ref.terminal.kind


def test_isometry_algebra(T):
    line = T.edge_line(0)
    r = bl.Isometry.reflection(line)
    p = (0.3, 0.9)
    assert r(r(p)) == pytest.approx(p)
    assert r(p) == pytest.approx(reflect_point(p, line))
    g = r.compose(bl.Isometry.reflection(T.edge_line(1)))
    assert g.inverse()(g(p)) == pytest.approx(p)
    assert g.det == pytest.approx(1.0)


def test_trajectory_json(T):
    a, b = mid(T, "AB"), mid(T, "BC")
    doc = bl.simulate(T, a, sub(b, a)).to_json()
    assert doc["terminal"] == "periodic" and doc["bounces"] == 3
    assert len(doc["segments"]) == 3
