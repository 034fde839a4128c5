from fractions import Fraction as F

import pytest
from hypothesis import given
import hypothesis.strategies as st

from shapes import g2h, g2v, l_shape, square, torus
from flatsurgery.equivalence import translation_equivalent, triangulate_polygon
from flatsurgery.exactnum import CNum
from flatsurgery.homology import homology_and_periods, per_closure_class
from flatsurgery.scenarios import horizontal_star_spec
from flatsurgery.serialize import surface_from_json, surface_svg, surface_to_json
from flatsurgery.surface import Surface, SurfaceError, ValidationError, renormalize, topology_report
from flatsurgery.surgery import StarSumSpec, star_connected_sum


def test_torus_basics():
    t = torus()
    assert t.genus == 1
    assert t.signature.orders == ()
    assert t.area == 1
    assert len(t.vertex_classes) == 1
    assert t.cone_multiples == [1]


def test_gluing_vector_mismatch():
    poly = [(0, 0), (1, 0), (1, 1), (0, 2)]
    with pytest.raises(ValidationError, match="mismatch"):
        Surface.from_polygons([poly], [((0, 0), (0, 2)), ((0, 1), (0, 3))])


def test_disconnected():
    glue = [((p, 0), (p, 2)) for p in (0, 1)] + [((p, 1), (p, 3)) for p in (0, 1)]
    with pytest.raises(ValidationError, match="disconnected"):
        Surface.from_polygons([square(), square()], glue)


def test_bad_polygons():
    with pytest.raises(ValidationError):
        Surface.from_polygons([[(0, 0), (0, 1), (1, 1), (1, 0)]], [((0, 0), (0, 2)), ((0, 1), (0, 3))])
    with pytest.raises(ValidationError):
        Surface.from_polygons([square()], [((0, 0), (0, 2))])


def test_genus_two_shapes():
    for s in (g2h(), g2v()):
        rep = topology_report(s)
        assert s.genus == 2
        assert rep.signature.orders == (1, 1)
        assert rep.area == 2
        assert sorted(m for _, m, _ in rep.zeros) == [2, 2]


def test_l_shape_is_one_double_zero():
    s = l_shape()
    assert s.genus == 2
    assert s.signature.orders == (2,)
    assert s.area == 3


@pytest.mark.parametrize("g", [2, 3, 4])
def test_star_sum_topology(g):
    s = star_connected_sum(horizontal_star_spec(g)).surface
    assert s.genus == g
    assert s.signature.orders == (1,) * (2 * g - 2)
    assert s.area == g


def test_overlapping_slits_rejected():
    spec = StarSumSpec((((1, 0), (0, 1)),) * 3, ((F(1, 2), 0), (F(1, 2), 0)), ((0, 0), (F(1, 4), 0)),
                       ((0, 0), (0, 0)))
    with pytest.raises(SurfaceError):
        star_connected_sum(spec)


def test_homology_ranks_and_periods():
    hb = homology_and_periods(torus(marked=True))
    assert hb.period_module().basis == ((1, 0), (0, 1))
    s = g2h()
    hb = homology_and_periods(s)
    assert len(hb.absolute) == 4
    assert len(hb.absolute) + len(s.zero_classes) - 1 == 5
    m = hb.intersection_matrix()
    assert all(m[i][j] == -m[j][i] for i in range(4) for j in range(4))
    # symplectic: determinant one
    from sympy import Matrix
    assert abs(Matrix(m).det()) == 1


def test_per_closure_examples():
    cl, area, ok = per_closure_class(torus(marked=True))
    assert cl.name == "lattice" and area == 1 and ok
    cl, area, _ = per_closure_class(g2h())
    assert cl.name == "lattice" and area == 2
    from conftest import F23
    r2 = F23.sqrt(2)
    spec = horizontal_star_spec(2, lattices=[((1, 0), (0, 1)), (CNum(r2), CNum(0, 1))])
    cl, area, ok = per_closure_class(star_connected_sum(spec).surface)
    assert cl.name == "line_lattice" and area == 1 + r2 and ok
    assert cl.direction.im.is_zero()


def test_translation_equivalence():
    s = g2h()
    assert translation_equivalent(s, s)
    moved = Surface.from_polygons([square(3, -2)], [((0, 0), (0, 2)), ((0, 1), (0, 3))], marked=[(0, 0)])
    assert translation_equivalent(torus(marked=True), moved)
    other = star_connected_sum(horizontal_star_spec(2, slit=F(1, 3))).surface
    assert not translation_equivalent(s, other)
    assert not translation_equivalent(g2h(), g2v())


def test_renormalize_keeps_surface():
    s = star_connected_sum(horizontal_star_spec(3)).surface
    r = renormalize(s)
    assert translation_equivalent(s, r)
    assert len(r.verts) <= len(s.verts)


def test_json_round_trip_and_svg():
    s = g2v()
    back = surface_from_json(surface_to_json(s))
    assert translation_equivalent(s, back)
    svg = surface_svg(s)
    assert svg.startswith("<svg") and svg.count("<polygon") == 2
    with pytest.raises(ValidationError):
        surface_from_json({"polygons": []})


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=4))
def test_stacked_rectangles_torus(dims):
    """Rectangles stacked vertically with their tops glued cyclically."""
    polys, glue, y = [], [], 0
    n = len(dims)
    # one column of width 1 with varying heights: a torus of area sum(h)
    for k, (_, h) in enumerate(dims):
        polys.append(square(0, y, 1, h))
        y += h
    for k in range(n):
        glue.append(((k, 1), (k, 3)))
        glue.append(((k, 2), ((k + 1) % n, 0)))
    s = Surface.from_polygons(polys, glue)
    assert s.genus == 1
    assert s.area == sum(h for _, h in dims)


def _hull(points):
    pts = sorted(set(points))
    cross = lambda o, a, b: (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=12))
def test_triangulation_of_convex_polygons(points):
    hull = _hull(points)
    if len(hull) < 3:
        return
    vs = [CNum(x, y) for x, y in hull]
    tris = triangulate_polygon(vs)
    assert len(tris) == len(vs) - 2
    area2 = lambda a, b, c: (b - a).cross(c - a)
    total = sum((area2(vs[i], vs[j], vs[k]) for i, j, k in tris), 0 * vs[0].re)
    assert total == sum((vs[i].cross(vs[(i + 1) % len(vs)]) for i in range(len(vs))), 0 * vs[0].re)
    assert all(area2(vs[i], vs[j], vs[k]) > 0 for i, j, k in tris)
