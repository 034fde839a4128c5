from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
import hypothesis.strategies as st

from conftest import F23
from shapes import g2h, g2v, torus
from flatsurgery.cyl import (NotPeriodic, cohomology_classes, cylinder_digraph, detect_legged_pants, find_pants,
                             horizontal_decomposition, p_image, rebuild, rel_twist_orbit_dim, span_report)
from flatsurgery.equivalence import translation_equivalent
from flatsurgery.exactnum import CNum
from flatsurgery.scenarios import horizontal_star_spec
from flatsurgery.surface import Surface, SurfaceError
from flatsurgery.surgery import star_connected_sum

r2, r3 = F23.sqrt(2), F23.sqrt(3)

# hand-traced horizontal lines on the two unit tori:
# G2V: the strip 0 < y < 1/4 runs through both tori (width 2); above it each torus keeps a
# cylinder of height 3/4.  G2H: every horizontal line stays in one torus.
G2V_CYLINDERS = sorted([(F(1, 4), 2), (F(3, 4), 1), (F(3, 4), 1)])
G2H_CYLINDERS = [(1, 1), (1, 1)]


def shape(dec):
    return sorted((c.height, c.width) for c in dec.cylinders)


def upper_zero(s):
    """The zero of G2V sitting at height 1/4."""
    return next(z for z in s.zero_classes if all(p.im == F(1, 4) for _, p in map(s.corner_point, s.vertex_classes[z])))


def test_torus_with_marked_point():
    d = horizontal_decomposition(torus(marked=True))
    assert shape(d) == [(1, 1)]
    assert len(d.saddle_connections) == 1


def test_reference_decompositions():
    d = horizontal_decomposition(g2v())
    assert shape(d) == G2V_CYLINDERS
    assert len(d.saddle_connections) == 4
    d = horizontal_decomposition(g2h())
    assert shape(d) == G2H_CYLINDERS
    assert len(d.saddle_connections) == 4


def test_digraphs():
    dg = cylinder_digraph(horizontal_decomposition(g2h()))
    assert (dg.n_vertices, len(dg.edges), dg.loop_dim) == (2, 4, 3)
    dg = cylinder_digraph(horizontal_decomposition(g2v()))
    assert (dg.n_vertices, len(dg.edges), dg.loop_dim) == (3, 4, 2)
    assert dg.strongly_connected
    dot = dg.to_dot()
    assert dot.count("->") == 4


def test_pants_detection():
    s = g2v()
    d = horizontal_decomposition(s)
    up = upper_zero(s)
    low = next(z for z in s.zero_classes if z != up)
    pu = detect_legged_pants(d, up, 2)
    pl = detect_legged_pants(d, low, 2)
    assert pu.case == 2 and pl.case == 1
    for p in (pu, pl):
        assert p.widths == (2, 1, 1)
        assert p.widths[0] == p.widths[1] + p.widths[2]
    s = g2h()
    d = horizontal_decomposition(s)
    assert all(detect_legged_pants(d, z, 2) is None for z in s.zero_classes)
    assert find_pants(d) == []


def test_cohomology_examples():
    s = g2v()
    d = horizontal_decomposition(s)
    strip = next(c for c in d.cylinders if c.height == F(1, 4))
    eta = cohomology_classes(d, ("shear", strip.id))
    assert eta.on_crossing(strip.id) == F(1, 4)
    assert all(eta.on_sc(g.id) == 0 for g in d.saddle_connections)
    rel = cohomology_classes(d, ("rel", upper_zero(s)))
    assert all(x.is_zero() for x in p_image(d, rel))
    hs = cohomology_classes(d, "hstretch")
    assert sum((hs.on_sc(g) for g in strip.bottom), 0 * r2) == 2
    with pytest.raises(SurfaceError):
        cohomology_classes(d, ("loop", (0, 0)))


def test_span_reports():
    d = horizontal_decomposition(g2v())
    dg = cylinder_digraph(d)
    shears = [cohomology_classes(d, ("shear", c.id)) for c in d.cylinders]
    loops = [cohomology_classes(d, ("loop", l)) for l in dg.loop_basis]
    assert span_report(d, shears + loops).rank == 5
    assert span_report(d, shears + [cohomology_classes(d, "standard")]).rank == 3
    rel = cohomology_classes(d, ("rel", upper_zero(d.surface)))
    assert span_report(d, [rel] + shears).rank == 3


def test_twist_orbit_dims():
    assert rel_twist_orbit_dim(2, 1, 1).dim == 1
    assert len(rel_twist_orbit_dim(2, 1, 1).resonances) == 2
    assert rel_twist_orbit_dim(1 + r2, 1, r2).dim == 2
    o = rel_twist_orbit_dim(1 + r2 + r3, 1, r2 + r3)
    assert o.dim == 3 and o.resonances == []


def test_rebuild_identity_and_area():
    for s in (g2v(), g2h(), star_connected_sum(horizontal_star_spec(3)).surface):
        d = horizontal_decomposition(s)
        out, _ = rebuild(d)
        assert translation_equivalent(s, out)
        assert sum((c.height * c.width for c in d.cylinders), 0 * r2) == s.area


def test_budget_exhaustion_without_horizontal_period():
    # periods 1 + i*sqrt(2) and i: no nonzero integer combination is horizontal
    poly = [(0, 0), (1, r2), (1, 1 + r2), (0, 1)]
    s = Surface.from_polygons([[CNum(*p) for p in poly]], [((0, 0), (0, 2)), ((0, 1), (0, 3))], marked=[(0, 0)])
    with pytest.raises(NotPeriodic):
        horizontal_decomposition(s, budget=50)


@settings(max_examples=15)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(1, 5))
def test_star_sum_area_matches_cylinders(a, b, k):
    assume(F(k, 8) < F(a, 4))
    spec = horizontal_star_spec(2, slit=F(k, 8), lattices=[((1, 0), (0, 1)), ((F(a, 4), 0), (0, F(b, 4)))])
    s = star_connected_sum(spec).surface
    d = horizontal_decomposition(s)
    assert sum((c.height * c.width for c in d.cylinders), 0 * r2) == s.area
    for c in d.cylinders:
        top = sum((d.saddle_connections[g].length for g in c.top), 0 * r2)
        bot = sum((d.saddle_connections[g].length for g in c.bottom), 0 * r2)
        assert top == bot == c.width
