import random
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from closure_oracle import classify
from conftest import F23
from flatsurgery.exactnum import CNum, Scalar
from flatsurgery.grpclosure import (ClosureClass, Lattice2, closure_1d, closure_2d, contains,
                                    lattice_partner_search)

r2, r3, r6 = F23.sqrt(2), F23.sqrt(3), F23.sqrt(6)
I = CNum(0, 1)


def rand_coord(rnd, irrational):
    q = lambda k: Fraction(rnd.randint(-k, k), rnd.randint(1, 3))
    x = Scalar.rational(q(4), F23)
    if irrational:
        x = x + q(2) * r2 + q(2) * r3 + (q(1) * r6 if rnd.random() < 0.3 else 0)
    return x


def random_generators(rnd):
    """A mix of lattice, line-plus-lattice and dense generator sets."""
    mode = rnd.choice(["lattice", "line", "dense"])
    n = 4 if mode == "dense" else rnd.choice([3, 4])
    while True:
        gens = []
        for _ in range(n):
            re = rand_coord(rnd, mode in ("line", "dense"))
            im = rand_coord(rnd, mode == "dense")
            gens.append(CNum(re, im))
        if any(not a.cross(b).is_zero() for a in gens for b in gens):
            return gens


def as_floats(gens):
    return [(float(g.re), float(g.im)) for g in gens]


def test_closure_1d():
    assert closure_1d([Fraction(2, 3), Fraction(1, 2)]).generator == Fraction(1, 6)
    assert closure_1d([1, r2]) == "dense"
    assert closure_1d([r2, 3 * r2]).generator == r2
    assert closure_1d([0]).generator == 0


def test_closure_2d_worked_cases():
    one = CNum(1)
    assert closure_2d([one, I]).name == "lattice"
    ll = closure_2d([one, CNum(r2), I])
    assert ll.name == "line_lattice"
    assert ll.direction.im.is_zero()
    assert ll.contains(CNum(Fraction(1, 7), 3))
    assert not ll.contains(CNum(0, Fraction(1, 2)))
    assert closure_2d([one, CNum(r2), I, CNum(0, r3)]).name == "dense"
    assert closure_2d([one, CNum(r2)]).name == "line"
    assert closure_2d([CNum(2), CNum(3)]).lattice == (CNum(1),)
    assert closure_2d([]).component == "point"


def test_closure_of_tilted_line():
    # (1, r2) and (r2, 2) are parallel; their span is dense in that line, plus (0, 1)
    cl = closure_2d([CNum(1, r2), CNum(r2, 2), I])
    assert cl.name == "line_lattice"
    assert cl.direction.cross(CNum(1, r2)).is_zero()


def test_contains_relation():
    lat = closure_2d([CNum(1), I])
    fine = closure_2d([CNum(Fraction(1, 2)), I])
    assert contains(fine, lat) and not contains(lat, fine)
    assert contains(ClosureClass("plane"), fine)


@pytest.mark.parametrize("seed", range(4))
def test_closure_matches_float_oracle(seed):
    rnd = random.Random(seed)
    decisive = 0
    for _ in range(25):
        gens = random_generators(rnd)
        exact = closure_2d(gens)
        ref = classify(as_floats(gens))
        assert all(exact.contains(g) for g in gens)
        if ref != "undecided":
            decisive += 1
            assert exact.name == ref, gens
    assert decisive >= 12


@given(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=2, max_size=5))
def test_rational_generators_close_to_lattices(pairs):
    gens = [CNum(a, b) for a, b in pairs]
    cl = closure_2d(gens)
    assert cl.component == "point"
    assert all(cl.contains(g) for g in gens)


def test_partner_search_examples():
    unit = Lattice2(CNum(1), I)
    assert lattice_partner_search([unit, unit]).all_discrete
    res = lattice_partner_search([unit, Lattice2(CNum(2), I), Lattice2(CNum(r2), I)])
    assert (res.partner, res.dense_witness) == (3, None)
    res = lattice_partner_search([unit, Lattice2(CNum(r2), I), Lattice2(CNum(1), CNum(0, r3))])
    assert (res.partner, res.dense_witness) == (2, 3)
    with pytest.raises(ValueError):
        lattice_partner_search([unit])
    with pytest.raises(ValueError):
        Lattice2(CNum(1), CNum(2))
