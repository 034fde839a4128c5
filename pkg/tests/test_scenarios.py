from fractions import Fraction as F

import pytest

from shapes import g2v
from flatsurgery.cyl import cylinder_digraph, horizontal_decomposition
from flatsurgery.scenarios import (_check_route, arranged_instance, chain_demos, check_chain, horizontal_star_spec,
                                   legal_move, scenario_free_loops, scenario_pop, scenario_rank2_pants,
                                   trichotomy_report)
from flatsurgery.surgery import SurgeryError
from flatsurgery.cli import _trichotomy_specs


def failures(rep):
    return [(s.operation, a.label, a.values) for s in rep.steps for a in s.assertions if not a.ok]


@pytest.mark.parametrize("g", [2, 3])
def test_pop(g):
    rep = scenario_pop(g)
    assert rep.ok, (rep.error, failures(rep))
    assert rep.to_json()["verdict"] == "pass"


def test_pop_on_given_surface():
    rep = scenario_pop(surface=g2v())
    assert rep.ok, failures(rep)


def test_pop_rejects_genus():
    rep = scenario_pop(7)
    assert rep.verdict == "fail" and "genus" in rep.error


def test_rank2_genus_two():
    rep = scenario_rank2_pants(arranged_instance(2))
    assert rep.ok, (rep.error, failures(rep))
    assert set(rep.artifacts) == {"stretched.json", "schiffer.json", "path.json"}


def test_free_loops_genus_two():
    rep = scenario_free_loops(arranged_instance(2))
    assert rep.ok, (rep.error, failures(rep))
    labels = [a.label for s in rep.steps for a in s.assertions]
    assert "full rank 2g+n-1" in labels


def test_route_with_loop_rejected():
    d = horizontal_decomposition(g2v())
    dg = cylinder_digraph(d)
    loop = next(l for l in dg.loop_basis if len(l) == 2)
    start = d.above[loop[0]]
    with pytest.raises(SurgeryError, match="loop"):
        _check_route(d, list(loop), start, start, set())


def test_gcd_schema_chain():
    res = chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1))
    assert res.ok
    assert res.chain[0] == (3, 3, 3, 5) and res.chain[-1] == (1, 1, 1, 1)
    assert (1, 1, 3, 1) in res.chain
    # (3,3,3,5) -> (1,1,3,1) keeps the third entry, then the second entry is kept
    assert [j for j, _ in res.moves] == [3, 2]


def test_gcd_chain_rejections():
    res = chain_demos("gcd", (2, 4, 6, 8), (1, 1, 1, 1))
    assert not res.ok and "gcd" in res.reason
    assert not chain_demos("gcd", (1, 1, 1), (1, 1, 1)).ok
    assert legal_move("gcd", (3, 3, 3, 5), (1, 1, 1, 1)) is None
    with pytest.raises(ValueError):
        check_chain("gcd", [(3, 3, 3, 5), (1, 1, 1, 1)])


def test_gcd_bfs_chain():
    res = chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1), method="bfs")
    # the search changes one entry per move, so four moves are needed
    assert res.ok and len(res.chain) == 5
    assert all(sum(a != b for a, b in zip(x, y)) == 1 for x, y in zip(res.chain, res.chain[1:]))


def test_area_chain():
    res = chain_demos("area", (1, 1, 1, 1), (F(1, 2), F(1, 2), F(3, 2), F(3, 2)), eps=F(1, 4))
    assert res.ok
    assert all(sum(t) == 4 for t in res.chain)
    assert not chain_demos("area", (1, 1, 1, 1), (1, 1, 1, 2)).ok


def test_trichotomy():
    rows = trichotomy_report(_trichotomy_specs())
    assert [r["class"] for r in rows] == ["lattice", "lattice", "line_lattice", "dense", "dense"]
    assert all(r["agrees"] and r["meets_components"] for r in rows)


def test_star_spec_helper():
    spec = horizontal_star_spec(4)
    assert spec.genus == 4


def test_reports_are_reproducible():
    assert scenario_pop(2).to_json() == scenario_pop(2).to_json()
    a = chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1), method="bfs")
    assert a.to_json() == chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1), method="bfs").to_json()
