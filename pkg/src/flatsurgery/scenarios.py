"""Desk-scale pipelines that replay the cylinder and slit constructions end to end.

Each pipeline records its steps with exact assertion values in a
:class:`ScenarioReport`.  Paths are built in the parallelogram normal form
produced by :func:`flatsurgery.cyl.rebuild`, where cylinder ``i`` is the
polygon ``C{i}`` and its crossing gamma_C is the left side.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .cyl import (Cylinder, CylinderDecomposition, cohomology_classes, cylinder_digraph, detect_legged_pants,
                  find_pants, horizontal_decomposition, rebuild, span_report)
from .develop import Germ, place_key, point_germ, walk
from .equivalence import translation_equivalent
from .exactnum import CNum, Scalar, as_scalar, field as make_field, qdim_reciprocals
from .grpclosure import closure_2d
from .homology import homology_and_periods, per_closure_class
from .serialize import surface_to_json
from .surface import Surface, SurfaceError
from .surgery import (Matrix2, PathSpec, StarSumSpec, SurgeryError, cylinder_deform, deform_by_loops, gl2_act,
                      make_fully_periodic, rel_deform, schiffer, schiffer_many, sector_of, star_connected_sum)

__all__ = ["ScenarioReport", "scenario_pop", "scenario_rank2_pants", "scenario_free_loops", "chain_demos",
           "check_chain", "trichotomy_report", "arranged_instance", "horizontal_star_spec", "ChainResult"]


# ---------------------------------------------------------------------------
# reports


@dataclass
class Assertion:
    label: str
    ok: bool
    values: dict


@dataclass
class Step:
    operation: str
    snapshot: dict | None = None
    assertions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(a.ok for a in self.assertions)


@dataclass
class ScenarioReport:
    name: str
    steps: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def verdict(self) -> str:
        return "pass" if self.error is None and all(s.ok for s in self.steps) else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def step(self, operation: str, surface: Surface | None = None) -> Step:
        st = Step(operation, _snapshot(surface) if surface is not None else None)
        self.steps.append(st)
        return st

    def check(self, label: str, ok: bool, **values) -> bool:
        if not self.steps:
            self.step("setup")
        self.steps[-1].assertions.append(Assertion(label, bool(ok), {k: _show(v) for k, v in values.items()}))
        return bool(ok)

    def first_failure(self):
        for i, st in enumerate(self.steps):
            for a in st.assertions:
                if not a.ok:
                    return i, st.operation, a.label
        return None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "error": self.error,
            "first_failure": self.first_failure(),
            "steps": [{"operation": s.operation, "snapshot": s.snapshot,
                       "assertions": [{"label": a.label, "ok": a.ok, "values": a.values} for a in s.assertions]}
                      for s in self.steps],
            "artifacts": sorted(self.artifacts),
        }


def _show(v):
    if isinstance(v, (list, tuple)):
        return [_show(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _show(x) for k, x in v.items()}
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    return str(v)


def _module(s: Surface):
    return homology_and_periods(s).period_module().basis


def _snapshot(s: Surface) -> dict:
    return {"signature": str(s.signature), "area": str(s.area), "polygons": len(s.verts),
            "period_module": [[str(x) for x in row] for row in _module(s)]}


def _isoperiodic(rep: ScenarioReport, before: Surface, after: Surface, label: str = "isoperiodic") -> bool:
    m0, m1 = _module(before), _module(after)
    return rep.check(label, m0 == m1 and before.area == after.area and before.signature == after.signature,
                     area_before=before.area, area_after=after.area,
                     signature_before=before.signature, signature_after=after.signature,
                     module_equal=m0 == m1)


# ---------------------------------------------------------------------------
# instances


def horizontal_star_spec(g: int, slit=Fraction(1, 2), lattices=None) -> StarSumSpec:
    """Unit tori (or the given lattices) with horizontal slits stacked in T_1."""
    lattices = lattices or [((1, 0), (0, 1))] * g
    bases1 = [(0, Fraction(k, g)) for k in range(g - 1)]
    return StarSumSpec(tuple(lattices), tuple((slit, 0) for _ in range(g - 1)), tuple(bases1),
                       tuple((0, 0) for _ in range(g - 1)))


def arranged_instance(genus: int) -> Surface:
    """Fully periodic surface with a pants whose circumferences have independent reciprocals.

    Saddle connection lengths are set through loop coordinates in Q(sqrt2, sqrt3).
    """
    F = make_field(2, 3)
    r2, r3 = F.sqrt(2), F.sqrt(3)
    if genus == 2:
        spec = StarSumSpec((((1, 0), (0, 1)), ((1, 0), (0, 1))), ((0, Fraction(1, 4)),), ((0, 0),), ((0, 0),))
        coords = [Scalar.rational(1, F), r2 + r3]
    elif genus == 3:
        spec = horizontal_star_spec(3)
        coords = [Scalar.rational(1, F), r3, r2 + r3]
    else:
        raise ValueError("arranged instances exist for genus 2 and 3")
    s = make_fully_periodic(star_connected_sum(spec).surface)
    dec = horizontal_decomposition(s)
    loops = cylinder_digraph(dec).loop_basis
    lengths = {g.id: sum((t for l, t in zip(loops, coords) if g.id in l), Scalar.zero(F))
               for g in dec.saddle_connections}
    out, _ = rebuild(dec, lengths=lengths)
    return out


# ---------------------------------------------------------------------------
# normal-form charts and path construction


class _Chart:
    """The rebuilt normal form of a decomposition, with coordinates of saddle connections."""

    def __init__(self, dec: CylinderDecomposition, heights=None, twists=None):
        self.dec = dec
        self.heights = {c.id: as_scalar((heights or {}).get(c.id, c.height)) for c in dec.cylinders}
        self.surface, self.bottom_edge = rebuild(dec, twists=twists, heights=heights)

    def _ends(self, e):
        s = self.surface
        pid, k = s.edge_loc[e]
        vs = s.verts[pid]
        return pid, vs[k], vs[(k + 1) % len(vs)]

    def bottom_point(self, g: int, lam=Fraction(1, 2)):
        pid, a, b = self._ends(self.bottom_edge[g])
        return pid, a + (b - a) * lam

    def top_point(self, g: int, lam=Fraction(1, 2)):
        pid, a, b = self._ends(self.surface.glue[self.bottom_edge[g]])
        return pid, b + (a - b) * lam  # top copies run right to left

    def corner(self, c: int) -> tuple[int, CNum]:
        """Top-left corner of cylinder c: its edge id and point."""
        pid = f"C{c}"
        return self.surface.edges[pid][-1], self.surface.verts[pid][-1]

    def bottom_vertex(self, c: int, k: int) -> CNum:
        return self.surface.verts[f"C{c}"][k]

    def interior(self, c: int, frac=Fraction(1, 8)) -> tuple[str, CNum]:
        """A point of cylinder c at relative height frac, inside its polygon."""
        pid = f"C{c}"
        vs = self.surface.verts[pid]
        w = self.dec.cylinders[c].width
        tau = vs[-1].re
        h = self.heights[c]
        return pid, CNum(tau * frac + w / 2, h * frac)

    def path_from_corner(self, c: int, segments, kind="path") -> PathSpec:
        corner, _ = self.corner(c)
        s = self.surface
        zi = s.corner_class[corner]
        sector = sector_of(s, zi, Germ("v", segments[0], corner))
        return PathSpec(s.zero_ref(zi), tuple(segments), kind, sector)


def _case_one(dec: CylinderDecomposition, zero: int, target: int | None = None):
    """(decomposition, zero, pants, target) with the pants legs below C_0, rotating by pi if needed."""
    p = detect_legged_pants(dec, zero)
    if p is None:
        raise SurgeryError("no pants at the chosen zero")
    if p.case == 1:
        return dec, zero, p, target
    chart = _Chart(dec)
    s = chart.surface
    corner = chart.bottom_edge[p.loops[0]]
    rot = gl2_act(Matrix2(-1, 0, 0, -1), s)
    dec2 = horizontal_decomposition(rot)
    z2 = rot.corner_class[corner]
    p2 = detect_legged_pants(dec2, z2)
    if p2 is None or p2.case != 1:
        raise SurgeryError("rotation did not produce legs below")
    if target is not None:
        pid, pt = chart.interior(target, Fraction(1, 2))
        target = dec2.cylinder_containing(pid, -pt)
    return dec2, z2, p2, target


def _least_power_stretch(h: Scalar, bound: Scalar) -> Scalar:
    """Least T = 2^k (k >= 0) with (1 + T) h > bound."""
    T = Fraction(1)
    while not (h * (1 + T) > bound):
        T *= 2
    return as_scalar(T)


def _loop_path_cylinders(dec, cycle_scs):
    return [dec.below[g] for g in cycle_scs]


def _shortest_path(dec, start: int, targets: set, forbidden: set):
    """Edge list of a shortest directed path start -> targets avoiding forbidden vertices."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v in targets and v != start:
            out = []
            while prev[v] is not None:
                g, u = prev[v]
                out.append(g)
                v = u
            return out[::-1]
        for g in sorted(dec.saddle_connections, key=lambda sc: sc.id):
            if dec.above[g.id] == v:
                w = dec.below[g.id]
                if w not in prev and w not in forbidden:
                    prev[w] = (g.id, v)
                    queue.append(w)
    return None


def _check_route(dec, route, start, end, forbidden):
    """Validate an explicit digraph path; a repeated cylinder means it contains a loop."""
    seen = [start]
    for g in route:
        if g not in dec.above or dec.above[g] != seen[-1]:
            raise SurgeryError(f"saddle connection {g} does not leave cylinder {seen[-1]}")
        seen.append(dec.below[g])
    if len(set(seen)) != len(seen):
        raise SurgeryError("digraph path contains a loop")
    if seen[-1] != end or forbidden & set(seen):
        return None
    return route


def _crossing(chart: _Chart, g_in: int, g_out: int) -> CNum:
    """Segment crossing below(g_in) from the middle of g_in to the middle of g_out."""
    _, a = chart.top_point(g_in)
    _, b = chart.bottom_point(g_out)
    return b - a


# ---------------------------------------------------------------------------
# population: fully periodic form


def scenario_pop(g: int = 2, spec: StarSumSpec | None = None, surface: Surface | None = None) -> ScenarioReport:
    rep = ScenarioReport(f"pop(g={g})")
    try:
        if surface is None:
            if not 2 <= g <= 5:
                raise SurgeryError("genus must be between 2 and 5")
            spec = spec or horizontal_star_spec(g)
            surface = star_connected_sum(spec).surface
        rep.step("input", surface)
        g = surface.genus
        rep.check("genus", 2 <= g <= 5, genus=g)
        out = make_fully_periodic(surface)
        rep.step("make_fully_periodic", out)
        dec = horizontal_decomposition(out)
        dg = cylinder_digraph(dec)
        n = len(dec.cylinders)
        rep.check("3g-3 cylinders", n == 3 * g - 3, cylinders=n, expected=3 * g - 3)
        rep.check("all saddle connections are loops", all(sc.is_loop for sc in dec.saddle_connections))
        rep.check("|E| = 4g-4", len(dg.edges) == 4 * g - 4, edges=len(dg.edges))
        rep.check("dim L = g", dg.loop_dim == g, loop_dim=dg.loop_dim)
        total = sum((c.height * c.width for c in dec.cylinders), Scalar.zero(out.field))
        rep.check("sum of h*w = area", total == out.area, sum_hw=total, area=out.area)
        _isoperiodic(rep, surface, out)
        ok = True
        for c in dec.cylinders:
            tops = {dec.saddle_connections[x].start for x in c.top}
            bots = {dec.saddle_connections[x].start for x in c.bottom}
            ok &= len(tops) == 1 and len(bots) == 1 and tops != bots
        rep.check("one zero on top and one on bottom of each cylinder", ok)
        rep.artifacts["fully_periodic.json"] = surface_to_json(out)
        rep.artifacts["digraph.dot"] = dg.to_dot(dec)
    except SurfaceError as exc:
        rep.error = str(exc)
    return rep


# ---------------------------------------------------------------------------
# rank two: new pants through a Schiffer variation


def scenario_rank2_pants(base: Surface, target: int | None = None, zero: int | None = None,
                         shear=Fraction(1, 3), route: Sequence[int] | None = None) -> ScenarioReport:
    """Stretch a leg, run a Schiffer variation along a loop-free digraph path, and read off a new pants.

    ``zero`` is a vertex class of ``base`` carrying a pants and ``target`` a cylinder
    id of ``horizontal_decomposition(base)``; both are chosen automatically when None.
    With three cylinders only (genus 2) the target is the path leg itself.  An explicit
    ``route`` (saddle connection ids from the leg down to the target) is checked, not searched.
    """
    rep = ScenarioReport("rank2_pants")
    try:
        dec0 = horizontal_decomposition(base)
        rep.step("input", base)
        candidates = [p.zero for p in find_pants(dec0)] if zero is None else [zero]
        plan = None
        for z in candidates:
            dec, zz, p, tgt = _case_one(dec0, z, target)
            c0 = p.cylinders[0]
            for leg, other in ((1, 2), (2, 1)):
                c1, c2 = p.cylinders[leg], p.cylinders[other]
                g1 = p.loops[leg - 1]
                if tgt is not None:
                    options = [tgt]
                else:
                    options = [c.id for c in dec.cylinders if c.id not in p.cylinders] or [c1]
                for C in options:
                    if C in (c0, c2):
                        continue
                    if route is not None:
                        r = _check_route(dec, list(route), c1, C, {c0, c2})
                    elif C == c1:
                        r = []
                    else:
                        r = _shortest_path(dec, c1, {C}, {c0, c2})
                    if r is not None:
                        plan = (dec, zz, p, c0, c1, c2, g1, r, C)
                        break
                if plan:
                    break
            if plan:
                break
        if plan is None:
            raise SurgeryError("no loop-free digraph path from C_0 through a leg to the target")
        dec, zz, p, c0, c1, c2, g1, route, C = plan
        cyl = dec.cylinders
        rep.step(f"plan: zero {zz}, C_0=C{c0}, leg C{c1}, stretched C{c2}, target C{C}, path {route}")
        q0 = qdim_reciprocals(*p.widths)
        rep.check("reciprocal Q-dimension of the pants is 3", q0 == 3, qdim=q0, widths=list(p.widths))
        H = sum((c.height for c in cyl), Scalar.zero(base.field))
        T = _least_power_stretch(cyl[c2].height, 2 * H)
        h2 = cyl[c2].height * (1 + T)
        chart = _Chart(dec, heights={c2: h2})
        rep.step(f"stretch C{c2} by T={T}", chart.surface)
        rep.check("stretched height exceeds 2H", h2 > 2 * H, height=h2, H=H)
        # path: from Z at the top-left corner of C_1 down through the route, ending inside C
        segs = _rank2_segments(chart, c1, route, C)
        phi = chart.path_from_corner(c1, segs)
        pid_c, pt_c = chart.interior(C, Fraction(1, 4))
        res = schiffer_many(chart.surface, [phi], [(pid_c, pt_c)])
        Y = res.surface
        rep.step("schiffer along the path", Y)
        _isoperiodic(rep, chart.surface, Y)
        decY = horizontal_decomposition(Y)
        CY = decY.cylinder_containing(*res.tracked[0])
        zY = Y.singular_class(res.inverse.start)
        pY = detect_legged_pants(decY, zY)
        w, w2 = cyl[C].width, cyl[c2].width
        rep.check("new pants at the moved zero", pY is not None and CY in pY.cylinders,
                  pants=None if pY is None else list(pY.cylinders), C=CY)
        expected = sorted([w, w + w2, w2], key=float)
        got = sorted(pY.widths, key=float) if pY else []
        rep.check("circumferences (w, w + w_2, w_2)", got == expected, got=got, expected=expected)
        if pY is not None:
            rep.check("new pants satisfies w_0 = w_1 + w_2", pY.widths[0] == pY.widths[1] + pY.widths[2],
                      widths=list(pY.widths), qdim=qdim_reciprocals(*pY.widths))
        back, _ = schiffer(Y, res.inverse)
        rep.step("inverse Schiffer", back)
        rep.check("inverse restores the stretched surface", bool(translation_equivalent(back, chart.surface)))
        # commutation: twist C by u before or after the Schiffer variation
        u = as_scalar(shear)
        chart_u = _Chart(dec, heights={c2: h2}, twists={C: cyl[C].twist + u})
        phi_u = chart_u.path_from_corner(c1, segs)
        lhs, _ = schiffer(chart_u.surface, phi_u)
        hY = decY.cylinders[CY].height
        rhs = cylinder_deform(Y, CY, u / hY, 0, dec=decY)
        rep.step(f"shear C by {u} before and after the Schiffer variation", lhs)
        rep.check("shear and Schiffer commute", bool(translation_equivalent(lhs, rhs)))
        rep.artifacts["stretched.json"] = surface_to_json(chart.surface)
        rep.artifacts["schiffer.json"] = surface_to_json(Y)
        rep.artifacts["path.json"] = phi.to_json()
    except SurfaceError as exc:
        rep.error = str(exc)
    return rep


def _rank2_segments(chart: _Chart, c1: int, route: list, C: int) -> list:
    dec = chart.dec
    _, z = chart.corner(c1)
    if not route:
        w = dec.cylinders[c1].width
        return [CNum(w / 4, -chart.heights[c1] / 2)]
    segs = []
    _, b = chart.bottom_point(route[0])
    segs.append(b - z)
    for g_in, g_out in zip(route, route[1:]):
        segs.append(_crossing(chart, g_in, g_out))
    segs.append(CNum(0, -chart.heights[C] / 2))
    return segs


# ---------------------------------------------------------------------------
# loops: stretch - Schiffer - restore against the loop deformation


def _after_leg(dec, c0: int, g: int) -> int:
    """Index of the bottom vertex of C_0 that follows the leg loop g."""
    bot = dec.cylinders[c0].bottom
    return (bot.index(g) + 1) % len(bot)


def _loop_segments_from_zero(chart: _Chart, c0: int, leg: int, loop_scs: list) -> list:
    """Loop from Z through the leg, around the digraph loop, and back to Z at the bottom of C_0.

    It leaves from the top-left corner of the leg, where the leg loop starts, and
    closes at the bottom vertex of C_0 right after that loop.
    """
    _, z = chart.corner(leg)
    segs = []
    _, b = chart.bottom_point(loop_scs[1])
    segs.append(b - z)
    for g_in, g_out in zip(loop_scs[1:], loop_scs[2:]):
        segs.append(_crossing(chart, g_in, g_out))
    _, a = chart.top_point(loop_scs[-1])
    end = chart.bottom_vertex(c0, _after_leg(chart.dec, c0, loop_scs[0]))
    segs.append(end - a)
    return segs


def rebased(dec: CylinderDecomposition, c: int, k: int) -> CylinderDecomposition:
    """The same decomposition with the crossing of cylinder c based at bottom vertex k."""
    cyl = dec.cylinders[c]
    if k == 0:
        return dec
    shift = sum((dec.saddle_connections[g].length for g in cyl.bottom[:k]), Scalar.zero(dec.surface.field))
    twist = cyl.twist - shift
    while twist.sign() < 0:
        twist = twist + cyl.width
    new = Cylinder(cyl.id, cyl.bottom[k:] + cyl.bottom[:k], cyl.top, cyl.height, cyl.width, twist)
    cyls = list(dec.cylinders)
    cyls[c] = new
    return CylinderDecomposition(dec.surface, dec.saddle_connections, cyls)


def _rotate_cycle(cycle, first):
    k = cycle.index(first)
    return list(cycle[k:]) + list(cycle[:k])


def _free_loop_case(rep, dec, p, loop):
    """Run the surgery route for one basis loop.

    Returns the resulting surface, the width w_2 of the stretched leg, and the
    chart whose crossings the route leaves fixed.
    """
    cyl = dec.cylinders
    c0 = p.cylinders[0]
    legs = {p.cylinders[1]: p.loops[0], p.cylinders[2]: p.loops[1]}
    H_all = sum((c.height for c in cyl), Scalar.zero(dec.surface.field))
    through0 = any(dec.above[g] == c0 or dec.below[g] == c0 for g in loop)
    if through0:
        leg = next(c for c, g in legs.items() if g in loop)
        c2 = next(c for c in legs if c != leg)
        others = H_all - cyl[c2].height
        T = _least_power_stretch(cyl[c2].height, others)
        h2 = cyl[c2].height * (1 + T)
        chart = _Chart(dec, heights={c2: h2})
        scs = _rotate_cycle(list(loop), legs[leg])
        segs = _loop_segments_from_zero(chart, c0, leg, scs)
        phi = chart.path_from_corner(leg, segs, kind="loop")
        track = chart.interior(c2)
        rep.step(f"loop {tuple(loop)} through C_0: stretch C{c2} by T={T}, Schiffer along the lifted loop",
                 chart.surface)
        res = schiffer_many(chart.surface, [phi], [track])
        _isoperiodic(rep, chart.surface, res.surface)
        Y, tracked = res.surface, res.tracked[0]
        hol = sum(segs[1:], segs[0])
        ref = rebased(dec, c0, _after_leg(dec, c0, legs[leg]))
    else:
        plan = None
        for leg in legs:
            c2 = next(c for c in legs if c != leg)
            loop_cyls = {dec.below[g] for g in loop}
            route = _shortest_path(dec, leg, loop_cyls, {c0, c2})
            if route is not None:
                plan = (leg, c2, route)
                break
        if plan is None:
            raise SurgeryError(f"no digraph path from a leg to loop {tuple(loop)}")
        leg, c2, route = plan
        others = H_all - cyl[c2].height
        T = _least_power_stretch(cyl[c2].height, 2 * others)
        h2 = cyl[c2].height * (1 + T)
        chart = _Chart(dec, heights={c2: h2})
        Dp = dec.below[route[-1]]
        g_out = next(g for g in loop if dec.above[g] == Dp)
        # rho: from Z in the leg through the route to the middle of the loop's exit from D_p
        _, z = chart.corner(leg)
        segs = []
        _, b = chart.bottom_point(route[0])
        segs.append(b - z)
        for a_, b_ in zip(route, route[1:]):
            segs.append(_crossing(chart, a_, b_))
        _, top = chart.top_point(route[-1])
        _, star = chart.bottom_point(g_out)
        segs.append(star - top)
        rho = chart.path_from_corner(leg, segs)
        # lifted loop, starting where rho ends
        order = _rotate_cycle(list(loop), g_out)
        lsegs = [_crossing(chart, a_, b_) for a_, b_ in zip(order, order[1:] + order[:1])]
        pid_probe, probe = chart.top_point(g_out)
        probe = (pid_probe, probe + lsegs[0] / 2)
        track = chart.interior(c2)
        rep.step(f"loop {tuple(loop)} away from C_0: stretch C{c2} by T={T}, Schiffer along route {route}",
                 chart.surface)
        r1 = schiffer_many(chart.surface, [rho], [track, probe])
        Y1 = r1.surface
        _isoperiodic(rep, chart.surface, Y1)
        zi = Y1.singular_class(r1.inverse.start)
        ell = _path_through(Y1, zi, lsegs, r1.tracked[1])
        inv = r1.inverse
        tr = walk(Y1, inv.germ(Y1), inv.segments[0] / 2)
        if tr.end.kind != "p":
            raise SurgeryError("inverse path probe landed on a vertex")
        rep.step("Schiffer along the lifted loop", Y1)
        r2 = schiffer_many(Y1, [ell], [r1.tracked[0], (tr.end.pid, tr.end.pt)])
        Y2 = r2.surface
        _isoperiodic(rep, Y1, Y2)
        zi2 = Y2.singular_class(r2.inverse.start)
        back = _path_through(Y2, zi2, inv.segments, r2.tracked[1], kind="path")
        rep.step("Schiffer along the inverse path", Y2)
        r3 = schiffer_many(Y2, [back], [r2.tracked[0]])
        _isoperiodic(rep, Y2, r3.surface)
        Y, tracked = r3.surface, r3.tracked[0]
        hol = sum(lsegs[1:], lsegs[0])
        ref = dec
    decY = horizontal_decomposition(Y)
    cY = decY.cylinder_containing(*tracked)
    hY = decY.cylinders[cY].height
    rep.check("stretched leg keeps its circumference", decY.cylinders[cY].width == cyl[c2].width,
              width=decY.cylinders[cY].width)
    # the twin strips leave the leg twisted by the loop's horizontal holonomy
    rep.step(f"restore the height of the stretched leg and undo its twist offset {hol.re}")
    out = cylinder_deform(Y, cY, -hol.re / hY, cyl[c2].height / hY - 1, dec=decY)
    return out, cyl[c2].width, ref


def _path_through(s: Surface, zi: int, segs, probe, kind: str = "loop") -> PathSpec:
    """PathSpec at vertex class zi whose first segment passes through the probe point."""
    target = place_key(s, point_germ(s, probe[0], probe[1], segs[0]))
    for k in range(s.cone_multiples[zi]):
        ps = PathSpec(s.zero_ref(zi), tuple(segs), kind, k)
        tr = walk(s, ps.germ(s), segs[0] / 2)
        if place_key(s, tr.end) == target:
            return ps
    raise SurgeryError("lifted loop not found at the moved zero")


def _rel_residual(out, direct, w2):
    """Name the mismatch when it is a Rel move at some zero by a small multiple of w2."""
    for zi in direct.zero_classes:
        for k in (1, -1, 2, -2):
            try:
                if translation_equivalent(out, rel_deform(direct, zi, w2 * k)):
                    return f"Rel at zero {direct.zero_ref(zi)} by {k}*w2"
            except SurfaceError:
                break
    return "not a Rel move by a small multiple of w2"


def scenario_free_loops(base: Surface, zero: int | None = None) -> ScenarioReport:
    rep = ScenarioReport("free_loops")
    try:
        dec0 = horizontal_decomposition(base)
        rep.step("input", base)
        pants = find_pants(dec0)
        if not pants:
            raise SurgeryError("no pants on the input")
        z = pants[0].zero if zero is None else zero
        dec, zz, p, _ = _case_one(dec0, z)
        s = dec.surface
        dg = cylinder_digraph(dec)
        rep.check("loop space dimension", dg.loop_dim == len(dg.edges) - len(dec.cylinders) + 1,
                  loop_dim=dg.loop_dim)
        for loop in dg.loop_basis:
            out, w2, ref = _free_loop_case(rep, dec, p, loop)
            direct = deform_by_loops(s, [loop], [w2], dec=ref)
            base_of = {c.id: c.bottom[0] for c in ref.cylinders}
            rep.step(f"compare with the loop deformation by {w2}", out)
            same = bool(translation_equivalent(out, direct))
            extra = {} if same else {"residual": _rel_residual(out, direct, w2)}
            rep.check(f"routes agree for loop {tuple(loop)}", same, crossings_based_at=base_of, **extra)
        classes = [cohomology_classes(dec, ("loop", tuple(l))) for l in dg.loop_basis]
        classes += [cohomology_classes(dec, ("shear", c.id)) for c in dec.cylinders]
        rank = span_report(dec, classes).rank
        expected = 2 * s.genus + len(s.zero_classes) - 1
        rep.step("span of loop and shear classes")
        rep.check("full rank 2g+n-1", rank == expected, rank=rank, expected=expected)
    except SurfaceError as exc:
        rep.error = str(exc)
    return rep


# ---------------------------------------------------------------------------
# chains of tuples


@dataclass
class ChainResult:
    kind: str
    chain: list
    moves: list  # (index j fixed, certificate values)
    ok: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "ok": self.ok, "reason": self.reason,
                "chain": [[str(x) for x in t] for t in self.chain],
                "moves": [{"fixed": j, **{k: str(v) for k, v in c.items()}} for j, c in self.moves]}


def _gcd_all(xs) -> int:
    out = 0
    for x in xs:
        out = gcd(out, x)
    return out


def _gcd_except(t, j) -> int:
    return _gcd_all(x for k, x in enumerate(t) if k != j)


def legal_move(kind: str, a, b):
    """The 1-based index j >= 2 certifying a ~ b as a single move, or None."""
    if len(a) != len(b):
        return None
    if kind == "gcd":
        if any(x <= 0 for x in a + b) or _gcd_all(a) != 1 or _gcd_all(b) != 1:
            return None
        for j in range(1, len(a)):
            if a[j] == b[j] and _gcd_except(a, j) == _gcd_except(b, j):
                return j + 1
        return None
    if any(x <= 0 for x in list(a) + list(b)) or sum(a) != sum(b):
        return None
    for j in range(1, len(a)):
        if a[j] == b[j]:
            return j + 1
    return None


def check_chain(kind: str, chain) -> list:
    """Certificates for consecutive moves; raises ValueError at the first illegal move."""
    certs = []
    for a, b in zip(chain, chain[1:]):
        j = legal_move(kind, tuple(a), tuple(b))
        if j is None:
            raise ValueError(f"illegal move {tuple(a)} -> {tuple(b)}")
        cert = {"kept": a[j - 1]}
        if kind == "gcd":
            cert["gcd_others"] = _gcd_except(a, j - 1)
        certs.append((j, cert))
    return certs


def _dedupe(chain):
    out = []
    for t in chain:
        if not out or tuple(out[-1]) != tuple(t):
            out.append(tuple(t))
    return out


def _gcd_schema(m):
    g = len(m)
    mg = _gcd_except(m, g - 1)
    return _dedupe([tuple(m), tuple([mg] * (g - 1) + [m[-1]]), tuple([1] * (g - 2) + [mg, 1]), tuple([1] * g)])


def _gcd_bfs(src, dst, bound):
    src, dst = tuple(src), tuple(dst)
    g = len(src)
    prev = {src: None}
    queue = deque([src])
    while queue:
        t = queue.popleft()
        if t == dst:
            out = [t]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        for k in range(g):
            for v in range(1, bound + 1):
                if v == t[k]:
                    continue
                u = t[:k] + (v,) + t[k + 1:]
                if u in prev or _gcd_all(u) != 1:
                    continue
                if legal_move("gcd", t, u) is None:
                    continue
                prev[u] = t
                queue.append(u)
    return None


def chain_demos(kind: str, start, end, method: str = "schema", eps=None) -> ChainResult:
    start, end = tuple(start), tuple(end)
    g = len(start)
    if len(end) != g:
        return ChainResult(kind, [], [], False, "length mismatch")
    if g < 4:
        return ChainResult(kind, [], [], False, "chains need g >= 4")
    if kind == "gcd":
        for t in (start, end):
            if any(not isinstance(x, int) or x <= 0 for x in t):
                return ChainResult(kind, [], [], False, "entries must be positive integers")
            if _gcd_all(t) != 1:
                return ChainResult(kind, [], [], False, f"gcd of {t} is {_gcd_all(t)}, not 1")
        if method == "bfs":
            chain = _gcd_bfs(start, end, 2 * max(start + end))
            if chain is None:
                return ChainResult(kind, [], [], False, "no chain within the search bound")
        else:
            chain = _dedupe(_gcd_schema(start) + _gcd_schema(end)[::-1])
    elif kind == "area":
        a = [Fraction(x) if not isinstance(x, Scalar) else x for x in start]
        b = [Fraction(x) if not isinstance(x, Scalar) else x for x in end]
        if sum(a) != sum(b):
            return ChainResult(kind, [], [], False, "sums differ")
        if any(x <= 0 for x in a + b):
            return ChainResult(kind, [], [], False, "entries must be positive")
        total = sum(a)
        if eps is None:
            eps = min(a + b) / 4
        eps = Fraction(eps) if not isinstance(eps, Scalar) else eps

        def arm(t):
            head = sum(t[:-1]) - (g - 2) * eps
            return [tuple(t), tuple([eps] * (g - 2) + [head, t[-1]]), tuple([eps] * (g - 1) + [total - (g - 1) * eps])]

        chain = _dedupe(arm(a) + arm(b)[::-1])
    else:
        return ChainResult(kind, [], [], False, f"unknown chain kind {kind!r}")
    try:
        moves = check_chain(kind, chain)
    except ValueError as exc:
        return ChainResult(kind, chain, [], False, str(exc))
    return ChainResult(kind, chain, moves, True)


# ---------------------------------------------------------------------------
# closure trichotomy over star sums


def trichotomy_report(specs: Sequence[StarSumSpec]) -> list[dict]:
    """Closure class of the periods of each star sum, against the class of the summed lattices."""
    rows = []
    for spec in specs:
        s = star_connected_sum(spec).surface
        cl, area, ok = per_closure_class(s)
        gens = [v for pair in spec.lattices for v in pair]
        expected = closure_2d(gens).name
        rows.append({"genus": spec.genus, "class": cl.name, "expected": expected, "area": str(area),
                     "meets_components": ok, "agrees": cl.name == expected, "closure": cl.to_json(area)})
    return rows
