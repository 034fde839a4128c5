"""Horizontal cylinder decompositions, the cylinder digraph and cylinder cohomology classes.

Saddle connections are oriented rightward.  For a saddle connection gamma,
the cylinder *above* it has gamma in its bottom boundary and the cylinder
*below* it has gamma in its top boundary.  The digraph has an edge
above(gamma) -> below(gamma) for every saddle connection.

Cohomology classes are stored in cylinder coordinates: their values on the
saddle connections and on one crossing segment gamma_C per cylinder, which
runs from the start of the first bottom saddle connection to the start of
the first top saddle connection and has holonomy (twist, height).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .develop import Germ, _arrival, _exit, rotate, ray, BudgetExhausted
from .exactnum import CNum, Scalar, as_scalar, common_field, field_rank, integer_kernel, qdim_reciprocals
from .surface import Surface, SurfaceError, in_sector

__all__ = [
    "SaddleConnection",
    "Cylinder",
    "CylinderDecomposition",
    "NotPeriodic",
    "horizontal_decomposition",
    "CylinderDigraph",
    "cylinder_digraph",
    "Pants",
    "detect_legged_pants",
    "find_pants",
    "CohomologyVector",
    "cohomology_classes",
    "span_report",
    "rel_twist_orbit_dim",
    "rebuild",
]

RIGHT = CNum(1, 0)
LEFT = CNum(-1, 0)
UP = CNum(0, 1)
DOWN = CNum(0, -1)


class NotPeriodic(SurfaceError):
    """Tracing ran out of budget: periodicity undecided."""

    def __init__(self, report: dict):
        self.report = report
        super().__init__(f"horizontal tracing indeterminate: {report}")


@dataclass(frozen=True)
class SaddleConnection:
    id: int
    start: int  # vertex class
    end: int
    length: Scalar
    start_corner: int  # corner containing the rightward start germ
    end_corner: int  # corner containing the leftward arrival germ
    pieces: tuple = field(compare=False, repr=False, default=())

    @property
    def is_loop(self) -> bool:
        return self.start == self.end


@dataclass(frozen=True)
class Cylinder:
    id: int
    bottom: tuple[int, ...]
    top: tuple[int, ...]
    height: Scalar
    width: Scalar
    twist: Scalar  # horizontal offset of the start of top[0] over the start of bottom[0], in [0, width)

    @property
    def crossing(self) -> CNum:
        return CNum(self.twist, self.height)

    @property
    def area(self) -> Scalar:
        return self.height * self.width


class CylinderDecomposition:
    def __init__(self, surface: Surface, scs: list[SaddleConnection], cylinders: list[Cylinder]):
        self.surface = surface
        self.saddle_connections = scs
        self.cylinders = cylinders
        self.above = {}
        self.below = {}
        for c in cylinders:
            for g in c.bottom:
                if g in self.above:
                    raise SurfaceError(f"saddle connection {g} in two bottom boundaries")
                self.above[g] = c.id
            for g in c.top:
                if g in self.below:
                    raise SurfaceError(f"saddle connection {g} in two top boundaries")
                self.below[g] = c.id
        for sc in scs:
            if sc.id not in self.above or sc.id not in self.below:
                raise SurfaceError(f"saddle connection {sc.id} not on two cylinder boundaries")
        for c in cylinders:
            if sum((scs[g].length for g in c.bottom), Scalar.zero(surface.field)) != c.width or \
                    sum((scs[g].length for g in c.top), Scalar.zero(surface.field)) != c.width:
                raise SurfaceError(f"cylinder {c.id} boundary lengths disagree with circumference")
        total = sum((c.area for c in cylinders), Scalar.zero(surface.field))
        if total != surface.area:
            raise SurfaceError(f"cylinder areas sum to {total}, surface area is {surface.area}")
        self._pieces_by_poly = None

    # -- basic queries --------------------------------------------------------
    @property
    def zeros(self) -> list[int]:
        return self.surface.singular_classes

    def zero_ref(self, ci: int) -> int:
        return self.surface.zero_ref(ci)

    def cylinder(self, ref) -> Cylinder:
        if isinstance(ref, str) and ref.startswith("C") and ref[1:].isdigit():
            ref = int(ref[1:])
        if not isinstance(ref, int) or not 0 <= ref < len(self.cylinders):
            raise SurfaceError(f"unknown cylinder {ref!r}")
        return self.cylinders[ref]

    def crossing_ends(self, c: Cylinder) -> tuple[int, int]:
        return self.saddle_connections[c.bottom[0]].start, self.saddle_connections[c.top[0]].start

    def cylinders_at(self, ci: int) -> list[int]:
        out = set()
        for sc in self.saddle_connections:
            if ci in (sc.start, sc.end):
                out.add(self.above[sc.id])
                out.add(self.below[sc.id])
        return sorted(out)

    def is_fully_periodic_pants_form(self) -> bool:
        return all(sc.is_loop for sc in self.saddle_connections)

    def summary(self) -> dict:
        return {
            "cylinders": [(str(c.height), str(c.width)) for c in self.cylinders],
            "saddle_connections": [str(sc.length) for sc in self.saddle_connections],
        }

    # -- locating points ----------------------------------------------------
    def _index_pieces(self):
        if self._pieces_by_poly is not None:
            return self._pieces_by_poly
        s = self.surface
        out = {pid: [] for pid in s.verts}
        for sc in self.saddle_connections:
            off = Scalar.zero(s.field)
            for pid, a, b in sc.pieces:
                out[pid].append((sc.id, off, a, b))
                # a piece lying on a polygon edge is also seen from the glued polygon
                vs = s.verts[pid]
                n = len(vs)
                for k in range(n):
                    p, q = vs[k], vs[(k + 1) % n]
                    if (q - p).im.is_zero() and p.im == a.im and p.re <= a.re and b.re <= q.re:
                        f = s.glue[s.edges[pid][k]]
                        r, j = s.edge_loc[f]
                        shift = s.verts[r][j] - q
                        out[r].append((sc.id, off, a + shift, b + shift))
                off = off + (b.re - a.re)
        self._pieces_by_poly = out
        return out

    def vertical_hit(self, pid: str, x: CNum, up: bool = True, budget: int = 10_000):
        """First saddle connection met by the vertical ray from x: (sc id, offset along it, distance).

        Returns None when the ray runs into a singular point first.
        """
        s = self.surface
        pieces = self._index_pieces()
        d = UP if up else DOWN
        sg = 1 if up else -1
        travelled = Scalar.zero(s.field)
        g = Germ("p", d, pid=pid, pt=x)
        from .develop import _start
        pid, x = _start(s, g) if g.kind == "p" else (pid, x)
        for _ in range(budget):
            t, kind, k = _exit(s, pid, x, d)
            best = None
            for sid, off, a, b in pieces[pid]:
                dist = (a.im - x.im) * sg
                if dist.sign() <= 0 or (dist - t).sign() > 0:
                    continue
                if (x.re - a.re).sign() < 0 or (x.re - b.re).sign() > 0:
                    continue
                if best is None or dist < best[2]:
                    best = (sid, off + (x.re - a.re), dist)
            if best is not None:
                sid, offset, dist = best
                L = self.saddle_connections[sid].length
                if offset.is_zero() or offset == L:
                    return None
                return sid, offset, travelled + dist
            travelled = travelled + t
            y = x + d * t
            if kind == "v":
                arr = _arrival(s, s.edges[pid][k], -d)
                if s.is_singular_class(s.corner_class[arr.corner]):
                    return None
                out = rotate(s, arr, d)
                pid, x = s.corner_point(out.corner)
            else:
                f = s.glue[s.edges[pid][k]]
                q, j = s.edge_loc[f]
                vs = s.verts[pid]
                x = y + (s.verts[q][j] - vs[(k + 1) % len(vs)])
                pid = q
        raise SurfaceError("vertical ray budget exhausted")

    def cylinder_containing(self, pid: str, pt: CNum) -> int:
        hit = self.vertical_hit(pid, pt, up=False)
        if hit is None:
            hit = self.vertical_hit(pid, pt, up=True)
            if hit is None:
                raise SurfaceError("point is vertically aligned with singularities both ways")
            return self.below[hit[0]]
        return self.above[hit[0]]

    # -- export -----------------------------------------------------------------
    def to_json(self) -> dict:
        s = self.surface
        return {
            "saddle_connections": [
                {"id": sc.id, "holonomy": sc.length.to_json(),
                 "endpoints": [s.zero_ref(sc.start), s.zero_ref(sc.end)], "is_loop": sc.is_loop}
                for sc in self.saddle_connections
            ],
            "cylinders": [
                {"id": f"C{c.id}", "height": c.height.to_json(), "circumference": c.width.to_json(),
                 "twist": c.twist.to_json(), "bottom": list(c.bottom), "top": list(c.top)}
                for c in self.cylinders
            ],
        }


# ---------------------------------------------------------------------------
# tracing


def _horizontal_ring(s: Surface, ci: int) -> list[tuple[int, int]]:
    """Horizontal germs at a vertex class in ccw order, as (corner, +1 for rightward / -1 for leftward)."""
    ring = []
    for c in s.vertex_classes[ci]:
        a, b = s.corner_sector(c)
        found = []
        for sgn, d in ((1, RIGHT), (-1, LEFT)):
            if in_sector(a, b, d):
                found.append((sgn, d))
        # order inside the corner by angle from a
        if len(found) == 2:
            from .surface import angle_lt
            if angle_lt(a, found[1][1], found[0][1]):
                found.reverse()
        ring.extend((c, sgn) for sgn, _ in found)
    return ring


def horizontal_decomposition(s: Surface, budget: int = 500) -> CylinderDecomposition:
    """Trace every rightward horizontal separatrix; raise NotPeriodic when the budget runs out."""
    if budget < 1:
        raise ValueError("budget must be positive")
    if not s.singular_classes:
        raise SurfaceError("surface has no zero or marked point to trace from")
    scs: list[SaddleConnection] = []
    start_of, end_of = {}, {}
    rings = {}
    pending = []
    for ci in s.singular_classes:
        ring = _horizontal_ring(s, ci)
        rings[ci] = ring
        for c, sgn in ring:
            if sgn > 0:
                pending.append((ci, c))
    unfinished = []
    for ci, c in pending:
        try:
            tr = ray(s, Germ("v", RIGHT, c), RIGHT, budget=budget)
        except BudgetExhausted as exc:
            unfinished.append({"zero": s.zero_ref(ci), "corner": c, "pieces": len(exc.trace.pieces)})
            continue
        sc = SaddleConnection(len(scs), ci, tr.hit, tr.holonomy.re, c, tr.end.corner, tuple(tr.pieces))
        start_of[(c, 1)] = sc.id
        end_of[(tr.end.corner, -1)] = sc.id
        scs.append(sc)
    if unfinished:
        raise NotPeriodic({"closed": len(scs), "unfinished": unfinished})
    pos = {}
    for ci, ring in rings.items():
        for i, g in enumerate(ring):
            pos[g] = (ci, i)

    def step(gid: int, off: int) -> int:
        ci, i = pos[(scs[gid].end_corner, -1)]
        ring = rings[ci]
        c, sgn = ring[(i + off) % len(ring)]
        assert sgn > 0
        return start_of[(c, 1)]

    sigma_bottom = {g.id: step(g.id, -1) for g in scs}
    sigma_top = {g.id: step(g.id, 1) for g in scs}

    def cycles(perm):
        seen, out = set(), []
        for g in sorted(perm):
            if g in seen:
                continue
            cyc = []
            x = g
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = perm[x]
            out.append(tuple(cyc))  # starts at its smallest id
        return out

    bottoms = cycles(sigma_bottom)
    tops = cycles(sigma_top)
    top_of_sc = {g: t for t in tops for g in t}
    proto = CylinderDecomposition.__new__(CylinderDecomposition)
    proto.surface = s
    proto.saddle_connections = scs
    proto._pieces_by_poly = None
    cylinders = []
    for cid, bot in enumerate(bottoms):
        width = sum((scs[g].length for g in bot), Scalar.zero(s.field))
        res = _match_top(proto, bot)
        if res is None:
            raise SurfaceError("could not cross cylinder above saddle connection %d" % bot[0])
        X, hit_sc, hit_off, height = res
        top = top_of_sc[hit_sc]
        Xp = hit_off
        for g in top:
            if g == hit_sc:
                break
            Xp = Xp + scs[g].length
        tau = X - Xp
        tau = tau - width * (tau / width).floor()
        cylinders.append(Cylinder(cid, bot, top, height, width, tau))
    return CylinderDecomposition(s, scs, cylinders)


_OFFSETS = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 5), Fraction(2, 5),
            Fraction(3, 5), Fraction(4, 5), Fraction(1, 7), Fraction(3, 7), Fraction(5, 7)]


def _match_top(dec: CylinderDecomposition, bot: tuple[int, ...]):
    """Vertical crossing from the bottom boundary: (offset X, top sc, offset on it, height)."""
    scs = dec.saddle_connections
    base = Scalar.zero(dec.surface.field)
    for g in bot:
        sc = scs[g]
        off = base
        for pid, a, b in sc.pieces:
            for f in _OFFSETS:
                x = a + (b - a) * f
                hit = dec.vertical_hit(pid, x, up=True)
                if hit is not None:
                    return off + (x.re - a.re), hit[0], hit[1], hit[2]
            off = off + (b.re - a.re)
        base = base + sc.length
    return None


# ---------------------------------------------------------------------------
# rebuilding a surface from cylinder data


def rebuild(dec: CylinderDecomposition, lengths: dict | None = None, twists: dict | None = None,
            heights: dict | None = None) -> tuple[Surface, dict]:
    """Glue one parallelogram per cylinder; optional overrides of saddle connection lengths,
    twists and heights.  Returns the surface and a map sc id -> bottom-copy edge id."""
    s = dec.surface
    scs = dec.saddle_connections
    lengths = {g.id: lengths.get(g.id, g.length) if lengths else g.length for g in scs}
    for gid, L in lengths.items():
        if as_scalar(L).sign() <= 0:
            raise SurfaceError(f"saddle connection {gid} would get nonpositive length {L}")
    spec = s.field
    for d in (twists or {}, heights or {}):
        spec = spec.join(common_field(as_scalar(v) for v in d.values()))
    spec = spec.join(common_field(as_scalar(v) for v in lengths.values()))
    verts, edges, glue = {}, {}, {}
    eid = 0
    bottom_edge, top_edge = {}, {}
    for c in dec.cylinders:
        h = as_scalar(heights.get(c.id, c.height) if heights else c.height)
        tau = as_scalar(twists.get(c.id, c.twist) if twists else c.twist)
        if h.sign() <= 0:
            raise SurfaceError(f"cylinder {c.id} would get nonpositive height")
        w = sum((as_scalar(lengths[g]) for g in c.bottom), Scalar.zero(spec))
        wt = sum((as_scalar(lengths[g]) for g in c.top), Scalar.zero(spec))
        if w != wt:
            raise SurfaceError(f"cylinder {c.id}: top and bottom lengths differ")
        tau = tau - w * (tau / w).floor()
        pts = []
        es = []
        x = Scalar.zero(spec)
        for g in c.bottom:
            pts.append(CNum(x, 0))
            bottom_edge[g] = eid
            es.append(eid)
            eid += 1
            x = x + lengths[g]
        pts.append(CNum(w, 0))
        right = eid
        es.append(eid)
        eid += 1
        x = tau + w
        for g in reversed(c.top):
            pts.append(CNum(x, h))
            top_edge[g] = eid
            es.append(eid)
            eid += 1
            x = x - lengths[g]
        pts.append(CNum(tau, h))
        left = eid
        es.append(eid)
        eid += 1
        glue[right] = left
        glue[left] = right
        pid = f"C{c.id}"
        verts[pid] = tuple(pts)
        edges[pid] = tuple(es)
    for g in scs:
        glue[bottom_edge[g.id]] = top_edge[g.id]
        glue[top_edge[g.id]] = bottom_edge[g.id]
    marked = []
    for ci in s.marked_classes:
        g = next(sc for sc in scs if sc.start == ci)
        marked.append(bottom_edge[g.id])
    out = Surface(spec, verts, edges, glue, marked, next_eid=eid)
    return out, bottom_edge


# ---------------------------------------------------------------------------
# digraph


@dataclass
class CylinderDigraph:
    n_vertices: int
    edges: list[tuple[int, int, int]]  # (sc id, from cylinder, to cylinder)
    strongly_connected: bool
    loop_basis: list[tuple[int, ...]]  # each a tuple of sc ids in traversal order
    loop_dim: int

    def incidence(self, loop) -> list[int]:
        v = [0] * len(self.edges)
        idx = {e[0]: i for i, e in enumerate(self.edges)}
        for g in loop:
            v[idx[g]] += 1
        return v

    def to_dot(self, dec: CylinderDecomposition | None = None) -> str:
        lines = ["digraph cylinders {"]
        for v in range(self.n_vertices):
            label = f"C{v}"
            if dec is not None:
                c = dec.cylinders[v]
                label += f"\\nh={c.height}\\nw={c.width}"
            lines.append(f'  C{v} [label="{label}"];')
        for g, a, b in self.edges:
            label = f"g{g}"
            if dec is not None:
                label += f" {dec.saddle_connections[g].length}"
            lines.append(f'  C{a} -> C{b} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"vertices": [f"C{v}" for v in range(self.n_vertices)],
                "edges": [{"sc": g, "from": f"C{a}", "to": f"C{b}"} for g, a, b in self.edges],
                "strongly_connected": self.strongly_connected,
                "loop_basis": [list(l) for l in self.loop_basis], "loop_dim": self.loop_dim}


def _simple_cycles(n: int, edges: list[tuple[int, int, int]]) -> list[tuple[int, ...]]:
    out_edges = {v: [] for v in range(n)}
    for g, a, b in edges:
        out_edges[a].append((g, b))
    cycles = []
    for s0 in range(n):
        stack = [(s0, [], {s0})]
        while stack:
            v, path, seen = stack.pop()
            for g, w in sorted(out_edges[v], reverse=True):
                if w == s0:
                    cycles.append(tuple(path + [g]))
                elif w > s0 and w not in seen:
                    stack.append((w, path + [g], seen | {w}))
    cycles.sort(key=lambda c: (len(c), sorted(c)))
    return cycles


def cylinder_digraph(dec: CylinderDecomposition) -> CylinderDigraph:
    s = dec.surface
    n = len(dec.cylinders)
    edges = [(g.id, dec.above[g.id], dec.below[g.id]) for g in dec.saddle_connections]
    expected = sum(s.cone_multiples[ci] for ci in s.singular_classes)
    if len(edges) != expected:
        raise SurfaceError(f"digraph has {len(edges)} edges, expected {expected}")

    def reach(adj):
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj.get(v, []):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    fwd, bwd = {}, {}
    for _, a, b in edges:
        fwd.setdefault(a, []).append(b)
        bwd.setdefault(b, []).append(a)
    strong = reach(fwd) and reach(bwd)
    from .exactnum import qlin_rank

    basis, vecs = [], []
    idx = {e[0]: i for i, e in enumerate(edges)}
    for cyc in _simple_cycles(n, edges):
        v = [0] * len(edges)
        for g in cyc:
            v[idx[g]] += 1
        if qlin_rank(vecs + [v]) > len(vecs):
            vecs.append(v)
            basis.append(cyc)
    dim = len(basis)
    if strong and dim != len(edges) - n + 1:
        raise SurfaceError(f"loop space dimension {dim} != |E|-|V|+1")
    return CylinderDigraph(n, edges, strong, basis, dim)


# ---------------------------------------------------------------------------
# pants


@dataclass(frozen=True)
class Pants:
    zero: int  # vertex class
    cylinders: tuple[int, ...]  # C_0, C_1, ..., C_k
    loops: tuple[int, ...]  # gamma_1, ..., gamma_k (sc ids); gamma_j bounds C_j
    case: int  # 1: legs below C_0, 2: legs above C_0
    widths: tuple[Scalar, ...]
    heights: tuple[Scalar, ...]

    @property
    def legs(self) -> int:
        return len(self.cylinders) - 1


def detect_legged_pants(dec: CylinderDecomposition, zero: int, k: int = 2) -> Pants | None:
    """k-legged pants at the zero (vertex class) of order k-1, or None."""
    s = dec.surface
    if k < 2:
        raise ValueError("k must be at least 2")
    if s.cone_multiples[zero] != k:
        raise SurfaceError(f"zero order mismatch: vertex class {zero} has order {s.cone_multiples[zero] - 1}, expected {k - 1}")
    through = [sc for sc in dec.saddle_connections if zero in (sc.start, sc.end)]
    if len(through) != k or not all(sc.is_loop for sc in through):
        return None
    loops = [sc.id for sc in through]
    cyl = dec.cylinders
    for case in (1, 2):
        if case == 1:  # C_0 above every loop, each loop the whole top of a leg
            c0s = {dec.above[g] for g in loops}
            legs = [dec.below[g] for g in loops]
            if len(c0s) != 1 or sorted(cyl[next(iter(c0s))].bottom) != sorted(loops):
                continue
            if any(cyl[l].top != (g,) for l, g in zip(legs, loops)):
                continue
        else:
            c0s = {dec.below[g] for g in loops}
            legs = [dec.above[g] for g in loops]
            if len(c0s) != 1 or sorted(cyl[next(iter(c0s))].top) != sorted(loops):
                continue
            if any(cyl[l].bottom != (g,) for l, g in zip(legs, loops)):
                continue
        c0 = next(iter(c0s))
        if len(set(legs) | {c0}) != k + 1:
            continue
        order = sorted(range(k), key=lambda j: legs[j])
        legs = [legs[j] for j in order]
        loops_sorted = [loops[j] for j in order]
        ids = (c0, *legs)
        widths = tuple(cyl[i].width for i in ids)
        if widths[0] != sum(widths[1:], Scalar.zero(s.field)):
            raise SurfaceError("pants circumference identity fails")
        return Pants(zero, ids, tuple(loops_sorted), case, widths, tuple(cyl[i].height for i in ids))
    return None


def find_pants(dec: CylinderDecomposition) -> list[Pants]:
    out = []
    s = dec.surface
    for ci in s.zero_classes:
        p = detect_legged_pants(dec, ci, s.cone_multiples[ci])
        if p is not None:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# cohomology in cylinder coordinates


@dataclass(frozen=True)
class CohomologyVector:
    """Values on the saddle connections followed by values on the crossings gamma_C."""

    values: tuple
    tag: str
    n_sc: int

    def on_sc(self, g: int):
        return self.values[g]

    def on_crossing(self, c: int):
        return self.values[self.n_sc + c]

    def __add__(self, other):
        return CohomologyVector(tuple(a + b for a, b in zip(self.values, other.values)), "custom", self.n_sc)

    def scale(self, x):
        return CohomologyVector(tuple(v * x for v in self.values), "custom", self.n_sc)


def _check_relations(dec: CylinderDecomposition, vals) -> None:
    for c in dec.cylinders:
        top = sum((vals[g] for g in c.top), Scalar.zero(dec.surface.field))
        bot = sum((vals[g] for g in c.bottom), Scalar.zero(dec.surface.field))
        if top != bot:
            raise SurfaceError(f"values violate the boundary relation of cylinder {c.id}")


def _absolute_cycles(dec: CylinderDecomposition) -> list[list[int]]:
    """Integer cycles (boundary zero) over the generators sc's + crossings."""
    zeros = dec.surface.singular_classes
    gens = []
    for sc in dec.saddle_connections:
        gens.append((sc.start, sc.end))
    for c in dec.cylinders:
        gens.append(dec.crossing_ends(c))
    rows = []
    for z in zeros:
        rows.append([(1 if b == z else 0) - (1 if a == z else 0) for a, b in gens])
    if not any(any(r) for r in rows):
        return [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
    return integer_kernel(rows, len(gens))


def period_class(dec: CylinderDecomposition) -> CohomologyVector:
    vals = [CNum(sc.length, 0) for sc in dec.saddle_connections] + [c.crossing for c in dec.cylinders]
    return CohomologyVector(tuple(vals), "omega", len(dec.saddle_connections))


def cohomology_classes(dec: CylinderDecomposition, request) -> CohomologyVector:
    """request: ('shear', C) | ('rel', zero class) | ('loop', sc tuple) | 'standard' | 'hstretch'."""
    s = dec.surface
    F = s.field
    nsc = len(dec.saddle_connections)
    zero = Scalar.zero(F)
    if isinstance(request, str):
        kind, arg = request, None
    else:
        kind, arg = request
    if kind == "shear":
        c = dec.cylinder(arg)
        vals = [zero] * nsc + [c.height if i == c.id else zero for i in range(len(dec.cylinders))]
        out = CohomologyVector(tuple(vals), "shear", nsc)
    elif kind == "standard":
        vals = [zero] * nsc + [c.height for c in dec.cylinders]
        out = CohomologyVector(tuple(vals), "standard", nsc)
    elif kind == "hstretch":
        vals = [sc.length for sc in dec.saddle_connections] + [c.twist for c in dec.cylinders]
        out = CohomologyVector(tuple(vals), "hstretch", nsc)
    elif kind == "rel":
        if arg not in s.zero_classes:
            raise SurfaceError(f"unknown zero {arg!r}")
        p = detect_legged_pants(dec, arg, s.cone_multiples[arg])
        if p is None or p.legs != 2:
            raise SurfaceError(f"no pair of pants at zero {s.zero_ref(arg)}")
        vals = [zero] * (nsc + len(dec.cylinders))
        # C_0 twists one way, the legs the other way
        for j, c in enumerate(p.cylinders):
            vals[nsc + c] = Scalar.rational(1 if j == 0 else -1, F)
        out = CohomologyVector(tuple(vals), "rel", nsc)
        if any(not x.is_zero() for x in p_image(dec, out)):
            raise SurfaceError("rel class has nonzero absolute part")
    elif kind == "loop":
        loop = tuple(arg)
        for g in loop:
            if not 0 <= g < nsc:
                raise SurfaceError(f"unknown saddle connection {g} in loop")
        seq = [(dec.above[g], dec.below[g]) for g in loop]
        for i in range(len(seq)):
            if seq[i][1] != seq[(i + 1) % len(seq)][0]:
                raise SurfaceError("loop is not a closed directed path")
        if len({a for a, _ in seq}) != len(seq):
            raise SurfaceError("loop is not embedded")
        vals = [Scalar.rational(1 if g in loop else 0, F) for g in range(nsc)] + [zero] * len(dec.cylinders)
        out = CohomologyVector(tuple(vals), "loop", nsc)
    else:
        raise SurfaceError(f"unknown cohomology request {request!r}")
    _check_relations(dec, out.values)
    return out


def p_image(dec: CylinderDecomposition, eta: CohomologyVector) -> list:
    out = []
    for cyc in _absolute_cycles(dec):
        total = Scalar.zero(dec.surface.field)
        for x, k in zip(eta.values, cyc):
            if k:
                total = total + x * k
        out.append(total)
    return out


@dataclass(frozen=True)
class SpanReport:
    rank: int
    p_rank: int
    ker_p_rank: int


def span_report(dec: CylinderDecomposition, classes: Sequence[CohomologyVector]) -> SpanReport:
    if not classes:
        return SpanReport(0, 0, 0)
    n = {len(c.values) for c in classes}
    if len(n) != 1 or n.pop() != len(dec.saddle_connections) + len(dec.cylinders):
        raise SurfaceError("basis mismatch")
    r = field_rank([list(c.values) for c in classes])
    pr = field_rank([p_image(dec, c) for c in classes])
    return SpanReport(r, pr, r - pr)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistOrbit:
    dim: int
    direction: tuple[Scalar, Scalar, Scalar]
    resonances: list[list[int]]


def rel_twist_orbit_dim(w0, w1, w2) -> TwistOrbit:
    """Closure dimension of t -> t*(1/w0, -1/w1, -1/w2) in (R/Z)^3 and its integer resonances."""
    ws = [as_scalar(w) for w in (w0, w1, w2)]
    if any(w.sign() <= 0 for w in ws):
        raise ValueError("circumferences must be positive")
    d = qdim_reciprocals(*ws)
    direction = (1 / ws[0], -(1 / ws[1]), -(1 / ws[2]))
    spec = common_field(direction)
    cols = [x.lift(spec).coeffs for x in direction]
    den = 1
    for c in cols:
        for q in c:
            den = den * q.denominator // gcd(den, q.denominator)
    rows = [[int(cols[j][i] * den) for j in range(3)] for i in range(spec.degree)]
    rows = [r for r in rows if any(r)]
    res = integer_kernel(rows, 3) if rows else [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    if len(res) != 3 - d:
        raise AssertionError("resonance lattice rank disagrees with reciprocal dimension")
    return TwistOrbit(d, direction, [list(r) for r in res])
