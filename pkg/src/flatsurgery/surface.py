"""Translation surfaces as Euclidean polygons glued by translations.

Every edge carries a stable integer id; edge ``k`` of a polygon runs from
vertex ``k`` to vertex ``k+1``.  A *corner* is named by the id of the edge
leaving it, which keeps corner and vertex references valid through the
refinements performed by surgeries.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .exactnum import CNum, FieldSpec, Scalar, common_field

__all__ = [
    "Surface",
    "SurfaceError",
    "ValidationError",
    "StratumSignature",
    "TopologyReport",
    "build_validate",
    "renormalize",
    "topology_report",
    "angle_lt",
    "in_sector",
]


class SurfaceError(ValueError):
    pass


class ValidationError(SurfaceError):
    """Raised with one located diagnostic per violated invariant."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


# ---------------------------------------------------------------------------
# direction predicates


def _half(a: CNum, x: CNum) -> int:
    c = a.cross(x).sign()
    if c > 0:
        return 0
    if c < 0:
        return 1
    return 0 if a.dot(x).sign() > 0 else 1


def angle_lt(a: CNum, x: CNum, y: CNum) -> bool:
    """Whether the ccw angle from a to x is smaller than the ccw angle from a to y (both in [0, 2pi))."""
    hx, hy = _half(a, x), _half(a, y)
    if hx != hy:
        return hx < hy
    return x.cross(y).sign() > 0


def in_sector(a: CNum, b: CNum, u: CNum) -> bool:
    """u in the half-open ccw sector [a, b)."""
    return angle_lt(a, u, b)


def same_direction(u: CNum, v: CNum) -> bool:
    return u.cross(v).is_zero() and u.dot(v).sign() > 0


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StratumSignature:
    genus: int
    orders: tuple[int, ...]

    def __str__(self):
        return f"H_{self.genus}({', '.join(map(str, self.orders))})"


@dataclass(frozen=True)
class TopologyReport:
    signature: StratumSignature
    area: Scalar
    zeros: tuple  # (zero index, cone angle multiple of 2pi, order)
    n_marked: int


class Surface:
    """Immutable translation surface; all modifying helpers return a new surface."""

    def __init__(self, field: FieldSpec, verts: dict, edges: dict, glue: dict,
                 marked: Iterable[int] = (), next_eid: int | None = None, validate: bool = True):
        self.field = field
        self.verts = {pid: tuple(v.lift(field) for v in vs) for pid, vs in verts.items()}
        self.edges = {pid: tuple(es) for pid, es in edges.items()}
        self.glue = dict(glue)
        self.marked = frozenset(marked)
        if next_eid is None:
            next_eid = 1 + max((e for es in self.edges.values() for e in es), default=-1)
        self.next_eid = next_eid
        if validate:
            problems = self.diagnose()
            if problems:
                raise ValidationError(problems)
            self._check_gauss_bonnet()

    # -- construction -----------------------------------------------------
    @classmethod
    def from_polygons(cls, polygons: Sequence[Sequence], gluings: Sequence, marked: Sequence = (),
                      ids: Sequence[str] | None = None, field: FieldSpec | None = None,
                      validate: bool = True) -> "Surface":
        """Polygons as vertex lists; gluings as pairs ((poly, edge), (poly, edge)).

        Poly references may be integer positions or ids; ``marked`` holds
        (poly, vertex) references.
        """
        ids = list(ids) if ids is not None else [f"P{i}" for i in range(len(polygons))]
        if len(set(ids)) != len(ids):
            raise ValidationError(["duplicate polygon ids"])
        polys = [[v if isinstance(v, CNum) else CNum(*v) if isinstance(v, (tuple, list)) else CNum(v)
                  for v in poly] for poly in polygons]
        spec = field or common_field(v for p in polys for v in p)
        verts, edges = {}, {}
        eid = 0
        index = {}
        for pid, poly in zip(ids, polys):
            verts[pid] = tuple(poly)
            es = []
            for k in range(len(poly)):
                index[(pid, k)] = eid
                es.append(eid)
                eid += 1
            edges[pid] = tuple(es)

        def ref(r):
            p, k = r
            p = ids[p] if isinstance(p, int) else p
            if (p, k) not in index:
                raise ValidationError([f"unknown edge reference {r!r}"])
            return index[(p, k)]

        glue = {}
        problems = []
        for a, b in gluings:
            ea, eb = ref(a), ref(b)
            for e, other in ((ea, eb), (eb, ea)):
                if e in glue:
                    problems.append(f"edge {a if e == ea else b} glued more than once")
                glue[e] = other
        if problems:
            raise ValidationError(problems)
        mk = [ref(r) for r in marked]
        return cls(spec, verts, edges, glue, mk, next_eid=eid, validate=validate)

    def replace(self, **kw) -> "Surface":
        data = dict(field=self.field, verts=self.verts, edges=self.edges, glue=self.glue,
                    marked=self.marked, next_eid=self.next_eid)
        data.update(kw)
        return Surface(**data)

    # -- basic derived data -----------------------------------------------
    @cached_property
    def edge_loc(self) -> dict[int, tuple[str, int]]:
        return {e: (pid, k) for pid, es in self.edges.items() for k, e in enumerate(es)}

    def edge_vector(self, e: int) -> CNum:
        pid, k = self.edge_loc[e]
        vs = self.verts[pid]
        return vs[(k + 1) % len(vs)] - vs[k]

    def edge_start(self, e: int) -> CNum:
        pid, k = self.edge_loc[e]
        return self.verts[pid][k]

    def edge_end(self, e: int) -> CNum:
        pid, k = self.edge_loc[e]
        vs = self.verts[pid]
        return vs[(k + 1) % len(vs)]

    def next_edge(self, e: int) -> int:
        pid, k = self.edge_loc[e]
        es = self.edges[pid]
        return es[(k + 1) % len(es)]

    def prev_edge(self, e: int) -> int:
        pid, k = self.edge_loc[e]
        es = self.edges[pid]
        return es[(k - 1) % len(es)]

    @property
    def poly_ids(self) -> list[str]:
        return list(self.verts)

    # corners --------------------------------------------------------------
    def corner_sector(self, c: int) -> tuple[CNum, CNum]:
        """(a, b): the corner at the start of edge c spans the ccw sector [a, b)."""
        return self.edge_vector(c), -self.edge_vector(self.prev_edge(c))

    def corner_point(self, c: int) -> tuple[str, CNum]:
        pid, k = self.edge_loc[c]
        return pid, self.verts[pid][k]

    def ccw_corner(self, c: int) -> int:
        return self.glue[self.prev_edge(c)]

    def cw_corner(self, c: int) -> int:
        return self.next_edge(self.glue[c])

    @cached_property
    def vertex_classes(self) -> list[tuple[int, ...]]:
        """Corners grouped by surface point, each class listed in ccw order."""
        seen = set()
        classes = []
        for pid in self.verts:
            for c in self.edges[pid]:
                if c in seen:
                    continue
                cls = []
                x = c
                while x not in seen:
                    seen.add(x)
                    cls.append(x)
                    x = self.ccw_corner(x)
                classes.append(tuple(cls))
        return classes

    @cached_property
    def corner_class(self) -> dict[int, int]:
        return {c: i for i, cls in enumerate(self.vertex_classes) for c in cls}

    @cached_property
    def cone_multiples(self) -> list[int]:
        """Total angle of each vertex class divided by 2pi."""
        ref = CNum(1, 0)
        out = []
        for cls in self.vertex_classes:
            n = 0
            for c in cls:
                a, b = self.corner_sector(c)
                if in_sector(a, b, ref):
                    n += 1
            out.append(n)
        return out

    def is_singular_class(self, i: int) -> bool:
        return self.cone_multiples[i] != 1 or any(c in self.marked for c in self.vertex_classes[i])

    @cached_property
    def singular_classes(self) -> list[int]:
        return [i for i in range(len(self.vertex_classes)) if self.is_singular_class(i)]

    @cached_property
    def zero_classes(self) -> list[int]:
        return [i for i in range(len(self.vertex_classes)) if self.cone_multiples[i] > 1]

    @cached_property
    def marked_classes(self) -> list[int]:
        return [i for i in self.singular_classes if self.cone_multiples[i] == 1]

    def zero_order(self, i: int) -> int:
        return self.cone_multiples[i] - 1

    def class_of_point(self, c: int) -> int:
        return self.corner_class[c]

    # -- geometry ----------------------------------------------------------
    @cached_property
    def area(self) -> Scalar:
        total = Scalar.zero(self.field)
        for vs in self.verts.values():
            total = total + polygon_signed_area2(vs)
        return total * Fraction(1, 2)

    @cached_property
    def euler_characteristic(self) -> int:
        return len(self.vertex_classes) - len(self.glue) // 2 + len(self.verts)

    @cached_property
    def genus(self) -> int:
        chi = self.euler_characteristic
        if chi % 2:
            raise SurfaceError(f"odd Euler characteristic {chi}")
        return (2 - chi) // 2

    @cached_property
    def signature(self) -> StratumSignature:
        orders = sorted((self.zero_order(i) for i in self.zero_classes), reverse=True)
        return StratumSignature(self.genus, tuple(orders))

    def _check_gauss_bonnet(self):
        if sum(self.signature.orders) != 2 * self.genus - 2:
            raise SurfaceError(f"Gauss-Bonnet violated: {self.signature}")

    # -- validation --------------------------------------------------------
    def diagnose(self) -> list[str]:
        problems = []
        name = {}
        for pid, es in self.edges.items():
            if len(es) != len(self.verts[pid]) or len(es) < 3:
                problems.append(f"polygon {pid} has fewer than 3 vertices")
            for k, e in enumerate(es):
                name[e] = f"{pid}:{k}"
        if problems:
            return problems
        for pid, vs in self.verts.items():
            problems.extend(f"polygon {pid}: {msg}" for msg in polygon_problems(vs))
        for e in name:
            if e not in self.glue:
                problems.append(f"unmatched edge {name[e]}")
                continue
            f = self.glue[e]
            if f not in name or self.glue.get(f) != e:
                problems.append(f"inconsistent gluing at edge {name[e]}")
                continue
            if f == e:
                problems.append(f"edge {name[e]} glued to itself")
                continue
            if e < f and not (self.edge_vector(e) + self.edge_vector(f)).is_zero():
                problems.append(f"gluing vector mismatch at edge {name[e]} / {name[f]}")
        if problems:
            return problems
        # connectivity of the glued complex
        pids = list(self.verts)
        seen = {pids[0]}
        stack = [pids[0]]
        while stack:
            p = stack.pop()
            for e in self.edges[p]:
                q, _ = self.edge_loc[self.glue[e]]
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        if len(seen) != len(pids):
            problems.append(f"disconnected: polygons {sorted(set(pids) - seen)} unreachable from {pids[0]}")
        for c in self.marked:
            if c not in name:
                problems.append(f"marked point references unknown corner {c}")
        if not problems:
            for i, n in enumerate(self.cone_multiples):
                if n < 1:
                    problems.append(f"bad cone angle at vertex class {i}")
            if self.area.sign() <= 0:
                problems.append("total area is not positive")
        return problems

    # -- misc -----------------------------------------------------------------
    def zero_ref(self, i: int) -> int:
        """Index of vertex class i among singular classes (stable for a given surface)."""
        return self.singular_classes.index(i)

    def singular_class(self, ref: int) -> int:
        try:
            return self.singular_classes[ref]
        except IndexError:
            raise SurfaceError(f"unknown zero {ref}") from None

    def __repr__(self):
        return (f"<Surface genus={self.genus} {self.signature} polygons={len(self.verts)} "
                f"area={self.area}>")


# ---------------------------------------------------------------------------
# polygon helpers


def polygon_signed_area2(vs: Sequence[CNum]) -> Scalar:
    total = Scalar.zero(vs[0].field)
    n = len(vs)
    for i in range(n):
        total = total + vs[i].cross(vs[(i + 1) % n])
    return total


def _on_segment(p: CNum, a: CNum, b: CNum) -> bool:
    if not (b - a).cross(p - a).is_zero():
        return False
    t = (p - a).dot(b - a)
    return t.sign() >= 0 and (t - (b - a).norm2()).sign() <= 0


def segments_intersect(a: CNum, b: CNum, c: CNum, d: CNum) -> bool:
    """Closed segments ab and cd share a point."""
    d1 = (b - a).cross(c - a).sign()
    d2 = (b - a).cross(d - a).sign()
    d3 = (d - c).cross(a - c).sign()
    d4 = (d - c).cross(b - c).sign()
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    return (d1 == 0 and _on_segment(c, a, b)) or (d2 == 0 and _on_segment(d, a, b)) or \
        (d3 == 0 and _on_segment(a, c, d)) or (d4 == 0 and _on_segment(b, c, d))


def polygon_problems(vs: Sequence[CNum]) -> list[str]:
    n = len(vs)
    out = []
    for i in range(n):
        if (vs[(i + 1) % n] - vs[i]).is_zero():
            out.append(f"zero-length edge {i}")
    if out:
        return out
    if polygon_signed_area2(vs).sign() <= 0:
        out.append("not positively oriented")
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = vs[j], vs[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges: only the shared vertex may be common
                shared = b if j == i + 1 else a
                other_a = a if j == i + 1 else b
                other_c = d if j == i + 1 else c
                u, v = other_a - shared, other_c - shared
                if u.cross(v).is_zero() and u.dot(v).sign() > 0:
                    out.append(f"edges {i} and {j} overlap")
                continue
            if segments_intersect(a, b, c, d):
                out.append(f"edges {i} and {j} intersect (not simple)")
    return out


def point_in_polygon(p: CNum, vs: Sequence[CNum]) -> str:
    """'inside', 'boundary' or 'outside' (exact)."""
    n = len(vs)
    for i in range(n):
        if _on_segment(p, vs[i], vs[(i + 1) % n]):
            return "boundary"
    # winding number by crossings of the rightward ray
    wn = 0
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if (a.im - p.im).sign() <= 0:
            if (b.im - p.im).sign() > 0 and (b - a).cross(p - a).sign() > 0:
                wn += 1
        elif (b.im - p.im).sign() <= 0 and (b - a).cross(p - a).sign() < 0:
            wn -= 1
    return "inside" if wn else "outside"


# ---------------------------------------------------------------------------


def build_validate(polygons, gluings, marked=(), ids=None, field=None) -> Surface:
    return Surface.from_polygons(polygons, gluings, marked, ids=ids, field=field)


def topology_report(s: Surface) -> TopologyReport:
    zeros = tuple((s.zero_ref(i), s.cone_multiples[i], s.zero_order(i)) for i in s.zero_classes)
    return TopologyReport(s.signature, s.area, zeros, len(s.marked_classes))


def _drop_straight_vertex(verts, edges, glue, s: Surface) -> bool:
    for ci, cls in enumerate(s.vertex_classes):
        if len(cls) != 2 or s.is_singular_class(ci):
            continue
        c = cls[0]
        pid, k = s.edge_loc[c]
        prev = s.prev_edge(c)
        u, v = s.edge_vector(prev), s.edge_vector(c)
        if not (u.cross(v).is_zero() and u.dot(v).sign() > 0):
            continue
        f1, f2 = glue[prev], glue[c]
        if s.next_edge(f2) != f1 or cls[1] != f1 or len(verts[pid]) < 4 or len(verts[s.edge_loc[f1][0]]) < 4:
            continue
        for poly, drop in ((pid, c), (s.edge_loc[f1][0], f1)):
            j = edges[poly].index(drop)
            del edges[poly][j]
            del verts[poly][j]
        glue[prev], glue[f2] = f2, prev
        del glue[c], glue[f1]
        return True
    return False


def _merge_pair(verts, edges, glue, marked, s: Surface) -> bool:
    for e in sorted(glue):
        f = glue[e]
        P, k = s.edge_loc[e]
        Q, j = s.edge_loc[f]
        if P == Q:
            continue
        vp, vq = verts[P], verts[Q]
        n, m = len(vp), len(vq)
        shift = vp[(k + 1) % n] - vq[j]
        new_v = [vp[(k + 1 + i) % n] for i in range(n)] + [vq[(j + 2 + i) % m] + shift for i in range(m - 2)]
        new_e = [edges[P][(k + 1 + i) % n] for i in range(n - 1)] + [edges[Q][(j + 1 + i) % m] for i in range(m - 1)]
        if polygon_problems(new_v):
            continue
        for old, new in ((e, edges[Q][(j + 1) % m]), (f, edges[P][(k + 1) % n])):
            if old in marked:
                marked.discard(old)
                marked.add(new)
        verts[P], edges[P] = new_v, new_e
        del verts[Q], edges[Q]
        del glue[e], glue[f]
        return True
    return False


def renormalize(s: Surface, merge: bool = True) -> Surface:
    """Erase straight regular vertices and merge polygons across gluings while they stay simple.

    Edge ids of surviving edges are kept, so corner references into the input
    stay valid unless their edge was removed.
    """
    verts = {p: list(v) for p, v in s.verts.items()}
    edges = {p: list(e) for p, e in s.edges.items()}
    glue, marked = dict(s.glue), set(s.marked)
    cur = s
    while True:
        if not (_drop_straight_vertex(verts, edges, glue, cur)
                or (merge and _merge_pair(verts, edges, glue, marked, cur))):
            break
        cur = Surface(s.field, verts, edges, glue, marked, s.next_eid, validate=False)
    return Surface(s.field, verts, edges, glue, marked, s.next_eid)
