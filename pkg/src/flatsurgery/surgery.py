"""Deformations and slit surgeries on polygon surfaces.

Slit surgeries go through :class:`Workbench`, a mutable copy of a surface on
which paths are refined until they run along polygon edges.  Once two paths
with identical developments are edge paths with matching breakpoints, a
slit swap is a pure edit of the gluing matching.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cyl import CylinderDecomposition, detect_legged_pants, horizontal_decomposition, rebuild
from .develop import (Germ, HitSingularity, _exit, germ_key, point_germ, rotate, rotate_half_turns,
                      vertex_germ, walk)
from .exactnum import CNum, Scalar, as_scalar, common_field
from .surface import Surface, SurfaceError, ValidationError, point_in_polygon, _on_segment

__all__ = [
    "Matrix2", "u_t", "gl2_act", "cylinder_deform", "rel_deform", "split_zero_slits",
    "make_fully_periodic", "PathSpec", "twin_path", "schiffer", "StarSumSpec", "StarSum",
    "star_connected_sum", "forget_torus", "schiffer_many", "sector_of", "deform_by_loops", "loop_coordinates", "Workbench",
    "SurgeryError",
]


class SurgeryError(SurfaceError):
    pass


# ---------------------------------------------------------------------------
# linear action


@dataclass(frozen=True)
class Matrix2:
    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, as_scalar(getattr(self, k)))

    @property
    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o: "Matrix2") -> "Matrix2":
        return Matrix2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                       self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def apply(self, z: CNum) -> CNum:
        return z.apply(self.a, self.b, self.c, self.d)


def u_t(t) -> Matrix2:
    return Matrix2(1, t, 0, 1)


def gl2_act(M: Matrix2, s: Surface) -> Surface:
    if M.det.sign() <= 0:
        raise SurgeryError("matrix must have positive determinant")
    spec = s.field.join(common_field([M.a, M.b, M.c, M.d]))
    verts = {pid: tuple(M.apply(v.lift(spec)) for v in vs) for pid, vs in s.verts.items()}
    return Surface(spec, verts, s.edges, s.glue, s.marked, s.next_eid)


# ---------------------------------------------------------------------------
# cylinder-level deformations (rebuilt from cylinder data)


def _decomposition(s: Surface, dec: CylinderDecomposition | None) -> CylinderDecomposition:
    if dec is None:
        return horizontal_decomposition(s)
    if dec.surface is not s:
        raise SurgeryError("stale cylinder decomposition")
    return dec


def cylinder_deform(s: Surface, C, t_shear=0, t_stretch=0, dec: CylinderDecomposition | None = None) -> Surface:
    """Apply [[1, t_shear], [0, 1 + t_stretch]] to one horizontal cylinder."""
    dec = _decomposition(s, dec)
    t_shear, t_stretch = as_scalar(t_shear), as_scalar(t_stretch)
    if (t_stretch + 1).sign() <= 0:
        raise SurgeryError("stretch parameter must exceed -1")
    cyl = dec.cylinder(C)
    twist = cyl.twist + t_shear * cyl.height
    height = cyl.height * (t_stretch + 1)
    out, _ = rebuild(dec, twists={cyl.id: twist}, heights={cyl.id: height})
    return out


def rel_deform(s: Surface, zero: int, t, dec: CylinderDecomposition | None = None) -> Surface:
    """Twist C_0 of the pants at ``zero`` (vertex class) by t and its legs by -t."""
    dec = _decomposition(s, dec)
    t = as_scalar(t)
    if zero not in s.zero_classes:
        raise SurgeryError(f"unknown zero {zero!r}")
    p = detect_legged_pants(dec, zero, s.cone_multiples[zero])
    if p is None or p.legs != 2:
        raise SurgeryError(f"no pair of pants at zero {s.zero_ref(zero)}")
    twists = {}
    for j, cid in enumerate(p.cylinders):
        c = dec.cylinders[cid]
        twists[cid] = c.twist + (t if j == 0 else -t)
    out, _ = rebuild(dec, twists=twists)
    return out


def loop_coordinates(dec: CylinderDecomposition, loops: Sequence[Sequence[int]]) -> list[Scalar] | None:
    """Coordinates t with length(gamma) = sum of t_j over loops through gamma, if they exist."""
    from .exactnum import field_solve

    F = dec.surface.field
    vecs = [[Scalar.rational(1 if g.id in set(l) else 0, F) for g in dec.saddle_connections] for l in loops]
    target = [g.length for g in dec.saddle_connections]
    return field_solve(vecs, target)


def deform_by_loops(s: Surface, loops: Sequence[Sequence[int]], t: Sequence, mode: str = "increment",
                    dec: CylinderDecomposition | None = None) -> Surface:
    """Change saddle connection lengths along digraph loops, keeping every crossing gamma_C.

    mode='increment' adds t_j to every saddle connection of loop j; mode='absolute'
    sets length(gamma) = sum_j t_j [gamma in loop j].
    """
    dec = _decomposition(s, dec)
    if len(loops) != len(t):
        raise SurgeryError("one parameter per loop required")
    from .cyl import cohomology_classes

    for l in loops:
        cohomology_classes(dec, ("loop", tuple(l)))  # validates embedded closed loops
    F = dec.surface.field
    lengths = {}
    for g in dec.saddle_connections:
        total = g.length if mode == "increment" else Scalar.zero(F)
        for l, x in zip(loops, t):
            if g.id in l:
                total = total + as_scalar(x)
        if total.sign() <= 0:
            raise SurgeryError(f"saddle connection {g.id} would get length {total}")
        lengths[g.id] = total
    out, _ = rebuild(dec, lengths=lengths)
    return out


# ---------------------------------------------------------------------------
# workbench for slit surgery


@dataclass
class PathCut:
    left: list[int]  # edges along the path, same direction, polygon on the left of the path
    right: list[int]  # their glued partners
    positions: list[CNum]  # cumulative holonomy at each breakpoint (starts with 0)
    classes: list[int]  # vertex class at each breakpoint


class Workbench:
    def __init__(self, s: Surface, tracked: Sequence[tuple[str, CNum]] = ()):
        self.field = s.field
        self.verts = {p: list(v) for p, v in s.verts.items()}
        self.edges = {p: list(e) for p, e in s.edges.items()}
        self.glue = dict(s.glue)
        self.marked = set(s.marked)
        self.next_eid = s.next_eid
        self.tracked = [list(t) for t in tracked]
        self._s = s
        self._pid_counter = 0

    def surface(self, validate: bool = False) -> Surface:
        if self._s is None or validate:
            self._s = Surface(self.field, {p: tuple(v) for p, v in self.verts.items()},
                              {p: tuple(e) for p, e in self.edges.items()}, self.glue, self.marked,
                              self.next_eid, validate=validate)
        return self._s

    def _touch(self):
        self._s = None

    def _new_eid(self) -> int:
        e = self.next_eid
        self.next_eid += 1
        return e

    def _new_pid(self, base: str) -> str:
        while True:
            self._pid_counter += 1
            pid = f"{base}.{self._pid_counter}"
            if pid not in self.verts:
                return pid

    def _loc(self, e: int) -> tuple[str, int]:
        for pid, es in self.edges.items():
            if e in es:
                return pid, es.index(e)
        raise KeyError(e)

    # -- primitive edits -----------------------------------------------------
    def insert_point(self, e: int, pt: CNum) -> None:
        """Subdivide edge e (and its partner) at pt, strictly inside e."""
        P, k = self._loc(e)
        vs = self.verts[P]
        a, b = vs[k], vs[(k + 1) % len(vs)]
        if pt == a or pt == b or not _on_segment(pt, a, b):
            raise SurgeryError("subdivision point not inside the edge")
        f = self.glue[e]
        Q, j = self._loc(f)
        qs = self.verts[Q]
        pt_f = qs[j] + (pt - b)
        e2, f2 = self._new_eid(), self._new_eid()
        vs.insert(k + 1, pt)
        self.edges[P].insert(k + 1, e2)
        Q, j = self._loc(f)
        self.verts[Q].insert(j + 1, pt_f)
        self.edges[Q].insert(j + 1, f2)
        self.glue[e] = f2
        self.glue[f2] = e
        self.glue[e2] = f
        self.glue[f] = e2
        self._touch()

    def cut(self, pid: str, i: int, j: int) -> tuple[int, int]:
        """Cut polygon pid along the chord from vertex i to vertex j."""
        if i > j:
            i, j = j, i
        vs, es = self.verts[pid], self.edges[pid]
        n = len(vs)
        if j - i < 2 or (i == 0 and j == n - 1):
            raise SurgeryError("chord joins adjacent vertices")
        x, y = self._new_eid(), self._new_eid()
        A_v, A_e = vs[i:j + 1], es[i:j] + [x]
        B_v, B_e = vs[j:] + vs[:i + 1], es[j:] + es[:i] + [y]
        for poly in (A_v, B_v):
            if (sum(((poly[k].cross(poly[(k + 1) % len(poly)])) for k in range(len(poly))), Scalar.zero(self.field))).sign() <= 0:
                raise SurgeryError("chord leaves the polygon")
        new = self._new_pid(pid.split(".")[0])
        verts, edges = {}, {}
        for p in self.verts:
            if p == pid:
                verts[pid], edges[pid] = A_v, A_e
                verts[new], edges[new] = B_v, B_e
            else:
                verts[p], edges[p] = self.verts[p], self.edges[p]
        self.verts, self.edges = verts, edges
        self.glue[x] = y
        self.glue[y] = x
        for t in self.tracked:
            if t[0] == pid and point_in_polygon(t[1], A_v) == "outside":
                t[0] = new
        self._touch()
        return x, y

    def _vertex_index(self, pid: str, pt: CNum) -> int | None:
        for k, v in enumerate(self.verts[pid]):
            if v == pt:
                return k
        return None

    def _ensure_boundary_vertex(self, pid: str, pt: CNum) -> None:
        if self._vertex_index(pid, pt) is not None:
            return
        vs = self.verts[pid]
        for k in range(len(vs)):
            if _on_segment(pt, vs[k], vs[(k + 1) % len(vs)]):
                self.insert_point(self.edges[pid][k], pt)
                return
        raise SurgeryError("point not on polygon boundary")

    def make_vertex(self, pid: str, pt: CNum, d: CNum) -> None:
        """Turn a point of polygon pid into a vertex, cutting along the line through pt with direction d."""
        vs = self.verts[pid]
        where = point_in_polygon(pt, vs)
        if where == "boundary":
            self._ensure_boundary_vertex(pid, pt)
            return
        s = self.surface()
        t1, _, _ = _exit(s, pid, pt, d)
        t2, _, _ = _exit(s, pid, pt, -d)
        r, q = pt + d * t1, pt - d * t2
        self._ensure_boundary_vertex(pid, q)
        self._ensure_boundary_vertex(pid, r)
        iq, ir = self._vertex_index(pid, q), self._vertex_index(pid, r)
        x, _ = self.cut(pid, iq, ir)
        self.insert_point(x, pt)

    # -- paths --------------------------------------------------------------
    def _develop(self, start, segments: Sequence[CNum], loop_class: int | None):
        """Walk the path on the current surface: list of pieces per segment and end germs."""
        s = self.surface()
        g = start(s)
        if loop_class is not None:  # class indices change with every edit
            loop_class = s.corner_class[g.corner]
        out = []
        for n, v in enumerate(segments):
            try:
                tr = walk(s, g, v)
            except HitSingularity as exc:
                raise SurgeryError("hit singularity") from exc
            out.append(tr)
            end = tr.end
            if end.kind == "v":
                ci = s.corner_class[end.corner]
                last = n == len(segments) - 1
                if s.is_singular_class(ci) and not (last and loop_class is not None and ci == loop_class):
                    raise SurgeryError("hit singularity")
            if n + 1 < len(segments):
                g = rotate(s, end, segments[n + 1])
        return out

    def cut_path(self, start, segments: Sequence[CNum], loop_class: int | None = None,
                 max_steps: int = 500) -> PathCut:
        """Refine the polygons until the path runs along edges; ``start(surface)`` gives the first germ."""
        for _ in range(max_steps):
            traces = self._develop(start, segments, loop_class)
            fixed = self._fix_first(traces)
            if not fixed:
                return self._collect(start, segments, loop_class)
        raise SurgeryError("path refinement did not terminate")

    def _fix_first(self, traces) -> bool:
        for tr in traces:
            for pid, a, b in tr.pieces:
                vs = self.verts[pid]
                ia, ib = self._vertex_index(pid, a), self._vertex_index(pid, b)
                n = len(vs)
                if ia is not None and ib is not None and ib == (ia + 1) % n:
                    continue
                d = b - a
                if ia is None:
                    self.make_vertex(pid, a, d)
                elif ib is None:
                    self.make_vertex(pid, b, d)
                else:
                    self.cut(pid, ia, ib)
                return True
        return False

    def _collect(self, start, segments, loop_class) -> PathCut:
        s = self.surface()
        traces = self._develop(start, segments, loop_class)
        left, positions, classes = [], [CNum(0)], []
        g0 = start(s)
        classes.append(s.corner_class[g0.corner] if g0.kind == "v" else None)
        pos = CNum(0)
        for tr in traces:
            for pid, a, b in tr.pieces:
                k = self._vertex_index(pid, a)
                e = self.edges[pid][k]
                left.append(e)
                pos = pos + (b - a)
                positions.append(pos)
                nxt = self.edges[pid][(k + 1) % len(self.edges[pid])]
                classes.append(s.corner_class[nxt])
        return PathCut(left, [self.glue[e] for e in left], positions, classes)

    def align(self, p1: PathCut, p2: PathCut, start1, start2, segments, loop1=None, loop2=None):
        """Subdivide both edge paths at the union of their breakpoints."""
        for _ in range(500):
            inserted = False
            for this, other in ((p1, p2), (p2, p1)):
                have = set(this.positions)
                missing = [q for q in other.positions if q not in have]
                if not missing:
                    continue
                pos = missing[0]
                for i, e in enumerate(this.left):
                    a, b = this.positions[i], this.positions[i + 1]
                    if pos != a and pos != b and _on_segment(pos, a, b):
                        P, k = self._loc(e)
                        self.insert_point(e, self.verts[P][k] + (pos - a))
                        inserted = True
                        break
                if not inserted:
                    raise SurgeryError("paths do not have the same development")
                break
            p1 = self._collect(start1, segments, loop1)
            p2 = self._collect(start2, segments, loop2)
            if not inserted:
                return p1, p2
        raise SurgeryError("breakpoint alignment failed")

    def swap(self, p1: PathCut, p2: PathCut) -> None:
        for l1, r2 in zip(p1.left, p2.right):
            self.glue[l1] = r2
            self.glue[r2] = l1
        for l2, r1 in zip(p2.left, p1.right):
            self.glue[l2] = r1
            self.glue[r1] = l2
        self._touch()


def _check_embedded(cut: PathCut, name: str, closed: bool = False) -> None:
    cls = cut.classes[:-1] if closed else cut.classes
    if len(set(cls)) != len(cls):
        raise SurgeryError(f"{name} is not embedded")


# ---------------------------------------------------------------------------
# paths, twins, Schiffer variations


@dataclass(frozen=True)
class PathSpec:
    start: int  # zero reference (index among singular classes)
    segments: tuple[CNum, ...]
    kind: str = "path"
    sector: int = 0

    def __post_init__(self):
        segs = tuple(v if isinstance(v, CNum) else CNum(*v) for v in self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs or any(v.is_zero() for v in segs):
            raise SurgeryError("path segments must be nonzero")
        if self.kind not in ("path", "loop"):
            raise SurgeryError(f"unknown path kind {self.kind!r}")

    def germ(self, s: Surface) -> Germ:
        ci = s.singular_class(self.start)
        g = vertex_germ(s, s.vertex_classes[ci][0], self.segments[0])
        return rotate_half_turns(s, g, 2 * (self.sector % s.cone_multiples[ci]))

    def holonomy(self) -> CNum:
        return sum(self.segments, CNum(0))

    def to_json(self) -> dict:
        return {"start": self.start, "sector": self.sector, "kind": self.kind,
                "segments": [v.to_json() for v in self.segments]}

    @classmethod
    def from_json(cls, data) -> "PathSpec":
        return cls(int(data["start"]), tuple(CNum.from_json(v) for v in data["segments"]),
                   data.get("kind", "path"), int(data.get("sector", 0)))


def sector_of(s: Surface, ci: int, g: Germ) -> int:
    """Sector index of a germ at vertex class ci in the PathSpec convention."""
    h = vertex_germ(s, s.vertex_classes[ci][0], g.d)
    key = germ_key(s, g)
    for k in range(s.cone_multiples[ci]):
        if germ_key(s, h) == key:
            return k
        h = rotate_half_turns(s, h, 2)
    raise SurgeryError("germ not found at vertex")


def _starts(s: Surface, path: PathSpec):
    ci = s.singular_class(path.start)
    if s.cone_multiples[ci] != 2:
        raise SurgeryError("twin paths are implemented for simple zeros only")
    c0 = s.vertex_classes[ci][0]
    d = path.segments[0]
    k = path.sector % 2

    def start1(sf):
        return rotate_half_turns(sf, vertex_germ(sf, c0, d), 2 * k)

    def start2(sf):
        return rotate_half_turns(sf, start1(sf), 2)

    return ci, start1, start2


def _prepare(s: Surface, paths: Sequence[PathSpec], tracked=()):
    """Refine a workbench until every path and its twin are aligned edge paths."""
    wb = Workbench(s, tracked)
    jobs = []
    for path in paths:
        ci, start1, start2 = _starts(s, path)
        closed = ci if path.kind == "loop" else None
        # development checks on the unmodified surface first (distinct diagnostics)
        wb._develop(start1, path.segments, closed)
        try:
            wb._develop(start2, path.segments, None)
        except SurgeryError as exc:
            raise SurgeryError("twin path hit singularity") from exc
        jobs.append((path, start1, start2, closed))
    for path, start1, start2, closed in jobs:
        wb.cut_path(start1, path.segments, closed)
        wb.cut_path(start2, path.segments, None)
    cuts = []
    for n, (path, start1, start2, closed) in enumerate(jobs):
        c1 = wb._collect(start1, path.segments, closed)
        c2 = wb._collect(start2, path.segments, None)
        c1, c2 = wb.align(c1, c2, start1, start2, path.segments, closed, None)
        cuts.append((c1, c2))
    # alignment of later pairs may subdivide earlier ones; collect everything afresh
    cuts = [(wb._collect(st1, p.segments, cl), wb._collect(st2, p.segments, None))
            for p, st1, st2, cl in jobs]
    for (path, *_), (c1, c2) in zip(jobs, cuts):
        if c1.positions != c2.positions:
            raise SurgeryError("breakpoint alignment failed")
        _check_embedded(c1, "path", closed=path.kind == "loop")
        _check_embedded(c2, "twin path")
        z = c1.classes[0]
        if path.kind == "loop" and c1.classes[-1] != z:
            raise SurgeryError("loop does not return to its start")
        if path.kind == "path" and c1.classes[-1] == z:
            raise SurgeryError("path returns to its start; use kind 'loop'")
        if set(c1.classes) & set(c2.classes) != {z}:
            raise SurgeryError("twin path meets the path")
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            zs = {cuts[i][0].classes[0]} & {cuts[j][0].classes[0]}
            a = set(cuts[i][0].classes) | set(cuts[i][1].classes)
            b = set(cuts[j][0].classes) | set(cuts[j][1].classes)
            if (a & b) - zs:
                raise SurgeryError("slit pairs are not disjoint")
    return wb, cuts


def twin_path(s: Surface, path: PathSpec) -> PathSpec:
    _prepare(s, [path])
    return PathSpec(path.start, path.segments, "path", (path.sector + 1) % 2)


@dataclass
class SchifferResult:
    surface: Surface
    inverses: list
    tracked: list

    @property
    def inverse(self) -> PathSpec:
        return self.inverses[0]


def schiffer(s: Surface, path: PathSpec, tracked=()) -> tuple[Surface, PathSpec]:
    res = schiffer_many(s, [path], tracked)
    return res.surface, res.inverse


def schiffer_many(s: Surface, paths: Sequence[PathSpec], tracked=()) -> SchifferResult:
    """Schiffer variations along pairwise disjoint paths, performed together.

    Slits each path and its twin and reglues crosswise; returns the new surface,
    the inverse path of each input path, and the relocated tracked points.
    """
    wb, cuts = _prepare(s, paths, tracked)
    for c1, c2 in cuts:
        wb.swap(c1, c2)
    out = wb.surface(validate=True)
    if out.signature != s.signature:
        raise SurgeryError("Schiffer variation changed the stratum")
    inverses = []
    for path, (c1, c2) in zip(paths, cuts):
        # the inverse starts at the merged endpoint and runs back along the seam of the path's left side
        corner = c2.right[-1]
        back = [-v for v in reversed(path.segments)]
        zi = out.corner_class[corner]
        kind = "loop" if out.corner_class[c1.left[0]] == zi else "path"
        inverses.append(PathSpec(out.zero_ref(zi), tuple(back), kind, sector_of(out, zi, Germ("v", back[0], corner))))
    return SchifferResult(out, inverses, [tuple(t) for t in wb.tracked])


def split_zero_slits(s: Surface, zero: int, eps, dec: CylinderDecomposition | None = None) -> Surface:
    """Slit the two upward segments of length eps at a simple zero (vertex class) and reglue crosswise."""
    eps = as_scalar(eps)
    if zero not in s.zero_classes or s.cone_multiples[zero] != 2:
        raise SurgeryError("zero must be simple")
    dec = _decomposition(s, dec)
    if eps.sign() <= 0 or eps >= min(c.height for c in dec.cylinders):
        raise SurgeryError("slit length must be positive and smaller than every cylinder height")
    out, _ = schiffer(s, PathSpec(s.zero_ref(zero), (CNum(0, eps),)))
    return out


def _zero_needing_split(dec: CylinderDecomposition) -> int | None:
    s = dec.surface
    for ci in s.zero_classes:
        if any(not sc.is_loop for sc in dec.saddle_connections if ci in (sc.start, sc.end)):
            return ci
    return None


def make_fully_periodic(s: Surface, max_rounds: int = 50) -> Surface:
    """Split zeros until every horizontal saddle connection is a loop (all zeros simple)."""
    if any(s.cone_multiples[ci] != 2 for ci in s.zero_classes):
        raise SurgeryError("all zeros must be simple")
    dec = horizontal_decomposition(s)
    for _ in range(max_rounds):
        ci = _zero_needing_split(dec)
        if ci is None:
            return dec.surface
        eps = min(c.height for c in dec.cylinders) / 2
        s2 = split_zero_slits(dec.surface, ci, eps, dec)
        dec2 = horizontal_decomposition(s2)
        s3, _ = rebuild(dec2)
        dec = horizontal_decomposition(s3)
    raise SurgeryError("fully periodic form not reached")


# ---------------------------------------------------------------------------
# star-shaped connected sums


@dataclass(frozen=True)
class StarSumSpec:
    lattices: tuple  # ((a_1, b_1), ..., (a_g, b_g))
    slits: tuple  # (c_2, ..., c_g)
    bases1: tuple  # slit starts in T_1 (one per slit)
    basesj: tuple  # slit starts in T_j

    def __post_init__(self):
        conv = lambda v: v if isinstance(v, CNum) else CNum(*v) if isinstance(v, (tuple, list)) else CNum(v)
        object.__setattr__(self, "lattices", tuple((conv(a), conv(b)) for a, b in self.lattices))
        object.__setattr__(self, "slits", tuple(conv(c) for c in self.slits))
        object.__setattr__(self, "bases1", tuple(conv(c) for c in self.bases1))
        object.__setattr__(self, "basesj", tuple(conv(c) for c in self.basesj))
        g = len(self.lattices)
        if g < 2 or not (len(self.slits) == len(self.bases1) == len(self.basesj) == g - 1):
            raise SurgeryError("star sum needs g >= 2 lattices and g-1 slits with base points")
        for a, b in self.lattices:
            if a.cross(b).sign() <= 0:
                raise SurgeryError("lattice basis must be positively oriented")
        if any(c.is_zero() for c in self.slits):
            raise SurgeryError("slits must be nonzero")

    @property
    def genus(self) -> int:
        return len(self.lattices)

    def to_json(self) -> dict:
        return {"lattices": [[a.to_json(), b.to_json()] for a, b in self.lattices],
                "slits": [c.to_json() for c in self.slits],
                "bases1": [c.to_json() for c in self.bases1],
                "basesj": [c.to_json() for c in self.basesj]}

    @classmethod
    def from_json(cls, data) -> "StarSumSpec":
        g = lambda v: CNum.from_json(v)
        return cls(tuple((g(a), g(b)) for a, b in data["lattices"]), tuple(g(c) for c in data["slits"]),
                   tuple(g(c) for c in data["bases1"]), tuple(g(c) for c in data["basesj"]))

    def without(self, j: int) -> "StarSumSpec":
        """A copy without torus j (1-based, j >= 2) and its slit."""
        k = j - 2
        drop = lambda t: t[:k] + t[k + 1:]
        return StarSumSpec(self.lattices[:j - 1] + self.lattices[j:], drop(self.slits), drop(self.bases1),
                           drop(self.basesj))


@dataclass
class StarSum:
    surface: Surface
    spec: StarSumSpec
    seams: dict  # j -> (PathCut in T_1, PathCut in T_j) after regluing
    torus_polys: dict  # j -> polygon ids of torus j


def _torus_polygon(a: CNum, b: CNum):
    return [CNum(0), a, a + b, b]


def star_connected_sum(spec: StarSumSpec) -> StarSum:
    g = spec.genus
    polys, glues, ids = [], [], []
    for j, (a, b) in enumerate(spec.lattices, start=1):
        pid = f"T{j}"
        ids.append(pid)
        polys.append(_torus_polygon(a, b))
        glues += [((pid, 0), (pid, 2)), ((pid, 1), (pid, 3))]
    spec_field = common_field([v for p in polys for v in p] + list(spec.slits) + list(spec.bases1) + list(spec.basesj))
    union = Surface.from_polygons(polys, glues, ids=ids, field=spec_field, validate=False)
    tracked = [("T1", p) for p in spec.bases1] + [(f"T{j}", p) for j, p in enumerate(spec.basesj, start=2)]
    for pid, p in tracked:
        if point_in_polygon(p.lift(spec_field), union.verts[pid]) == "outside":
            raise SurgeryError(f"slit base point {p} outside the fundamental parallelogram of {pid}")
    wb = Workbench(union, tracked)

    def starter(idx, d):
        def start(sf):
            pid, pt = wb.tracked[idx]
            return point_germ(sf, pid, pt, d)
        return start

    cuts = {}
    for it in range(2):  # second pass re-collects after later cuts subdivided earlier edges
        for j in range(2, g + 1):
            c = spec.slits[j - 2]
            s1, sj = starter(j - 2, c), starter(g - 1 + j - 2, c)
            cuts[j] = (s1, sj, wb.cut_path(s1, [c]), wb.cut_path(sj, [c]))
    for j in range(2, g + 1):
        s1, sj, c1, cj = cuts[j]
        _check_embedded(c1, f"slit s_{j}")
        _check_embedded(cj, f"slit s'_{j}")
    seen = set()
    for j in range(2, g + 1):
        cls = set(cuts[j][2].classes)
        if cls & seen:
            raise SurgeryError("slits overlap in T_1")
        seen |= cls
    seams = {}
    final = {}
    for j in range(2, g + 1):
        s1, sj, c1, cj = cuts[j]
        c1 = wb._collect(s1, [spec.slits[j - 2]], None)
        cj = wb._collect(sj, [spec.slits[j - 2]], None)
        c1, cj = wb.align(c1, cj, s1, sj, [spec.slits[j - 2]], None)
        final[j] = (c1, cj)
    for j in range(2, g + 1):
        c1, cj = final[j]
        wb.swap(c1, cj)
        seams[j] = (c1, cj)
    try:
        out = wb.surface(validate=True)
    except ValidationError as exc:
        raise SurgeryError(f"star sum invalid: {exc}") from exc
    torus_polys = {}
    for pid in out.verts:
        torus_polys.setdefault(int(pid.split(".")[0][1:]), []).append(pid)
    if out.signature.genus != g or out.signature.orders != (1,) * (2 * g - 2):
        raise SurgeryError(f"star sum has unexpected stratum {out.signature}")
    return StarSum(out, spec, seams, torus_polys)


def forget_torus(star: StarSum, j: int) -> Surface:
    """Undo the slit regluing of torus j and discard its component."""
    g = star.spec.genus
    if not 2 <= j <= g:
        raise SurgeryError(f"torus index {j} out of range")
    s = star.surface
    c1, cj = star.seams[j]
    glue = dict(s.glue)
    for e in c1.left + c1.right + cj.left + cj.right:
        if e not in glue:
            raise SurgeryError("slit labels lost")
    for l, r in zip(c1.left, c1.right):
        glue[l], glue[r] = r, l
    for l, r in zip(cj.left, cj.right):
        glue[l], glue[r] = r, l
    drop = set(star.torus_polys[j])
    verts = {p: v for p, v in s.verts.items() if p not in drop}
    edges = {p: e for p, e in s.edges.items() if p not in drop}
    kept = {e for es in edges.values() for e in es}
    if any(glue[e] not in kept for e in kept):
        raise SurgeryError("torus component not separated")
    return Surface(s.field, verts, edges, {e: glue[e] for e in kept}, [m for m in s.marked if m in kept], s.next_eid)
