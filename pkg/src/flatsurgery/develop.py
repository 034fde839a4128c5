"""Straight-line flow on a polygon surface and direction germs at points.

A :class:`Germ` is a point of the surface together with a direction there.
At a vertex the direction alone is ambiguous when the cone angle exceeds
2pi, so vertex germs also record the corner whose half-open sector
``[a, b)`` contains the direction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exactnum import CNum, Scalar
from .surface import Surface, SurfaceError, angle_lt, in_sector, point_in_polygon, _on_segment

__all__ = ["Germ", "Trace", "HitSingularity", "vertex_germ", "point_germ", "rotate",
           "rotate_half_turns", "walk", "ray", "germ_key", "place_key", "direction_key"]


class HitSingularity(SurfaceError):
    def __init__(self, cls_index: int, fraction, msg: str = "hit singularity"):
        self.cls_index = cls_index
        self.fraction = fraction
        super().__init__(f"{msg} (vertex class {cls_index})")


@dataclass(frozen=True)
class Germ:
    kind: str  # 'v' or 'p'
    d: CNum
    corner: int | None = None
    pid: str | None = None
    pt: CNum | None = None

    def with_dir(self, d: CNum) -> "Germ":
        return Germ(self.kind, d, self.corner, self.pid, self.pt)


def vertex_germ(s: Surface, corner: int, d: CNum) -> Germ:
    """Germ at the vertex of ``corner``: first sheet containing d, rotating ccw from the corner's start."""
    a, _ = s.corner_sector(corner)
    return rotate(s, Germ("v", a, corner), d)


def point_germ(s: Surface, pid: str, pt: CNum, d: CNum) -> Germ:
    """Germ at a point of polygon pid; vertices are turned into vertex germs."""
    vs = s.verts[pid]
    for k, v in enumerate(vs):
        if v == pt:
            c = s.edges[pid][k]
            a, b = s.corner_sector(c)
            if in_sector(a, b, d):
                return Germ("v", d, c)
            return vertex_germ(s, c, d)
    if point_in_polygon(pt, vs) == "outside":
        raise SurfaceError(f"point {pt} outside polygon {pid}")
    return Germ("p", d, pid=pid, pt=pt)


def rotate(s: Surface, g: Germ, t: CNum, ccw: bool = True) -> Germ:
    """Rotate the germ direction to t, stopping at the first occurrence (angle in [0, 2pi))."""
    if g.kind == "p":
        return g.with_dir(t)
    c = g.corner
    cls = s.vertex_classes[s.corner_class[c]]
    a, b = s.corner_sector(c)
    u = g.d
    if ccw:
        if angle_lt(u, t, b):
            return Germ("v", t, c)
        for _ in range(len(cls)):
            c = s.ccw_corner(c)
            a, b = s.corner_sector(c)
            if in_sector(a, b, t):
                return Germ("v", t, c)
    else:
        # t in [a, u]: cw from u we meet t before leaving the corner
        if not angle_lt(a, u, t):
            return Germ("v", t, c)
        for _ in range(len(cls)):
            c = s.cw_corner(c)
            a, b = s.corner_sector(c)
            if in_sector(a, b, t):
                return Germ("v", t, c)
    raise SurfaceError("germ rotation failed")


def rotate_half_turns(s: Surface, g: Germ, k: int) -> Germ:
    """Rotate by k*pi (ccw for k > 0)."""
    for _ in range(abs(k)):
        g = rotate(s, g, -g.d, ccw=k > 0)
    return g


def _start(s: Surface, g: Germ) -> tuple[str, CNum]:
    if g.kind == "v":
        return s.corner_point(g.corner)
    pid, x = g.pid, g.pt
    vs = s.verts[pid]
    n = len(vs)
    for k in range(n):
        a, b = vs[k], vs[(k + 1) % n]
        if _on_segment(x, a, b):
            e = b - a
            cr = e.cross(g.d).sign()
            if cr < 0 or (cr == 0 and e.dot(g.d).sign() < 0):
                f = s.glue[s.edges[pid][k]]
                q, j = s.edge_loc[f]
                return q, x + (s.verts[q][j] - b)
            return pid, x
    return pid, x


@dataclass
class Trace:
    pieces: list = field(default_factory=list)  # (pid, start point, end point)
    end: Germ | None = None  # germ at the end, pointing backwards
    hit: int | None = None  # vertex class that stopped a ray
    holonomy: CNum | None = None

    def polygons(self):
        return [p[0] for p in self.pieces]


def _exit(s: Surface, pid: str, x: CNum, r: CNum):
    """Smallest s > 0 where x + s r meets the boundary; returns (s, kind, index)."""
    vs = s.verts[pid]
    n = len(vs)
    best = None
    for k in range(n):
        a = vs[k]
        b = vs[(k + 1) % n]
        e = b - a
        ax = a - x
        den = r.cross(e)
        if not den.is_zero():
            t = ax.cross(e) / den
            if t.sign() <= 0:
                continue
            u = ax.cross(r) / den
            if u.sign() < 0 or (u - 1).sign() > 0:
                continue
            if u.is_zero():
                cand = (t, "v", k)
            elif u == 1:
                cand = (t, "v", (k + 1) % n)
            else:
                cand = (t, "e", k)
        else:
            if not ax.cross(r).is_zero():
                continue
            rr = r.norm2()
            cand = None
            for idx, p in ((k, a), ((k + 1) % n, b)):
                t = (p - x).dot(r) / rr
                if t.sign() > 0 and (cand is None or t < cand[0]):
                    cand = (t, "v", idx)
            if cand is None:
                continue
        if best is None or cand[0] < best[0]:
            best = cand
    if best is None:
        raise SurfaceError(f"ray from {x} in polygon {pid} does not exit")
    return best


def _arrival(s: Surface, c: int, back: CNum) -> Germ:
    a, b = s.corner_sector(c)
    if in_sector(a, b, back):
        return Germ("v", back, c)
    c2 = s.ccw_corner(c)
    a, b = s.corner_sector(c2)
    if not in_sector(a, b, back):
        raise SurfaceError("arrival germ not found")
    return Germ("v", back, c2)


def _flow(s: Surface, g: Germ, vec: CNum, limited: bool, budget: int, stop_at_singular: bool = True) -> Trace:
    if vec.is_zero():
        raise SurfaceError("zero displacement")
    # the sheet is found by rotating ccw from the germ's own direction
    g = rotate(s, g, vec)
    pid, x = _start(s, g)
    r = vec
    tr = Trace()
    done = Scalar.zero(s.field)
    steps = 0
    while True:
        steps += 1
        if steps > budget:
            raise BudgetExhausted(tr)
        t, kind, k = _exit(s, pid, x, r)
        if limited and (t - 1).sign() >= 0:
            y = x + r
            tr.pieces.append((pid, x, y))
            if t == 1 and kind == "v":
                tr.end = _arrival(s, s.edges[pid][k], -vec)
            else:
                tr.end = point_germ(s, pid, y, -vec)
            tr.holonomy = vec
            return tr
        y = x + r * t
        tr.pieces.append((pid, x, y))
        done = done + t * (1 - done) if limited else done
        if kind == "v":
            arr = _arrival(s, s.edges[pid][k], -vec)
            ci = s.corner_class[arr.corner]
            if s.is_singular_class(ci) and stop_at_singular:
                if limited:
                    raise HitSingularity(ci, done)
                tr.end = arr
                tr.hit = ci
                tr.holonomy = sum((p[2] - p[1] for p in tr.pieces), CNum(0))
                return tr
            out = rotate(s, arr, vec)
            pid, x = s.corner_point(out.corner)
        else:
            e = s.edges[pid][k]
            f = s.glue[e]
            q, j = s.edge_loc[f]
            vs = s.verts[pid]
            x = y + (s.verts[q][j] - vs[(k + 1) % len(vs)])
            pid = q
        if limited:
            r = r * (1 - t)


class BudgetExhausted(SurfaceError):
    def __init__(self, trace):
        self.trace = trace
        super().__init__("budget exhausted")


def same_dir(u: CNum, v: CNum) -> bool:
    return u.cross(v).is_zero() and u.dot(v).sign() > 0


def walk(s: Surface, g: Germ, vec: CNum, budget: int = 10_000, stop_at_singular: bool = True) -> Trace:
    """Develop the segment with holonomy vec from germ g (direction of g is replaced by vec).

    Raises HitSingularity when a singular point is met before the end.
    """
    return _flow(s, g, vec, True, budget, stop_at_singular)


def ray(s: Surface, g: Germ, d: CNum, budget: int = 10_000) -> Trace:
    """Follow direction d until a singular point; budget bounds polygon crossings."""
    return _flow(s, g, d, False, budget)


# ---------------------------------------------------------------------------
# identity of points and germs


def direction_key(d: CNum) -> CNum:
    m = abs(d.re) if not d.re.is_zero() else abs(d.im)
    return d / m


def place_key(s: Surface, g: Germ):
    """Hashable identity of the underlying point."""
    if g.kind == "v":
        return ("v", s.corner_class[g.corner])
    pid, x = g.pid, g.pt
    vs = s.verts[pid]
    n = len(vs)
    order = {p: i for i, p in enumerate(s.verts)}
    for k in range(n):
        a, b = vs[k], vs[(k + 1) % n]
        if _on_segment(x, a, b):
            f = s.glue[s.edges[pid][k]]
            q, j = s.edge_loc[f]
            y = x + (s.verts[q][j] - b)
            if (order[q], s.edges[q][j]) < (order[pid], s.edges[pid][k]):
                return ("p", q, y)
            return ("p", pid, x)
    return ("p", pid, x)


def germ_key(s: Surface, g: Germ):
    if g.kind == "v":
        h = g
        a, b = s.corner_sector(h.corner)
        if not in_sector(a, b, h.d):
            h = rotate(s, h, h.d)
        return ("v", h.corner, direction_key(h.d))
    return place_key(s, g) + (direction_key(g.d),)
