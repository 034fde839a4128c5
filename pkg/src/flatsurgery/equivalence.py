"""Translation equivalence by developing a triangulation of one surface into another."""
from __future__ import annotations

from collections import deque

from .develop import Germ, HitSingularity, germ_key, rotate, vertex_germ, walk
from .exactnum import CNum
from .surface import Surface, SurfaceError

__all__ = ["triangulate_polygon", "translation_equivalent", "EquivalenceResult"]


def _strictly_inside(p: CNum, a: CNum, b: CNum, c: CNum) -> bool:
    """p in the closed triangle abc (ccw) minus its corners."""
    if p == a or p == b or p == c:
        return False
    return (b - a).cross(p - a).sign() >= 0 and (c - b).cross(p - b).sign() >= 0 and \
        (a - c).cross(p - c).sign() >= 0


def triangulate_polygon(vs) -> list[tuple[int, int, int]]:
    """Ear clipping with exact predicates; triangles as ccw vertex-index triples."""
    idx = list(range(len(vs)))
    out = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * len(vs) ** 2:
            raise SurfaceError("triangulation failed")
        n = len(idx)
        for k in range(n):
            i, j, l = idx[k - 1], idx[k], idx[(k + 1) % n]
            a, b, c = vs[i], vs[j], vs[l]
            if (b - a).cross(c - b).sign() <= 0:
                continue
            if any(_strictly_inside(vs[m], a, b, c) for m in idx if m not in (i, j, l)):
                continue
            out.append((i, j, l))
            idx.pop(k)
            break
        else:
            raise SurfaceError("no ear found")
    out.append(tuple(idx))
    return out


class EquivalenceResult:
    def __init__(self, ok: bool, zero_map: dict | None = None, reason: str = ""):
        self.ok = ok
        self.zero_map = zero_map or {}
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"EquivalenceResult({self.ok}, {self.zero_map}, {self.reason!r})"


class _Triangulation:
    def __init__(self, s: Surface):
        self.s = s
        self.tris = []  # (pid, (i, j, k))
        edge_at = {}
        for pid, vs in s.verts.items():
            for tri in triangulate_polygon(vs):
                t = len(self.tris)
                self.tris.append((pid, tri))
                for m in range(3):
                    edge_at[(pid, tri[m], tri[(m + 1) % 3])] = (t, m)
        self.neighbor = {}
        for (pid, a, b), (t, m) in edge_at.items():
            n = len(s.verts[pid])
            if b == (a + 1) % n:
                f = s.glue[s.edges[pid][a]]
                q, j = s.edge_loc[f]
                other = edge_at[(q, j, (j + 1) % len(s.verts[q]))]
            else:
                other = edge_at[(pid, b, a)]
            self.neighbor[(t, m)] = other

    def point(self, t: int, m: int) -> CNum:
        pid, tri = self.tris[t]
        return self.s.verts[pid][tri[m % 3]]

    def corner(self, t: int, m: int) -> int:
        pid, tri = self.tris[t]
        return self.s.edges[pid][tri[m % 3]]


def _vertex_type(s: Surface, g: Germ):
    if g.kind == "p":
        return None
    ci = s.corner_class[g.corner]
    if not s.is_singular_class(ci):
        return None
    return ci


def _try(tri: _Triangulation, s2: Surface, t0: int, m0: int, seed: Germ):
    s1 = tri.s
    placed = {t0: (m0, seed)}
    zero_map = {}
    queue = deque([t0])
    while queue:
        t = queue.popleft()
        m, g = placed[t]
        start_key = germ_key(s2, g)
        for step in range(3):
            k = m + step
            p0, p1 = tri.point(t, k), tri.point(t, k + 1)
            e = p1 - p0
            try:
                tr = walk(s2, g, e)
            except HitSingularity:
                return None
            arr = tr.end
            # the s1 vertex at p1 must match the s2 point type
            c1 = tri.corner(t, k + 1)
            ci1 = s1.corner_class[c1]
            img = _vertex_type(s2, arr)
            if s1.is_singular_class(ci1):
                if img is None or s1.cone_multiples[ci1] != s2.cone_multiples[img]:
                    return None
                if (ci1 in s1.marked_classes) != (img in s2.marked_classes):
                    return None
                if zero_map.setdefault(ci1, img) != img:
                    return None
            elif img is not None:
                return None
            nb = tri.neighbor[(t, k % 3)]
            if nb[0] in placed:
                nm, ng = placed[nb[0]]
                if nm != nb[1] or germ_key(s2, ng) != germ_key(s2, arr):
                    # same triangle placed from another edge: compare after moving to that edge
                    if not _same_placement(tri, s2, nb[0], nm, ng, nb[1], arr):
                        return None
            else:
                placed[nb[0]] = (nb[1], arr)
                queue.append(nb[0])
            # turn cw from the back direction to the next edge
            p2 = tri.point(t, k + 2)
            g = rotate(s2, arr, p2 - p1, ccw=False)
        if germ_key(s2, g) != start_key:
            return None
    if len(set(zero_map.values())) != len(zero_map):
        return None
    return zero_map


def _same_placement(tri, s2, t, m, g, m2, g2) -> bool:
    """Whether germ g at edge m of triangle t and germ g2 at edge m2 describe the same placement."""
    while m != m2:
        p0, p1 = tri.point(t, m), tri.point(t, m + 1)
        try:
            tr = walk(s2, g, p1 - p0)
        except HitSingularity:
            return False
        g = rotate(s2, tr.end, tri.point(t, m + 2) - p1, ccw=False)
        m = (m + 1) % 3
    return germ_key(s2, g) == germ_key(s2, g2)


def translation_equivalent(s1: Surface, s2: Surface) -> EquivalenceResult:
    """Search for a translation isomorphism s1 -> s2 anchored at a singular point."""
    if not s1.singular_classes or not s2.singular_classes:
        raise SurfaceError("surfaces without singular or marked points have no anchor")
    if s1.area != s2.area:
        return EquivalenceResult(False, reason="areas differ")
    if s1.signature != s2.signature or len(s1.marked_classes) != len(s2.marked_classes):
        return EquivalenceResult(False, reason="strata differ")
    tri = _Triangulation(s1)
    anchor = s1.singular_classes[0]
    # a triangle with a corner at the anchor
    t0 = m0 = None
    for t in range(len(tri.tris)):
        for m in range(3):
            if s1.corner_class[tri.corner(t, m)] == anchor:
                t0, m0 = t, m
                break
        if t0 is not None:
            break
    d = tri.point(t0, m0 + 1) - tri.point(t0, m0)
    for ci in s2.singular_classes:
        if s2.cone_multiples[ci] != s1.cone_multiples[anchor]:
            continue
        if (ci in s2.marked_classes) != (anchor in s1.marked_classes):
            continue
        c = s2.vertex_classes[ci][0]
        g = vertex_germ(s2, c, d)
        for _ in range(s2.cone_multiples[ci]):
            zm = _try(tri, s2, t0, m0, g)
            if zm is not None:
                return EquivalenceResult(True, zm)
            g = rotate(s2, rotate(s2, g, -d), d)
    return EquivalenceResult(False, reason="no chart matching")
