"""Homology bases of a polygon surface from tree-cotree decompositions.

Edges are grouped into gluing pairs; a pair is named by its smaller edge id
and oriented like that edge.  Cycles are integer combinations of pairs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .exactnum import CNum, Scalar, _rref, qlin_solve, zmodule_hnf
from .grpclosure import ClosureClass, closure_2d, cnum_vector
from .surface import Surface, SurfaceError

__all__ = ["HomologyBasis", "homology_and_periods", "pair_list", "face_boundary",
           "cycle_period", "intersection_number", "per_closure_class"]


def pair_list(s: Surface) -> list[int]:
    return sorted(e for e in s.glue if e < s.glue[e])


def _pair_of(s: Surface, e: int) -> tuple[int, int]:
    """(pair, sign) for traversing edge e in its own direction."""
    f = s.glue[e]
    return (e, 1) if e < f else (f, -1)


def pair_ends(s: Surface, p: int) -> tuple[int, int]:
    return s.corner_class[p], s.corner_class[s.next_edge(p)]


def face_boundary(s: Surface, pid: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for e in s.edges[pid]:
        p, sg = _pair_of(s, e)
        out[p] = out.get(p, 0) + sg
    return {p: c for p, c in out.items() if c}


def cycle_period(s: Surface, cycle: dict[int, int]) -> CNum:
    total = CNum(Scalar.zero(s.field), Scalar.zero(s.field))
    for p, c in cycle.items():
        total = total + s.edge_vector(p) * c
    return total


def _as_chain(seq) -> dict[int, int]:
    out: dict[int, int] = {}
    for p, sg in seq:
        out[p] = out.get(p, 0) + sg
    return {p: c for p, c in out.items() if c}


class _Tree:
    def __init__(self, s: Surface, node_of: dict[int, object], root):
        self.parent = {root: None}
        self.depth = {root: 0}
        self.tree_pairs = set()
        adj: dict[object, list] = {}
        for p in pair_list(s):
            u, v = (node_of[x] for x in pair_ends(s, p))
            adj.setdefault(u, []).append((p, v, 1))
            adj.setdefault(v, []).append((p, u, -1))
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for p, y, sg in adj.get(x, []):
                if y not in self.parent:
                    self.parent[y] = (x, p, sg)  # parent --p(sg)--> y
                    self.depth[y] = self.depth[x] + 1
                    self.tree_pairs.add(p)
                    queue.append(y)

    def path(self, u, v) -> list[tuple[int, int]]:
        """Tree path from u to v as (pair, sign) steps."""
        up, down = [], []
        while self.depth[u] > self.depth[v]:
            x, p, sg = self.parent[u]
            up.append((p, -sg))
            u = x
        while self.depth[v] > self.depth[u]:
            x, p, sg = self.parent[v]
            down.append((p, sg))
            v = x
        while u != v:
            x, p, sg = self.parent[u]
            up.append((p, -sg))
            u = x
            x, p, sg = self.parent[v]
            down.append((p, sg))
            v = x
        return up + down[::-1]


def _leftovers(s: Surface, tree_pairs: set[int]) -> list[int]:
    polys = list(s.verts)
    adj: dict[str, list] = {p: [] for p in polys}
    for p in pair_list(s):
        if p in tree_pairs:
            continue
        a = s.edge_loc[p][0]
        b = s.edge_loc[s.glue[p]][0]
        adj[a].append((p, b))
        adj[b].append((p, a))
    seen = {polys[0]}
    cotree = set()
    queue = deque([polys[0]])
    while queue:
        x = queue.popleft()
        for p, y in adj[x]:
            if y not in seen:
                seen.add(y)
                cotree.add(p)
                queue.append(y)
    return [p for p in pair_list(s) if p not in tree_pairs and p not in cotree]


@dataclass
class HomologyBasis:
    surface: Surface
    absolute: list[dict[int, int]]
    absolute_paths: list[list[tuple[int, int]]]
    relative: list[dict[int, int]]
    abs_periods: list[CNum]
    rel_periods: list[CNum]

    @property
    def genus(self) -> int:
        return len(self.absolute) // 2

    def intersection_matrix(self) -> list[list[int]]:
        n = len(self.absolute)
        return [[intersection_number(self.surface, self.absolute[i], self.absolute_paths[j]) if i != j else 0
                 for j in range(n)] for i in range(n)]

    def period_module(self):
        spec = self.surface.field
        return zmodule_hnf([cnum_vector(p, spec) for p in self.abs_periods], dim=2 * spec.degree)

    def relative_coordinates(self, chain: dict[int, int]) -> list[Fraction]:
        """Coordinates of a relative cycle in the relative basis (modulo face boundaries)."""
        pairs = pair_list(self.surface)
        idx = {p: i for i, p in enumerate(pairs)}

        def vec(c):
            v = [Fraction(0)] * len(pairs)
            for p, x in c.items():
                v[idx[p]] += x
            return v

        gens = [vec(c) for c in self.relative]
        faces = [vec(face_boundary(self.surface, pid)) for pid in self.surface.verts]
        sol = qlin_solve(gens + faces, vec(chain))
        if sol is None:
            raise SurfaceError("chain is not a relative cycle")
        return sol[:len(gens)]

    def bilinear_area(self) -> Scalar:
        """Area from absolute periods and the intersection form."""
        q = self.intersection_matrix()
        n = len(q)
        aug = [[Fraction(q[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        red, piv = _rref(aug)
        if len(piv) < n or any(p >= n for p in piv):
            raise SurfaceError("degenerate intersection form")
        inv = [row[n:] for row in red[:n]]
        P = self.abs_periods
        total = Scalar.zero(self.surface.field)
        for i in range(n):
            for j in range(n):
                if inv[i][j]:
                    total = total + P[i].cross(P[j]) * inv[i][j]
        return total * Fraction(-1, 2)


def intersection_number(s: Surface, x: dict[int, int], ypath: list[tuple[int, int]]) -> int:
    """Algebraic intersection of cycle x with closed edge path y, via the left push-off of y."""
    germs = _vertex_germs(s)
    total = 0
    m = len(ypath)
    for i in range(m):
        pin, sin = ypath[i]
        pout, sout = ypath[(i + 1) % m]
        g_in = (pin, "end" if sin > 0 else "start")
        g_out = (pout, "start" if sout > 0 else "end")
        cls, pos_in = germs["pos"][g_in]
        cls2, pos_out = germs["pos"][g_out]
        assert cls == cls2, "path is not connected"
        ring = germs["ring"][cls]
        k = len(ring)
        j = (pos_out + 1) % k
        while j != pos_in:
            p, end = ring[j]
            c = x.get(p, 0)
            if c:
                total += c if end == "end" else -c
            j = (j + 1) % k
    return total


def _vertex_germs(s: Surface):
    cache = s.__dict__.get("_germ_rings")
    if cache is not None:
        return cache
    ring_of, pos = {}, {}
    for ci, cls in enumerate(s.vertex_classes):
        ring = []
        for c in cls:
            p, sg = _pair_of(s, c)
            g = (p, "start" if sg > 0 else "end")
            pos[g] = (ci, len(ring))
            ring.append(g)
        ring_of[ci] = ring
    out = {"ring": ring_of, "pos": pos}
    s.__dict__["_germ_rings"] = out
    return out


def homology_and_periods(s: Surface) -> HomologyBasis:
    tree = _Tree(s, {c: c for c in range(len(s.vertex_classes))}, 0)
    absolute, paths = [], []
    for p in _leftovers(s, tree.tree_pairs):
        u, v = pair_ends(s, p)
        seq = [(p, 1)] + tree.path(v, u)
        paths.append(seq)
        absolute.append(_as_chain(seq))
    if len(absolute) != 2 * s.genus:
        raise SurfaceError("absolute basis has wrong rank")
    Z = set(s.singular_classes)
    if Z:
        node_of = {c: ("Z" if c in Z else c) for c in range(len(s.vertex_classes))}
        rtree = _Tree(s, node_of, "Z")
        relative = []
        for p in _leftovers(s, rtree.tree_pairs):
            u, v = (node_of[x] for x in pair_ends(s, p))
            relative.append(_as_chain([(p, 1)] + rtree.path(v, u)))
        expected = 2 * s.genus + len(Z) - 1
        if len(relative) != expected:
            raise SurfaceError("relative basis has wrong rank")
    else:
        relative = [dict(c) for c in absolute]
    return HomologyBasis(s, absolute, paths, relative,
                         [cycle_period(s, c) for c in absolute],
                         [cycle_period(s, c) for c in relative])


def per_closure_class(s: Surface) -> tuple[ClosureClass, Scalar, bool]:
    """Closure of the absolute periods, the area, and whether the periods meet every component.

    For a line-plus-lattice closure the periods meet every translate of the line
    exactly when their pairings with the annihilator generate the integers.
    """
    hb = homology_and_periods(s)
    cl = closure_2d(hb.abs_periods)
    ok = True
    if cl.component == "line" and cl.annihilator is not None:
        vals = [cl.annihilator.dot(p) for p in hb.abs_periods]
        g = 0
        for v in vals:
            if not v.is_rational() or v.to_fraction().denominator != 1:
                ok = False
                break
            g = gcd(g, int(v.to_fraction()))
        ok = ok and g == 1
    return cl, s.area, ok
