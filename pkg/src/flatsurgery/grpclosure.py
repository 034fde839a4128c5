"""Closures of finitely generated subgroups of R and R^2.

A subgroup of R^2 generated by vectors with multi-quadratic coordinates
closes up to a discrete group, a line plus a discrete transverse part, or
the whole plane.  The closure is found through the annihilator
G* = {y : <y, h> in Z for every generator h}; by duality the closure is
{x : <x, y> in Z for every y in G*}.  Everything reduces to rational
linear algebra over the field basis, so no Euclidean-type reduction with
irrational ratios is ever run.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exactnum import (
    CNum,
    FieldSpec,
    Scalar,
    as_scalar,
    common_field,
    field_nullspace,
    field_rank,
    integer_kernel,
    qlin_rank,
    zmodule_hnf,
)

__all__ = [
    "ClosureClass",
    "Discrete1D",
    "Lattice2",
    "closure_1d",
    "closure_2d",
    "lattice_partner_search",
    "PartnerResult",
    "contains",
    "cnum_vector",
    "period_module",
]


def cnum_vector(z: CNum, spec: FieldSpec) -> tuple[Fraction, ...]:
    z = z.lift(spec)
    return z.re.coeffs + z.im.coeffs


def _from_vector(v: Sequence[Fraction], spec: FieldSpec) -> CNum:
    n = spec.degree
    return CNum(Scalar(spec, v[:n]), Scalar(spec, v[n:]))


def period_module(gens: Sequence[CNum]):
    """HNF of the Z-module generated by complex numbers (as rational vectors)."""
    spec = common_field(gens)
    return zmodule_hnf([cnum_vector(g, spec) for g in gens], dim=2 * spec.degree)


def _qgcd(values: Sequence[Fraction]) -> Fraction:
    den = 1
    for q in values:
        den = lcm(den, q.denominator)
    g = 0
    for q in values:
        g = gcd(g, int(q * den))
    return Fraction(g, den)


@dataclass(frozen=True)
class Discrete1D:
    generator: Scalar


def closure_1d(generators: Sequence) -> Discrete1D | str:
    """Discrete(generator) when the Q-rank is at most 1, otherwise 'dense'."""
    gens = [as_scalar(g) for g in generators]
    spec = common_field(gens)
    gens = [g.lift(spec) for g in gens if not g.is_zero()]
    if not gens:
        return Discrete1D(Scalar.zero(spec))
    if qlin_rank([g.coeffs for g in gens]) > 1:
        return "dense"
    base = gens[0]
    ratios = [(g / base).to_fraction() for g in gens]
    out = base * _qgcd(ratios)
    return Discrete1D(abs(out))


@dataclass(frozen=True)
class ClosureClass:
    """Closure V + L of a subgroup of R^2.

    ``component`` is 'point', 'line' or 'plane'; ``lattice`` is a basis of the
    discrete part (for a line, the transverse vector w with <annihilator, w> = 1).
    """

    component: str
    lattice: tuple[CNum, ...] = ()
    direction: CNum | None = None
    annihilator: CNum | None = None

    @property
    def name(self) -> str:
        if self.component == "plane":
            return "dense"
        if self.component == "line":
            return "line_lattice" if self.lattice else "line"
        return "lattice" if len(self.lattice) == 2 else "discrete"

    def is_discrete(self) -> bool:
        return self.component == "point"

    def contains(self, x: CNum) -> bool:
        if self.component == "plane":
            return True
        if self.component == "line":
            if self.annihilator is None:
                return self.direction.cross(x).is_zero()
            p = self.annihilator.dot(x)
            return p.is_rational() and p.to_fraction().denominator == 1
        if not self.lattice:
            return x.is_zero()
        rows = [[b.re, b.im] for b in self.lattice]
        from .exactnum import field_solve

        sol = field_solve(rows, [x.re, x.im])
        if sol is None:
            return False
        return all(c.is_rational() and c.to_fraction().denominator == 1 for c in sol)

    def to_json(self, area: Scalar | None = None) -> dict:
        out = {"class": self.name,
               "lattice": [v.to_json() for v in self.lattice]}
        if self.direction is not None:
            out["line"] = self.direction.to_json()
        if area is not None:
            out["area"] = area.to_json()
        return out


def contains(big: ClosureClass, small: ClosureClass) -> bool:
    """Whether closed subgroup ``small`` lies inside closed subgroup ``big``."""
    if big.component == "plane":
        return True
    if small.component == "plane":
        return False
    if small.component == "line":
        if big.component != "line" or not big.direction.cross(small.direction).is_zero():
            return False
    return all(big.contains(v) for v in small.lattice)


def _normalize_sign(y: CNum) -> CNum:
    s = y.re.sign() or y.im.sign()
    return -y if s < 0 else y


def closure_2d(generators: Sequence[CNum]) -> ClosureClass:
    gens = [g if isinstance(g, CNum) else CNum(g) for g in generators]
    spec = common_field(gens)
    gens = [g.lift(spec) for g in gens]
    hnf = zmodule_hnf([cnum_vector(g, spec) for g in gens], dim=2 * spec.degree)
    basis = [_from_vector(row, spec) for row in hnf.basis]
    r = len(basis)
    if r == 0:
        return ClosureClass("point")
    rdim = field_rank([[b.re, b.im] for b in basis])
    if rdim == 1:
        u = next(b for b in basis)
        lams = [b.dot(u) / u.norm2() for b in basis]
        res = closure_1d(lams)
        if res == "dense":
            return ClosureClass("line", (), direction=_normalize_sign(u))
        g = res.generator
        return ClosureClass("point", (u * g,) if not g.is_zero() else ())
    if r == 2:
        return ClosureClass("point", tuple(basis))
    # image plane P of y -> (<y, h_i>)_i, spanned by these two columns
    col_x = [b.re for b in basis]
    col_y = [b.im for b in basis]
    # P = {v : n . v = 0 for n in the field-orthogonal complement}
    normals = field_nullspace([col_x, col_y], r)
    # rational v in P: expand each normal equation over the field basis
    eqs = []
    for n in normals:
        for k in range(spec.degree):
            eqs.append([n[i].coeffs[k] for i in range(r)])
    den = 1
    for row in eqs:
        for x in row:
            den = lcm(den, x.denominator)
    int_eqs = [[int(x * den) for x in row] for row in eqs if any(row)]
    kernel = integer_kernel(int_eqs, r) if int_eqs else [[int(i == j) for j in range(r)] for i in range(r)]
    s = len(kernel)
    if s == 0:
        return ClosureClass("plane")
    # pull back through y -> (<y, h_i>) using two R-independent generators
    i0 = 0
    i1 = next(i for i in range(1, r) if not basis[i0].cross(basis[i]).is_zero())
    ann = []
    for q in kernel:
        a, b = basis[i0], basis[i1]
        det = a.re * b.im - a.im * b.re
        # solve y.re*a.re + y.im*a.im = q0, y.re*b.re + y.im*b.im = q1
        q0, q1 = Fraction(q[i0]), Fraction(q[i1])
        yr = (b.im * q0 - a.im * q1) / det
        yi = (a.re * q1 - b.re * q0) / det
        ann.append(CNum(yr, yi))
    if s == 1:
        y = _normalize_sign(ann[0])
        direction = _normalize_sign(CNum(-y.im, y.re))
        w = y / y.norm2()
        return ClosureClass("line", (w,), direction=direction, annihilator=y)
    raise AssertionError("annihilator of rank 2 with more than two generators")


@dataclass(frozen=True)
class Lattice2:
    a: CNum
    b: CNum

    def __post_init__(self):
        object.__setattr__(self, "a", self.a if isinstance(self.a, CNum) else CNum(self.a))
        object.__setattr__(self, "b", self.b if isinstance(self.b, CNum) else CNum(self.b))
        if self.a.cross(self.b).is_zero():
            raise ValueError("lattice basis vectors are R-dependent")

    @property
    def gens(self) -> tuple[CNum, CNum]:
        return (self.a, self.b)

    def covolume(self) -> Scalar:
        return abs(self.a.cross(self.b))


@dataclass(frozen=True)
class PartnerResult:
    all_discrete: bool
    partner: int | None = None
    dense_witness: int | None = None
    closures: dict = dc_field(default_factory=dict, compare=False)


def lattice_partner_search(lattices: Sequence[Lattice2]) -> PartnerResult:
    """Least j >= 2 with L1 + Lj non-discrete, and least k with L1 + Lj + Lk dense (1-based)."""
    if len(lattices) < 2:
        raise ValueError("need at least two lattices")
    for L in lattices:
        if not isinstance(L, Lattice2):
            raise ValueError(f"malformed lattice {L!r}")
    full = closure_2d([v for L in lattices for v in L.gens])
    if full.is_discrete():
        return PartnerResult(True, closures={"full": full})
    first = list(lattices[0].gens)
    j = None
    for idx in range(1, len(lattices)):
        c = closure_2d(first + list(lattices[idx].gens))
        if not c.is_discrete():
            j = idx + 1
            break
    assert j is not None, "sum non-discrete but no pairwise partner"
    k = None
    if full.component == "plane":
        pair = first + list(lattices[j - 1].gens)
        for idx in range(1, len(lattices)):
            c = closure_2d(pair + list(lattices[idx].gens))
            if c.component == "plane":
                k = idx + 1
                break
        assert k is not None, "sum dense but no dense triple"
    return PartnerResult(False, j, k, closures={"full": full})
