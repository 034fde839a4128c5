"""Exact arithmetic in real multi-quadratic fields Q(sqrt(d_1), ..., sqrt(d_m)).

Elements are stored as rational coordinate vectors on the basis of
square roots of subset products of the radicands.  Signs are decided by
certified rational interval evaluation, refined until the interval
excludes zero.  The module also holds the rational / integral linear
algebra (rank, solving, Hermite normal form, integer kernels) used by the
rest of the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "FieldMismatch",
    "FieldSpec",
    "Scalar",
    "CNum",
    "QQ",
    "field",
    "as_scalar",
    "qlin_rank",
    "qlin_solve",
    "field_rank",
    "HNF",
    "zmodule_hnf",
    "integer_kernel",
    "qdim_reciprocals",
]


class FieldMismatch(ValueError):
    pass


def _squarefree(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Radicands d_1 < ... < d_m, squarefree and pairwise coprime."""

    radicands: tuple[int, ...] = ()

    def __post_init__(self):
        r = tuple(int(d) for d in self.radicands)
        object.__setattr__(self, "radicands", r)
        if list(r) != sorted(set(r)):
            raise ValueError(f"radicands must be strictly increasing: {r}")
        for d in r:
            if not _squarefree(d):
                raise ValueError(f"radicand {d} is not a squarefree integer >= 2")
        for i, a in enumerate(r):
            for b in r[i + 1:]:
                if gcd(a, b) != 1:
                    raise ValueError(f"radicands {a} and {b} are not coprime")

    @property
    def degree(self) -> int:
        return 1 << len(self.radicands)

    def basis_radicand(self, mask: int) -> int:
        """The integer whose square root is basis element ``mask``."""
        out = 1
        for i, d in enumerate(self.radicands):
            if mask >> i & 1:
                out *= d
        return out

    def basis_labels(self) -> list[str]:
        labels = []
        for mask in range(self.degree):
            n = self.basis_radicand(mask)
            labels.append("1" if n == 1 else f"sqrt({n})")
        return labels

    def contains(self, other: "FieldSpec") -> bool:
        return set(other.radicands) <= set(self.radicands)

    def join(self, other: "FieldSpec") -> "FieldSpec":
        if self.contains(other):
            return self
        if other.contains(self):
            return other
        return FieldSpec(tuple(sorted(set(self.radicands) | set(other.radicands))))

    def sqrt(self, d: int) -> "Scalar":
        """sqrt(d) for a radicand d (or a product of radicands)."""
        for mask in range(self.degree):
            if self.basis_radicand(mask) == d:
                return Scalar.basis(self, mask)
        raise FieldMismatch(f"sqrt({d}) is not a basis element of {self}")

    def __repr__(self):
        if not self.radicands:
            return "QQ"
        return "Q(" + ",".join(f"sqrt({d})" for d in self.radicands) + ")"


QQ = FieldSpec(())


def field(*radicands: int) -> FieldSpec:
    return FieldSpec(tuple(sorted(radicands)))


@lru_cache(maxsize=None)
def _mul_table(spec: FieldSpec):
    # e_S * e_T = c * e_{S xor T} with c = prod of d_i over S & T
    n = spec.degree
    table = [[None] * n for _ in range(n)]
    for s in range(n):
        for t in range(n):
            table[s][t] = (s ^ t, spec.basis_radicand(s & t))
    return table


@lru_cache(maxsize=None)
def _embedding(small: FieldSpec, big: FieldSpec) -> tuple[int, ...]:
    pos = [big.radicands.index(d) for d in small.radicands]
    out = []
    for mask in range(small.degree):
        m = 0
        for i, p in enumerate(pos):
            if mask >> i & 1:
                m |= 1 << p
        out.append(m)
    return tuple(out)


_ZERO = Fraction(0)

# bits of the first interval evaluation; mirrors a double-precision attempt
_START_BITS = 53


def _sqrt_bounds(n: int, bits: int) -> tuple[Fraction, Fraction]:
    if n == 1:
        return Fraction(1), Fraction(1)
    scale = 1 << bits
    r = isqrt(n * scale * scale)
    lo = Fraction(r, scale)
    if r * r == n * scale * scale:
        return lo, lo
    return lo, Fraction(r + 1, scale)


class Scalar:
    """Element of a real multi-quadratic field, immutable."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, spec: FieldSpec, coeffs: Iterable):
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != spec.degree:
            raise ValueError(f"expected {spec.degree} coefficients, got {len(c)}")
        self.field = spec
        self.coeffs = c
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def rational(cls, q, spec: FieldSpec = QQ) -> "Scalar":
        c = [_ZERO] * spec.degree
        c[0] = Fraction(q)
        return cls(spec, c)

    @classmethod
    def basis(cls, spec: FieldSpec, mask: int) -> "Scalar":
        c = [_ZERO] * spec.degree
        c[mask] = Fraction(1)
        return cls(spec, c)

    @classmethod
    def zero(cls, spec: FieldSpec = QQ) -> "Scalar":
        return cls(spec, [_ZERO] * spec.degree)

    def lift(self, spec: FieldSpec) -> "Scalar":
        if spec == self.field:
            return self
        if not spec.contains(self.field):
            raise FieldMismatch(f"cannot embed {self.field} into {spec}")
        emb = _embedding(self.field, spec)
        c = [_ZERO] * spec.degree
        for i, x in enumerate(self.coeffs):
            c[emb[i]] = x
        return Scalar(spec, c)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field == self.field:
                return self, other
            if self.field.contains(other.field):
                return self, other.lift(self.field)
            if other.field.contains(self.field):
                return self.lift(other.field), other
            # a rational-valued element is harmless in any field
            if other.is_rational():
                return self, Scalar.rational(other.coeffs[0], self.field)
            if self.is_rational():
                return Scalar.rational(self.coeffs[0], other.field), other
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if isinstance(other, (int, Rational)):
            return self, Scalar.rational(other, self.field)
        return None, None

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Scalar(a.field, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Scalar(a.field, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b - a

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        n = a.field.degree
        if n == 1:
            return Scalar(a.field, [a.coeffs[0] * b.coeffs[0]])
        if b.is_rational():
            q = b.coeffs[0]
            return Scalar(a.field, [x * q for x in a.coeffs])
        if a.is_rational():
            q = a.coeffs[0]
            return Scalar(a.field, [x * q for x in b.coeffs])
        table = _mul_table(a.field)
        out = [_ZERO] * n
        for s, x in enumerate(a.coeffs):
            if not x:
                continue
            row = table[s]
            for t, y in enumerate(b.coeffs):
                if y:
                    m, c = row[t]
                    out[m] += x * y * c
        return Scalar(a.field, out)

    __rmul__ = __mul__

    def conjugate(self, i: int) -> "Scalar":
        """Galois conjugate flipping the sign of sqrt(d_i)."""
        return Scalar(self.field, [-x if mask >> i & 1 else x
                                   for mask, x in enumerate(self.coeffs)])

    def inv(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Scalar.rational(1 / self.coeffs[0], self.field)
        num = Scalar.rational(1, self.field)
        y = self
        for i in range(len(self.field.radicands)):
            c = y.conjugate(i)
            num = num * c
            y = y * c
        return num * (1 / y.coeffs[0])

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inv()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * a.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        out = Scalar.rational(1, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ordering -------------------------------------------------------
    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        lo = hi = _ZERO
        for mask, c in enumerate(self.coeffs):
            if not c:
                continue
            a, b = _sqrt_bounds(self.field.basis_radicand(mask), bits)
            if c > 0:
                lo += c * a
                hi += c * b
            else:
                lo += c * b
                hi += c * a
        return lo, hi

    def sign(self) -> int:
        if self.is_rational():
            q = self.coeffs[0]
            return (q > 0) - (q < 0)
        # nonzero, so refinement terminates
        bits = _START_BITS
        while True:
            lo, hi = self.interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def _cmp(self, other) -> int:
        a, b = self._coerce(other)
        if a is None:
            raise TypeError(f"cannot compare Scalar with {type(other).__name__}")
        return (a - b).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (Scalar, int, Rational)):
            try:
                a, b = self._coerce(other)
            except FieldMismatch:
                return False
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            # hash of the value, independent of the ambient field
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                items = tuple((self.field.basis_radicand(m), c)
                              for m, c in enumerate(self.coeffs) if c)
                self._hash = hash(items)
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        lo, hi = self.interval(64)
        return float((lo + hi) / 2)

    def floor(self) -> int:
        if self.is_rational():
            q = self.coeffs[0]
            return q.numerator // q.denominator
        bits = _START_BITS
        while True:
            lo, hi = self.interval(bits)
            a = lo.numerator // lo.denominator
            b = hi.numerator // hi.denominator
            if a == b:
                return a
            bits *= 2

    def rational_vector(self) -> tuple[Fraction, ...]:
        return self.coeffs

    # -- text -----------------------------------------------------------
    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        terms = []
        for mask, c in enumerate(self.coeffs):
            if not c:
                continue
            n = self.field.basis_radicand(mask)
            if n == 1:
                terms.append(str(c))
            elif c == 1:
                terms.append(f"sqrt({n})")
            elif c == -1:
                terms.append(f"-sqrt({n})")
            else:
                terms.append(f"{c}*sqrt({n})")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"field": list(self.field.radicands),
                "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> "Scalar":
        if isinstance(data, (int, str)):
            return cls.rational(Fraction(data))
        spec = FieldSpec(tuple(data["field"]))
        return cls(spec, [Fraction(c) for c in data["coeffs"]])


def as_scalar(x, spec: FieldSpec | None = None) -> Scalar:
    if isinstance(x, Scalar):
        return x if spec is None or x.field == spec else x.lift(spec)
    return Scalar.rational(Fraction(x), spec or QQ)


class CNum:
    """Complex number re + i*im with Scalar parts (a vector in R^2)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        re = as_scalar(re)
        im = as_scalar(im)
        if re.field != im.field:
            spec = re.field.join(im.field)
            re, im = re.lift(spec), im.lift(spec)
        self.re = re
        self.im = im

    @property
    def field(self) -> FieldSpec:
        return self.re.field

    def lift(self, spec: FieldSpec) -> "CNum":
        return CNum(self.re.lift(spec), self.im.lift(spec))

    def __add__(self, other):
        if not isinstance(other, CNum):
            other = CNum(other)
        return CNum(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, CNum):
            other = CNum(other)
        return CNum(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return CNum(other) - self

    def __neg__(self):
        return CNum(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, CNum):
            return CNum(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)
        if isinstance(other, (Scalar, int, Rational)):
            return CNum(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Scalar, int, Rational)):
            return CNum(self.re / other, self.im / other)
        if isinstance(other, CNum):
            return (self * other.conj()) / other.norm2()
        return NotImplemented

    def conj(self) -> "CNum":
        return CNum(self.re, -self.im)

    def norm2(self) -> Scalar:
        return self.re * self.re + self.im * self.im

    def dot(self, other: "CNum") -> Scalar:
        return self.re * other.re + self.im * other.im

    def cross(self, other: "CNum") -> Scalar:
        """Im(conj(self) * other): positive when other is counterclockwise of self."""
        return self.re * other.im - self.im * other.re

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def apply(self, a, b, c, d) -> "CNum":
        """Image under the real matrix [[a, b], [c, d]]."""
        return CNum(a * self.re + b * self.im, c * self.re + d * self.im)

    def __eq__(self, other):
        if isinstance(other, CNum):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (Scalar, int, Rational)):
            return self.im.is_zero() and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"CNum({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re}, {self.im})"

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, data) -> "CNum":
        if isinstance(data, (list, tuple)):
            return cls(Scalar.from_json(data[0]), Scalar.from_json(data[1]))
        return cls(Scalar.from_json(data["re"]), Scalar.from_json(data["im"]))


def common_field(values: Iterable) -> FieldSpec:
    spec = QQ
    for v in values:
        if isinstance(v, (Scalar, CNum)):
            spec = spec.join(v.field)
    return spec


# ---------------------------------------------------------------------------
# linear algebra over Q and over a field of Scalars


def _is_zero(x) -> bool:
    return x == 0 if not isinstance(x, Scalar) else x.is_zero()


def _rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over any exact field (Fraction or Scalar)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if not _is_zero(rows[i][c])), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _check_dims(vectors: Sequence[Sequence]) -> int | None:
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop() if dims else None


def qlin_rank(vectors: Sequence[Sequence]) -> int:
    """Dimension of the Q-span of rational vectors."""
    if _check_dims(vectors) is None:
        return 0
    rows, _ = _rref([[Fraction(x) for x in v] for v in vectors])
    return len(rows)


def qlin_solve(vectors: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Rational coefficients c with sum c_i v_i = target, or None if target is outside the span."""
    dim = _check_dims(list(vectors) + [target])
    k = len(vectors)
    if k == 0:
        return [] if all(Fraction(x) == 0 for x in target) else None
    # columns are the vectors; augmented with target
    aug = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(target[i])]
           for i in range(dim)]
    rows, pivots = _rref(aug)
    if k in pivots:
        return None
    sol = [Fraction(0)] * k
    for row, c in zip(rows, pivots):
        sol[c] = row[k]
    return sol


def field_rank(vectors: Sequence[Sequence[Scalar]]) -> int:
    """Rank over R of vectors with entries in a multi-quadratic field."""
    if _check_dims(vectors) is None:
        return 0
    spec = common_field(x for v in vectors for x in v)
    rows, _ = _rref([[as_scalar(x, spec) for x in v] for v in vectors])
    return len(rows)


def field_solve(vectors: Sequence[Sequence[Scalar]], target: Sequence[Scalar]):
    """Coefficients in the field expressing target in the span, or None."""
    dim = _check_dims(list(vectors) + [target])
    k = len(vectors)
    spec = common_field([x for v in vectors for x in v] + list(target))
    aug = [[as_scalar(vectors[j][i], spec) for j in range(k)] + [as_scalar(target[i], spec)]
           for i in range(dim)]
    rows, pivots = _rref(aug)
    if k in pivots:
        return None
    sol = [Scalar.zero(spec) for _ in range(k)]
    for row, c in zip(rows, pivots):
        sol[c] = row[k]
    return sol


def field_nullspace(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of {x : rows . x = 0} over the field."""
    spec = common_field(x for r in rows for x in r)
    red, pivots = _rref([[as_scalar(x, spec) for x in r] for r in rows]) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Scalar.zero(spec) for _ in range(ncols)]
        v[f] = Scalar.rational(1, spec)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# integral linear algebra


def _int_row_hnf(mat: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form: positive pivots, entries above a pivot reduced into [0, pivot)."""
    a = [list(r) for r in mat if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        # gcd-combine column c over rows r..end
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    return [row for row in a[:r]]


@dataclass(frozen=True)
class HNF:
    """Canonical basis of a finitely generated Z-module of rational vectors."""

    basis: tuple[tuple[Fraction, ...], ...]
    dim: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> list[int] | None:
        """Integer coordinates of v in the basis, or None if v is not in the module."""
        v = [Fraction(x) for x in v]
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        coords = []
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x != 0)
            q = v[c] / row[c]
            if q.denominator != 1:
                return None
            coords.append(int(q))
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return coords if not any(v) else None

    def index_in(self, other: "HNF") -> int | None:
        """[other : self] when self is a full-rank submodule of other."""
        if self.rank != other.rank:
            return None
        from sympy import Matrix

        rows = []
        for b in self.basis:
            c = other.coordinates(b)
            if c is None:
                return None
            rows.append(c)
        return abs(int(Matrix(rows).det())) if rows else 1


def zmodule_hnf(generators: Iterable[Sequence], dim: int | None = None) -> HNF:
    gens = [[Fraction(x) for x in g] for g in generators]
    d = _check_dims(gens)
    if d is None:
        d = dim or 0
    den = 1
    for g in gens:
        for x in g:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in g] for g in gens]
    h = _int_row_hnf(ints)
    basis = tuple(tuple(Fraction(x, den) for x in row) for row in h)
    return HNF(basis, d)


def integer_kernel(mat: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Z-basis of {x in Z^ncols : mat . x = 0}."""
    # unimodular row reduction of [mat^T | I]; rows whose left part vanishes span the kernel
    rows = [[int(mat[i][j]) for i in range(len(mat))] + [1 if k == j else 0 for k in range(ncols)]
            for j in range(ncols)]
    m = len(mat)
    r = 0
    for c in range(m):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[p] = rows[p], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c] != 0:
            r += 1
    kernel = [row[m:] for row in rows[r:]]
    # canonical representative of the kernel lattice
    return _int_row_hnf(kernel)


def qdim_reciprocals(w0, w1, w2) -> int:
    """Q-dimension of the Q-span of 1/w0, 1/w1, 1/w2 (all positive)."""
    ws = [as_scalar(w) for w in (w0, w1, w2)]
    for w in ws:
        if w.sign() <= 0:
            raise ValueError(f"nonpositive input {w}")
    spec = common_field(ws)
    return qlin_rank([(1 / w.lift(spec)).coeffs for w in ws])
