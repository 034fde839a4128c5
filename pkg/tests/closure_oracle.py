"""Floating-point brute-force classifier for closures of subgroups of R^2.

Integer combinations with coefficients in [-B, B] are enumerated by meeting in
the middle.  Combinations shorter than ``tol`` are integer relations; nonzero
ones shorter than ``reach`` witness accumulation, and their directions decide
between a line and the whole plane.  A discrete verdict needs enough relations
to bring the rank of the group down to 2.
"""
import itertools

import numpy as np


def _box(vecs, bound):
    if not vecs:
        return np.zeros((1, 0), dtype=int), np.zeros((1, 2))
    rng = np.arange(-bound, bound + 1)
    grids = np.meshgrid(*([rng] * len(vecs)), indexing="ij")
    coeffs = np.stack([g.ravel() for g in grids], axis=1)
    return coeffs, coeffs @ np.asarray(vecs, dtype=float)


def short_combinations(vecs, bound=50, reach=0.05):
    """(coefficients, vectors) of all combinations shorter than reach, the zero one excluded."""
    half = len(vecs) // 2
    ca, A = _box(vecs[:half], bound)
    cb, B = _box(vecs[half:], bound)
    B = -B
    order = np.argsort(B[:, 0])
    B, cb = B[order], cb[order]
    lo = np.searchsorted(B[:, 0], A[:, 0] - reach, side="left")
    hi = np.searchsorted(B[:, 0], A[:, 0] + reach, side="right")
    counts = hi - lo
    n = len(vecs)
    if counts.sum() == 0:
        return np.zeros((0, n), dtype=int), np.zeros((0, 2))
    ia = np.repeat(np.arange(len(A)), counts)
    ib = np.repeat(lo, counts) + np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    diff = A[ia] - B[ib]
    coeffs = np.concatenate([ca[ia], cb[ib]], axis=1)
    keep = (np.hypot(diff[:, 0], diff[:, 1]) < reach) & np.any(coeffs != 0, axis=1)
    return coeffs[keep], diff[keep]


def _primitive_classes(coeffs):
    """Number of coefficient vectors that are not integer multiples of one another."""
    seen = set()
    for c in coeffs:
        g = np.gcd.reduce(np.abs(c))
        p = tuple(int(x) for x in c // g)
        if p[next(i for i, x in enumerate(p) if x)] < 0:
            p = tuple(-x for x in p)
        seen.add(p)
    return len(seen)


def classify(vecs, bound=50, reach=0.05, tol=1e-6, spread=1e-2, witnesses=2):
    """'lattice', 'line_lattice', 'dense', 'line', 'discrete' or 'undecided'."""
    vecs = [tuple(map(float, v)) for v in vecs]
    spans_plane = any(abs(u[0] * v[1] - u[1] * v[0]) > tol for u, v in itertools.combinations(vecs, 2))
    coeffs, small = short_combinations(vecs, bound, reach)
    norms = np.hypot(small[:, 0], small[:, 1])
    relations = coeffs[norms < tol]
    rank = len(vecs) - (np.linalg.matrix_rank(relations) if len(relations) else 0)
    small, coeffs = small[norms >= tol], coeffs[norms >= tol]
    if len(small) == 0:
        if rank > (2 if spans_plane else 1):
            return "undecided"
        return "lattice" if spans_plane else "discrete"
    unit = small / np.hypot(small[:, 0], small[:, 1])[:, None]
    sines = np.abs(unit[:, 0] * unit[0, 1] - unit[:, 1] * unit[0, 0])
    worst = sines.max()
    if worst < tol:
        if _primitive_classes(coeffs) < witnesses:
            return "undecided"
        return "line_lattice" if spans_plane else "line"
    if worst > spread and spans_plane:
        return "dense"
    return "undecided"
