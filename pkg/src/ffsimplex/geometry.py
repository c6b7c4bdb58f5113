"""Points of GF(q)^d, the diagonal quadratic form, spheres and orthogonal maps.

A point is a tuple of field-element indices.  Bulk data is kept as integer
arrays of shape (N, d).  The canonical index of a point x is
sum(x[i] * q**i), which is also its vertex id in every graph built on
GF(q)^d.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .config import ENUM_CAP
from .ffield import Field, field_of_order


class Space:
    """The vector space GF(q)^d with its points listed in canonical order."""

    def __init__(self, field: Field, d: int, cap: int = ENUM_CAP):
        if d < 1:
            raise ValueError(f'dimension must be >= 1, got {d}')
        if field.q ** d > cap:
            raise ValueError(f'q^d = {field.q}^{d} exceeds the enumeration cap {cap}')
        self.field = field
        self.q = field.q
        self.d = d
        self.n = field.q ** d

    def __repr__(self):
        return f'Space({self.field!r}, d={self.d})'

    @functools.cached_property
    def weights(self):
        return self.q ** np.arange(self.d, dtype=np.int64)

    @functools.cached_property
    def points(self):
        idx = np.arange(self.n, dtype=np.int64)
        return (idx[:, None] // self.weights) % self.q

    @functools.cached_property
    def norms(self):
        return self.field.vnorm(self.points)

    def encode(self, coords):
        return np.asarray(coords, dtype=np.int64) @ self.weights

    def decode(self, idx):
        return (np.asarray(idx, dtype=np.int64)[..., None] // self.weights) % self.q

    def sub(self, x, y):
        """Canonical index of x - y for index arrays x, y (broadcasting)."""
        return self.encode(self.field.vsub(self.points[x], self.points[y]))

    def diff_norms(self, x, y):
        """||x - y|| for index arrays x, y (broadcasting)."""
        return self.field.vnorm(self.field.vsub(self.points[x], self.points[y]))

    @property
    def group_shape(self):
        """Shape of (Z_p)^(e*d) whose C-order flattening matches canonical indices."""
        return (self.field.p,) * (self.field.e * self.d)

    def correlate(self, indicator, kernel):
        """h(v) = sum_s indicator(v + s) * kernel(s) over the additive group, by FFT.

        Both arguments are real arrays of length n indexed canonically; for a
        symmetric kernel this is the convolution of the two.
        """
        shape = self.group_shape
        fa = np.fft.fftn(np.asarray(indicator, dtype=float).reshape(shape))
        fb = np.fft.fftn(np.asarray(kernel, dtype=float).reshape(shape))
        return np.fft.ifftn(fa * np.conj(fb)).real.reshape(-1)


@functools.lru_cache(maxsize=64)
def space(q: int, d: int) -> Space:
    return Space(field_of_order(q), d)


def norm(f: Field, x) -> int:
    """x_1^2 + ... + x_d^2 in GF(q)."""
    total = 0
    for c in x:
        total = f.add(total, f.mul(c, c))
    return total


def dot(f: Field, x, y) -> int:
    total = 0
    for a, b in zip(x, y):
        total = f.add(total, f.mul(a, b))
    return total


@dataclass(frozen=True)
class Sphere:
    """All points x of GF(q)^d with ||x|| = radius, sorted by canonical index."""

    q: int
    d: int
    radius: int
    points: np.ndarray

    @property
    def size(self) -> int:
        return len(self.points)

    def indices(self):
        return space(self.q, self.d).encode(self.points) if self.size else np.zeros(0, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _half_space(q, h):
    f = field_of_order(q)
    idx = np.arange(q ** h, dtype=np.int64)
    pts = (idx[:, None] // q ** np.arange(h, dtype=np.int64)) % q
    return pts, f.vnorm(pts) if h else np.zeros(1, dtype=np.int64)


def sphere(q: int, d: int, t: int, cap: int = ENUM_CAP) -> Sphere:
    """Enumerate {x in GF(q)^d : ||x|| = t} by meet-in-the-middle.

    The coordinates are split into a low half and a high half; every pair of
    half-vectors whose norms add to t is emitted.
    """
    f = field_of_order(q)
    f._check(t)
    if d < 1:
        raise ValueError(f'dimension must be >= 1, got {d}')
    if q ** d > cap:
        raise ValueError(f'q^d = {q}^{d} exceeds the enumeration cap {cap}; '
                         'use sphere_size_formula instead')
    lo = d // 2
    hi = d - lo
    pts_lo, norms_lo = _half_space(q, lo)
    pts_hi, norms_hi = _half_space(q, hi)
    blocks = []
    for u in range(q):
        a = np.flatnonzero(norms_lo == u)
        b = np.flatnonzero(norms_hi == f.sub(t, u))
        if len(a) and len(b):
            aa, bb = np.meshgrid(a, b, indexing='ij')
            blocks.append((aa.ravel(), bb.ravel()))
    if not blocks:
        return Sphere(q, d, t, np.zeros((0, d), dtype=np.int64))
    a = np.concatenate([blk[0] for blk in blocks])
    b = np.concatenate([blk[1] for blk in blocks])
    order = np.argsort(a + b * q ** lo, kind='stable')
    pts = np.concatenate([pts_lo[a[order]], pts_hi[b[order]]], axis=1)
    return Sphere(q, d, t, pts)


def sphere_size_counts(q: int, d: int) -> np.ndarray:
    """|S_t| for every t, by convolving per-coordinate norm histograms."""
    f = field_of_order(q)
    single = np.bincount(f.sq_table, minlength=q).astype(object)
    hist = np.zeros(q, dtype=object)
    hist[0] = 1
    for _ in range(d):
        new = np.zeros(q, dtype=object)
        for u in range(q):
            if hist[u]:
                for v in range(q):
                    if single[v]:
                        new[f.add(u, v)] += hist[u] * single[v]
        hist = new
    return hist


def sphere_size_formula(q: int, d: int, t: int) -> int:
    """Closed-form |S_t| in GF(q)^d via the quadratic character."""
    f = field_of_order(q)
    f._check(t)
    minus_one = f.neg(1)
    if d % 2 == 1:
        if t == 0:
            return q ** (d - 1)
        sign = f.pow(minus_one, (d - 1) // 2)
        return q ** (d - 1) + f.chi(f.mul(sign, t)) * q ** ((d - 1) // 2)
    eta = f.chi(f.pow(minus_one, d // 2))
    if t == 0:
        return q ** (d - 1) + eta * (q - 1) * q ** ((d - 2) // 2)
    return q ** (d - 1) - eta * q ** ((d - 2) // 2)


# --- linear algebra over GF(q) ---------------------------------------------

def rank(f: Field, rows) -> int:
    """Rank of a matrix over GF(q) by Gaussian elimination."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = f.inv(m[r][c])
        m[r] = [f.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def det(f: Field, matrix) -> int:
    m = [list(map(int, r)) for r in matrix]
    n = len(m)
    result = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = f.neg(result)
        result = f.mul(result, m[c][c])
        inv = f.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                factor = f.mul(m[i][c], inv)
                m[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(m[i], m[c])]
    return result


def is_nondegenerate(f: Field, points) -> bool:
    """True iff the differences x_i - x_0 are linearly independent."""
    points = [tuple(map(int, x)) for x in points]
    d = len(points[0])
    if any(len(x) != d for x in points):
        raise ValueError('points have different dimensions')
    if len(points) - 1 > d:
        raise ValueError(f'{len(points)} points cannot be independent in dimension {d}')
    diffs = [[f.sub(a, b) for a, b in zip(x, points[0])] for x in points[1:]]
    return rank(f, diffs) == len(diffs)


@dataclass(frozen=True)
class OrthogonalMatrix:
    entries: tuple  # row-major tuple of rows
    special: bool

    def as_array(self):
        return np.array(self.entries, dtype=np.int64)


def apply(f: Field, matrix, x):
    """matrix @ x over GF(q) for a single point or an (N, d) array of points."""
    m = np.asarray(matrix, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    return f.vdot(x[..., None, :], m)


def enumerate_orthogonal(q: int, d: int, special: bool) -> list:
    """All d x d matrices M with M^T M = I (and det M = 1 when special).

    Column j runs over unit vectors orthogonal to the earlier columns.
    """
    if d not in (2, 3) or q > 7:
        raise ValueError(f'orthogonal enumeration is limited to d in (2, 3), q <= 7; got q={q}, d={d}')
    f = field_of_order(q)
    units = [tuple(map(int, x)) for x in sphere(q, d, 1).points]
    out = []

    def extend(cols):
        if len(cols) == d:
            rows = tuple(tuple(col[i] for col in cols) for i in range(d))
            is_special = det(f, rows) == 1
            if is_special or not special:
                out.append(OrthogonalMatrix(rows, is_special))
            return
        for u in units:
            if all(dot(f, u, c) == 0 for c in cols):
                extend(cols + [u])

    extend([])
    return out
