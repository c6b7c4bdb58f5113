"""Finite Euclidean graphs G_q(a) and the norm coloring of the complete graph.

G_q(a) is the Cayley graph of the additive group of GF(q)^d with
connection set S_a minus the origin.  Its eigenvalues are the character sums

    lambda_m = sum_{s in S} psi(m . s),   psi(t) = exp(2 pi i Tr(t) / p),

one for each m in GF(q)^d.  A dense eigensolve of the adjacency matrix is
kept as an independent check.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .config import pmap
from .geometry import Space, space, sphere

IMAG_TOL = 1e-9
DENSE_MAX = 4096


@dataclass(frozen=True, eq=False)
class EuclideanGraph:
    q: int
    d: int
    a: int
    connection_set: np.ndarray  # canonical indices of S_a \ {0}

    @property
    def space(self) -> Space:
        return space(self.q, self.d)

    @property
    def n(self) -> int:
        return self.q ** self.d

    @property
    def valency(self) -> int:
        return len(self.connection_set)

    @functools.cached_property
    def connection_mask(self):
        mask = np.zeros(self.n, dtype=bool)
        mask[self.connection_set] = True
        return mask

    def is_adjacent(self, x, y):
        return self.connection_mask[self.space.sub(x, y)]

    def neighbor_counts(self, members):
        """|N(v) cap members| for every vertex v."""
        ind = np.zeros(self.n)
        ind[np.asarray(members, dtype=np.int64)] = 1
        return _round_counts(self.space.correlate(ind, self.connection_mask))

    def adjacency(self):
        if self.n > DENSE_MAX:
            raise ValueError(f'n = {self.n} exceeds the dense cap {DENSE_MAX}')
        sp = self.space
        every = np.arange(self.n)
        return np.stack([self.connection_mask[sp.sub(x, every)] for x in range(self.n)]).astype(float)

    @functools.cached_property
    def spectrum(self):
        return character_spectrum(self)

    def spectral_lambda(self) -> float:
        """Largest nontrivial eigenvalue modulus."""
        return self.spectrum.max_nontrivial_abs

    def ramanujan_bound(self) -> float:
        return 2 * self.q ** ((self.d - 1) / 2)


def _round_counts(values):
    counts = np.rint(values)
    if np.max(np.abs(values - counts), initial=0.0) > 1e-6:
        raise ArithmeticError('FFT neighbor counts are not integral')
    return counts.astype(np.int64)


@functools.lru_cache(maxsize=256)
def build_graph(q: int, d: int, a: int) -> EuclideanGraph:
    if d < 2:
        raise ValueError(f'Euclidean graphs need d >= 2, got {d}')
    sp = space(q, d)
    conn = sphere(q, d, a).indices()
    conn = conn[conn != 0]
    return EuclideanGraph(q, d, a, conn)


class NormColoring:
    """Colors each pair x != y of GF(q)^d by ||x - y||; color classes are the graphs G_q(a)."""

    def __init__(self, q: int, d: int):
        self.q = q
        self.d = d
        self.space = space(q, d)
        self.n = self.space.n
        self.colors = tuple(range(q))

    def __repr__(self):
        return f'NormColoring(q={self.q}, d={self.d})'

    def graph(self, color) -> EuclideanGraph:
        return build_graph(self.q, self.d, int(color))

    def valency(self, color) -> int:
        return self.graph(color).valency

    def color(self, x, y) -> int:
        if x == y:
            return -1
        return int(self.space.diff_norms(x, y))

    def color_block(self, x, ys):
        """Colors of (x, y) for each y; -1 where y == x."""
        ys = np.asarray(ys, dtype=np.int64)
        out = self.space.diff_norms(x, ys)
        return np.where(ys == x, -1, out)

    def color_matrix(self, xs, ys):
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        out = self.space.diff_norms(xs[:, None], ys[None, :])
        return np.where(xs[:, None] == ys[None, :], -1, out)

    def color_pairs(self, xs, ys):
        """Elementwise colors of (xs[i], ys[i])."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        return np.where(xs == ys, -1, self.space.diff_norms(xs, ys))

    def neighbor_counts(self, members, color):
        return self.graph(color).neighbor_counts(members)

    def certified_lambda(self, color) -> float:
        return self.graph(color).ramanujan_bound()


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray  # sorted ascending
    trivial_eigenvalue: float
    max_nontrivial_abs: float
    bound: float
    method: str
    n: int
    by_character: np.ndarray = field(default=None, repr=False)

    def multiset(self, decimals: int = 6):
        vals, counts = np.unique(np.round(self.eigenvalues, decimals) + 0.0, return_counts=True)
        return [(float(v), int(c)) for v, c in zip(vals, counts)]

    def to_dict(self):
        return {
            'method': self.method,
            'n': self.n,
            'trivial_eigenvalue': self.trivial_eigenvalue,
            'max_nontrivial_abs': self.max_nontrivial_abs,
            'bound': self.bound,
            'eigenvalues': [[v, m] for v, m in self.multiset()],
        }


def _character_rows(args):
    mvec, svec, p = args
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    return roots[(mvec @ svec.T) % p].sum(axis=1)


def character_spectrum(g: EuclideanGraph, workers: int = 1) -> SpectrumReport:
    """Eigenvalues lambda_m for all m, in canonical order of m.

    Tr(m . s) is evaluated through the trace form of GF(q) over GF(p), so each
    block of characters is one integer matrix product mod p.
    """
    f = g.space.field
    pts = g.space.points
    coeff = f.coeff_table
    kron = np.kron(np.eye(g.d, dtype=np.int64), f.trace_form)
    mvec = coeff[pts].reshape(g.n, -1) @ kron % f.p
    svec = coeff[pts[g.connection_set]].reshape(len(g.connection_set), g.d * f.e)
    rows = max(1, 4_000_000 // max(1, g.valency))
    chunks = [(mvec[i:i + rows], svec, f.p) for i in range(0, g.n, rows)]
    lam = np.concatenate(pmap(_character_rows, chunks, workers)) if g.valency else np.zeros(g.n, complex)
    worst = float(np.max(np.abs(lam.imag), initial=0.0))
    if worst > IMAG_TOL:
        raise ArithmeticError(f'character sum has imaginary part {worst:.3g} for {g}')
    lam = lam.real
    return SpectrumReport(
        eigenvalues=np.sort(lam),
        trivial_eigenvalue=float(lam[0]),
        max_nontrivial_abs=float(np.max(np.abs(lam[1:]), initial=0.0)),
        bound=g.ramanujan_bound(),
        method='character_sum',
        n=g.n,
        by_character=lam,
    )


def dense_spectrum(g: EuclideanGraph) -> SpectrumReport:
    """Symmetric eigensolve of the explicit adjacency matrix."""
    lam = np.linalg.eigvalsh(g.adjacency())
    return spectrum_from_eigenvalues(lam, g.valency, g.ramanujan_bound(), 'dense')


def spectrum_from_eigenvalues(lam, valency, bound, method) -> SpectrumReport:
    """Wrap a full eigenvalue list, dropping one copy of the valency as the trivial eigenvalue."""
    lam = np.sort(np.asarray(lam, dtype=float))
    i = int(np.argmin(np.abs(lam - valency)))
    rest = np.delete(lam, i)
    return SpectrumReport(
        eigenvalues=lam,
        trivial_eigenvalue=float(lam[i]),
        max_nontrivial_abs=float(np.max(np.abs(rest), initial=0.0)),
        bound=bound,
        method=method,
        n=len(lam),
    )


def spectra_agree(r1: SpectrumReport, r2: SpectrumReport, tol: float = 1e-6) -> bool:
    if len(r1.eigenvalues) != len(r2.eigenvalues):
        return False
    return bool(np.all(np.abs(r1.eigenvalues - r2.eigenvalues) <= tol))


def check_ramanujan_bound(report: SpectrumReport, tol: float = 1e-9):
    """(every nontrivial |lambda| <= bound, bound - max nontrivial |lambda|)."""
    margin = report.bound - report.max_nontrivial_abs
    return margin >= -tol, margin
