"""Pseudo-randomness statistics and colored subgraph counts.

Graphs here are anything with ``n``, ``valency``, ``neighbor_counts(members)``
and ``spectral_lambda()`` (EuclideanGraph, RelationGraph).  Colorings are
anything with ``n``, ``valency(c)``, ``neighbor_counts(members, c)``,
``color_block(x, ys)``, ``color_matrix(xs, ys)`` and ``certified_lambda(c)``
(NormColoring, SchemeColoring).  Vertex sets are arrays of vertex ids.

All counts use ordered tuples with one vertex taken from each set.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import rng, work_cap

REL_TOL = 1e-9


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


class EdgeDiscrepancy(NamedTuple):
    edges: int
    deviation: float
    bound: float
    holds: bool


@dataclass
class CountReport:
    exact_count: int
    predicted: float
    relative_deviation: float
    hypothesis_satisfied: bool
    hypothesis_ratio: float = float('nan')
    mode: str = 'exact'
    standard_error: float = 0.0
    work: int = 0

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _as_set(members):
    return np.unique(np.asarray(members, dtype=np.int64))


def _relative(exact, predicted):
    return abs(exact - predicted) / predicted if predicted > 0 else float('nan')


def _leq(lhs, rhs):
    return lhs <= rhs * (1 + REL_TOL) + REL_TOL


# --- spectral inequalities -------------------------------------------------

def neighborhood_variance(g, B, lam=None) -> InequalityCheck:
    """sum_v (|N_B(v)| - (D/n)|B|)^2 against (lam^2/n)|B|(n - |B|)."""
    B = _as_set(B)
    if not len(B):
        raise ValueError('B must be nonempty')
    lam = g.spectral_lambda() if lam is None else lam
    counts = g.neighbor_counts(B).astype(float)
    mean = g.valency * len(B) / g.n
    lhs = float(np.sum((counts - mean) ** 2))
    rhs = lam ** 2 / g.n * len(B) * (g.n - len(B))
    return InequalityCheck(lhs, rhs, _leq(lhs, rhs))


def edge_discrepancy(g, B, C, lam=None) -> EdgeDiscrepancy:
    """|e(B, C) - (D/n)|B||C|| against lam * sqrt(|B||C|), e counting ordered pairs."""
    B = _as_set(B)
    C = _as_set(C)
    if not len(B) or not len(C):
        raise ValueError('B and C must be nonempty')
    lam = g.spectral_lambda() if lam is None else lam
    edges = int(g.neighbor_counts(C)[B].sum())
    deviation = abs(edges - g.valency * len(B) * len(C) / g.n)
    bound = lam * math.sqrt(len(B) * len(C))
    return EdgeDiscrepancy(edges, deviation, bound, _leq(deviation, bound))


# --- stars -----------------------------------------------------------------

def star_hypothesis_ratio(coloring, E0, leaves, colors) -> float:
    """Smallest lhs/rhs over the size conditions on the centre and leaf sets.

    Conditions: |E0|^2 prod_{i in I}|E_i| >= (n lam / D)^(2|I|) for |I| >= 2
    and |E0||E_i| >= (n lam / D)^2, with D the smallest valency and lam the
    largest certified eigenvalue bound among the colors.
    """
    D = min(coloring.valency(c) for c in colors)
    if D == 0:
        return 0.0
    lam = max(coloring.certified_lambda(c) for c in colors)
    scale = coloring.n * lam / D
    sizes = [len(_as_set(E)) for E in leaves]
    e0 = len(_as_set(E0))
    ratios = [e0 * s / scale ** 2 for s in sizes]
    for r in range(2, len(sizes) + 1):
        for I in itertools.combinations(sizes, r):
            ratios.append(e0 ** 2 * math.prod(I) / scale ** (2 * r))
    return min(ratios) if ratios else float('inf')


def _sum_of_products(columns, rows):
    """sum over rows of prod of columns, exact even past int64."""
    bound = math.prod(int(c.max(initial=0)) for c in columns) * len(rows)
    if bound < 2 ** 62:
        prod = np.ones(len(rows), dtype=np.int64)
        for c in columns:
            prod *= c[rows]
        return int(prod.sum())
    prod = np.ones(len(rows), dtype=object)
    for c in columns:
        prod *= c[rows].astype(object)
    return int(prod.sum())


def count_colored_stars(coloring, E0, leaves, colors) -> CountReport:
    """Number of k-stars of the given type with centre in E0 and leaf i in leaves[i].

    Computed as sum_{v in E0} prod_i |N^{r_i}_{E_i}(v)|.
    """
    colors = list(colors)
    if len(leaves) != len(colors) or not colors:
        raise ValueError('need one leaf set per color, k >= 1')
    E0 = _as_set(E0)
    leaves = [_as_set(E) for E in leaves]
    if not len(E0) or any(not len(E) for E in leaves):
        exact = 0
    else:
        cols = [coloring.neighbor_counts(E, c) for E, c in zip(leaves, colors)]
        exact = _sum_of_products(cols, E0)
    predicted = float(len(E0)) * math.prod(coloring.valency(c) / coloring.n * len(E)
                                           for E, c in zip(leaves, colors))
    ratio = star_hypothesis_ratio(coloring, E0, leaves, colors)
    return CountReport(exact, predicted, _relative(exact, predicted), ratio >= 1, ratio,
                       work=len(E0) * len(colors))


def full_space_star_identity(coloring, colors) -> int:
    """n * prod_i valency(r_i): the star count when every set is the whole vertex set."""
    return coloring.n * math.prod(coloring.valency(c) for c in colors)


# --- pattern graphs --------------------------------------------------------

@dataclass(frozen=True)
class PatternGraph:
    """A colored simple graph on ordered vertices 0..s-1."""

    s: int
    edges: tuple  # ((i, j, color), ...)

    def __post_init__(self):
        seen = set()
        for i, j, _ in self.edges:
            if i == j or not (0 <= i < self.s and 0 <= j < self.s):
                raise ValueError(f'bad edge ({i}, {j}) for s = {self.s}')
            key = frozenset((i, j))
            if key in seen:
                raise ValueError(f'repeated edge ({i}, {j})')
            seen.add(key)

    @property
    def r(self) -> int:
        return len(self.edges)

    def degree(self, v) -> int:
        return sum(v in (i, j) for i, j, _ in self.edges)

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.s)), default=0)

    def edge_color(self, i, j):
        for a, b, c in self.edges:
            if {a, b} == {i, j}:
                return c
        return None

    def automorphism_count(self) -> int:
        """Vertex permutations preserving every colored edge."""
        colored = {(frozenset((i, j)), c) for i, j, c in self.edges}
        return sum(
            {(frozenset((perm[i], perm[j])), c) for i, j, c in self.edges} == colored
            for perm in itertools.permutations(range(self.s))
        )

    @classmethod
    def star(cls, colors):
        return cls(len(colors) + 1, tuple((0, i + 1, c) for i, c in enumerate(colors)))

    @classmethod
    def complete(cls, s, colors):
        """K_s with colors listed in (0,1), (0,2), ..., (s-2, s-1) order."""
        pairs = list(itertools.combinations(range(s), 2))
        if len(colors) != len(pairs):
            raise ValueError(f'K_{s} needs {len(pairs)} colors')
        return cls(s, tuple((i, j, c) for (i, j), c in zip(pairs, colors)))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls(int(data['s']), tuple(tuple(int(v) for v in e) for e in data['edges']))

    def to_json(self):
        return json.dumps({'s': self.s, 'edges': [list(e) for e in self.edges]})


class WorkCapExceeded(RuntimeError):
    pass


def count_colored_copies(coloring, H: PatternGraph, sets, mode='exact', cap=None,
                         samples=100_000, seed=0) -> CountReport:
    """Tuples (x_1..x_s), x_i in sets[i], with color(x_i, x_j) = c for every edge (i, j, c).

    Exact mode backtracks over pattern vertices in order of decreasing degree,
    filtering each candidate list by the colors to already placed vertices;
    the last two levels are counted with one block of pair colors.  Sample
    mode returns an unbiased estimate with its standard error.
    """
    if len(sets) != H.s:
        raise ValueError(f'pattern has {H.s} vertices but {len(sets)} sets were given')
    if H.s > 6:
        raise ValueError('patterns are limited to 6 vertices')
    sets = [_as_set(E) for E in sets]
    total = math.prod(len(E) for E in sets)
    predicted = float(total) * math.prod(coloring.valency(c) / coloring.n for _, _, c in H.edges)
    if mode == 'sample':
        return _sample_copies(coloring, H, sets, samples, seed, total, predicted)
    if mode != 'exact':
        raise ValueError(f'unknown mode {mode!r}')
    cap = work_cap() if cap is None else cap
    exact, work = _backtrack(coloring, H, sets, cap)
    return CountReport(exact, predicted, _relative(exact, predicted), True, mode='exact', work=work)


def _backtrack(coloring, H, sets, cap):
    order = sorted(range(H.s), key=lambda v: -H.degree(v))
    nbrs = {v: [(w, H.edge_color(v, w)) for w in range(H.s) if H.edge_color(v, w) is not None]
            for v in range(H.s)}
    work = 0
    placed = {}

    def charge(amount):
        nonlocal work
        work += amount
        if work > cap:
            raise WorkCapExceeded(f'copy counting exceeded the work cap {cap}; use mode="sample"')

    def candidates(v):
        cand = sets[v]
        for w, c in nbrs[v]:
            if w in placed and len(cand):
                charge(len(cand))
                cand = cand[coloring.color_block(placed[w], cand) == c]
        return cand

    def count(t):
        v = order[t]
        cand = candidates(v)
        if t == H.s - 1 or not len(cand):
            return len(cand)
        if t == H.s - 2:
            w = order[t + 1]
            last = candidates(w)
            c = H.edge_color(v, w)
            if c is None:
                return len(cand) * len(last)
            charge(len(cand) * len(last))
            step = max(1, 4_000_000 // max(1, len(last)))
            return sum(int((coloring.color_matrix(cand[i:i + step], last) == c).sum())
                       for i in range(0, len(cand), step))
        total = 0
        for x in cand:
            placed[v] = int(x)
            total += count(t + 1)
        placed.pop(v, None)
        return total

    if H.s == 1:
        return len(sets[0]), len(sets[0])
    return count(0), work


def _sample_copies(coloring, H, sets, samples, seed, total, predicted):
    if total == 0:
        return CountReport(0, predicted, _relative(0, predicted), True, mode='sample')
    gen = rng(seed)
    picks = [E[gen.integers(0, len(E), size=samples)] for E in sets]
    ok = np.ones(samples, dtype=bool)
    for i, j, c in H.edges:
        ok &= coloring.color_pairs(picks[i], picks[j]) == c
    p = ok.mean()
    estimate = p * total
    stderr = total * math.sqrt(p * (1 - p) / samples)
    return CountReport(int(round(estimate)), predicted, float(_relative(estimate, predicted)), True,
                       mode='sample', standard_error=stderr, work=samples * H.r)


def single_set_copies(coloring, H: PatternGraph, members) -> float:
    """Copies of H inside one set, divided by |Aut(H)|.

    Approximate when the set allows non-injective tuples: coincident
    non-adjacent vertices are still counted.
    """
    rep = count_colored_copies(coloring, H, [members] * H.s)
    return rep.exact_count / H.automorphism_count()


def mixing_trials(g, trials: int, set_size: int = None, seed: int = 0, lam=None) -> dict:
    """Random (B, C) pairs checked against both spectral inequalities.

    With set_size None each set size is drawn uniformly from 1..n.
    """
    lam = g.spectral_lambda() if lam is None else lam
    gen = rng(seed)
    worst_var = worst_edge = 0.0
    var_fail = edge_fail = 0
    for _ in range(trials):
        sizes = gen.integers(1, g.n + 1, size=2) if set_size is None else (set_size, set_size)
        B = gen.choice(g.n, size=int(sizes[0]), replace=False)
        C = gen.choice(g.n, size=int(sizes[1]), replace=False)
        v = neighborhood_variance(g, B, lam)
        e = edge_discrepancy(g, B, C, lam)
        var_fail += not v.holds
        edge_fail += not e.holds
        if v.rhs > 0:
            worst_var = max(worst_var, v.lhs / v.rhs)
        if e.bound > 0:
            worst_edge = max(worst_edge, e.deviation / e.bound)
    return {
        'trials': trials, 'lambda': lam, 'valency': g.valency, 'n': g.n,
        'variance_violations': var_fail, 'discrepancy_violations': edge_fail,
        'max_variance_ratio': worst_var, 'max_discrepancy_ratio': worst_edge,
    }
