"""Congruence classes of simplexes in GF(q)^d.

A (k+1)-tuple is classified by its edge-norm vector (||x_i - x_j||)_{i<j},
listed in row-major pair order (1,2), (1,3), ..., (k, k+1).  On
nondegenerate tuples (differences of full rank k) equal edge-norm vectors
mean congruence, so the census counts distinct edge-norm vectors of
nondegenerate tuples and reports degenerate tuples separately.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .config import pmap, rng, work_cap
from .euclid_graph import NormColoring
from .ffield import Field, field_of_order
from .geometry import Space, apply, enumerate_orthogonal, is_nondegenerate, norm, space
from .mixing import PatternGraph, count_colored_copies, count_colored_stars
from .scheme import build_omega

SAMPLE_CHUNK = 100_000
PAIR_TABLE_MAX = 4096


def pair_order(k: int):
    return list(itertools.combinations(range(k + 1), 2))


def edge_norm_vector(f: Field, points) -> tuple:
    """(||x_i - x_j||) over pairs i < j in row-major order."""
    pts = [tuple(map(int, x)) for x in points]
    d = len(pts[0])
    if any(len(x) != d for x in pts):
        raise ValueError('points have different dimensions')
    return tuple(norm(f, [f.sub(a, b) for a, b in zip(pts[i], pts[j])])
                 for i, j in pair_order(len(pts) - 1))


def encode_vector(vec, q: int) -> int:
    return sum(int(a) * q ** m for m, a in enumerate(vec))


def decode_vector(code: int, q: int, k: int) -> tuple:
    out = []
    for _ in range(math.comb(k + 1, 2)):
        code, a = divmod(int(code), q)
        out.append(a)
    return tuple(out)


# --- congruence ------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _orthogonal_arrays(q, d, special):
    return [m.as_array() for m in enumerate_orthogonal(q, d, special)]


def verify_congruence_lemma(P, P2, q: int, d: int, special: bool = True) -> bool:
    """Whether O(P_i) + tau = P2_i for all i, for some tau and some O in SO_d
    (O_d when special is False), by exhaustive search over O."""
    f = field_of_order(q)
    P = np.asarray(P, dtype=np.int64)
    P2 = np.asarray(P2, dtype=np.int64)
    if P.shape != P2.shape or P.shape[1] != d:
        raise ValueError('tuples must have the same length and dimension d')
    if not (is_nondegenerate(f, P) and is_nondegenerate(f, P2)):
        raise ValueError('congruence search needs nondegenerate tuples')
    for O in _orthogonal_arrays(q, d, special):
        image = apply(f, O, P)
        tau = f.vsub(P2[0], image[0])
        if np.array_equal(f.vadd(image, tau), P2):
            return True
    return False


# --- batched kernels -------------------------------------------------------

def _independent(f: Field, vecs):
    """Rows of vecs (N, k, d) whose k vectors are linearly independent.

    Vector j is tested against every element of the span of vectors < j.
    """
    N, k, d = vecs.shape
    ok = np.any(vecs[:, 0, :] != 0, axis=1)
    for j in range(1, k):
        coeffs = np.array(list(itertools.product(range(f.q), repeat=j)), dtype=np.int64)
        span = np.zeros((N, len(coeffs), d), dtype=np.int64)
        for i in range(j):
            span = f.vadd(span, f.vmul(coeffs[None, :, i, None], vecs[:, None, i, :]))
        ok &= ~np.any(np.all(span == vecs[:, None, j, :], axis=-1), axis=1)
    return ok


class _Kernel:
    """Edge-norm codes of index tuples in one space."""

    def __init__(self, sp: Space, k: int):
        self.sp = sp
        self.k = k
        self.pairs = pair_order(k)
        self.weights = sp.q ** np.arange(len(self.pairs), dtype=np.int64)
        self.table = None
        if sp.n <= PAIR_TABLE_MAX:
            every = np.arange(sp.n)
            self.table = sp.diff_norms(every[:, None], every[None, :]).astype(np.int8)

    def pair_norms(self, x, y):
        if self.table is not None:
            return self.table[x, y].astype(np.int64)
        return self.sp.diff_norms(x, y)

    def codes(self, T):
        code = np.zeros(len(T), dtype=np.int64)
        for m, (i, j) in enumerate(self.pairs):
            code += self.pair_norms(T[:, i], T[:, j]) * self.weights[m]
        return code

    def nondegenerate(self, T):
        pts = self.sp.points
        f = self.sp.field
        vecs = f.vsub(pts[T[:, 1:]], pts[T[:, :1]])
        return _independent(f, vecs)


@dataclass
class CensusResult:
    q: int
    k: int
    d: int
    codes: np.ndarray  # sorted distinct edge-norm codes
    mode: str
    tuples_tested: int
    degenerate_count: int
    sample_size: int = 0
    seed: int = None
    workers: int = 1

    @property
    def count(self) -> int:
        return len(self.codes)

    @property
    def total_classes(self) -> int:
        return self.q ** math.comb(self.k + 1, 2)

    @property
    def lower_bound_fraction(self) -> float:
        return self.count / self.total_classes

    @property
    def realized(self) -> set:
        return {decode_vector(c, self.q, self.k) for c in self.codes}

    def to_dict(self):
        return {
            'q': self.q, 'k': self.k, 'd': self.d, 'mode': self.mode,
            'count': self.count, 'total_classes': self.total_classes,
            'lower_bound_fraction': self.lower_bound_fraction,
            'certified_lower_bound': self.mode == 'sampled',
            'tuples_tested': self.tuples_tested, 'degenerate_count': self.degenerate_count,
            'sample_size': self.sample_size, 'seed': self.seed, 'workers': self.workers,
        }


def _exact_block(args):
    """Codes and nondegenerate-tuple count for all tuples starting in `firsts`."""
    q, d, k, E, firsts = args
    sp = space(q, d)
    f = sp.field
    kern = _Kernel(sp, k)
    pts = sp.points
    found = []
    nondegenerate = 0
    rows_per_chunk = max(1, 20_000_000 // max(sp.n, len(E) * q ** k))

    def extend(prefixes, spans, diffs, level):
        # prefixes: (N, level) index tuples; spans: (N, S) indices of the span of their differences
        nonlocal nondegenerate
        for lo in range(0, len(prefixes), rows_per_chunk):
            pre = prefixes[lo:lo + rows_per_chunk]
            spn = spans[lo:lo + rows_per_chunk]
            mask = np.zeros((len(pre), sp.n), dtype=bool)
            mask[np.arange(len(pre))[:, None], spn] = True
            rows, cols = np.nonzero(~mask[:, diffs])
            if not len(rows):
                continue
            grown = np.concatenate([pre[rows], E[cols][:, None]], axis=1)
            if level == k:
                nondegenerate += len(grown)
                found.append(np.unique(kern.codes(grown)))
                continue
            base = pts[spn[rows]]
            step = pts[diffs[cols]]
            ext = [f.vadd(base, f.vmul(c, step)[:, None, :]) for c in range(q)]
            extend(grown, sp.encode(np.concatenate(ext, axis=1)), diffs, level + 1)

    for x1 in firsts:
        extend(np.array([[x1]], dtype=np.int64), np.zeros((1, 1), dtype=np.int64), sp.sub(E, x1), 1)
    codes = np.unique(np.concatenate(found)) if found else np.zeros(0, dtype=np.int64)
    return codes, len(firsts) * len(E) ** k, len(firsts) * len(E) ** k - nondegenerate


def _sample_block(args):
    q, d, k, E, budget, seed, worker = args
    sp = space(q, d)
    kern = _Kernel(sp, k)
    gen = rng(seed, worker)
    found = []
    degenerate = 0
    done = 0
    while done < budget:
        m = min(SAMPLE_CHUNK, budget - done)
        T = E[gen.integers(0, len(E), size=(m, k + 1))]
        good = kern.nondegenerate(T)
        degenerate += int(m - good.sum())
        found.append(np.unique(kern.codes(T[good])))
        done += m
    codes = np.unique(np.concatenate(found)) if found else np.zeros(0, dtype=np.int64)
    return codes, budget, degenerate


def census(E, k: int, q: int, d: int = None, mode: str = 'exact', samples: int = 0,
           seed: int = 0, workers: int = 1, cap: int = None) -> CensusResult:
    """Distinct edge-norm vectors of nondegenerate (k+1)-tuples from E.

    Exact mode extends tuples one vertex at a time and drops a prefix as soon
    as its differences become dependent.  Sampled mode draws tuples uniformly
    with replacement; its count is a certified lower bound.
    """
    d = 2 * k - 1 if d is None else d
    if k < 1 or k > d:
        raise ValueError(f'need 1 <= k <= d, got k={k}, d={d}')
    sp = space(q, d)
    E = np.unique(np.asarray(E, dtype=np.int64))
    if len(E) and (E.min() < 0 or E.max() >= sp.n):
        raise ValueError('E contains indices outside GF(q)^d')
    if mode == 'exact':
        cap = work_cap() if cap is None else cap
        if len(E) ** (k + 1) > cap:
            raise ValueError(f'|E|^(k+1) = {len(E)}^{k + 1} exceeds the work cap {cap}; use mode="sampled"')
        blocks = [(q, d, k, E, part) for part in np.array_split(E, max(1, workers)) if len(part)]
        results = pmap(_exact_block, blocks, workers)
        sample_size = 0
    elif mode == 'sampled':
        if samples <= 0:
            raise ValueError('sampled mode needs samples > 0')
        shares = [samples // workers + (w < samples % workers) for w in range(workers)]
        blocks = [(q, d, k, E, share, seed, w) for w, share in enumerate(shares)] if len(E) else []
        results = pmap(_sample_block, blocks, workers)
        sample_size = samples
    else:
        raise ValueError(f'unknown census mode {mode!r}')
    codes = [r[0] for r in results]
    codes = np.unique(np.concatenate(codes)) if codes else np.zeros(0, dtype=np.int64)
    return CensusResult(q, k, d, codes, mode,
                        tuples_tested=sum(r[1] for r in results),
                        degenerate_count=sum(r[2] for r in results),
                        sample_size=sample_size, seed=seed if mode == 'sampled' else None,
                        workers=workers)


def random_subset(q: int, d: int, size: int, seed: int):
    """Sorted uniform subset of GF(q)^d of the given size (without replacement)."""
    n = q ** d
    if size >= n:
        return np.arange(n, dtype=np.int64)
    return np.sort(rng(seed).choice(n, size=size, replace=False))


def main_theorem_experiment(q: int, k: int, density: float, seed: int = 0,
                            samples: int = 10 ** 7, workers: int = 1) -> dict:
    """Sampled census on a random E of the given density in GF(q)^(2k-1)."""
    d = 2 * k - 1
    n = q ** d
    E = random_subset(q, d, int(round(density * n)), seed)
    threshold = q ** (d - 1 / (2 * k))
    result = census(E, k, q, d, mode='sampled', samples=samples, seed=seed, workers=workers)
    ratio = len(E) / threshold
    return {
        'q': q, 'k': k, 'd': d, 'density': density, 'E_size': int(len(E)),
        'hypothesis_threshold': threshold,
        'hypothesis_ratio': ratio,
        'below_hypothesis': ratio < 1,
        'count': result.count,
        'total_classes': result.total_classes,
        'measured_c': result.lower_bound_fraction,
        'census': result.to_dict(),
    }


# --- proof pipeline --------------------------------------------------------

@dataclass
class PipelineReport:
    q: int
    k: int
    star_type: tuple
    E_size: int
    star_count: int
    star_predicted: float
    star_relative_deviation: float
    center: int
    center_product: int
    pigeonhole_average: float
    sphere_sizes: list
    sphere_membership_ok: bool
    unit_norm_ok: bool
    line_sizes: list
    projection_ok: bool
    pattern_counts: dict = field(default_factory=dict)

    @property
    def total_copies(self) -> int:
        return sum(self.pattern_counts.values())

    @property
    def realized_patterns(self) -> int:
        return sum(1 for c in self.pattern_counts.values() if c > 0)

    @property
    def pigeonhole_ok(self) -> bool:
        return self.center_product >= self.pigeonhole_average

    def to_dict(self):
        k = self.k
        return {
            'q': self.q, 'k': k, 'star_type': list(self.star_type), 'E_size': self.E_size,
            'star_count': self.star_count, 'star_predicted': self.star_predicted,
            'star_relative_deviation': self.star_relative_deviation,
            'center': self.center, 'center_product': self.center_product,
            'pigeonhole_average': self.pigeonhole_average, 'pigeonhole_ok': self.pigeonhole_ok,
            'pigeonhole_prediction': self.E_size ** k / self.q ** k,
            'sphere_sizes': self.sphere_sizes, 'sphere_membership_ok': self.sphere_membership_ok,
            'sphere_size_ratio': [s / self.q ** (2 * k - 2.5) for s in self.sphere_sizes],
            'unit_norm_ok': self.unit_norm_ok,
            'line_sizes': self.line_sizes, 'projection_ok': self.projection_ok,
            'patterns_total': len(self.pattern_counts),
            'patterns_realized': self.realized_patterns,
            'total_copies': self.total_copies,
            'pattern_counts': {','.join(map(str, p)): c for p, c in sorted(self.pattern_counts.items())},
        }


def proof_pipeline(E, k: int, star_type, q: int) -> PipelineReport:
    """Replay the counting argument on a concrete E in GF(q)^(2k-1).

    Count k-stars of the given type, take the centre x_1 with the most stars,
    move the leaf sets E_i onto spheres around the origin, rescale them to
    the unit sphere, pass to lines of Omega and count colored copies of K_k
    across the line sets for every coloring by scheme relations.
    """
    d = 2 * k - 1
    f = field_of_order(q)
    star_type = tuple(int(a) for a in star_type)
    if len(star_type) != k:
        raise ValueError(f'star type needs {k} entries')
    for a in star_type:
        if f.chi(a) != 1:
            raise ValueError(f'{a} is not a nonzero square in GF({q})')
    sp = space(q, d)
    E = np.unique(np.asarray(E, dtype=np.int64))
    coloring = NormColoring(q, d)

    stars = count_colored_stars(coloring, E, [E] * k, star_type)
    cols = [coloring.neighbor_counts(E, a) for a in star_type]
    prods = np.ones(len(E), dtype=object)
    for c in cols:
        prods *= c[E].astype(object)
    best = int(np.argmax(prods))  # first maximum = smallest index, E is sorted
    x1 = int(E[best])
    avg = stars.exact_count / len(E)

    scheme = build_omega(q, d)
    dist = sp.diff_norms(E, x1)
    sizes, lines, sphere_ok, unit_ok, proj_ok = [], [], True, True, True
    line_sets = []
    for a in star_type:
        Ei = E[(dist == a) & (E != x1)]
        moved = f.vsub(sp.points[Ei], sp.points[x1])
        sphere_ok &= bool(np.all(f.vnorm(moved) == a))
        units = f.vmul(moved, f.inv(f.sqrt(a)))
        unit_ok &= bool(np.all(f.vnorm(units) == 1))
        ids = scheme.line_of(units) if len(units) else np.zeros(0, dtype=np.int64)
        proj_ok &= bool(np.all(ids >= 0))
        line_ids = np.unique(ids)
        proj_ok &= 2 * len(line_ids) >= len(Ei)
        sizes.append(int(len(Ei)))
        lines.append(int(len(line_ids)))
        line_sets.append(line_ids)

    sc = scheme.coloring()
    counts = {}
    m = math.comb(k, 2)
    for colors in itertools.product(sc.colors, repeat=m):
        H = PatternGraph.complete(k, colors)
        counts[colors] = count_colored_copies(sc, H, line_sets).exact_count

    return PipelineReport(
        q=q, k=k, star_type=star_type, E_size=int(len(E)),
        star_count=stars.exact_count, star_predicted=stars.predicted,
        star_relative_deviation=stars.relative_deviation,
        center=x1, center_product=int(prods[best]), pigeonhole_average=avg,
        sphere_sizes=sizes, sphere_membership_ok=sphere_ok, unit_norm_ok=unit_ok,
        line_sizes=lines, projection_ok=proj_ok, pattern_counts=counts,
    )


def congruence_trials(q: int, d: int, trials: int, seed: int = 0) -> dict:
    """Random nondegenerate tuple pairs: isometry search against edge-norm equality.

    Tuple length k+1 is drawn with 1 <= k <= d.  Half of the pairs are
    isometric images (random O in O_d plus a translation) so that both
    outcomes are well represented.
    """
    f = field_of_order(q)
    full = _orthogonal_arrays(q, d, False)
    gen = rng(seed)
    stats = dict(pairs=0, equal_vectors=0, isometry_agree=0, special_agree=0,
                 special_mismatch=0, special_mismatch_resolved=0, forward_ok=0)

    def draw(k):
        while True:
            P = gen.integers(0, q, size=(k + 1, d))
            if is_nondegenerate(f, P):
                return P

    while stats['pairs'] < trials:
        k = int(gen.integers(1, d + 1))
        P = draw(k)
        if gen.random() < 0.5:
            O = full[int(gen.integers(len(full)))]
            P2 = f.vadd(apply(f, O, P), gen.integers(0, q, size=d))
        else:
            P2 = draw(k)
        equal = edge_norm_vector(f, P) == edge_norm_vector(f, P2)
        iso = verify_congruence_lemma(P, P2, q, d, special=False)
        so = verify_congruence_lemma(P, P2, q, d, special=True)
        stats['pairs'] += 1
        stats['equal_vectors'] += equal
        stats['isometry_agree'] += iso == equal
        stats['special_agree'] += so == equal
        stats['forward_ok'] += (not so) or equal
        if so != equal:
            stats['special_mismatch'] += 1
            stats['special_mismatch_resolved'] += iso
    return stats
