"""The orthogonal scheme on square-type non-isotropic lines of GF(q)^d, d odd.

Omega is the set of lines [x] with Q(x) a nonzero square.  Every such line
meets the unit sphere in two points +-U; the representative is the one with
smaller canonical index.  For lines [U] != [V] the classes are

    R_1            : (U+V).(U+V) = 0
    R_l            : (U+V).(U+V) = 2 + 2 nu^-(l-1),   2 <= l <= (q-1)/2
    R_{(q+1)/2}    : (U+V).(U+V) = 2

evaluated on the value set {(U+V).(U+V), (U-V).(U-V)} so that the sign of
the representatives does not matter.  R_0 is the identity relation.
"""

from __future__ import annotations

import functools

import numpy as np

from .euclid_graph import spectrum_from_eigenvalues
from .ffield import Field
from .geometry import norm, space

DENSE_MAX = 4096


class OmegaScheme:

    def __init__(self, q: int, d: int):
        if d % 2 == 0 or d < 3:
            raise ValueError(f'the scheme needs odd d >= 3, got {d}')
        self.space = space(q, d)
        self.field: Field = self.space.field
        self.q = q
        self.d = d
        self.n_classes = (q + 1) // 2
        self._graphs = {}
        self._build()

    def __repr__(self):
        return f'OmegaScheme(q={self.q}, d={self.d}, |Omega|={self.n})'

    def _build(self):
        f, sp = self.field, self.space
        pts, norms = sp.points, sp.norms
        keep = f.chi_table[norms] == 1
        x = pts[keep]
        scale = f.inv_table[f.sqrt_table[norms[keep]]]
        units = f.vmul(x, scale[:, None])
        enc = sp.encode(units)
        enc_neg = sp.encode(f.vneg(units))
        rep_idx = np.unique(np.minimum(enc, enc_neg))
        self.rep_index = rep_idx
        self.reps = sp.points[rep_idx]
        self.n = len(rep_idx)
        line_of_unit = np.full(sp.n, -1, dtype=np.int64)
        line_of_unit[rep_idx] = np.arange(self.n)
        line_of_unit[sp.encode(f.vneg(self.reps))] = np.arange(self.n)
        self.line_of_unit = line_of_unit

    # --- lines ----------------------------------------------------------

    def line_of(self, points):
        """Line ids of points of Omega-type lines (any nonzero multiple); -1 otherwise."""
        f, sp = self.field, self.space
        points = np.atleast_2d(np.asarray(points, dtype=np.int64))
        nq = f.vnorm(points)
        ok = f.chi_table[nq] == 1
        scale = f.inv_table[np.where(ok, f.sqrt_table[nq], 1)]
        units = f.vmul(points, scale[:, None])
        return np.where(ok, self.line_of_unit[sp.encode(units)], -1)

    @property
    def size_ratio(self) -> float:
        """|Omega| / (q^(d-1) / 2)."""
        return self.n / (self.q ** (self.d - 1) / 2)

    # --- relations ------------------------------------------------------

    def alpha(self, l: int):
        """alpha_l = 2 nu^-(l-1) for 2 <= l <= (q-1)/2, else None."""
        if 2 <= l <= (self.q - 1) // 2:
            f = self.field
            return f.mul(2 % f.p, f.pow(f.nu, -(l - 1)))
        return None

    def classify_values(self, values) -> int:
        """Relation index (>= 1) of a value set {(U+V)^2, (U-V)^2}."""
        values = set(int(v) for v in values)
        f = self.field
        two = 2 % f.p
        matches = []
        if 0 in values:
            matches.append(1)
        if values == {two}:
            matches.append(self.n_classes)
        for l in range(2, (self.q - 1) // 2 + 1):
            if f.add(two, self.alpha(l)) in values:
                matches.append(l)
        if len(matches) != 1:
            raise ArithmeticError(f'value set {sorted(values)} matches relations {matches}')
        return matches[0]

    @functools.cached_property
    def class_of_inner(self):
        """Relation index of distinct lines as a function of U.V."""
        f = self.field
        two = 2 % f.p
        out = np.empty(self.q, dtype=np.int64)
        for b in range(self.q):
            tb = f.mul(two, b)
            out[b] = self.classify_values({f.add(two, tb), f.sub(two, tb)})
        return out

    @functools.cached_property
    def gram(self):
        """Matrix of inner products U.V over GF(q)."""
        f, r = self.field, self.reps
        if f.e == 1:
            return (r @ r.T) % f.p
        acc = np.zeros((self.n, self.n), dtype=np.int64)
        for i in range(self.d):
            acc = f.add_table[acc, f.mul_table[r[:, None, i], r[None, :, i]]]
        return acc

    @functools.cached_property
    def relations(self):
        """n x n matrix of relation indices, 0 on the diagonal."""
        rel = self.class_of_inner[self.gram].astype(np.int8)
        np.fill_diagonal(rel, 0)
        return rel

    def relation_graph(self, l: int) -> 'RelationGraph':
        if l not in self._graphs:
            self._graphs[l] = RelationGraph(self, l)
        return self._graphs[l]

    def coloring(self) -> 'SchemeColoring':
        return SchemeColoring(self)


def build_omega(q: int, d: int) -> OmegaScheme:
    return _cached_scheme(q, d)


@functools.lru_cache(maxsize=16)
def _cached_scheme(q, d):
    return OmegaScheme(q, d)


def relation_index(scheme: OmegaScheme, u: int, v: int) -> int:
    """Relation class of lines u, v (0 for u == v), from the scalar value set."""
    if u == v:
        return 0
    f = scheme.field
    U = tuple(map(int, scheme.reps[u]))
    V = tuple(map(int, scheme.reps[v]))
    plus = norm(f, [f.add(a, b) for a, b in zip(U, V)])
    minus = norm(f, [f.sub(a, b) for a, b in zip(U, V)])
    return scheme.classify_values({plus, minus})


class RelationGraph:
    """The graph (Omega, R_l)."""

    def __init__(self, scheme: OmegaScheme, l: int):
        if not 1 <= l <= scheme.n_classes:
            raise ValueError(f'relation index {l} out of range')
        self.scheme = scheme
        self.l = l
        self.n = scheme.n

    def __repr__(self):
        return f'RelationGraph({self.scheme!r}, l={self.l})'

    @functools.cached_property
    def degrees(self):
        return (self.scheme.relations == self.l).sum(axis=1)

    @property
    def is_regular(self) -> bool:
        return bool(np.all(self.degrees == self.degrees[0]))

    @property
    def valency(self) -> int:
        if not self.is_regular:
            raise ArithmeticError(f'{self} is not regular')
        return int(self.degrees[0])

    def neighbor_counts(self, members):
        members = np.asarray(members, dtype=np.int64)
        return (self.scheme.relations[:, members] == self.l).sum(axis=1)

    def adjacency(self):
        return (self.scheme.relations == self.l).astype(float)

    @functools.cached_property
    def spectrum(self):
        if self.n > DENSE_MAX:
            raise ValueError(f'|Omega| = {self.n} exceeds the dense cap {DENSE_MAX}')
        lam = np.linalg.eigvalsh(self.adjacency())
        return spectrum_from_eigenvalues(lam, self.valency, np.nan, 'dense')

    def spectral_lambda(self) -> float:
        return self.spectrum.max_nontrivial_abs


class SchemeColoring:
    """Colors each pair of distinct lines by its relation index 1..(q+1)/2."""

    def __init__(self, scheme: OmegaScheme):
        self.scheme = scheme
        self.n = scheme.n
        self.colors = tuple(range(1, scheme.n_classes + 1))

    def __repr__(self):
        return f'SchemeColoring({self.scheme!r})'

    def graph(self, color) -> RelationGraph:
        return self.scheme.relation_graph(int(color))

    def valency(self, color) -> int:
        return self.graph(color).valency

    def color(self, x, y) -> int:
        r = int(self.scheme.relations[x, y])
        return r if r else -1

    def color_matrix(self, xs, ys):
        r = self.scheme.relations[np.ix_(np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64))]
        r = r.astype(np.int64)
        return np.where(r == 0, -1, r)

    def color_pairs(self, xs, ys):
        r = self.scheme.relations[np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)]
        r = r.astype(np.int64)
        return np.where(r == 0, -1, r)

    def color_block(self, x, ys):
        r = self.scheme.relations[x, np.asarray(ys, dtype=np.int64)].astype(np.int64)
        return np.where(r == 0, -1, r)

    def neighbor_counts(self, members, color):
        return self.graph(color).neighbor_counts(members)

    def certified_lambda(self, color) -> float:
        return self.graph(color).spectral_lambda()


def scheme_report(q: int, d: int) -> dict:
    """Regularity, spectrum and measured constants of every relation graph."""
    s = build_omega(q, d)
    k = (d + 1) // 2
    rows = []
    for l in range(1, s.n_classes + 1):
        g = s.relation_graph(l)
        regular = g.is_regular
        if not regular:
            raise ArithmeticError(f'relation graph {g} is not regular')
        eig = g.spectrum
        rows.append({
            'l': l,
            'alpha': s.alpha(l),
            'valency': g.valency,
            'valency_ratio': g.valency / q ** (2 * k - 3),
            'trivial_eigenvalue': eig.trivial_eigenvalue,
            'max_nontrivial_abs': eig.max_nontrivial_abs,
            'certified_c': eig.max_nontrivial_abs / q ** ((2 * k - 3) / 2),
            'regular': regular,
        })
    return {
        'q': q,
        'd': d,
        'omega_size': s.n,
        'omega_size_ratio': s.size_ratio,
        'relations': rows,
        'partition_ok': partition_ok(s),
        'distance_relation_ok': verify_distance_relation(q, d)['ok'],
    }


def partition_ok(s: OmegaScheme) -> bool:
    """Relations are symmetric and, with the identity, cover every ordered pair exactly once."""
    rel = s.relations
    counts = np.bincount(rel.ravel().astype(np.int64), minlength=s.n_classes + 1)
    diag_ok = bool(np.all(np.diag(rel) == 0)) and counts[0] == s.n
    return bool(np.array_equal(rel, rel.T) and diag_ok and counts.sum() == s.n ** 2
                and rel.min() >= 0 and rel.max() <= s.n_classes)


def verify_distance_relation(q: int, d: int) -> dict:
    """Check ||U - V||, ||U + V|| in {2 + alpha_l, 2 - alpha_l} for all pairs in R_l, 2 <= l <= (q-1)/2.

    Norms are computed from coordinates, not from the Gram matrix.
    """
    s = build_omega(q, d)
    f = s.field
    two = 2 % f.p
    checked = 0
    violations = []
    for l in range(2, (q - 1) // 2 + 1):
        allowed = np.zeros(q, dtype=bool)
        allowed[[f.add(two, s.alpha(l)), f.sub(two, s.alpha(l))]] = True
        for i in range(s.n):
            js = np.flatnonzero(s.relations[i] == l)
            if not len(js):
                continue
            U = s.reps[i]
            V = s.reps[js]
            minus = f.vnorm(f.vsub(U, V))
            plus = f.vnorm(f.vadd(U, V))
            bad = ~(allowed[minus] & allowed[plus])
            checked += len(js)
            if bad.any():
                violations.append((l, i, int(js[np.argmax(bad)])))
    return {'ok': not violations, 'pairs_checked': checked, 'violations': violations[:10]}
