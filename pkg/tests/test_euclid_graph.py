import itertools

import numpy as np
import pytest

from ffsimplex.euclid_graph import (NormColoring, build_graph, character_spectrum, check_ramanujan_bound,
                                    dense_spectrum, spectra_agree)
from ffsimplex.ffield import field_of_order
from ffsimplex.geometry import norm


def brute_adjacency(q, d, a):
    f = field_of_order(q)
    pts = list(itertools.product(range(q), repeat=d))
    n = len(pts)
    A = np.zeros((n, n))
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            if i != j and norm(f, [f.sub(u, v) for u, v in zip(x, y)]) == a:
                A[i, j] = 1
    return A


@pytest.mark.parametrize('q,d', [(3, 2), (5, 2), (9, 2), (3, 3)])
def test_character_spectrum_matches_brute_eigensolve(q, d):
    for a in range(q):
        g = build_graph(q, d, a)
        lam = np.sort(np.linalg.eigvalsh(brute_adjacency(q, d, a)))
        assert np.allclose(lam, g.spectrum.eigenvalues, atol=1e-6)
        assert spectra_agree(character_spectrum(g), dense_spectrum(g))


def test_spectrum_example():
    g = build_graph(3, 2, 1)
    assert g.valency == 4
    assert g.spectrum.multiset() == [(-2.0, 4), (1.0, 4), (4.0, 1)]
    assert g.spectrum.trivial_eigenvalue == 4


def test_ramanujan_violation_at_isotropic_even_dimension():
    g = build_graph(7, 4, 0)
    ok, margin = check_ramanujan_bound(g.spectrum)
    assert not ok
    assert g.spectral_lambda() == pytest.approx(41)  # (q-1) q^((d-2)/2) - 1
    assert g.ramanujan_bound() == pytest.approx(2 * 7 ** 1.5)


@pytest.mark.parametrize('q,d', [(3, 3), (5, 3), (7, 3), (3, 5)])
def test_ramanujan_bound_odd_dimension(q, d):
    for a in range(q):
        assert check_ramanujan_bound(build_graph(q, d, a).spectrum)[0]


def test_neighbor_counts_against_loops():
    g = build_graph(5, 2, 2)
    A = brute_adjacency(5, 2, 2)
    members = [0, 3, 7, 11, 24]
    assert np.array_equal(g.neighbor_counts(members), A[:, members].sum(axis=1))


def test_norm_coloring():
    c = NormColoring(3, 2)
    assert c.color(0, 0) == -1
    assert c.color(0, 1) == 1 and c.color(0, 4) == 2
    M = c.color_matrix([0, 1, 4], [0, 1, 4])
    assert np.all(np.diag(M) == -1)
    assert np.array_equal(M, M.T)
    assert list(c.color_pairs([0, 0], [1, 4])) == [1, 2]
    assert sum(c.valency(a) for a in c.colors) == c.n - 1


def test_graph_requires_d_two():
    with pytest.raises(ValueError):
        build_graph(3, 1, 1)
