import itertools

import numpy as np
import pytest

from ffsimplex import geometry
from ffsimplex.ffield import field_of_order
from ffsimplex.geometry import (apply, det, dot, enumerate_orthogonal, is_nondegenerate, norm, rank, space, sphere,
                                sphere_size_counts, sphere_size_formula)


def brute_sphere(q, d, t):
    f = field_of_order(q)
    return sum(norm(f, x) == t for x in itertools.product(range(q), repeat=d))


def test_sphere_example():
    assert sphere(3, 3, 1).size == 6
    assert sphere_size_formula(3, 3, 1) == 6


@pytest.mark.parametrize('q,d', [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (9, 2), (9, 3), (3, 4)])
def test_sphere_sizes_against_brute_force(q, d):
    counts = sphere_size_counts(q, d)
    for t in range(q):
        n = brute_sphere(q, d, t)
        assert sphere(q, d, t).size == n
        assert sphere_size_formula(q, d, t) == n
        assert counts[t] == n


def test_sphere_points_have_the_radius():
    f = field_of_order(9)
    s = sphere(9, 3, 4)
    assert np.all(f.vnorm(s.points) == 4)
    assert np.all(np.diff(s.indices()) > 0)


def test_sphere_cap():
    with pytest.raises(ValueError):
        sphere(7, 5, 1, cap=1000)


def test_encode_decode_roundtrip():
    sp = space(5, 3)
    idx = np.arange(sp.n)
    assert np.array_equal(sp.encode(sp.decode(idx)), idx)
    assert np.array_equal(sp.decode(7), [2, 1, 0])


def test_correlate_counts_neighbours():
    sp = space(3, 2)
    f = sp.field
    kernel = np.zeros(sp.n)
    kernel[sphere(3, 2, 1).indices()] = 1
    ind = np.zeros(sp.n)
    members = [0, 4, 5]
    ind[members] = 1
    got = np.rint(sp.correlate(ind, kernel)).astype(int)
    expect = [sum(f.vnorm(f.vsub(sp.points[m], sp.points[v])) == 1 for m in members) for v in range(sp.n)]
    assert list(got) == expect


def test_rank_det():
    f = field_of_order(5)
    assert rank(f, [[1, 2], [2, 4]]) == 1
    assert rank(f, [[1, 2], [3, 4]]) == 2
    assert det(f, [[1, 2], [3, 4]]) == (4 - 6) % 5
    f9 = field_of_order(9)
    assert rank(f9, [[1, 3], [3, f9.mul(3, 3)]]) == 1


def test_nondegenerate():
    f = field_of_order(3)
    assert is_nondegenerate(f, [(0, 0), (1, 0), (0, 1)])
    assert not is_nondegenerate(f, [(0, 0), (1, 1), (2, 2)])
    assert not is_nondegenerate(f, [(1, 1), (1, 1)])


@pytest.mark.parametrize('q,d,special,size', [(3, 2, True, 4), (5, 2, True, 4), (7, 2, True, 8), (3, 2, False, 8),
                                              (3, 3, True, 24), (5, 3, True, 120)])
def test_orthogonal_group_orders(q, d, special, size):
    mats = enumerate_orthogonal(q, d, special)
    assert len(mats) == size
    f = field_of_order(q)
    for m in mats[:10]:
        M = m.as_array()
        assert np.array_equal((M.T @ M) % q, np.eye(d, dtype=int))


def test_orthogonal_maps_preserve_norms():
    f = field_of_order(5)
    pts = space(5, 2).points
    for m in enumerate_orthogonal(5, 2, False):
        assert np.array_equal(f.vnorm(apply(f, m.as_array(), pts)), f.vnorm(pts))


def test_orthogonal_enumeration_gate():
    with pytest.raises(ValueError):
        enumerate_orthogonal(3, 4, True)
    with pytest.raises(ValueError):
        enumerate_orthogonal(9, 2, True)


def test_scalar_dot():
    f = field_of_order(7)
    assert dot(f, (1, 2, 3), (4, 5, 6)) == 32 % 7
