import itertools

import numpy as np
import pytest

from ffsimplex.ffield import field_of_order
from ffsimplex.geometry import norm, sphere_size_formula
from ffsimplex.scheme import build_omega, partition_ok, relation_index, scheme_report, verify_distance_relation


def brute_lines(q, d):
    """Square-type lines by scanning every nonzero vector and grouping scalar multiples."""
    f = field_of_order(q)
    seen, lines = set(), 0
    for x in itertools.product(range(q), repeat=d):
        if any(x) and f.chi(norm(f, x)) == 1 and x not in seen:
            lines += 1
            for c in range(1, q):
                seen.add(tuple(f.mul(c, v) for v in x))
    return lines


@pytest.mark.parametrize('q,d', [(3, 3), (5, 3), (3, 5), (7, 3)])
def test_omega_size(q, d):
    s = build_omega(q, d)
    assert s.n == brute_lines(q, d) == sphere_size_formula(q, d, 1) // 2


def test_omega_pinned():
    assert build_omega(3, 5).n == 45


def test_reps_are_units():
    s = build_omega(5, 5)
    assert np.all(s.field.vnorm(s.reps) == 1)


@pytest.mark.parametrize('q,d', [(3, 5), (5, 5), (5, 3), (9, 3)])
def test_scheme_structure(q, d):
    rep = scheme_report(q, d)
    assert rep['partition_ok'] and rep['distance_relation_ok']
    assert all(r['regular'] for r in rep['relations'])
    assert sum(r['valency'] for r in rep['relations']) == rep['omega_size'] - 1


def test_valencies_d5():
    assert [r['valency'] for r in scheme_report(3, 5)['relations']] == [32, 12]
    assert [r['valency'] for r in scheme_report(5, 5)['relations']] == [144, 120, 60]


def test_relation_matrix_matches_scalar_classifier():
    s = build_omega(5, 3)
    for u, v in itertools.product(range(s.n), repeat=2):
        assert relation_index(s, u, v) == s.relations[u, v]


def test_line_of_scaling_invariant():
    s = build_omega(5, 3)
    f = s.field
    for c in range(1, 5):
        assert np.array_equal(s.line_of(f.vmul(s.reps, c)), np.arange(s.n))


def test_distance_relation_counts_pairs():
    r = verify_distance_relation(7, 3)
    assert r['ok'] and r['pairs_checked'] > 0


def test_even_dimension_rejected():
    with pytest.raises(ValueError):
        build_omega(3, 4)


def test_coloring_interface():
    c = build_omega(3, 5).coloring()
    assert c.colors == (1, 2)
    assert c.color(0, 0) == -1
    assert c.valency(1) == 32
    assert c.certified_lambda(1) == pytest.approx(4.0)
