import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffsimplex.ffield import field_of_order
from ffsimplex.geometry import enumerate_orthogonal, space
from ffsimplex.simplex import (census, congruence_trials, decode_vector, edge_norm_vector, encode_vector,
                               main_theorem_experiment, proof_pipeline, random_subset, verify_congruence_lemma)


def test_edge_norm_vector_example():
    f = field_of_order(3)
    assert edge_norm_vector(f, [(0, 0), (1, 0), (0, 1)]) == (1, 1, 2)
    assert edge_norm_vector(f, [(2, 1)] * 3) == (0, 0, 0)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([3, 5]), st.sampled_from([2, 3]), st.data())
def test_edge_norms_invariant_under_isometries(q, d, data):
    f = field_of_order(q)
    k = data.draw(st.integers(1, 3))
    P = np.array(data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=d, max_size=d),
                                    min_size=k + 1, max_size=k + 1)))
    tau = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=d, max_size=d)))
    mats = enumerate_orthogonal(q, d, False)
    O = mats[data.draw(st.integers(0, len(mats) - 1))].as_array()
    image = f.vadd(f.vdot(P[:, None, :], O), tau)
    assert edge_norm_vector(f, P) == edge_norm_vector(f, image)


def test_vector_codes_roundtrip():
    for vec in itertools.product(range(3), repeat=3):
        assert decode_vector(encode_vector(vec, 3), 3, 2) == vec


def test_congruence_lemma_basic():
    P = np.array([[0, 0], [1, 0], [0, 1]])
    assert verify_congruence_lemma(P, P, 5, 2)
    assert verify_congruence_lemma(P, (P + [2, 3]) % 5, 5, 2)
    with pytest.raises(ValueError):
        verify_congruence_lemma([[0, 0], [1, 1], [2, 2]], P, 5, 2)


def test_mirror_image_needs_reflection():
    P = np.array([[0, 0], [1, 0], [0, 1]])
    mirror = P[:, ::-1]
    assert edge_norm_vector(field_of_order(3), P) == edge_norm_vector(field_of_order(3), mirror[[0, 2, 1]])
    assert verify_congruence_lemma(P, mirror[[0, 2, 1]][[0, 1, 2]], 3, 2, special=False)


@pytest.mark.parametrize('q,d', [(3, 2), (5, 2), (3, 3)])
def test_congruence_trials(q, d):
    r = congruence_trials(q, d, 60, seed=2)
    assert r['isometry_agree'] == r['pairs'] == r['forward_ok']
    assert r['special_mismatch_resolved'] == r['special_mismatch']


def test_census_small_cases():
    assert census(np.arange(27), 1, 3, 3).count == 3
    assert census([5], 2, 3).count == 0
    assert census([0, 1], 3, 3).count == 0


def naive_census(E, k, q, d):
    f = field_of_order(q)
    pts = space(q, d).points
    from ffsimplex.geometry import is_nondegenerate
    out = set()
    for t in itertools.product(E, repeat=k + 1):
        P = pts[list(t)]
        if is_nondegenerate(f, P):
            out.add(edge_norm_vector(f, P))
    return out


@pytest.mark.parametrize('q,k,d,size,seed', [(3, 2, 3, 12, 1), (5, 2, 3, 10, 2), (9, 2, 3, 9, 3), (3, 3, 5, 9, 4)])
def test_exact_census_against_naive(q, k, d, size, seed):
    E = random_subset(q, d, size, seed)
    assert census(E, k, q, d).realized == naive_census(E, k, q, d)


def test_sampled_is_lower_bound_and_monotone():
    E = random_subset(3, 3, 15, 0)
    exact = census(E, 2, 3, 3)
    small = census(E, 2, 3, 3, mode='sampled', samples=200, seed=9)
    big = census(E, 2, 3, 3, mode='sampled', samples=5000, seed=9)
    assert small.realized <= big.realized <= exact.realized


def test_workers_do_not_change_exact_results():
    E = random_subset(3, 5, 30, 1)
    assert np.array_equal(census(E, 3, 3, workers=1).codes, census(E, 3, 3, workers=2).codes)


def test_census_cap():
    with pytest.raises(ValueError):
        census(np.arange(243), 3, 3, cap=1000)


def test_main_theorem_tiny_set():
    r = main_theorem_experiment(3, 3, 2 / 243, seed=0, samples=1000)
    assert r['E_size'] == 2 and r['count'] == 0 and r['below_hypothesis']


def test_pipeline_full_space_golden():
    rep = proof_pipeline(np.arange(5 ** 5), 3, (1, 1, 1), 5)
    assert rep.star_count == 3125 * 650 ** 3
    assert rep.sphere_sizes == [650] * 3 and rep.line_sizes == [325] * 3
    assert rep.projection_ok and rep.unit_norm_ok and rep.sphere_membership_ok
    assert rep.total_copies == 34011900
    assert rep.pattern_counts[(1, 1, 1)] == 3182400


def test_pipeline_rejects_non_square():
    with pytest.raises(ValueError):
        proof_pipeline(np.arange(3 ** 5), 3, (1, 2, 1), 3)
