import itertools
import json
import math

import numpy as np
import pytest

from ffsimplex.euclid_graph import NormColoring, build_graph
from ffsimplex.mixing import (PatternGraph, WorkCapExceeded, count_colored_copies, count_colored_stars,
                              edge_discrepancy, full_space_star_identity, mixing_trials, neighborhood_variance,
                              single_set_copies)
from ffsimplex.scheme import build_omega


def naive_copies(coloring, H, sets):
    return sum(all(coloring.color(int(t[i]), int(t[j])) == c for i, j, c in H.edges)
               for t in itertools.product(*sets))


@pytest.mark.parametrize('q,d,a', [(3, 2, 1), (5, 2, 0), (5, 3, 2), (9, 2, 4)])
def test_mixing_trials_hold(q, d, a):
    r = mixing_trials(build_graph(q, d, a), 30, seed=3)
    assert r['variance_violations'] == 0 and r['discrepancy_violations'] == 0


def test_variance_and_edges_by_hand():
    g = build_graph(3, 2, 1)
    A = np.array([[g.is_adjacent(x, y) and x != y for y in range(9)] for x in range(9)], dtype=int)
    B, C = [0, 1, 2], [3, 4]
    e = edge_discrepancy(g, B, C)
    assert e.edges == A[np.ix_(B, C)].sum()
    v = neighborhood_variance(g, B)
    counts = A[:, B].sum(axis=1)
    assert v.lhs == pytest.approx(((counts - 4 * 3 / 9) ** 2).sum())


def test_too_small_lambda_is_caught():
    g = build_graph(5, 2, 1)
    r = mixing_trials(g, 20, seed=0, lam=0.01)
    assert r['variance_violations'] > 0


def test_full_space_identity():
    c = NormColoring(3, 3)
    every = np.arange(c.n)
    for colors in [(1,), (1, 2), (0, 1, 2)]:
        rep = count_colored_stars(c, every, [every] * len(colors), colors)
        assert rep.exact_count == full_space_star_identity(c, colors)
        assert rep.relative_deviation == 0


def test_stars_equal_copies_and_naive():
    gen = np.random.default_rng(11)
    for coloring in (NormColoring(5, 2), build_omega(3, 5).coloring()):
        for _ in range(5):
            colors = list(gen.choice(coloring.colors, size=2))
            sets = [gen.choice(coloring.n, size=7, replace=False) for _ in range(3)]
            H = PatternGraph.star(colors)
            stars = count_colored_stars(coloring, sets[0], sets[1:], colors).exact_count
            assert stars == count_colored_copies(coloring, H, sets).exact_count == naive_copies(coloring, H, sets)


def test_triangle_copies_against_naive():
    c = NormColoring(3, 3)
    H = PatternGraph.complete(3, (1, 2, 1))
    sets = [np.arange(0, 27, 2), np.arange(1, 27, 2), np.arange(27)]
    assert count_colored_copies(c, H, sets).exact_count == naive_copies(c, H, sets)


def test_sample_mode_close_to_exact():
    c = NormColoring(5, 2)
    H = PatternGraph.complete(3, (1, 1, 1))
    sets = [np.arange(25)] * 3
    exact = count_colored_copies(c, H, sets).exact_count
    est = count_colored_copies(c, H, sets, mode='sample', samples=200_000, seed=4)
    assert abs(est.exact_count - exact) <= 5 * est.standard_error + 1


def test_work_cap():
    c = NormColoring(3, 3)
    with pytest.raises(WorkCapExceeded):
        count_colored_copies(c, PatternGraph.complete(3, (1, 1, 1)), [np.arange(27)] * 3, cap=10)


def test_pattern_graph():
    H = PatternGraph.complete(3, (1, 1, 1))
    assert H.automorphism_count() == 6
    assert PatternGraph.from_json(H.to_json()) == H
    assert PatternGraph.star((1, 2)).automorphism_count() == 1
    with pytest.raises(ValueError):
        PatternGraph(2, ((0, 0, 1),))
    with pytest.raises(ValueError):
        PatternGraph(2, ((0, 1, 1), (1, 0, 2)))


def test_single_set_triangles():
    c = NormColoring(3, 2)
    H = PatternGraph.complete(3, (1, 1, 1))
    every = np.arange(9)
    expect = sum(1 for t in itertools.combinations(range(9), 3)
                 if all(c.color(x, y) == 1 for x, y in itertools.combinations(t, 2)))
    assert single_set_copies(c, H, every) == expect


def test_big_counts_are_exact():
    c = NormColoring(7, 5)
    every = np.arange(c.n)
    for k in (4, 5):  # int64 path, then object path past 2^62
        rep = count_colored_stars(c, every, [every] * k, (1,) * k)
        assert rep.exact_count == c.n * c.valency(1) ** k
        assert isinstance(rep.exact_count, int) and rep.exact_count > 2 ** 53
