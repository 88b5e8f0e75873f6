from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclepack.errors import HypothesisViolated
from cyclepack.partition import (OrderedBipartite, SegmentPair, average_degree, disjoint_pairs,
                                 partition_segments)

from instances import count_edges, min_degree_instance, partition_instance


def complete(a, b):
    return OrderedBipartite.from_matrix(np.ones((a, b), dtype=bool))


def disjoint_segments(pairs):
    xs = sorted((p.i0, p.i1) for p in pairs)
    ys = sorted((p.j0, p.j1) for p in pairs)
    return all(s[1] <= t[0] for s, t in zip(xs, xs[1:])) and all(s[1] <= t[0] for s, t in zip(ys, ys[1:]))


def test_ordered_bipartite_validation():
    with pytest.raises(ValueError):
        OrderedBipartite(2, 2, [(0, 2)])
    with pytest.raises(ValueError):
        OrderedBipartite(2, 2, [(0, 1), (0, 1)])
    g = OrderedBipartite(2, 3, [(0, 0), (1, 2)])
    assert g.min_degree() == 0
    assert g.count(SegmentPair(0, 2, 0, 3)) == 2


def test_depth_zero_is_the_whole_graph():
    g = complete(3, 4)
    assert partition_segments(g, 0, 1, check=False) == [SegmentPair(0, 3, 0, 4)]


def test_complete_bipartite_depth_one():
    g = complete(100, 100)
    pairs = partition_segments(g, 1, 3, n=200)
    assert len(pairs) == 2
    assert all(g.count(p) >= 600 for p in pairs)
    assert disjoint_segments(pairs)


def test_threshold_guards():
    with pytest.raises(HypothesisViolated):
        partition_segments(complete(4, 4), 1, Fraction(1, 8))   # d*16 - 1 = 1
    with pytest.raises(HypothesisViolated):
        partition_segments(OrderedBipartite(10, 10, [(i, i) for i in range(10)]), 1, 1)


def test_small_d_is_refused():
    # the edge threshold (d*4^4 - 1) * n = 5 * 43 is met, but each median split
    # drops one vertex per side, so three levels of splitting cannot fit in |X| = 8
    rng = np.random.default_rng(2)
    flat = rng.choice(8 * 35, size=242, replace=False)
    g = OrderedBipartite(8, 35, np.stack([flat // 35, flat % 35], axis=1))
    with pytest.raises(HypothesisViolated):
        partition_segments(g, 3, Fraction(3, 128))


def test_disjoint_pairs_at_the_degree_bound():
    g = complete(512, 512)
    (pair,) = disjoint_pairs(g, 1, 1)
    assert average_degree(g, pair) >= 1


def test_disjoint_pairs_below_bound():
    with pytest.raises(HypothesisViolated):
        disjoint_pairs(complete(100, 100), 1, 1)


@pytest.mark.parametrize("seed", range(60))
def test_partition_postconditions(seed):
    rng = np.random.default_rng(seed)
    g, h, d = partition_instance(rng, max_n=120)
    pairs = partition_segments(g, h, d)
    assert len(pairs) == 2 ** h
    assert disjoint_segments(pairs)
    n = g.a + g.b
    for p in pairs:
        assert count_edges(g, p) >= d * n


@pytest.mark.parametrize("k,r", [(1, 1), (2, 1), (1, 2), (3, 1)])
def test_disjoint_pairs_postconditions(k, r):
    rng = np.random.default_rng(k * 10 + r)
    g, matrix = min_degree_instance(rng, k, r)
    pairs = disjoint_pairs(g, k, r)
    assert len(pairs) == k
    assert disjoint_segments(pairs)
    h = 0
    while 2 ** h < 2 * k:
        h += 1
    n = g.a + g.b
    for p in pairs:
        direct = int(matrix[p.i0:p.i1, p.j0:p.j1].sum())
        assert 2 * direct >= r * p.size
        assert (p.i1 - p.i0) * 2 ** h < 2 * n and (p.j1 - p.j0) * 2 ** h < 2 * n


@pytest.mark.parametrize("seed", range(25))
def test_matrix_and_edge_backends_agree(seed):
    rng = np.random.default_rng(100 + seed)
    g, h, d = partition_instance(rng, max_n=120)
    dense = np.zeros((g.a, g.b), dtype=bool)
    dense[g.edges[:, 0], g.edges[:, 1]] = True
    m = OrderedBipartite.from_matrix(dense)
    assert m.m == g.m and m.min_degree() == g.min_degree()
    assert partition_segments(m, h, d) == partition_segments(g, h, d)
    assert np.array_equal(np.sort(m.edges, axis=0), np.sort(g.edges, axis=0))


@given(st.integers(0, 2 ** 32 - 1))
def test_partition_is_deterministic(seed):
    rng = np.random.default_rng(seed)
    g, h, d = partition_instance(rng, max_n=60)
    assert partition_segments(g, h, d) == partition_segments(g, h, d)
