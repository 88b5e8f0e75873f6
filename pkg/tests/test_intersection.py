import itertools
import math
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from cyclepack.errors import HypothesisViolated, NotFound
from cyclepack.partition import SegmentPair
from cyclepack.intersection import (
    ColoredGraph, degeneracy, independent_transversal, induced, intersection_graph,
    max_core, min_degree_core,
)


def random_adj(n, p, rng):
    adj = {v: set() for v in range(n)}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def brute_degeneracy(adj):
    nodes = list(adj)
    best = 0
    for size in range(1, len(nodes) + 1):
        for sub in itertools.combinations(nodes, size):
            keep = set(sub)
            best = max(best, min(len(adj[v] & keep) for v in sub))
    return best


@st.composite
def undirected(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    adj = {v: set() for v in range(n)}
    for u, v in chosen:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def test_intersection_graph_edges():
    ig = intersection_graph([(0, 1, 2), (3, 4)], [(2, 5), (6,), (4, 1)])
    assert ig.edges == {(0, 0), (0, 2), (1, 2)}
    assert ig.degrees() == ([2, 1], [1, 0, 2])
    assert ig.min_degree() == 0


def test_intersection_graph_matches_pairwise_check():
    rng = random.Random(3)
    for _ in range(30):
        left = [tuple(rng.sample(range(20), 3)) for _ in range(5)]
        right = [tuple(rng.sample(range(20), 4)) for _ in range(6)]
        ig = intersection_graph(left, right)
        expected = {(i, j) for i, p in enumerate(left) for j, q in enumerate(right) if set(p) & set(q)}
        assert ig.edges == expected


def test_ordered_view_relabels_positions():
    ig = intersection_graph([(0,), (1,)], [(1,), (0,)])
    ob = ig.ordered([1, 0], [0, 1])
    assert ob.count(SegmentPair(0, 1, 0, 1)) == 1  # left 1 (position 0) meets right 0 (position 0)
    assert ob.count(SegmentPair(1, 2, 1, 2)) == 1


@given(undirected())
def test_degeneracy_matches_brute_force(adj):
    d, order = degeneracy(adj)
    assert d == brute_degeneracy(adj)
    assert sorted(order) == sorted(adj)


@given(undirected(max_n=10))
def test_degeneracy_matches_networkx_core_number(adj):
    g = nx.Graph()
    g.add_nodes_from(adj)
    g.add_edges_from((u, v) for u in adj for v in adj[u])
    d, _ = degeneracy(adj)
    assert d == max(nx.core_number(g).values(), default=0)


@given(undirected(max_n=10), st.integers(0, 4))
def test_cores(adj, d):
    core = max_core(adj, d)
    dg, _ = degeneracy(adj)
    if dg <= d:
        assert core is None
    else:
        assert min(len(ns) for ns in core.values()) > d
    core = min_degree_core(adj, d)
    if core is not None:
        assert min(len(ns) for ns in core.values()) >= d


def test_induced_restricts_neighbourhoods():
    adj = {0: {1, 2}, 1: {0}, 2: {0}}
    assert induced(adj, [0, 1]) == {0: {1}, 1: {0}}


def brute_transversal_exists(graph):
    for pick in itertools.product(*graph.classes):
        if all(v not in graph.adj[u] for u, v in itertools.combinations(pick, 2)):
            return True
    return False


def test_transversal_on_random_instances():
    rng = random.Random(11)
    for _ in range(80):
        r = rng.randint(2, 4)
        sizes = [rng.randint(1, 4) for _ in range(r)]
        n = sum(sizes)
        adj = random_adj(n, rng.choice([0.2, 0.4, 0.6]), rng)
        classes, start = [], 0
        for s in sizes:
            classes.append(tuple(range(start, start + s)))
            start += s
        graph = ColoredGraph(adj, classes)
        if brute_transversal_exists(graph):
            pick = independent_transversal(graph, check=False)
            assert all(v in c for c, v in zip(classes, pick))
            assert all(v not in adj[u] for u, v in itertools.combinations(pick, 2))
        else:
            with pytest.raises(NotFound):
                independent_transversal(graph, check=False)


def test_transversal_under_its_hypothesis():
    # classes of size >= 4e(r-1)d with a perfect matching between classes (1-degenerate pairs)
    rng = random.Random(5)
    r, d = 3, 1
    size = math.ceil(4 * math.e * (r - 1) * d)
    classes = [tuple(range(i * size, (i + 1) * size)) for i in range(r)]
    adj = {v: set() for c in classes for v in c}
    for i in range(r - 1):
        perm = list(classes[i + 1])
        rng.shuffle(perm)
        for u, v in zip(classes[i], perm):
            adj[u].add(v)
            adj[v].add(u)
    graph = ColoredGraph(adj, classes)
    pick = independent_transversal(graph, d)
    assert all(v not in adj[u] for u, v in itertools.combinations(pick, 2))


def test_hypothesis_is_checked():
    classes = [(0, 1), (2, 3)]
    graph = ColoredGraph({v: set() for v in range(4)}, classes)
    with pytest.raises(HypothesisViolated):
        independent_transversal(graph, 1)
    with pytest.raises(ValueError):
        independent_transversal(graph)


def test_colored_graph_rejects_bad_classes():
    with pytest.raises(ValueError):
        ColoredGraph({0: set(), 1: set()}, [(0,), (0, 1)])
    with pytest.raises(ValueError):
        ColoredGraph({0: set(), 1: set()}, [(0,)])
