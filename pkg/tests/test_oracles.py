import random

import networkx as nx
import pytest
from hypothesis import given, settings

from cyclepack.digraph import Digraph, is_acyclic, is_simple_cycle
from cyclepack.errors import CapExceeded
from cyclepack.generators import planted_cycles
from cyclepack.oracles import (GapReport, enumerate_simple_cycles, gap_report,
                               max_packing_congestion, min_fvs, packing_congestion, reports_to_csv)

from conftest import digraphs, random_graph, to_nx
from oracle_helpers import all_simple_cycles_by_subsets, brute_min_fvs, brute_packing, ilp_packing


def _canonical(cycle):
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


@given(digraphs(max_n=6))
def test_cycles_match_subset_enumeration(g):
    ours = enumerate_simple_cycles(g)
    assert set(ours) == all_simple_cycles_by_subsets(g)
    assert len(ours) == len(set(ours))
    assert ours == sorted(ours, key=lambda c: (len(c), c))


@given(digraphs(max_n=8))
def test_cycles_match_networkx(g):
    theirs = {_canonical(list(c)) for c in nx.simple_cycles(to_nx(g))}
    assert set(enumerate_simple_cycles(g)) == theirs


def test_cycle_cap():
    n = 7
    g = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])
    with pytest.raises(CapExceeded):
        enumerate_simple_cycles(g, cap=100)


@settings(max_examples=40)
@given(digraphs(max_n=7))
def test_packing_matches_integer_program(g):
    cycles = enumerate_simple_cycles(g)
    for c in (1, 2, 4):
        for distinct in (False, True):
            size, family = max_packing_congestion(g, c, distinct)
            assert size == ilp_packing(cycles, g.n, c, distinct)
            assert len(family) == size
            assert all(is_simple_cycle(g, cy) for cy in family)
            assert packing_congestion(family) <= c
            if distinct:
                assert len(set(family)) == len(family)


@given(digraphs(max_n=4))
def test_packing_matches_exhaustive_recursion(g):
    cycles = enumerate_simple_cycles(g)
    for c in (1, 2):
        for distinct in (False, True):
            assert max_packing_congestion(g, c, distinct)[0] == brute_packing(cycles, g.n, c, distinct)


@given(digraphs(max_n=7))
def test_fvs_matches_brute_force(g):
    size, S = min_fvs(g)
    assert size == brute_min_fvs(g) == len(S)
    assert is_acyclic(g, S)


def test_fvs_cap():
    with pytest.raises(CapExceeded):
        min_fvs(Digraph(25, []))


@pytest.mark.parametrize("k", [1, 2, 4])
def test_planted_cycles_ground_truth(k):
    inst = planted_cycles(k, 1, seed=k)
    rep = gap_report(inst.graph)
    assert rep.fvs_opt == rep.cp_1 == k
    assert rep.ok


def test_gap_report_on_random_graphs():
    rng = random.Random(4)
    reports = []
    for _ in range(25):
        g = random_graph(rng.randint(2, 7), rng.uniform(0.1, 0.5), rng)
        rep = gap_report(g)
        assert rep.cp_1 <= rep.cp_2 <= rep.cp_4
        assert rep.fvs_opt >= rep.cp_1
        reports.append(rep)
    csv_text = reports_to_csv(reports)
    lines = csv_text.strip().splitlines()
    assert lines[0] == ",".join(GapReport.csv_header())
    assert len(lines) == 26
    assert reports[0].to_json()["kind"] == "gap_report"


def test_packing_rejects_bad_congestion():
    with pytest.raises(ValueError):
        max_packing_congestion(Digraph(2, [(0, 1), (1, 0)]), 0)


def test_two_cycle_multiplicity():
    g = Digraph(2, [(0, 1), (1, 0)])
    assert max_packing_congestion(g, 4)[0] == 4
    assert max_packing_congestion(g, 4, distinct=True)[0] == 1


def test_dense_packings_match_integer_program():
    rng = random.Random(21)
    for _ in range(15):
        g = random_graph(rng.randint(5, 8), rng.uniform(0.5, 0.9), rng)
        cycles = enumerate_simple_cycles(g)
        for c in (1, 2, 4):
            assert max_packing_congestion(g, c)[0] == ilp_packing(cycles, g.n, c)
