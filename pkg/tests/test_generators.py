import pytest

from cyclepack.digraph import Digraph
from cyclepack.errors import BadSpec
from cyclepack.generators import (GENERATORS, InstanceSpec, generate, grid, planted_clique,
                                  planted_cycles, planted_driver, planted_dual, random_digraph)
from cyclepack.linkage import is_dual, is_well_linked
from cyclepack.oracles import gap_report

SMALL = {
    "grid": (3, 4), "grid-cyl": (3, 4), "planted-cycles": (3, 1), "planted-clique": (5, 3),
    "planted-gridwitness": (3,), "planted-linkage-pair": (1,), "planted-dual": (2, 2),
    "planted-dense": (6,), "planted-sparse": (4, 3, 1), "planted-crossing": (2, 3),
    "planted-walk-system": (1, 1, 2), "planted-driver": (2, 3, "sparse"), "random": (8, 20),
}


def test_every_generator_is_covered():
    assert set(SMALL) == set(GENERATORS)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_generate_is_deterministic(name):
    a = generate(InstanceSpec(name, SMALL[name], seed=4))
    b = generate(InstanceSpec(name, SMALL[name], seed=4))
    assert a.graph.arcs == b.graph.arcs
    assert a.to_json() == b.to_json()
    assert isinstance(a.graph, Digraph)


def test_bad_specs():
    with pytest.raises(BadSpec):
        generate(InstanceSpec("nope"))
    with pytest.raises(BadSpec):
        generate(InstanceSpec("grid", (1, 2, 3)))
    with pytest.raises(BadSpec):
        generate(InstanceSpec("grid", ("x", 2)))
    with pytest.raises(BadSpec):
        random_digraph(3, 7)
    with pytest.raises(BadSpec):
        planted_driver(2, 5)


def test_grid_shapes():
    g = grid(3, 3).graph
    assert g.n == 9 and g.m == 24
    cyl = grid(2, 3, cylindrical=True).graph
    assert all((u, v) not in cyl.arcs or (v, u) not in cyl.arcs for u, v in cyl.arcs)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_planted_cycles_annotations(k):
    inst = planted_cycles(k, 1, seed=k)
    rep = gap_report(inst.graph)
    assert rep.cp_1 == rep.fvs_opt == k
    for cyc in inst.annotations["packing"]:
        assert all(inst.graph.has_arc(cyc[t], cyc[(t + 1) % len(cyc)]) for t in range(len(cyc)))


def test_planted_clique_terminals_are_well_linked():
    inst = planted_clique(6, 4, seed=1)
    assert is_well_linked(inst.graph, inst.annotations["D"]).verdict


def test_planted_dual_is_dual():
    inst = planted_dual(2, 2, seed=3, noise=2)
    L, back = inst.annotations["L"], inst.annotations["Lback"]
    assert len(L) == 2 * 2 + 1 and is_dual(L, back)


def test_planted_driver_annotations():
    inst = planted_driver(2, 4, "sparse", seed=0)
    d, a, b, q = inst.annotations["constants"]
    assert len(inst.annotations["D"]) == 4 * (a + 2) * b
