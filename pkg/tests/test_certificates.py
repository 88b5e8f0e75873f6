import random
import warnings

import pytest

from cyclepack.certificates import verify_certificate
from cyclepack.digraph import Digraph
from cyclepack.errors import UnknownKind
from cyclepack.generators import planted_walk_system
from cyclepack.linkage import is_well_linked
from cyclepack.witness import Separation, balanced_separation

from conftest import random_graph
from corruptions import corrupt, truth, valid_certificates


@pytest.fixture(scope="module")
def certs():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return valid_certificates()


def test_valid_certificates_accepted(certs):
    for name, g, cert in certs:
        ok, diag = verify_certificate(g, cert)
        assert ok, (name, diag)


def test_corruptions_agree_with_library_verifiers(certs):
    rng = random.Random(1)
    for t in range(300):
        name, g, cert = certs[t % len(certs)]
        bad, what = corrupt(g, cert, rng)
        ok, diag = verify_certificate(g, bad)
        assert ok == truth(g, bad), (name, what, diag)
        if not ok:
            assert diag and ":" in diag[0]


def test_packing_clauses():
    g = Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    base = {"schema": 1, "kind": "cycle_packing", "p": 2, "k": 2, "cycles": [[0, 1], [1, 2]]}
    assert verify_certificate(g, base) == (True, [])
    assert verify_certificate(g, {**base, "p": 1})[1][0].startswith("congestion")
    assert verify_certificate(g, {**base, "k": 3})[1][0].startswith("count")
    assert verify_certificate(g, {**base, "cycles": [[0, 2]]})[1][0].startswith("count")
    assert verify_certificate(g, {**base, "k": 1, "cycles": [[0, 2]]})[1][0].startswith("cycle")
    assert verify_certificate(g, {**base, "schema": 2})[0] is False


def test_separation_certificates():
    rng = random.Random(2)
    for _ in range(20):
        g = random_graph(rng.randint(3, 7), 0.3, rng)
        W = list(range(g.n))
        sep = balanced_separation(g, W, 2)
        if sep is None:
            continue
        body = sep.to_json(W, 2)
        assert verify_certificate(g, body)[0]
        if sep.order:
            assert not verify_certificate(g, {**body, "order": sep.order - 1})[0]
    path = Digraph(3, [(0, 1), (1, 2)])
    good = Separation(frozenset({0, 1}), frozenset({1, 2}))
    bad = Separation(frozenset({2}), frozenset({0, 1}))  # arc 1 -> 2 leaves Y - X into X - Y
    assert verify_certificate(path, good.to_json())[0]
    ok, diag = verify_certificate(path, bad.to_json())
    assert not ok and diag[0].startswith("arcs")


def test_well_linked_certificates():
    rng = random.Random(3)
    seen = {True: 0, False: 0}
    for _ in range(30):
        g = random_graph(rng.randint(3, 7), rng.uniform(0.2, 0.7), rng)
        W = rng.sample(range(g.n), rng.randint(2, g.n))
        report = is_well_linked(g, W)
        seen[report.verdict] += 1
        assert verify_certificate(g, report.to_json())[0]
        flipped = {**report.to_json(), "verdict": not report.verdict}
        flipped.pop("witness", None)
        assert not verify_certificate(g, flipped)[0]
    assert seen[True] and seen[False]


def test_matched_clique_certificate():
    inst = planted_walk_system(2, 2, 2)
    report = is_well_linked(inst.graph, inst.annotations["D"])
    assert report.method == "matched-clique"
    body = report.to_json()
    assert verify_certificate(inst.graph, body)[0]
    body["partners"] = body["partners"][1:]
    assert not verify_certificate(inst.graph, body)[0]


def test_unknown_kind():
    g = Digraph(1, [])
    with pytest.raises(UnknownKind):
        verify_certificate(g, {"schema": 1, "kind": "mystery"})
    with pytest.raises(UnknownKind):
        verify_certificate(g, [])
