"""Single-field corruptions of valid certificates, with an independent truth check.

The truth check goes through the library-side dataclasses and verifiers
(``CyclePackingCert.validate``, ``verify_grid_witness``,
``verify_linkage_pair_witness``), which share no code with
``certificates.verify_certificate``.
"""

import copy
import random

from cyclepack.errors import CyclePackError
from cyclepack.extraction import CyclePackingCert, pack_cycles, Constants
from cyclepack.generators import planted_driver, planted_gridwitness, planted_linkage_pair
from cyclepack.oracles import max_packing_congestion
from cyclepack.witness import (GridWitness, LinkagePairWitness, verify_grid_witness,
                               verify_linkage_pair_witness)


def valid_certificates(seed=0):
    """(name, graph, cert-json) triples of valid certificates of the three kinds."""
    out = []
    for k in (2, 3, 5):
        inst = planted_gridwitness(k)
        out.append(("grid", inst.graph, verify_grid_witness(inst.graph, inst.annotations["witness"]).to_json()))
    inst = planted_linkage_pair(1)
    an = inst.annotations
    wit = LinkagePairWitness(an["P"], an["Pback"], an["Q"], an["Qback"], 1)
    out.append(("linkage_pair", inst.graph, verify_linkage_pair_witness(inst.graph, wit).to_json()))
    for k, p in ((2, 3), (2, 4), (3, 2)):
        inst = planted_driver(k, p, "sparse", seed)
        cert = pack_cycles(inst.graph, inst.annotations["D"], k, p,
                           constants=Constants(*inst.annotations["constants"]))
        out.append(("packing", inst.graph, cert.to_json()))
    from conftest import random_graph
    rng = random.Random(seed)
    while sum(1 for name, _, _ in out if name == "packing") < 6:
        g = random_graph(6, 0.5, rng)
        for c in (1, 2, 4):
            size, fam = max_packing_congestion(g, c)
            if size:
                out.append(("packing", g, CyclePackingCert(tuple(fam), c, size).to_json()))
    return out


def truth(graph, cert):
    """Validity according to the library-side verifiers."""
    try:
        if cert.get("schema") != 1:
            return False
        if cert["kind"] == "cycle_packing":
            p, k = cert["p"], cert["k"]
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in (p, k)) or k < 0:
                return False
            cycles = cert["cycles"]
            for c in cycles:
                if not c or not all(isinstance(v, int) and 0 <= v < graph.n for v in c):
                    return False
            pc = CyclePackingCert(tuple(tuple(c) for c in cycles), p, k)
            pc.validate(graph)
            if "measured_congestion" in cert and cert["measured_congestion"] != pc.measured_congestion:
                return False
            return True
        body = cert["structure"]
        for key in ("paths", "links", "P", "Pback", "Q", "Qback"):
            fam = body.get(key, [])
            for p in fam:
                seq = p[2] if key == "links" else p
                if not all(isinstance(v, int) and 0 <= v < graph.n for v in seq):
                    return False
        if body["type"] == "grid":
            dtw = verify_grid_witness(graph, GridWitness.from_json(body))
        else:
            dtw = verify_linkage_pair_witness(graph, LinkagePairWitness.from_json(body))
        return dtw.lower_bound == cert["k"]
    except (CyclePackError, KeyError, TypeError, ValueError, IndexError):
        return False


def _vertex_lists(cert):
    """Paths to every vertex list inside the certificate, as (container, key) pairs."""
    spots = []
    if cert["kind"] == "cycle_packing":
        spots += [(cert["cycles"], i) for i in range(len(cert["cycles"]))]
    else:
        body = cert["structure"]
        if body["type"] == "grid":
            spots += [(body["paths"], i) for i in range(len(body["paths"]))]
            spots += [(entry, 2) for entry in body["links"]]
        else:
            for key in ("P", "Pback", "Q", "Qback"):
                spots += [(body[key], i) for i in range(len(body[key]))]
    return spots


def corrupt(graph, cert, rng):
    """A deep copy of ``cert`` with one field changed, and a short label."""
    c = copy.deepcopy(cert)
    spots = _vertex_lists(c)
    kind = c["kind"]
    options = ["vertex", "drop-vertex", "dup-vertex", "reverse", "claim"]
    if kind == "cycle_packing":
        options += ["drop-cycle", "p", "measured"]
    elif c["structure"]["type"] == "grid":
        options += ["marker", "drop-link", "link-index"]
    else:
        options += ["drop-path", "k"]
    what = rng.choice(options)
    if what in ("vertex", "drop-vertex", "dup-vertex", "reverse"):
        container, key = rng.choice(spots)
        seq = list(container[key])
        t = rng.randrange(len(seq))
        if what == "vertex":
            new = rng.choice([v for v in range(graph.n) if v != seq[t]] + [graph.n, -1])
            seq[t] = new
        elif what == "drop-vertex":
            del seq[t]
        elif what == "dup-vertex":
            seq.insert(t, seq[t])
        else:
            seq.reverse()
        container[key] = seq
    elif what == "claim":
        c["k"] = c["k"] + rng.choice([1, 2, 5])
    elif what == "drop-cycle":
        c["cycles"].pop(rng.randrange(len(c["cycles"])))
        c["k"] = c["k"]
    elif what == "p":
        c["p"] = max(0, c["measured_congestion"] - 1)
    elif what == "measured":
        c["measured_congestion"] += rng.choice([-1, 1])
    elif what == "marker":
        body = c["structure"]
        i = rng.randrange(len(body["paths"]))
        field = rng.choice(["a_ends", "b_starts"])
        body[field][i] = rng.choice([0, len(body["paths"][i]), body[field][i] + rng.choice([-2, 2])])
    elif what == "drop-link":
        links = c["structure"]["links"]
        links.pop(rng.randrange(len(links)))
    elif what == "link-index":
        entry = rng.choice(c["structure"]["links"])
        entry[0], entry[1] = entry[1], entry[0]
    elif what == "drop-path":
        fam = c["structure"][rng.choice(["P", "Pback", "Q", "Qback"])]
        fam.pop(rng.randrange(len(fam)))
    elif what == "k":
        c["structure"]["k"] += 1
    return c, what
