"""Independent verification of every certificate kind.

Only the digraph primitives are used: each claim is re-derived from the
graph and the JSON body, never by calling the code that produced it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter

from .digraph import Digraph, reachable
from .errors import UnknownKind

WELL_LINKED_CAP = 12
TOLERANCE = 1e-9


class _Fail(Exception):
    def __init__(self, clause: str, detail: str):
        super().__init__(f"{clause}: {detail}")
        self.clause = clause


def _require(cond: bool, clause: str, detail: str) -> None:
    if not cond:
        raise _Fail(clause, detail)


def _vertex_list(graph: Digraph, seq, clause: str) -> list[int]:
    _require(isinstance(seq, list) and len(seq) > 0, clause, "expected a nonempty vertex list")
    for v in seq:
        _require(isinstance(v, int) and not isinstance(v, bool) and 0 <= v < graph.n,
                 clause, f"{v!r} is not a vertex")
    return seq


def _walk(graph: Digraph, seq, clause: str) -> list[int]:
    seq = _vertex_list(graph, seq, clause)
    for u, v in zip(seq, seq[1:]):
        _require(graph.has_arc(u, v), clause, f"({u}, {v}) is not an arc")
    return seq


def _path(graph: Digraph, seq, clause: str) -> list[int]:
    seq = _walk(graph, seq, clause)
    _require(len(set(seq)) == len(seq), clause, f"{seq} repeats a vertex")
    return seq


def _disjoint(paths, clause: str) -> None:
    owner: dict[int, int] = {}
    for idx, p in enumerate(paths):
        for v in p:
            _require(owner.setdefault(v, idx) == idx, clause, f"vertex {v} on two paths")


def _max_congestion(paths) -> int:
    counts = Counter(v for p in paths for v in p)
    return max(counts.values(), default=0)


# -- cycle packings --------------------------------------------------------

def _check_packing(graph: Digraph, cert: dict) -> None:
    p, k, cycles = cert.get("p"), cert.get("k"), cert.get("cycles")
    _require(isinstance(p, int) and p >= 1, "p", "p must be a positive integer")
    _require(isinstance(k, int) and k >= 0, "k", "k must be a non-negative integer")
    _require(isinstance(cycles, list), "cycles", "cycles must be a list")
    _require(len(cycles) >= k, "count", f"{len(cycles)} cycles, fewer than k = {k}")
    for c in cycles:
        c = _vertex_list(graph, c, "cycle")
        _require(len(c) >= 2, "cycle", f"{c} is too short")
        _require(len(set(c)) == len(c), "cycle", f"{c} is not simple")
        for u, v in zip(c, c[1:] + c[:1]):
            _require(graph.has_arc(u, v), "cycle", f"({u}, {v}) is not an arc")
    measured = _max_congestion(cycles)
    _require(measured <= p, "congestion", f"measured congestion {measured} exceeds p = {p}")
    if "measured_congestion" in cert:
        _require(cert["measured_congestion"] == measured, "measured_congestion",
                 f"declared {cert['measured_congestion']}, actual {measured}")


# -- separations -----------------------------------------------------------

def _check_separation(graph: Digraph, cert: dict) -> None:
    sides = []
    for name in ("X", "Y"):
        seq = cert.get(name)
        _require(isinstance(seq, list), name, "expected a vertex list")
        sides.append(set(_vertex_list(graph, seq, name)) if seq else set())
    X, Y = sides
    _require(X | Y == set(range(graph.n)), "cover", "X and Y do not cover the vertex set")
    only_x, only_y = X - Y, Y - X
    for u, v in graph.arcs:
        _require(not (u in only_y and v in only_x), "arcs", f"arc ({u}, {v}) goes from Y-X to X-Y")
    order = len(X & Y)
    if "order" in cert:
        _require(cert["order"] == order, "order", f"declared {cert['order']}, actual {order}")
    if "w" in cert:
        _require(order <= cert["w"], "order", f"order {order} exceeds w = {cert['w']}")
    W = set(cert.get("W", []))
    if W:
        _require(4 * len(X & W) >= len(W) and 4 * len(Y & W) >= len(W), "balance",
                 "a side holds fewer than |W|/4 elements of W")


# -- well-linkedness -------------------------------------------------------

def _disjoint_paths(graph: Digraph, A, B, removed) -> int:
    """Number of vertex-disjoint A -> B paths avoiding ``removed`` (augmenting DFS on split vertices)."""
    # node 2v = v_in, 2v+1 = v_out; residual capacities in a dict
    cap: dict[tuple[int, int], int] = {}
    adj: dict[int, set[int]] = {}

    def edge(u, v, c):
        cap[(u, v)] = cap.get((u, v), 0) + c
        cap.setdefault((v, u), 0)
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    src, snk = -1, -2
    for v in range(graph.n):
        if v not in removed:
            edge(2 * v, 2 * v + 1, 1)
    for u, v in graph.arcs:
        if u not in removed and v not in removed:
            edge(2 * u + 1, 2 * v, 1)
    for a in A:
        edge(src, 2 * a, 1)
    for b in B:
        edge(2 * b + 1, snk, 1)
    flow = 0
    while True:
        parent = {src: None}
        stack = [src]
        while stack and snk not in parent:
            u = stack.pop()
            for v in sorted(adj.get(u, ())):
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    stack.append(v)
        if snk not in parent:
            return flow
        v = snk
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


def _check_partners(graph: Digraph, W: list[int], partners) -> None:
    """Distinct partners outside ``W``, two-way arcs to their terminal, pairwise two-way arcs."""
    _require(isinstance(partners, list) and all(isinstance(x, list) and len(x) == 2 for x in partners),
             "partners", "partners must be a list of [terminal, partner] pairs")
    pmap = {}
    for w, m in partners:
        _vertex_list(graph, [w, m], "partners")
        pmap[w] = m
    _require(sorted(pmap) == W, "partners", "every terminal needs exactly one partner")
    chosen = list(pmap.values())
    _require(len(set(chosen)) == len(chosen) and not set(chosen) & set(W), "partners",
             "partners must be distinct and lie outside W")
    for w, m in pmap.items():
        _require(graph.has_arc(w, m) and graph.has_arc(m, w), "partners",
                 f"{w} and its partner {m} are not joined both ways")
    for x in chosen:
        for y in chosen:
            _require(x == y or graph.has_arc(x, y), "partners", f"partners {x}, {y} are not adjacent")


def _check_well_linked(graph: Digraph, cert: dict) -> None:
    W = sorted(set(_vertex_list(graph, cert.get("W"), "W")))
    verdict = cert.get("verdict")
    _require(isinstance(verdict, bool), "verdict", "verdict must be a boolean")
    if verdict:
        if all(graph.has_arc(u, v) for u in W for v in W if u != v):
            return
        if "partners" in cert:
            _check_partners(graph, W, cert["partners"])
            return
        _require(len(W) <= WELL_LINKED_CAP, "cap", f"|W| = {len(W)} too large to re-verify")
        for size in range(1, len(W) // 2 + 1):
            for A in itertools.combinations(W, size):
                rest = [w for w in W if w not in A]
                for B in itertools.combinations(rest, size):
                    removed = set(W) - set(A) - set(B)
                    _require(_disjoint_paths(graph, A, B, removed) >= size, "linkage",
                             f"no full linkage from {A} to {B}")
        return
    wit = cert.get("witness")
    _require(isinstance(wit, dict), "witness", "a negative verdict needs a witness")
    A, B, S = set(wit.get("A", [])), set(wit.get("B", [])), set(wit.get("separator", []))
    _require(len(A) == len(B) > 0 and not (A & B), "witness", "A and B must be disjoint and equal-sized")
    _require(A | B <= set(W), "witness", "A and B must lie in W")
    _require(len(S) < len(A), "witness", "separator is not smaller than |A|")
    removed = (set(W) - A - B) | S
    hit = reachable(graph, A, removed)
    _require(not (hit & B), "witness", "separator does not cut every A -> B path")


# -- treewidth witnesses ---------------------------------------------------

def _check_grid(graph: Digraph, body: dict, claimed) -> None:
    paths = body.get("paths")
    _require(isinstance(paths, list) and len(paths) >= 2, "size", "need at least two paths")
    k = len(paths)
    paths = [_path(graph, p, "path") for p in paths]
    _disjoint(paths, "disjointness-paths")
    a_ends, b_starts = body.get("a_ends"), body.get("b_starts")
    _require(isinstance(a_ends, list) and isinstance(b_starts, list)
             and len(a_ends) == k and len(b_starts) == k, "markers", "one marker pair per path")
    for i, p in enumerate(paths):
        _require(isinstance(a_ends[i], int) and isinstance(b_starts[i], int)
                 and 1 <= a_ends[i] <= b_starts[i] < len(p), "markers", f"path {i}")
    links = body.get("links")
    _require(isinstance(links, list), "links", "links must be a list")
    table = {}
    for entry in links:
        _require(isinstance(entry, list) and len(entry) == 3, "links", "malformed link entry")
        i, j, p = entry
        _require(isinstance(i, int) and isinstance(j, int) and 0 <= i < k and 0 <= j < k and i != j,
                 "links", f"bad link index ({i}, {j})")
        _require((i, j) not in table, "links", f"duplicate link ({i}, {j})")
        table[(i, j)] = _path(graph, p, "link-path")
    _require(len(table) == k * (k - 1), "links", "a link for every ordered pair is required")
    _disjoint([table[key] for key in sorted(table)], "disjointness")
    for (i, j), p in table.items():
        _require(p[0] in set(paths[i][b_starts[i]:]), "link-endpoints", f"L[{i},{j}] start")
        _require(p[-1] in set(paths[j][:a_ends[j]]), "link-endpoints", f"L[{i},{j}] end")
    _require(claimed == -(-k // 8), "k", f"claimed bound {claimed} differs from ceil(k/8) = {-(-k // 8)}")


def _check_linkage_pair(graph: Digraph, body: dict, claimed) -> None:
    extra = body.get("extra_arcs", [])
    if extra:
        graph = graph.with_arcs(tuple(a) for a in extra)
    k = body.get("k")
    _require(isinstance(k, int) and k >= 1, "size", "k must be a positive integer")
    fams = {}
    for name in ("P", "Pback", "Q", "Qback"):
        fam = body.get(name)
        _require(isinstance(fam, list) and fam, "size", f"{name} must be a nonempty list")
        fams[name] = [_path(graph, p, "path") for p in fam]
        _require(_max_congestion(fams[name]) <= 2, "congestion", f"{name} has congestion above 2")
        starts = [p[0] for p in fams[name]]
        ends = [p[-1] for p in fams[name]]
        _require(len(set(starts)) == len(starts) and len(set(ends)) == len(ends), "path",
                 f"{name} repeats an endpoint")

    def ends(name, pos):
        return {p[pos] for p in fams[name]}

    _require(ends("P", 0) == ends("Pback", -1) and ends("P", -1) == ends("Pback", 0),
             "duality", "P and Pback are not dual")
    _require(ends("Q", 0) == ends("Qback", -1) and ends("Q", -1) == ends("Qback", 0),
             "duality", "Q and Qback are not dual")
    size = len(fams["P"])
    _require(size > 24 * k, "size", f"|P| = {size} must exceed 24k")
    q_sets = [set(q) for q in fams["Q"]]
    p_sets = [set(p) for p in fams["P"]]
    deg_p = [sum(1 for qs in q_sets if ps & qs) for ps in p_sets]
    deg_q = [sum(1 for ps in p_sets if ps & qs) for qs in q_sets]
    md = min(deg_p + deg_q)
    bound = 8 * k * math.log(size / (24 * k)) / math.log(4 / 3) + 24 * k + 4
    _require(md >= bound + TOLERANCE, "degree-bound", f"minimum degree {md} below {bound:.6f}")
    _require(claimed == k, "k", f"claimed bound {claimed} differs from k = {k}")


def _check_dtw(graph: Digraph, cert: dict) -> None:
    body = cert.get("structure")
    _require(isinstance(body, dict), "structure", "missing structure")
    kind = body.get("type")
    if kind == "grid":
        _check_grid(graph, body, cert.get("k"))
    elif kind == "linkage_pair":
        _check_linkage_pair(graph, body, cert.get("k"))
    else:
        raise _Fail("structure", f"unknown structure type {kind!r}")


CHECKERS = {
    "cycle_packing": _check_packing,
    "separation": _check_separation,
    "well_linked": _check_well_linked,
    "dtw_witness": _check_dtw,
}


def verify_certificate(graph: Digraph, cert: dict) -> tuple[bool, list[str]]:
    """Return ``(accepted, diagnostics)``; the first diagnostic names the violated clause."""
    if not isinstance(cert, dict):
        raise UnknownKind("certificate must be a JSON object")
    kind = cert.get("kind")
    if kind not in CHECKERS:
        raise UnknownKind(f"unknown certificate kind {kind!r}")
    if cert.get("schema") != 1:
        return False, ["schema: expected schema 1"]
    try:
        CHECKERS[kind](graph, cert)
    except _Fail as exc:
        return False, [str(exc)]
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        return False, [f"malformed: {exc}"]
    return True, []
