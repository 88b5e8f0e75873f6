"""Vertex-disjoint linkages, well-linkedness and dual linkages.

Maximum linkages are computed as unit vertex-capacity flows through the
usual vertex-splitting reduction: every vertex ``v`` becomes an arc
``v_in -> v_out`` of capacity one, every arc ``(u, v)`` becomes
``u_out -> v_in`` of unbounded capacity.  Endpoints get capacity one like
interior vertices, so the paths are fully disjoint.  A vertex in
``A & B`` can carry a zero-length path.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .digraph import Digraph, Walk, check_walk, congestion
from .errors import CapExceeded, InvalidWalk, NoDual

DEFAULT_WELL_LINKED_CAP = 12


@dataclass(frozen=True)
class Linkage:
    """A family of paths with distinct starts and distinct ends.

    ``congestion_bound`` is 1 for an ordinary linkage (pairwise
    vertex-disjoint), 2 for a half-integral and 4 for a quarter-integral
    one.  ``sources``/``sinks`` are the start/end sets of the paths.
    """

    paths: tuple[Walk, ...]
    congestion_bound: int = 1
    sources: frozenset = field(init=False)
    sinks: frozenset = field(init=False)

    def __post_init__(self):
        paths = tuple(tuple(int(v) for v in p) for p in self.paths)
        object.__setattr__(self, "paths", paths)
        object.__setattr__(self, "sources", frozenset(p[0] for p in paths))
        object.__setattr__(self, "sinks", frozenset(p[-1] for p in paths))
        if len(self.sources) != len(paths) or len(self.sinks) != len(paths):
            raise InvalidWalk("linkage paths must have distinct starts and distinct ends")
        if any(not p for p in paths):
            raise InvalidWalk("empty path in linkage")

    def __len__(self):
        return len(self.paths)

    @property
    def order(self) -> int:
        return len(self.paths)

    @property
    def is_half_integral(self) -> bool:
        return self.congestion_bound == 2

    def index_by_start(self) -> dict[int, int]:
        return {p[0]: i for i, p in enumerate(self.paths)}

    def index_by_end(self) -> dict[int, int]:
        return {p[-1]: i for i, p in enumerate(self.paths)}

    def measured_congestion(self) -> int:
        return congestion(self.paths)

    def validate(self, graph: Digraph) -> None:
        """Raise ``InvalidWalk`` unless every path is a path of ``graph`` and
        the family respects its congestion bound."""
        for p in self.paths:
            check_walk(graph, p)
            if len(set(p)) != len(p):
                raise InvalidWalk(f"linkage member {p} repeats a vertex")
        c = self.measured_congestion()
        if c > self.congestion_bound:
            raise InvalidWalk(f"congestion {c} exceeds bound {self.congestion_bound}")

    def sub(self, indices: Iterable[int]) -> "Linkage":
        return Linkage(tuple(self.paths[i] for i in indices), self.congestion_bound)


def is_dual(first: Linkage, second: Linkage) -> bool:
    return first.sources == second.sinks and first.sinks == second.sources


class _FlowNetwork:
    """Residual network with paired forward/backward edges (``e ^ 1``)."""

    def __init__(self, size: int):
        self.adj: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, cap: int) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def push(self, e: int) -> None:
        self.cap[e] -= 1
        self.cap[e ^ 1] += 1

    def augment(self, s: int, t: int) -> bool:
        parent = [-1] * len(self.adj)
        parent[s] = -2
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and parent[v] == -1:
                    parent[v] = e
                    if v == t:
                        while v != s:
                            e = parent[v]
                            self.push(e)
                            v = self.to[e ^ 1]
                        return True
                    queue.append(v)
        return False

    def residual_reach(self, s: int) -> list[bool]:
        seen = [False] * len(self.adj)
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and not seen[v]:
                    seen[v] = True
                    stack.append(v)
        return seen


def max_linkage(graph: Digraph, sources: Iterable[int], sinks: Iterable[int],
                removed: Iterable[int] = ()) -> tuple[Linkage, frozenset]:
    """Maximum set of vertex-disjoint paths from ``sources`` to ``sinks``.

    Returns the linkage and a minimum vertex set meeting every
    ``sources -> sinks`` path; both have the same size.  Vertices in
    ``removed`` are treated as deleted.
    """
    n = graph.n
    gone = set(removed)
    A = sorted(set(sources) - gone)
    B = set(sinks) - gone
    s, t = 2 * n, 2 * n + 1
    big = n + 1
    net = _FlowNetwork(2 * n + 2)
    vertex_edge = {}
    for v in range(n):
        if v not in gone:
            vertex_edge[v] = net.add(2 * v, 2 * v + 1, 1)
    arc_edges: dict[int, list[tuple[int, int]]] = {}
    for u, v in graph.sorted_arcs():
        if u in gone or v in gone:
            continue
        arc_edges.setdefault(u, []).append((v, net.add(2 * u + 1, 2 * v, big)))
    source_edge = {a: net.add(s, 2 * a, big) for a in A}
    sink_edge = {b: net.add(2 * b + 1, t, big) for b in sorted(B)}

    # Greedy seed: zero-length paths, then direct arcs.
    used: set[int] = set()
    for a in A:
        if a in B:
            net.push(source_edge[a]); net.push(vertex_edge[a]); net.push(sink_edge[a])
            used.add(a)
    for a in A:
        if a in used:
            continue
        for b, e in arc_edges.get(a, ()):
            if b in B and b not in used:
                for x in (source_edge[a], vertex_edge[a], e, vertex_edge[b], sink_edge[b]):
                    net.push(x)
                used.update((a, b))
                break
    while net.augment(s, t):
        pass

    paths = []
    for a in A:
        if net.cap[source_edge[a]] == big:
            continue
        path = [a]
        v = a
        # unit vertex capacity: the unit entering v leaves by exactly one edge
        while not (v in sink_edge and net.cap[sink_edge[v]] < big):
            v = _flow_successor(net, arc_edges, v, big)
            path.append(v)
        paths.append(tuple(path))

    reach = net.residual_reach(s)
    separator = frozenset(v for v, e in vertex_edge.items() if reach[2 * v] and not reach[2 * v + 1])
    linkage = Linkage(tuple(paths))
    if len(separator) != len(linkage):
        raise AssertionError("max-flow/min-cut mismatch")
    return linkage, separator


def _flow_successor(net: _FlowNetwork, arc_edges, v: int, big: int) -> int:
    for w, e in arc_edges.get(v, ()):
        if net.cap[e] < big:
            return w
    raise AssertionError("flow path does not reach the sink")


@dataclass(frozen=True)
class WellLinkedReport:
    """Outcome of a well-linkedness check.

    On failure ``witness`` is ``(A, B, separator)``: ``A`` and ``B`` are
    disjoint, equally sized subsets of ``W`` and ``separator`` has fewer
    than ``len(A)`` vertices and meets every ``A -> B`` path of the graph
    with ``W - (A | B)`` deleted.  ``method`` records how the verdict was
    reached; for ``matched-clique`` the partner map is kept in ``partners``.
    """

    verdict: bool
    W: tuple[int, ...]
    witness: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None = None
    method: str = "exhaustive"
    partners: dict | None = None

    def to_json(self) -> dict:
        body = {"schema": 1, "kind": "well_linked", "W": list(self.W),
                "verdict": self.verdict, "method": self.method}
        if self.witness is not None:
            A, B, S = self.witness
            body["witness"] = {"A": list(A), "B": list(B), "separator": list(S)}
        if self.partners is not None:
            body["partners"] = [[w, m] for w, m in sorted(self.partners.items())]
        return body


def _is_complete_on(graph: Digraph, W: Sequence[int]) -> bool:
    return all(graph.has_arc(u, v) for u in W for v in W if u != v)


def _matched_clique(graph: Digraph, W: Sequence[int], budget: int = 10_000) -> dict | None:
    """Private partners ``m(w)`` outside ``W`` with arcs ``w <-> m(w)`` that
    span a complete digraph, or ``None`` if the bounded search finds none.

    Such partners prove ``W`` well-linked: ``a -> m(a) -> m(b) -> b`` are
    disjoint paths for any matching of ``A`` to ``B`` and avoid the rest of ``W``.
    """
    Wset = set(W)
    options = []
    for w in W:
        both = sorted(set(graph.out_neighbors(w)) & set(graph.in_neighbors(w)) - Wset)
        if not both:
            return None
        options.append(both)
    chosen: list[int] = []
    steps = 0

    def search(t: int) -> bool:
        nonlocal steps
        if t == len(W):
            return True
        for c in options[t]:
            steps += 1
            if steps > budget:
                return False
            if c in chosen or not all(graph.has_arc(c, x) and graph.has_arc(x, c) for x in chosen):
                continue
            chosen.append(c)
            if search(t + 1):
                return True
            chosen.pop()
        return False

    return dict(zip(W, chosen)) if search(0) else None


def is_well_linked(graph: Digraph, W: Iterable[int], cap: int = DEFAULT_WELL_LINKED_CAP) -> WellLinkedReport:
    """Decide whether ``W`` is well-linked in ``graph``.

    A pair ``(A, B)`` sharing vertices reduces to the disjoint pair
    ``(A - B, B - A)``: in a full linkage a shared vertex must be a
    zero-length path.  Only disjoint pairs are therefore enumerated, in
    order of size, then ``A``, then ``B`` (lexicographic on sorted tuples);
    the first failing pair is returned.  When every ordered pair of ``W``
    is an arc the set is well-linked outright and no enumeration is done;
    the same holds when ``W`` hangs off a complete digraph by a matching of
    two-way arcs.  Both shortcuts work above the cap.
    """
    Ws = tuple(sorted(set(W)))
    if _is_complete_on(graph, Ws):
        return WellLinkedReport(True, Ws, method="complete")
    partners = _matched_clique(graph, Ws) if len(Ws) > 1 else None
    if partners is not None:
        return WellLinkedReport(True, Ws, method="matched-clique", partners=partners)
    if len(Ws) > cap:
        raise CapExceeded(f"|W| = {len(Ws)} exceeds well-linkedness cap {cap}")
    Wset = set(Ws)
    for size in range(1, len(Ws) // 2 + 1):
        for A in itertools.combinations(Ws, size):
            rest = [w for w in Ws if w not in A]
            for B in itertools.combinations(rest, size):
                removed = Wset.difference(A, B)
                linkage, sep = max_linkage(graph, A, B, removed)
                if len(linkage) < size:
                    return WellLinkedReport(False, Ws, (A, B, tuple(sorted(sep))))
    return WellLinkedReport(True, Ws)


def dual_linkage(graph: Digraph, linkage: Linkage) -> Linkage:
    """A linkage from ``B(linkage)`` back to ``A(linkage)`` of the same order."""
    back, sep = max_linkage(graph, linkage.sinks, linkage.sources)
    if len(back) < len(linkage):
        raise NoDual(f"only {len(back)} of {len(linkage)} return paths; separator {sorted(sep)}")
    return back
