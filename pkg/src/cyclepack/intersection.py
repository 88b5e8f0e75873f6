"""Intersection graphs of path families, degeneracy and independent transversals.

Undirected graphs are plain adjacency dicts ``{node: set(neighbours)}``
with orderable node ids; ties are always broken towards the smallest id.
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import HypothesisViolated, NotFound
from .partition import OrderedBipartite

Adjacency = dict


@dataclass(frozen=True)
class IntersectionGraph:
    """Bipartite graph between two path families; ``(i, j)`` is an edge when
    ``left[i]`` and ``right[j]`` share a vertex."""

    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    edges: frozenset

    def adjacency(self) -> Adjacency:
        """Nodes are ``(0, i)`` for left paths and ``(1, j)`` for right paths."""
        adj = {(0, i): set() for i in range(len(self.left))}
        adj.update({(1, j): set() for j in range(len(self.right))})
        for i, j in self.edges:
            adj[(0, i)].add((1, j))
            adj[(1, j)].add((0, i))
        return adj

    def degrees(self) -> tuple[list[int], list[int]]:
        dl = [0] * len(self.left)
        dr = [0] * len(self.right)
        for i, j in self.edges:
            dl[i] += 1
            dr[j] += 1
        return dl, dr

    def min_degree(self) -> int:
        dl, dr = self.degrees()
        return min(dl + dr, default=0)

    def ordered(self, left_order: Sequence[int], right_order: Sequence[int]) -> OrderedBipartite:
        """Ordered bipartite view; ``left_order[p]`` is the left path at position ``p``."""
        lpos = {i: p for p, i in enumerate(left_order)}
        rpos = {j: p for p, j in enumerate(right_order)}
        pairs = [(lpos[i], rpos[j]) for i, j in self.edges if i in lpos and j in rpos]
        return OrderedBipartite(len(left_order), len(right_order), sorted(pairs))


def intersection_graph(left: Iterable[Sequence[int]], right: Iterable[Sequence[int]]) -> IntersectionGraph:
    left = tuple(tuple(p) for p in left)
    right = tuple(tuple(p) for p in right)
    on_vertex: dict[int, set[int]] = defaultdict(set)
    for i, p in enumerate(left):
        for v in p:
            on_vertex[v].add(i)
    edges = set()
    for j, q in enumerate(right):
        for v in q:
            for i in on_vertex.get(v, ()):
                edges.add((i, j))
    return IntersectionGraph(left, right, frozenset(edges))


def induced(adj: Adjacency, nodes: Iterable[Hashable]) -> Adjacency:
    keep = set(nodes)
    return {v: adj[v] & keep for v in adj if v in keep}


def degeneracy(adj: Adjacency) -> tuple[int, list]:
    """Smallest ``d`` such that every subgraph has a vertex of degree ``<= d``.

    Returns ``d`` and the min-degree elimination order that certifies it.
    """
    deg = {v: len(ns) for v, ns in adj.items()}
    heap = [(dv, v) for v, dv in deg.items()]
    heapq.heapify(heap)
    removed = set()
    order = []
    d = 0
    while heap:
        dv, v = heapq.heappop(heap)
        if v in removed or dv != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        d = max(d, dv)
        for u in adj[v]:
            if u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return d, order


def _peel(adj: Adjacency, keep) -> Adjacency:
    """Repeatedly delete vertices whose current degree fails ``keep``."""
    deg = {v: len(ns) for v, ns in adj.items()}
    alive = set(adj)
    queue = [v for v in adj if not keep(deg[v])]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
                if not keep(deg[u]):
                    queue.append(u)
    return induced(adj, alive)


def max_core(adj: Adjacency, d) -> Adjacency | None:
    """Largest induced subgraph of minimum degree ``> d``, or ``None`` if the
    graph is ``d``-degenerate."""
    core = _peel(adj, lambda x: x > d)
    return core or None


def min_degree_core(adj: Adjacency, m) -> Adjacency | None:
    """Largest induced subgraph of minimum degree ``>= m`` (``None`` if empty)."""
    core = _peel(adj, lambda x: x >= m)
    return core or None


@dataclass(frozen=True)
class ColoredGraph:
    """Graph whose vertex set is partitioned into colour classes (not a proper colouring)."""

    adj: Adjacency
    classes: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(tuple(c) for c in self.classes))
        seen = set()
        for c in self.classes:
            for v in c:
                if v in seen:
                    raise ValueError(f"vertex {v!r} in two classes")
                seen.add(v)
        if seen != set(self.adj):
            raise ValueError("classes must cover the vertex set exactly")


def transversal_hypothesis(graph: ColoredGraph, d) -> None:
    """Raise ``HypothesisViolated`` unless the class-size and pairwise
    degeneracy conditions for a guaranteed independent transversal hold."""
    r = len(graph.classes)
    if r < 2:
        raise HypothesisViolated("need at least two colour classes")
    need = 4 * math.e * (r - 1) * d
    for i, c in enumerate(graph.classes):
        if len(c) < need:
            raise HypothesisViolated(f"class {i} has {len(c)} vertices, need >= {need:.3f}")
    for i in range(r):
        for j in range(i + 1, r):
            sub = induced(graph.adj, graph.classes[i] + graph.classes[j])
            dg, _ = degeneracy(sub)
            if dg > d:
                raise HypothesisViolated(f"classes {i}, {j} induce a {dg}-degenerate graph, above {d}")


def independent_transversal(graph: ColoredGraph, d=None, check: bool = True,
                            max_steps: int = 1_000_000) -> tuple:
    """One vertex per class, pairwise non-adjacent.

    Depth-first search over classes (smallest first) where candidates are
    tried in order of fewest conflicts with the still-open classes; the
    first branch is the greedy choice.  With ``check`` the existence
    hypothesis is verified first (``d`` required).
    """
    if check:
        if d is None:
            raise ValueError("d is required when check=True")
        transversal_hypothesis(graph, d)
    classes = graph.classes
    if any(not c for c in classes):
        raise NotFound("empty colour class")
    r = len(classes)
    adj = graph.adj
    order = sorted(range(r), key=lambda i: (len(classes[i]), i))
    chosen: dict[int, Hashable] = {}
    steps = 0

    def candidates(ci, blocked):
        cand = [v for v in classes[ci] if v not in blocked]
        if len(cand) <= 1:
            return cand
        pos = {v: k for k, v in enumerate(classes[ci])}
        open_classes = set(order[len(chosen) + 1:])
        members = {v: k for k in open_classes for v in classes[k]}

        def conflicts(v):
            return sum(1 for u in adj[v] if u in members and u not in blocked)

        return sorted(cand, key=lambda v: (conflicts(v), pos[v]))

    def search(depth, blocked):
        nonlocal steps
        if depth == r:
            return True
        ci = order[depth]
        for v in candidates(ci, blocked):
            steps += 1
            if steps > max_steps:
                raise NotFound(f"search budget of {max_steps} steps exhausted")
            chosen[ci] = v
            if search(depth + 1, blocked | adj[v] | {v}):
                return True
            del chosen[ci]
        return False

    if not search(0, frozenset()):
        raise NotFound("no independent transversal exists")
    return tuple(chosen[i] for i in range(r))
