"""Exact brute-force ground truth for small digraphs.

Cycle enumeration, maximum congestion-``c`` cycle packings, minimum
feedback vertex sets, and a per-graph report comparing them.  Everything
is exponential and guarded by caps.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, deque
from dataclasses import asdict, dataclass

from .digraph import Digraph, Walk, is_acyclic
from .errors import CapExceeded

CYCLE_CAP = 10 ** 5
SEARCH_CAP = 10 ** 7
FVS_CAP = 20


def enumerate_simple_cycles(graph: Digraph, cap: int = CYCLE_CAP) -> list[Walk]:
    """All simple cycles in open form, each starting at its minimum vertex.

    Depth-first search from every start ``s`` through vertices larger than
    ``s`` that can still return to ``s``; output is sorted by length, then
    lexicographically.
    """
    n = graph.n
    cycles: list[Walk] = []
    for s in range(n):
        # vertices > s that can reach s using only vertices >= s
        back = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in graph.in_neighbors(v):
                if u > s and u not in back:
                    back.add(u)
                    queue.append(u)
        path = [s]
        on_path = {s}
        stack = [iter(graph.out_neighbors(s))]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt == s:
                cycles.append(tuple(path))
                if len(cycles) > cap:
                    raise CapExceeded(f"more than {cap} simple cycles")
            elif nxt > s and nxt in back and nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                stack.append(iter(graph.out_neighbors(nxt)))
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def max_packing_congestion(graph: Digraph, c: int, distinct: bool = False,
                           cycle_cap: int = CYCLE_CAP, search_cap: int = SEARCH_CAP
                           ) -> tuple[int, list[Walk]]:
    """Largest family of cycles using every vertex at most ``c`` times.

    The family is a multiset (a cycle may repeat) unless ``distinct``.
    Branch and bound over the enumerated cycles in (length, lex) order,
    trying the largest multiplicity first; the bound is remaining vertex
    capacity divided by the shortest remaining cycle length.  Returns the
    first optimum found.

    For multisets only cycles with an inclusion-minimal vertex set are
    searched, one per vertex set: swapping a cycle for one on a subset of
    its vertices never breaks a congestion bound, so the optimum is kept.
    """
    if c < 1:
        raise ValueError("c must be positive")
    cycles = enumerate_simple_cycles(graph, cycle_cap)
    if not distinct:
        cycles = _minimal_vertex_sets(cycles)
    if not cycles:
        return 0, []
    m = len(cycles)
    lengths = [len(cy) for cy in cycles]
    # suffix minimum of cycle length (cycles are sorted by length, so it is lengths[i])
    capacity = [c] * graph.n
    best_size = 0
    best: list[int] = []
    chosen: list[int] = []
    nodes = 0
    limit = 1 if distinct else c
    used_vertices = sorted({v for cy in cycles for v in cy})

    def remaining_bound(i: int) -> int:
        if i >= m:
            return 0
        return sum(capacity[v] for v in used_vertices) // lengths[i]

    def search(i: int) -> None:
        nonlocal best_size, best, nodes
        nodes += 1
        if nodes > search_cap:
            raise CapExceeded(f"packing search exceeded {search_cap} nodes")
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = list(chosen)
        if i >= m or len(chosen) + remaining_bound(i) <= best_size:
            return
        cy = cycles[i]
        room = min(min(capacity[v] for v in cy), limit)
        for mult in range(room, -1, -1):
            for v in cy:
                capacity[v] -= mult
            chosen.extend([i] * mult)
            search(i + 1)
            del chosen[len(chosen) - mult:]
            for v in cy:
                capacity[v] += mult

    search(0)
    return best_size, [cycles[i] for i in best]


def _minimal_vertex_sets(cycles: list[Walk]) -> list[Walk]:
    """First cycle (in the given order) of each inclusion-minimal vertex set."""
    kept: list[Walk] = []
    masks: list[int] = []
    for cy in cycles:  # sorted by length, so subsets come first
        mask = 0
        for v in cy:
            mask |= 1 << v
        if any(m & mask == m for m in masks):
            continue
        kept.append(cy)
        masks.append(mask)
    return kept


def _find_cycle(graph: Digraph, removed: set) -> Walk | None:
    """A shortest cycle of ``graph - removed`` (BFS from every vertex), or ``None``."""
    best = None
    for s in range(graph.n):
        if s in removed:
            continue
        parent = {s: None}
        queue = deque([s])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for v in graph.out_neighbors(u):
                if v in removed:
                    continue
                if v == s:
                    found = u
                    break
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        if found is not None:
            cyc = []
            x = found
            while x is not None:
                cyc.append(x)
                x = parent[x]
            cyc.reverse()
            if best is None or len(cyc) < len(best):
                best = tuple(cyc)
                if len(best) == 2:
                    break
    return best


def min_fvs(graph: Digraph, cap: int = FVS_CAP) -> tuple[int, frozenset]:
    """Minimum feedback vertex set by iterative deepening on its size.

    At each node a shortest remaining cycle is found and the search
    branches on which of its vertices to delete.
    """
    if graph.n > cap:
        raise CapExceeded(f"n = {graph.n} exceeds feedback-vertex-set cap {cap}")

    def search(budget: int, removed: set) -> frozenset | None:
        cyc = _find_cycle(graph, removed)
        if cyc is None:
            return frozenset(removed)
        if budget == 0:
            return None
        for v in sorted(cyc):
            removed.add(v)
            found = search(budget - 1, removed)
            removed.discard(v)
            if found is not None:
                return found
        return None

    for size in range(graph.n + 1):
        found = search(size, set())
        if found is not None:
            if not is_acyclic(graph, found):
                raise AssertionError("feedback vertex set leaves a cycle")
            return len(found), found
    raise AssertionError("unreachable: deleting every vertex leaves no cycle")


@dataclass(frozen=True)
class GapReport:
    n: int
    m: int
    fvs_opt: int
    cp_1: int
    cp_2: int
    cp_4: int
    monotone: bool
    fvs_dominates: bool

    @property
    def ok(self) -> bool:
        return self.monotone and self.fvs_dominates

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "gap_report", **asdict(self)}

    @staticmethod
    def csv_header() -> list[str]:
        return ["n", "m", "fvs_opt", "cp_1", "cp_2", "cp_4", "monotone", "fvs_dominates"]

    def csv_row(self) -> list:
        return [getattr(self, name) for name in self.csv_header()]


def gap_report(graph: Digraph, fvs_cap: int = FVS_CAP, cycle_cap: int = CYCLE_CAP,
               distinct: bool = False) -> GapReport:
    fvs, _ = min_fvs(graph, fvs_cap)
    cp = {c: max_packing_congestion(graph, c, distinct, cycle_cap)[0] for c in (1, 2, 4)}
    return GapReport(graph.n, graph.m, fvs, cp[1], cp[2], cp[4],
                     cp[1] <= cp[2] <= cp[4], fvs >= cp[1])


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(GapReport.csv_header())
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def packing_congestion(cycles) -> int:
    counts = Counter(v for cy in cycles for v in cy)
    return max(counts.values(), default=0)
