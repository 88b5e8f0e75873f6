"""Auxiliary graph of a dual linkage pair and the constructions built on it.

For dual linkages ``L`` and ``Lback`` the auxiliary graph has one node per
path of ``L`` and an arc ``i -> j`` for the back path leaving ``end(L[i])``
and arriving at ``start(L[j])``.  It is a permutation, hence a disjoint
union of directed cycles.  Nodes and order positions are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .digraph import Walk, concat, shortcut_walk
from .errors import CrossesCycleBoundary, InternalInvariant, NotAnAuxPath, NotDual
from .linkage import Linkage


@dataclass(frozen=True)
class AuxGraph:
    """``succ[i]`` is the Aux successor of path ``i``; ``back[i]`` indexes the
    back path that realises the arc ``i -> succ[i]``."""

    succ: tuple[int, ...]
    back: tuple[int, ...]

    def __len__(self):
        return len(self.succ)

    def arcs(self) -> list[tuple[int, int]]:
        return list(enumerate(self.succ))

    def in_degrees(self) -> list[int]:
        deg = [0] * len(self.succ)
        for j in self.succ:
            deg[j] += 1
        return deg

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles sorted by minimum node, each rotated to start there."""
        seen = [False] * len(self.succ)
        out = []
        for i in range(len(self.succ)):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.succ[j]
            out.append(tuple(cyc))
        return out

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "aux_graph",
                "arcs": [[i, j] for i, j in self.arcs()], "back": list(self.back)}


def build_aux(linkage: Linkage, back: Linkage) -> AuxGraph:
    if linkage.sources != back.sinks or linkage.sinks != back.sources:
        raise NotDual("A(L) must equal B(Lback) and B(L) must equal A(Lback)")
    by_start = linkage.index_by_start()
    back_by_start = back.index_by_start()
    succ, via = [], []
    for p in linkage.paths:
        b = back_by_start[p[-1]]
        succ.append(by_start[back.paths[b][-1]])
        via.append(b)
    return AuxGraph(tuple(succ), tuple(via))


@dataclass(frozen=True)
class BacklinkOrder:
    """``order[pos]`` is the path index at order position ``pos``;
    ``cycle_boundaries`` lists the positions where each Aux cycle begins."""

    order: tuple[int, ...]
    cycle_boundaries: tuple[int, ...]

    def __len__(self):
        return len(self.order)

    def position(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.order)}

    def cycle_of_position(self) -> list[int]:
        ids = []
        bounds = list(self.cycle_boundaries) + [len(self.order)]
        for c in range(len(self.cycle_boundaries)):
            ids.extend([c] * (bounds[c + 1] - bounds[c]))
        return ids

    def cycle_span(self, c: int) -> range:
        bounds = list(self.cycle_boundaries) + [len(self.order)]
        return range(bounds[c], bounds[c + 1])

    def same_cycle(self, first: int, last: int) -> bool:
        """True if positions ``first..last`` (inclusive) lie in one cycle."""
        ids = self.cycle_of_position()
        return ids[first] == ids[last]


def induced_order(linkage: Linkage, back: Linkage) -> BacklinkOrder:
    aux = build_aux(linkage, back)
    order: list[int] = []
    bounds: list[int] = []
    for cyc in aux.cycles():
        bounds.append(len(order))
        order.extend(cyc)
    return BacklinkOrder(tuple(order), tuple(bounds))


def _check_aux_path(aux: AuxGraph, nodes: Sequence[int], closed: bool) -> None:
    if not nodes:
        raise NotAnAuxPath("empty node sequence")
    if len(set(nodes)) != len(nodes):
        raise NotAnAuxPath("node repeated")
    for i, j in zip(nodes, nodes[1:]):
        if aux.succ[i] != j:
            raise NotAnAuxPath(f"({i}, {j}) is not an Aux arc")
    if closed and aux.succ[nodes[-1]] != nodes[0]:
        raise NotAnAuxPath("sequence does not close into an Aux cycle")


def aux_walk(linkage: Linkage, back: Linkage, nodes: Sequence[int], closed: bool = False) -> Walk:
    """Walk in the host graph associated with an Aux path or cycle.

    An open path ``i1, ..., im`` gives ``L[i1], back, L[i2], ..., L[im]``.
    A closed one additionally follows the back path of ``im`` to
    ``start(L[i1])``, yielding a closed walk.
    """
    aux = build_aux(linkage, back)
    _check_aux_path(aux, nodes, closed)
    parts = []
    for pos, i in enumerate(nodes):
        parts.append(linkage.paths[i])
        if closed or pos < len(nodes) - 1:
            parts.append(back.paths[aux.back[i]])
    return concat(*parts)


def aux_cycle_walks(linkage: Linkage, back: Linkage) -> list[Walk]:
    """Closed walks of all Aux cycles, in induced-order cycle order."""
    aux = build_aux(linkage, back)
    return [aux_walk(linkage, back, cyc, closed=True) for cyc in aux.cycles()]


def induced_backlinkage(subset: Iterable[int], linkage: Linkage, back: Linkage) -> Linkage:
    """The return linkage for a sublinkage, built by chaining through the pair.

    For each chosen path ``P`` the walk starts with the back path leaving
    ``end(P)``; while it lands on the start of an unchosen path ``L'`` it
    continues along ``L'`` and that path's back path.  Each walk is then
    shortcut.  The result goes from ``B(P)`` to ``A(P)`` and its congestion
    bound is the sum of the two input bounds.
    """
    chosen = sorted(set(subset))
    if not chosen:
        raise ValueError("subset must be nonempty")
    aux = build_aux(linkage, back)
    members = set(chosen)
    cap = len(linkage) + len(back)
    paths = []
    for p in chosen:
        parts = [back.paths[aux.back[p]]]
        nxt = aux.succ[p]
        steps = 0
        while nxt not in members:
            steps += 1
            if steps > cap:
                raise InternalInvariant("induced backlinkage did not return to the subset")
            parts.append(linkage.paths[nxt])
            parts.append(back.paths[aux.back[nxt]])
            nxt = aux.succ[nxt]
        paths.append(shortcut_walk(concat(*parts)))
    return Linkage(tuple(paths), linkage.congestion_bound + back.congestion_bound)


def interlaced_walk(linkage: Linkage, back: Linkage, start: int, size: int,
                    order: BacklinkOrder | None = None) -> tuple[Walk, bool]:
    """``L_j, L_j^back, L_{j+1}, ..., L_{j+size-1}`` in the induced order.

    ``start`` is an order position.  Returns the walk and whether it is a
    path.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    if order is None:
        order = induced_order(linkage, back)
    last = start + size - 1
    if start < 0 or last >= len(order):
        raise CrossesCycleBoundary(f"positions {start}..{last} out of range")
    if not order.same_cycle(start, last):
        raise CrossesCycleBoundary(f"positions {start}..{last} span two Aux cycles")
    aux = build_aux(linkage, back)
    parts = []
    for pos in range(start, last + 1):
        i = order.order[pos]
        parts.append(linkage.paths[i])
        if pos < last:
            parts.append(back.paths[aux.back[i]])
    walk = concat(*parts)
    return walk, len(set(walk)) == len(walk)
