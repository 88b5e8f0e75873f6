"""Cycle extraction: walk systems, untangling, sparse and dense wins, drivers.

Every construction here either returns a ``CyclePackingCert`` or a
structure (walk system, interlaced path) that a later stage consumes.
``pack_cycles`` strings them together for congestion 2, 3 or 4 and turns
every failure into a ``FailureReport``; a certificate is only returned
after it has passed ``CyclePackingCert.validate``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .backlinkage import build_aux, induced_order, interlaced_walk
from .digraph import Digraph, Walk, canonical_cycle, check_walk, concat, congestion, extract_cycle, is_simple_cycle
from .errors import (CapExceeded, CyclePackError, HypothesisViolated, InternalInvariant, IsForest,
                     NoLinkage, NotDual, NotFound)
from .intersection import ColoredGraph, degeneracy, intersection_graph, max_core
from .linkage import DEFAULT_WELL_LINKED_CAP, Linkage, is_dual, is_well_linked, max_linkage
from .partition import disjoint_pairs


# -- result types ----------------------------------------------------------

@dataclass(frozen=True)
class CyclePackingCert:
    """``cycles`` in open form (no repeated endpoint), rotated to start at their minimum vertex."""

    cycles: tuple[Walk, ...]
    p: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(canonical_cycle(c) for c in self.cycles))

    @property
    def measured_congestion(self) -> int:
        return congestion(self.cycles)

    def validate(self, graph: Digraph) -> None:
        if len(self.cycles) < self.k:
            raise InternalInvariant(f"{len(self.cycles)} cycles, fewer than k = {self.k}")
        for c in self.cycles:
            if not is_simple_cycle(graph, c):
                raise InternalInvariant(f"{c} is not a simple cycle of the graph")
        if self.measured_congestion > self.p:
            raise InternalInvariant(f"congestion {self.measured_congestion} exceeds p = {self.p}")

    def is_valid(self, graph: Digraph) -> bool:
        try:
            self.validate(graph)
        except InternalInvariant:
            return False
        return True

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "cycle_packing", "p": self.p, "k": self.k,
                "cycles": [list(c) for c in self.cycles],
                "measured_congestion": self.measured_congestion}


@dataclass(frozen=True)
class FailureReport:
    stage: str
    reason: str
    data_ref: dict | None = None

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "failure", "stage": self.stage, "reason": self.reason,
                "data_ref": self.data_ref}


@dataclass(frozen=True)
class WalkSystem:
    """Walks ``P_i`` with marked sets ``A_i`` (early) and ``B_i`` (late)."""

    walks: tuple[Walk, ...]
    A: tuple[tuple[int, ...], ...]
    B: tuple[tuple[int, ...], ...]
    congestion_tag: int

    @property
    def a(self) -> int:
        return len(self.walks)

    @property
    def b(self) -> int:
        return len(self.A[0]) if self.A else 0

    def marked(self) -> set[int]:
        return {v for group in self.A + self.B for v in group}

    def validate(self, graph: Digraph) -> None:
        """Raise ``InternalInvariant`` on the first violated property."""
        for w in self.walks:
            check_walk(graph, w)
        if congestion(self.walks) > self.congestion_tag:
            raise InternalInvariant("walk family exceeds its congestion tag")
        sizes = {len(g) for g in self.A + self.B}
        if len(sizes) != 1:
            raise InternalInvariant("A_i and B_i must all have the same size")
        flat = [v for g in self.A + self.B for v in g]
        if len(flat) != len(set(flat)):
            raise InternalInvariant("marked sets are not pairwise disjoint")
        for i, w in enumerate(self.walks):
            if not (set(self.A[i]) | set(self.B[i])) <= set(w):
                raise InternalInvariant(f"marked set of walk {i} leaves the walk")
            if not a_before_b(w, self.A[i], self.B[i]):
                raise InternalInvariant(f"A_{i} does not precede B_{i} on its walk")

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "walk_system", "congestion": self.congestion_tag,
                "walks": [list(w) for w in self.walks],
                "A": [list(g) for g in self.A], "B": [list(g) for g in self.B]}


def a_before_b(walk: Sequence[int], A: Iterable[int], B: Iterable[int]) -> bool:
    """Every occurrence of an ``A`` vertex precedes every occurrence of a ``B`` vertex."""
    A, B = set(A), set(B)
    last_a = max((t for t, v in enumerate(walk) if v in A), default=-1)
    first_b = min((t for t, v in enumerate(walk) if v in B), default=len(walk))
    return last_a < first_b


@dataclass(frozen=True)
class InterlacedPath:
    """``L_j, back, L_{j+1}, ..., L_{j+size-1}`` starting at order position ``start``."""

    walk: Walk
    start: int
    size: int
    members: tuple[int, ...]


# -- shared helpers --------------------------------------------------------

def split_terminals(D: Iterable[int], required: int) -> tuple[list[int], list[int]]:
    """First ``required`` elements of sorted ``D``, halved into ``D1``, ``D2``."""
    Ds = sorted(set(D))
    if len(Ds) < required:
        raise HypothesisViolated(f"|D| = {len(Ds)} is below the required {required}")
    Ds = Ds[:required]
    half = required // 2
    return Ds[:half], Ds[half:]


def check_well_linked(graph: Digraph, D: Sequence[int], cap: int = DEFAULT_WELL_LINKED_CAP) -> bool:
    """Verify well-linkedness when feasible; returns False if it was only trusted."""
    try:
        report = is_well_linked(graph, D, cap)
    except CapExceeded:
        warnings.warn(f"well-linkedness of |D| = {len(D)} not verified (above cap {cap})",
                      stacklevel=3)
        return False
    if not report.verdict:
        raise NoLinkage("terminal set is not well-linked", report)
    return True


def full_linkage(graph: Digraph, sources, sinks) -> Linkage:
    sources, sinks = sorted(set(sources)), sorted(set(sinks))
    lk, sep = max_linkage(graph, sources, sinks)
    if len(lk) < len(sources):
        raise NoLinkage(f"only {len(lk)} of {len(sources)} disjoint paths", tuple(sorted(sep)))
    return lk


def _dual_pair(graph: Digraph, D1, D2) -> tuple[Linkage, Linkage]:
    return full_linkage(graph, D1, D2), full_linkage(graph, D2, D1)


def aux_cycle_packing(L: Linkage, Lback: Linkage, k: int) -> CyclePackingCert:
    """One simple cycle from the closed walk of each of the first ``k`` Aux cycles."""
    aux = build_aux(L, Lback)
    cycles = []
    for cyc in aux.cycles()[:k]:
        parts = []
        for i in cyc:
            parts += [L.paths[i], Lback.paths[aux.back[i]]]
        cycles.append(extract_cycle(concat(*parts)))
    return CyclePackingCert(tuple(cycles), 2, k)


# -- walk systems ----------------------------------------------------------

def walk_system(graph: Digraph, D: Iterable[int], a: int, b: int, k: int,
                cap: int = DEFAULT_WELL_LINKED_CAP,
                assume_well_linked: bool = False) -> WalkSystem | CyclePackingCert:
    """Congestion-2 walk system on ``|D| = 4(a+k)b`` terminals, or ``k`` half-integral cycles.

    ``D`` is checked for well-linkedness unless ``assume_well_linked``.
    """
    if min(a, b, k) < 1:
        raise HypothesisViolated("a, b, k must be positive")
    D1, D2 = split_terminals(D, 4 * (a + k) * b)
    if not assume_well_linked:
        check_well_linked(graph, D1 + D2, cap)
    L, Lback = _dual_pair(graph, D1, D2)
    order = induced_order(L, Lback)
    if len(order.cycle_boundaries) >= k:
        return aux_cycle_packing(L, Lback, k)
    good = []
    bad = 0
    for i in range(a + k):
        lo, hi = 2 * b * i, 2 * b * (i + 1) - 1
        if order.same_cycle(lo, hi):
            good.append(i)
        else:
            bad += 1
    if bad >= k:
        raise InternalInvariant(f"{bad} bad blocks with fewer than k = {k} Aux cycles")
    walks, As, Bs = [], [], []
    for i in good[:a]:
        lo = 2 * b * i
        walk, _ = interlaced_walk(L, Lback, lo, 2 * b, order)
        starts = [L.paths[order.order[p]][0] for p in range(lo, lo + 2 * b)]
        walks.append(walk)
        As.append(tuple(starts[:b]))
        Bs.append(tuple(starts[b:]))
    return WalkSystem(tuple(walks), tuple(As), tuple(Bs), 2)


def untangle(graph: Digraph, L: Linkage, Lback: Linkage, q: int, k: int,
             check: bool = True) -> InterlacedPath | CyclePackingCert:
    """Interlaced path of size ``q`` or ``k`` half-integral cycles.

    Greedy pieces ``H_i`` follow ``L_j``, its back path, ``L_{j+1}``, ...
    until the Aux cycle ends or the walk hits itself.  Any piece that holds
    ``q`` complete linkage paths yields the interlaced path (preferred).
    Otherwise either the Aux cycles or the self-intersecting pieces number
    at least ``k``, and their cycles are returned.
    """
    if q < 1 or k < 1:
        raise HypothesisViolated("q and k must be positive")
    if check:
        need = q * (2 * k - 2) + 1
        if len(L) != need or len(Lback) != need:
            raise HypothesisViolated(f"linkages must have exactly q(2k-2)+1 = {need} paths")
    if not is_dual(L, Lback):
        raise HypothesisViolated("L and Lback are not dual")
    if L.sources & L.sinks:
        raise HypothesisViolated("start and end sets of L must be disjoint")
    order = induced_order(L, Lback)
    aux = build_aux(L, Lback)
    cycle_id = order.cycle_of_position()
    n_pos = len(order)

    pieces = []  # (start position, complete paths, walk, self-intersecting)
    pos = 0
    while pos < n_pos:
        start = pos
        walk: list[int] = []
        seen: set[int] = set()
        complete = 0
        hit = False
        while True:
            i = order.order[pos]
            segment = L.paths[i] if not walk else L.paths[i][1:]
            for v in segment:
                walk.append(v)
                if v in seen:
                    hit = True
                    break
                seen.add(v)
            pos += 1
            if hit:
                break
            complete += 1
            if pos >= n_pos or cycle_id[pos] != cycle_id[pos - 1]:
                break
            for v in Lback.paths[aux.back[i]][1:]:
                walk.append(v)
                if v in seen:
                    hit = True
                    break
                seen.add(v)
            if hit:
                break
        pieces.append((start, complete, tuple(walk), hit))

    for start, complete, walk, hit in pieces:
        if complete >= q:
            path, is_path = interlaced_walk(L, Lback, start, q, order)
            if not is_path:
                raise InternalInvariant("interlaced prefix is not a path")
            return InterlacedPath(path, start, q, tuple(order.order[start:start + q]))
    if len(order.cycle_boundaries) >= k:
        return aux_cycle_packing(L, Lback, k)
    hits = [walk for _, _, walk, hit in pieces if hit]
    if len(hits) >= k:
        return CyclePackingCert(tuple(extract_cycle(w) for w in hits[:k]), 2, k)
    raise InternalInvariant("untangling produced neither an interlaced path nor k cycles")


def cut_interlaced_path(path: Sequence[int], terminals: set, a: int, b: int) -> WalkSystem:
    """Cut ``path`` into ``a`` consecutive pieces holding ``2b`` terminals each."""
    hits = [t for t, v in enumerate(path) if v in terminals]
    if len(hits) < 2 * a * b:
        raise InternalInvariant(f"path holds {len(hits)} terminals, need {2 * a * b}")
    walks, As, Bs = [], [], []
    for i in range(a):
        idx = hits[2 * b * i: 2 * b * (i + 1)]
        walks.append(tuple(path[idx[0]: idx[-1] + 1]))
        As.append(tuple(path[t] for t in idx[:b]))
        Bs.append(tuple(path[t] for t in idx[b:]))
    return WalkSystem(tuple(walks), tuple(As), tuple(Bs), 1)


def disjoint_walk_system(graph: Digraph, D: Iterable[int], a: int, b: int, k: int,
                         cap: int = DEFAULT_WELL_LINKED_CAP,
                         assume_well_linked: bool = False) -> WalkSystem | CyclePackingCert:
    """Vertex-disjoint path system on ``|D| = 2(ab(2k-2)+1)`` terminals, or ``k`` half-integral cycles."""
    if min(a, b, k) < 1:
        raise HypothesisViolated("a, b, k must be positive")
    D1, D2 = split_terminals(D, 2 * (a * b * (2 * k - 2) + 1))
    if not assume_well_linked:
        check_well_linked(graph, D1 + D2, cap)
    L, Lback = _dual_pair(graph, D1, D2)
    verdict = untangle(graph, L, Lback, a * b, k)
    if isinstance(verdict, CyclePackingCert):
        return verdict
    return cut_interlaced_path(verdict.walk, set(D1) | set(D2), a, b)


# -- sparse and dense wins -------------------------------------------------

def pairing(a: int) -> list[tuple[int, int]]:
    """``(0,1), (1,0), (2,3), (3,2), ...`` (0-based)."""
    out = []
    for i in range(0, a - 1, 2):
        out += [(i, i + 1), (i + 1, i)]
    return out


def pair_linkages(graph: Digraph, system: WalkSystem, sizes: int | None = None) -> dict:
    """A full linkage from ``B_i`` to ``A_j`` for every pair of the pairing.

    With ``sizes`` only the first ``sizes`` sorted elements of each side are used.
    """
    out = {}
    for i, j in pairing(system.a):
        Bi, Aj = sorted(system.B[i]), sorted(system.A[j])
        if sizes is not None:
            Bi, Aj = Bi[:sizes], Aj[:sizes]
        out[(i, j)] = full_linkage(graph, Bi, Aj)
    return out


def _segment(walk: Sequence[int], x: int, y: int) -> Walk:
    """Walk piece from the first ``x`` to the first later ``y``."""
    s = walk.index(x)
    t = walk.index(y, s)
    return tuple(walk[s:t + 1])


def transversal_graph(linkages: dict, keys: Sequence) -> ColoredGraph:
    """Colour classes are the linkages; edges join intersecting paths of different linkages."""
    adj: dict = {}
    classes = []
    for c, key in enumerate(keys):
        nodes = [(c, t) for t in range(len(linkages[key]))]
        classes.append(nodes)
        for v in nodes:
            adj[v] = set()
    for c1 in range(len(keys)):
        for c2 in range(c1 + 1, len(keys)):
            ig = intersection_graph(linkages[keys[c1]].paths, linkages[keys[c2]].paths)
            for s, t in ig.edges:
                adj[(c1, s)].add((c2, t))
                adj[(c2, t)].add((c1, s))
    return ColoredGraph(adj, classes)


def sparse_win(system: WalkSystem, linkages: dict, d, check: bool = True) -> CyclePackingCert:
    """``a/2`` cycles of congestion ``alpha + 1`` from pairwise sparse linkages."""
    a = system.a
    if a < 2 or a % 2:
        raise HypothesisViolated("a must be even and positive")
    keys = pairing(a)
    if set(linkages) != set(keys):
        raise HypothesisViolated("one linkage per pair of the pairing is required")
    if check:
        need = 4 * math.e * a * d
        for key in keys:
            if len(linkages[key]) < need:
                raise HypothesisViolated(f"linkage {key} has {len(linkages[key])} paths, need >= {need:.3f}")
    H = transversal_graph(linkages, keys)
    pick = independent_transversal_or_fail(H, d, check)
    chosen = {key: linkages[key].paths[pick[c][1]] for c, key in enumerate(keys)}
    alpha = congestion(system.walks)
    cycles = []
    for iota in range(a // 2):
        i1, i2 = 2 * iota, 2 * iota + 1
        L12, L21 = chosen[(i1, i2)], chosen[(i2, i1)]
        closed = concat(_segment(system.walks[i1], L21[-1], L12[0]), L12,
                        _segment(system.walks[i2], L12[-1], L21[0]), L21)
        cycles.append(extract_cycle(closed))
    return CyclePackingCert(tuple(cycles), alpha + 1, a // 2)


def independent_transversal_or_fail(H: ColoredGraph, d, check: bool) -> tuple:
    from .intersection import independent_transversal
    try:
        return independent_transversal(H, d, check=check)
    except NotFound as exc:
        raise HypothesisViolated(f"no independent transversal: {exc}") from None


def subpath_members(walk: Sequence[int], linkage: Linkage) -> list[tuple[int, int]]:
    """``(first position, path index)`` of the linkage paths that are contiguous pieces of ``walk``."""
    where: dict[int, list[int]] = {}
    for t, v in enumerate(walk):
        where.setdefault(v, []).append(t)
    out = []
    for idx, p in enumerate(linkage.paths):
        for t in where.get(p[0], ()):
            if tuple(walk[t:t + len(p)]) == p:
                out.append((t, idx))
                break
    return sorted(out)


def _first_shared(p: Sequence[int], q: Sequence[int]) -> int:
    qs = set(q)
    for v in p:
        if v in qs:
            return v
    raise InternalInvariant("paths do not intersect")


def dense_win(U_walks: Sequence[Walk], W_walks: Sequence[Walk], L: Linkage, K: Linkage,
              U_members: Sequence[Sequence[int]] | None = None,
              W_members: Sequence[Sequence[int]] | None = None) -> CyclePackingCert:
    """One cycle per index from a crossing pair of intersections.

    ``U_members[i]`` lists the indices of ``L``-paths on ``U_walks[i]`` in
    order of appearance (found automatically when omitted); likewise for
    ``W``.
    """
    k = len(U_walks)
    if len(W_walks) != k:
        raise HypothesisViolated("U and W must have the same number of walks")
    cycles = []
    for i in range(k):
        U, W = tuple(U_walks[i]), tuple(W_walks[i])
        um = list(U_members[i]) if U_members is not None else [idx for _, idx in subpath_members(U, L)]
        wm = list(W_members[i]) if W_members is not None else [idx for _, idx in subpath_members(W, K)]
        ig = intersection_graph([L.paths[x] for x in um], [K.paths[y] for y in wm])
        if not um or not wm or len(ig.edges) < len(um) + len(wm):
            raise IsForest(i)
        edges = sorted(ig.edges)
        cross = None
        for al, de in edges:
            for be, ga in edges:
                if al < be and ga < de:
                    cross = (al, be, ga, de)
                    break
            if cross:
                break
        if cross is None:
            raise InternalInvariant(f"index {i}: no crossing pair in a non-forest")
        al, be, ga, de = cross
        x = _first_shared(L.paths[um[al]], K.paths[wm[de]])
        y = _first_shared(L.paths[um[be]], K.paths[wm[ga]])
        ux = _locate(U, L.paths[um[al]], x)
        uy = _locate(U, L.paths[um[be]], y)
        wy = _locate(W, K.paths[wm[ga]], y)
        wx = _locate(W, K.paths[wm[de]], x)
        if not (ux < uy and wy < wx):
            raise InternalInvariant("member paths are out of order on their walks")
        closed = concat(U[ux:uy + 1], W[wy:wx + 1])
        cycles.append(extract_cycle(closed))
    p = congestion(U_walks) + congestion(W_walks)
    return CyclePackingCert(tuple(cycles), p, k)


def _locate(walk: Sequence[int], path: Sequence[int], v: int) -> int:
    """Position of ``v`` inside the occurrence of ``path`` on ``walk``."""
    t0 = walk.index(path[0])
    while tuple(walk[t0:t0 + len(path)]) != tuple(path):
        t0 = walk.index(path[0], t0 + 1)
    return t0 + list(path).index(v)


# -- drivers ---------------------------------------------------------------

@dataclass(frozen=True)
class Constants:
    d: float
    a: int
    b: int
    q: int | None = None

    @classmethod
    def paper(cls, k: int, p: int) -> "Constants":
        if p == 4:
            d = 2 ** 10 * k
            a = 2 * k
            return cls(d, a, math.ceil(4 * math.e * a * d))
        d = 3 * 2 ** 10 * k
        a = 2 * k
        q = math.ceil(4 * math.e * a * d)
        return cls(d, a, 2 * (q * (2 * k - 2) + 1), q)

    @classmethod
    def scaled(cls, k: int, p: int, d=None, a=None, b=None, q=None) -> "Constants":
        a = 2 * k if a is None else a
        d = 0 if d is None else d
        if p == 4:
            return cls(d, a, 1 if b is None else b)
        q = 1 if q is None else q
        return cls(d, a, 2 * (q * (2 * k - 2) + 1) if b is None else b, q)

    def terminals(self, k: int, p: int) -> int:
        if p == 2:
            return 2 * (self.a * self.b * (2 * k - 2) + 1)
        return 4 * (self.a + k) * self.b


@dataclass
class DriverTrace:
    """Stage-by-stage notes of a driver run (for reports and tests)."""

    stages: list = field(default_factory=list)

    def log(self, stage: str, **info):
        self.stages.append({"stage": stage, **info})


def pack_cycles(graph: Digraph, D: Iterable[int], k: int, p: int, mode: str = "scaled",
                constants: Constants | None = None, cap: int = DEFAULT_WELL_LINKED_CAP,
                trace: DriverTrace | None = None) -> CyclePackingCert | FailureReport:
    """``k`` cycles of congestion ``<= p`` found through a well-linked set ``D``.

    ``mode='paper'`` uses the full-size constants and keeps every guard;
    ``mode='scaled'`` uses ``constants`` (small defaults) and skips numeric
    guards.  In both modes the returned certificate has been validated.
    """
    if p not in (2, 3, 4):
        return FailureReport("input", f"p must be 2, 3 or 4, not {p}")
    if mode not in ("paper", "scaled"):
        return FailureReport("input", f"unknown constants mode {mode!r}")
    if k < 1:
        return FailureReport("input", "k must be positive")
    if constants is None:
        constants = Constants.paper(k, p) if mode == "paper" else Constants.scaled(k, p)
    trace = trace if trace is not None else DriverTrace()
    check = mode == "paper"
    D = sorted(set(D))
    try:
        need = constants.terminals(k, p)
        trace.log("size", required=need, available=len(D))
        if len(D) < need:
            raise HypothesisViolated(f"|D| = {len(D)} below the required {need}")
        trace.log("well-linkedness")
        check_well_linked(graph, D[:need], cap)
        trace.log("walk-system")
        build = disjoint_walk_system if p == 2 else walk_system
        first = build(graph, D, constants.a, constants.b, k, cap, assume_well_linked=True)
        if isinstance(first, CyclePackingCert):
            cert = first
        elif p == 4:
            cert = _drive_quarter(graph, first, k, constants, check, trace)
        else:
            cert = _drive_half(graph, first, k, p, constants, check, trace)
    except NoLinkage as exc:
        data = exc.witness.to_json() if hasattr(exc.witness, "to_json") else {"separator": exc.witness}
        return FailureReport(trace.stages[-1]["stage"], str(exc), data)
    except CyclePackError as exc:
        return FailureReport(trace.stages[-1]["stage"], str(exc))
    trace.log("validation")
    final = CyclePackingCert(cert.cycles[:k], p, k)
    if not final.is_valid(graph):
        return FailureReport("validation", "produced certificate failed validation",
                             final.to_json())
    return final


def _sparse_everywhere(linkages: dict, d) -> tuple | None:
    """First pair of distinct pairing keys whose intersection graph is not ``d``-degenerate."""
    keys = sorted(linkages, key=lambda key: pairing_index(key))
    for x in range(len(keys)):
        for y in range(x + 1, len(keys)):
            ig = intersection_graph(linkages[keys[x]].paths, linkages[keys[y]].paths)
            dg, _ = degeneracy(ig.adjacency())
            if dg > d:
                return keys[x], keys[y]
    return None


def pairing_index(key: tuple[int, int]) -> tuple[int, int]:
    i, j = key
    return (min(i, j), 0 if i < j else 1)


def _dense_core(linkages: dict, pair: tuple, d):
    ig = intersection_graph(linkages[pair[0]].paths, linkages[pair[1]].paths)
    core = max_core(ig.adjacency(), d)
    if core is None:
        raise InternalInvariant("non-degenerate pair has an empty core")
    left = sorted(i for side, i in core if side == 0)
    right = sorted(j for side, j in core if side == 1)
    return left, right


def _drive_quarter(graph, system, k, constants, check, trace) -> CyclePackingCert:
    trace.log("pair-linkages")
    linkages = pair_linkages(graph, system)
    dense = _sparse_everywhere(linkages, constants.d)
    if dense is None:
        trace.log("sparse")
        return sparse_win(system, linkages, constants.d, check)
    trace.log("dense", pair=list(dense))
    left, right = _dense_core(linkages, dense, constants.d)
    L = linkages[dense[0]].sub(left)
    K = linkages[dense[1]].sub(right)
    Lback = full_linkage(graph, L.sinks, L.sources)
    Kback = full_linkage(graph, K.sinks, K.sources)
    order_L, order_K = induced_order(L, Lback), induced_order(K, Kback)
    ob = intersection_graph(L.paths, K.paths).ordered(order_L.order, order_K.order)
    pairs = disjoint_pairs(ob, 3 * k, 2, check=check)
    good = [pr for pr in pairs
            if order_L.same_cycle(pr.i0, pr.i1 - 1) and order_K.same_cycle(pr.j0, pr.j1 - 1)]
    if len(good) < k:
        raise InternalInvariant(f"only {len(good)} good index pairs, need {k}")
    U_walks, W_walks, U_members, W_members = [], [], [], []
    for pr in good[:k]:
        U_walks.append(interlaced_walk(L, Lback, pr.i0, pr.i1 - pr.i0, order_L)[0])
        W_walks.append(interlaced_walk(K, Kback, pr.j0, pr.j1 - pr.j0, order_K)[0])
        U_members.append([order_L.order[t] for t in pr.x_range])
        W_members.append([order_K.order[t] for t in pr.y_range])
    return dense_win(U_walks, W_walks, L, K, U_members, W_members)


def _drive_half(graph, system, k, p, constants, check, trace) -> CyclePackingCert:
    q = constants.q
    size = q * (2 * k - 2) + 1
    trace.log("pair-linkages", size=size)
    linkages = pair_linkages(graph, system, sizes=size)
    untangled = {}
    for key in pairing(system.a):
        L = linkages[key]
        Lback = full_linkage(graph, L.sinks, L.sources)
        trace.log("untangle", pair=list(key))
        verdict = untangle(graph, L, Lback, q, k, check=True)
        if isinstance(verdict, CyclePackingCert):
            return verdict
        untangled[key] = verdict
    Q = {key: linkages[key].sub(v.members) for key, v in untangled.items()}
    dense = _sparse_everywhere(Q, constants.d)
    if dense is None:
        trace.log("sparse")
        return sparse_win(system, Q, constants.d, check)
    trace.log("dense", pair=list(dense))
    left, right = _dense_core(Q, dense, constants.d)
    Q1, Q2 = Q[dense[0]].sub(left), Q[dense[1]].sub(right)
    ob = intersection_graph(Q1.paths, Q2.paths).ordered(range(len(Q1)), range(len(Q2)))
    pairs = disjoint_pairs(ob, k, 2, check=check)
    path1, path2 = untangled[dense[0]].walk, untangled[dense[1]].walk
    U_walks, W_walks, U_members, W_members = [], [], [], []
    for pr in pairs:
        U_walks.append(_span(path1, [Q1.paths[t] for t in pr.x_range]))
        W_walks.append(_span(path2, [Q2.paths[t] for t in pr.y_range]))
        U_members.append(list(pr.x_range))
        W_members.append(list(pr.y_range))
    return dense_win(U_walks, W_walks, Q1, Q2, U_members, W_members)


def _span(path: Sequence[int], members: Sequence[Sequence[int]]) -> Walk:
    """Subpath of ``path`` from the first member's start to the last member's end."""
    s = list(path).index(members[0][0])
    t = list(path).index(members[-1][-1])
    return tuple(path[s:t + 1])
