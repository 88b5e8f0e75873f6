"""Lower-bound witnesses for directed treewidth and balanced separations.

Directed treewidth is never computed here.  Instead two structural
certificates are checked (a grid-like path system, and a pair of dual
half-integral linkage pairs with a dense intersection graph), and a
brute-force search looks for small balanced separations.  The module also
assembles the dense subgraphs obtained from two heavily intersecting
linkages.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .backlinkage import build_aux, induced_backlinkage, induced_order
from .digraph import Digraph, Walk, check_walk, congestion
from .errors import (BoundNotMet, CapExceeded, HypothesisViolated, InvalidWalk,
                     InvalidWitness, NoDual, NotDual, PipelineStage, InternalInvariant)
from .intersection import intersection_graph, max_core, min_degree_core
from .linkage import Linkage, is_dual, max_linkage
from .partition import disjoint_pairs

DEFAULT_SEPARATION_CAP = 18
TOLERANCE = 1e-9
GRID_LEMMA = "path-system grid lower bound (k/8)"
LINKAGE_PAIR_LEMMA = "dense linkage-pair lower bound"


# -- separations -----------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    """``X | Y`` covers the vertex set and no arc leaves ``Y - X`` into ``X - Y``."""

    X: frozenset
    Y: frozenset

    @property
    def order(self) -> int:
        return len(self.X & self.Y)

    @property
    def separator(self) -> frozenset:
        return self.X & self.Y

    def is_valid(self, graph: Digraph) -> bool:
        if (self.X | self.Y) != set(range(graph.n)):
            return False
        only_y, only_x = self.Y - self.X, self.X - self.Y
        return not any(u in only_y and v in only_x for u, v in graph.arcs)

    def to_json(self, W: Iterable[int] = (), w: int | None = None) -> dict:
        body = {"schema": 1, "kind": "separation", "X": sorted(self.X), "Y": sorted(self.Y),
                "order": self.order, "W": sorted(W)}
        if w is not None:
            body["w"] = w
        return body


def _reach_mask(graph: Digraph, v: int, blocked: int) -> int:
    mask = 1 << v
    stack = [v]
    while stack:
        u = stack.pop()
        for x in graph.out_neighbors(u):
            bit = 1 << x
            if not (mask & bit) and not (blocked & bit):
                mask |= bit
                stack.append(x)
    return mask


def _closure_in_window(graph: Digraph, Wlist: list[int], S_mask: int, lo: int, hi: int) -> int | None:
    """An out-closed vertex set of ``G - S`` generated by ``W``-vertices whose
    number of ``W``-elements lies in ``[lo, hi]``; searched depth first."""
    W_mask = 0
    for w in Wlist:
        W_mask |= 1 << w
    free = [w for w in Wlist if not (S_mask >> w) & 1]
    reach = {w: _reach_mask(graph, w, S_mask) for w in free}
    seen = set()
    stack = [0]
    while stack:
        mask = stack.pop()
        if mask in seen:
            continue
        seen.add(mask)
        c = bin(mask & W_mask).count("1")
        if lo <= c <= hi:
            return mask
        if c > hi:
            continue
        for w in reversed(free):
            if not (mask >> w) & 1:
                stack.append(mask | reach[w])
    return None


def balanced_separation(graph: Digraph, W: Iterable[int], w: int,
                        cap: int = DEFAULT_SEPARATION_CAP) -> Separation | None:
    """Separation of order ``<= w`` with ``|X & W|, |Y & W| >= |W|/4``, or ``None``.

    Candidate separators ``S`` are enumerated by size, then
    lexicographically, so the separator of the result is the least
    qualifying one.  For each ``S`` the side ``Y`` is ``S`` plus an
    out-closed set of ``G - S``, which is exactly what the reachability
    construction ``Y = S + B + R(B)`` produces.  ``None`` means no such
    separation exists, which rules out directed treewidth ``<= w`` when
    ``|W| >= 2w + 2``.
    """
    if graph.n > cap:
        raise CapExceeded(f"n = {graph.n} exceeds separation cap {cap}")
    Wlist = sorted(set(W))
    size = len(Wlist)
    everything = frozenset(range(graph.n))
    for order in range(0, w + 1):
        for S in itertools.combinations(range(graph.n), order):
            S_mask = sum(1 << s for s in S)
            in_W = sum(1 for s in S if s in set(Wlist))
            # 4 * (c + in_W) >= |W| and 4 * c <= 3 * |W|, c = |W-elements of the closure|
            lo = max(0, -(-(size - 4 * in_W) // 4))
            hi = (3 * size) // 4
            if lo > hi:
                continue
            mask = _closure_in_window(graph, Wlist, S_mask, lo, hi)
            if mask is None:
                continue
            closure = {v for v in range(graph.n) if (mask >> v) & 1}
            Y = frozenset(closure | set(S))
            X = (everything - Y) | frozenset(S)
            return Separation(X, Y)
    return None


def separation_is_balanced(graph: Digraph, sep: Separation, W: Iterable[int], w: int) -> bool:
    W = set(W)
    return (sep.is_valid(graph) and sep.order <= w
            and 4 * len(sep.X & W) >= len(W) and 4 * len(sep.Y & W) >= len(W))


# -- certificates ----------------------------------------------------------

@dataclass(frozen=True)
class DtwWitness:
    """A validated claim ``dtw >= lower_bound`` for the union of ``structure``."""

    lower_bound: int
    cited_lemma: str
    structure: dict
    checks: tuple[str, ...]
    exact_bound: Fraction | None = None

    def to_json(self) -> dict:
        body = {"schema": 1, "kind": "dtw_witness", "k": self.lower_bound,
                "cited_lemma": self.cited_lemma, "structure": self.structure,
                "checks": list(self.checks)}
        if self.exact_bound is not None:
            body["exact_bound"] = str(self.exact_bound)
        return body


@dataclass(frozen=True)
class GridWitness:
    """Disjoint paths ``P_i`` each split into a prefix ``A_i`` and a later
    part ``B_i``, and pairwise disjoint cross paths ``links[(i, j)]`` from
    ``B_i`` to ``A_j`` for every ordered pair ``i != j``.

    ``a_ends[i]`` is the length of the ``A_i`` prefix and ``b_starts[i]``
    the index on ``P_i`` where ``B_i`` begins; ``a_ends[i] <= b_starts[i]``.
    """

    paths: tuple[Walk, ...]
    a_ends: tuple[int, ...]
    b_starts: tuple[int, ...]
    links: dict

    @property
    def k(self) -> int:
        return len(self.paths)

    def A(self, i: int) -> Walk:
        return tuple(self.paths[i][:self.a_ends[i]])

    def B(self, i: int) -> Walk:
        return tuple(self.paths[i][self.b_starts[i]:])

    def to_json(self) -> dict:
        return {"type": "grid", "paths": [list(p) for p in self.paths],
                "a_ends": list(self.a_ends), "b_starts": list(self.b_starts),
                "links": [[i, j, list(p)] for (i, j), p in sorted(self.links.items())]}

    @classmethod
    def from_json(cls, body: dict) -> "GridWitness":
        return cls(tuple(tuple(p) for p in body["paths"]), tuple(body["a_ends"]),
                   tuple(body["b_starts"]), {(i, j): tuple(p) for i, j, p in body["links"]})


def _check_path(graph: Digraph, p: Sequence[int], clause: str) -> None:
    if not p:
        raise InvalidWitness(clause, "empty path")
    try:
        check_walk(graph, p)
    except InvalidWalk as exc:
        raise InvalidWitness(clause, str(exc)) from None
    if len(set(p)) != len(p):
        raise InvalidWitness(clause, f"{tuple(p)} repeats a vertex")


def _pairwise_disjoint(paths: Iterable[Sequence[int]], clause: str) -> None:
    seen: dict[int, int] = {}
    for idx, p in enumerate(paths):
        for v in p:
            if seen.setdefault(v, idx) != idx:
                raise InvalidWitness(clause, f"vertex {v} lies on two paths")


def verify_grid_witness(graph: Digraph, wit: GridWitness) -> DtwWitness:
    k = wit.k
    if k < 2:
        raise InvalidWitness("size", "need at least two paths")
    if len(wit.a_ends) != k or len(wit.b_starts) != k:
        raise InvalidWitness("markers", "one A/B marker pair per path is required")
    for p in wit.paths:
        _check_path(graph, p, "path")
    _pairwise_disjoint(wit.paths, "disjointness-paths")
    for i, p in enumerate(wit.paths):
        a, b = wit.a_ends[i], wit.b_starts[i]
        if not (1 <= a <= b < len(p)):
            raise InvalidWitness("markers", f"path {i}: need 1 <= a_end <= b_start < len(P)")
    expected = {(i, j) for i in range(k) for j in range(k) if i != j}
    if set(wit.links) != expected:
        raise InvalidWitness("links", "exactly one link per ordered pair i != j is required")
    for key in sorted(wit.links):
        _check_path(graph, wit.links[key], "link-path")
    _pairwise_disjoint((wit.links[key] for key in sorted(wit.links)), "disjointness")
    for (i, j) in sorted(wit.links):
        link = wit.links[(i, j)]
        if link[0] not in set(wit.B(i)):
            raise InvalidWitness("link-endpoints", f"L[{i},{j}] does not start in B_{i}")
        if link[-1] not in set(wit.A(j)):
            raise InvalidWitness("link-endpoints", f"L[{i},{j}] does not end in A_{j}")
    return DtwWitness(-(-k // 8), GRID_LEMMA, wit.to_json(),
                      ("path", "disjointness-paths", "markers", "links", "link-path",
                       "disjointness", "link-endpoints"), Fraction(k, 8))


@dataclass(frozen=True)
class LinkagePairWitness:
    """Two dual pairs of half-integral linkages; the claimed bound is ``k``."""

    P: Linkage
    Pback: Linkage
    Q: Linkage
    Qback: Linkage
    k: int
    extra_arcs: tuple[tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        def fam(lk):
            return [list(p) for p in lk.paths]
        return {"type": "linkage_pair", "k": self.k, "P": fam(self.P), "Pback": fam(self.Pback),
                "Q": fam(self.Q), "Qback": fam(self.Qback),
                "extra_arcs": [list(a) for a in self.extra_arcs]}

    @classmethod
    def from_json(cls, body: dict) -> "LinkagePairWitness":
        def fam(key):
            return Linkage(tuple(tuple(p) for p in body[key]), 2)
        return cls(fam("P"), fam("Pback"), fam("Q"), fam("Qback"), int(body["k"]),
                   tuple(tuple(a) for a in body.get("extra_arcs", ())))


def linkage_pair_bound(size: int, k: int) -> float:
    """``8k log_{4/3}(size / 24k) + 24k + 4``."""
    return 8 * k * math.log(size / (24 * k), 4 / 3) + 24 * k + 4


def verify_linkage_pair_witness(graph: Digraph, wit: LinkagePairWitness) -> DtwWitness:
    """Check the witness in ``graph`` plus the witness's declared extra arcs."""
    host = graph.with_arcs(wit.extra_arcs) if wit.extra_arcs else graph
    if wit.k < 1:
        raise InvalidWitness("size", "k must be positive")
    for name in ("P", "Pback", "Q", "Qback"):
        fam: Linkage = getattr(wit, name)
        if not len(fam):
            raise InvalidWitness("size", f"{name} is empty")
        for p in fam.paths:
            _check_path(host, p, "path")
        if congestion(fam.paths) > 2:
            raise InvalidWitness("congestion", f"{name} has congestion above 2")
    if not is_dual(wit.P, wit.Pback) or not is_dual(wit.Q, wit.Qback):
        raise InvalidWitness("duality", "P/Pback or Q/Qback are not dual")
    if len(wit.P) <= 24 * wit.k:
        raise InvalidWitness("size", f"|P| = {len(wit.P)} must exceed 24k = {24 * wit.k}")
    ig = intersection_graph(wit.P.paths, wit.Q.paths)
    md = ig.min_degree()
    bound = linkage_pair_bound(len(wit.P), wit.k)
    if not md >= bound + TOLERANCE:
        raise BoundNotMet(md, bound)
    return DtwWitness(wit.k, LINKAGE_PAIR_LEMMA, wit.to_json(),
                      ("path", "congestion", "duality", "size", "degree-bound"))


# -- dense subgraphs from two intersecting linkages ------------------------

@dataclass(frozen=True)
class DenseSubgraph:
    """One output subgraph: its vertices and arcs (all arcs of the host),
    artificial arcs kept apart, the index sets of the four source
    linkages it uses, and the linkage-pair witness on its core."""

    vertices: frozenset
    arcs: frozenset
    artificial: tuple[tuple[int, int], ...]
    U: tuple[int, ...]
    W: tuple[int, ...]
    U_back: tuple[int, ...]
    W_back: tuple[int, ...]
    witness: LinkagePairWitness | None = None
    witness_error: str | None = None

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "arcs": sorted(list(a) for a in self.arcs),
                "artificial": [list(a) for a in self.artificial],
                "U": list(self.U), "W": list(self.W),
                "witness": self.witness.to_json() if self.witness else None,
                "witness_error": self.witness_error}


@dataclass
class DenseResult:
    subgraphs: list
    L: Linkage
    K: Linkage
    Lback: Linkage
    Kback: Linkage
    audit: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"schema": 1, "kind": "dense_subgraphs",
                "subgraphs": [d.to_json() for d in self.subgraphs], "audit": self.audit}


def _path_arcs(paths: Iterable[Sequence[int]]) -> set:
    return {(p[t], p[t + 1]) for p in paths for t in range(len(p) - 1)}


def _stage(mode: str, stage: str, exc: Exception):
    if mode == "paper":
        return exc if isinstance(exc, HypothesisViolated) else HypothesisViolated(f"{stage}: {exc}")
    return PipelineStage(stage, str(exc))


def _broken_cycle_arcs(lk: Linkage, aux, members: set) -> tuple[list, list]:
    """Back-path indices with both ends in ``members`` and one artificial
    arc per Aux cycle that ``members`` cuts."""
    backs = [aux.back[i] for i in sorted(members) if aux.succ[i] in members]
    extra = []
    pred = {j: i for i, j in enumerate(aux.succ)}
    for cyc in aux.cycles():
        inside = [i for i in cyc if i in members]
        if not inside or len(inside) == len(cyc):
            continue
        outs = [i for i in inside if aux.succ[i] not in members]
        ins = [i for i in inside if pred[i] not in members]
        if len(outs) != 1 or len(ins) != 1:
            raise InternalInvariant("segment meets an Aux cycle in more than one arc")
        extra.append((lk.paths[outs[0]][-1], lk.paths[ins[0]][0]))
    return backs, extra


def build_dense_subgraphs(graph: Digraph, L: Linkage, K: Linkage, Lback: Linkage, Kback: Linkage,
                          a: int, b: int, mode: str = "paper", d=None, r=None) -> DenseResult:
    """``a`` subgraphs of bounded overlap, each carrying a dense linkage-pair core.

    Paper mode uses ``d = 327680 a b log2(|L|/b)`` and
    ``r = 640 b log2(|L|/b)`` (both overridable) and raises
    ``HypothesisViolated`` on a failed precondition.  Scaled mode skips
    the numeric guards (``d`` defaults to 0 and ``r`` to 1) and reports a
    failed stage as ``PipelineStage``.  Artificial arcs are returned, not
    inserted into ``graph``.
    """
    if mode not in ("paper", "scaled"):
        raise ValueError("mode must be 'paper' or 'scaled'")
    check = mode == "paper"
    if not is_dual(L, Lback) or not is_dual(K, Kback):
        raise _stage(mode, "input", NotDual("L/Lback and K/Kback must be dual pairs"))
    if check:
        if len(L) <= b:
            raise HypothesisViolated(f"|L| = {len(L)} must exceed b = {b}")
        if d is None:
            d = 327680 * a * b * math.log2(len(L) / b)
    elif d is None:
        d = 0

    ig = intersection_graph(L.paths, K.paths)
    core = max_core(ig.adjacency(), d)
    if core is None:
        raise _stage(mode, "core", HypothesisViolated(f"intersection graph is {d}-degenerate"))
    left = sorted(i for side, i in core if side == 0)
    right = sorted(j for side, j in core if side == 1)
    L1, K1 = L.sub(left), K.sub(right)

    try:
        Lb1 = max_linkage(graph, L1.sinks, L1.sources)[0]
        Kb1 = max_linkage(graph, K1.sinks, K1.sources)[0]
        if len(Lb1) < len(L1) or len(Kb1) < len(K1):
            raise NoDual("restricted linkages have no full return linkage")
    except NoDual as exc:
        raise _stage(mode, "duals", exc) from None

    if r is None:
        if check:
            if len(L1) <= b:
                raise HypothesisViolated(f"restricted |L| = {len(L1)} must exceed b = {b}")
            r = 640 * b * math.log2(len(L1) / b)
        else:
            r = 1
    order_L = induced_order(L1, Lb1)
    order_K = induced_order(K1, Kb1)
    ig1 = intersection_graph(L1.paths, K1.paths)
    ob = ig1.ordered(order_L.order, order_K.order)
    try:
        pairs = disjoint_pairs(ob, a, r, check=check)
    except (HypothesisViolated, InternalInvariant) as exc:
        raise _stage(mode, "pairs", exc) from None

    aux_L, aux_K = build_aux(L1, Lb1), build_aux(K1, Kb1)
    subgraphs = []
    for pair in pairs:
        U = [order_L.order[p] for p in pair.x_range]
        W = [order_K.order[p] for p in pair.y_range]
        u_back, u_extra = _broken_cycle_arcs(L1, aux_L, set(U))
        w_back, w_extra = _broken_cycle_arcs(K1, aux_K, set(W))
        paths = ([L1.paths[i] for i in U] + [K1.paths[j] for j in W]
                 + [Lb1.paths[t] for t in u_back] + [Kb1.paths[t] for t in w_back])
        vertices = frozenset(v for p in paths for v in p)
        arcs = frozenset(_path_arcs(paths))
        artificial = tuple(u_extra + w_extra)
        witness, error = _core_witness(graph, L1, K1, Lb1, Kb1, U, W, u_back, w_back,
                                       u_extra, w_extra, r, b, check)
        subgraphs.append(DenseSubgraph(vertices, arcs, artificial, tuple(U), tuple(W),
                                       tuple(u_back), tuple(w_back), witness, error))

    result = DenseResult(subgraphs, L1, K1, Lb1, Kb1)
    result.audit = audit_dense(result)
    if not result.audit["ok"]:
        raise InternalInvariant(f"dense subgraph audit failed: {result.audit}")
    return result


def _core_witness(graph, L1, K1, Lb1, Kb1, U, W, u_back, w_back, u_extra, w_extra, r, b, check):
    """Second-stage linkage pair: peel ``I(U, W)`` to minimum degree ``>= r/2``
    and close the surviving paths with induced backlinkages."""
    U_link = Linkage(tuple(L1.paths[i] for i in U))
    W_link = Linkage(tuple(K1.paths[j] for j in W))
    U_b = Linkage(tuple(Lb1.paths[t] for t in u_back) + tuple(u_extra))
    W_b = Linkage(tuple(Kb1.paths[t] for t in w_back) + tuple(w_extra))
    ig = intersection_graph(U_link.paths, W_link.paths)
    core = min_degree_core(ig.adjacency(), r / 2)
    if core is None:
        return None, "intersection of the pair has no core of minimum degree r/2"
    P_idx = sorted(i for side, i in core if side == 0)
    Q_idx = sorted(j for side, j in core if side == 1)
    P, Q = U_link.sub(P_idx), W_link.sub(Q_idx)
    Pback = induced_backlinkage(P_idx, U_link, U_b)
    Qback = induced_backlinkage(Q_idx, W_link, W_b)
    extra = tuple(sorted(set(u_extra) | set(w_extra)))
    wit = LinkagePairWitness(P, Pback, Q, Qback, b + 4, extra)
    try:
        verify_linkage_pair_witness(graph, wit)
    except (InvalidWitness, BoundNotMet) as exc:
        if check:
            raise InternalInvariant(f"dense core witness rejected: {exc}") from None
        return wit, str(exc)
    return wit, None


def audit_dense(result: DenseResult) -> dict:
    """Membership, artificial-arc and subpartition counters."""
    membership: dict[int, int] = {}
    for D in result.subgraphs:
        for v in D.vertices:
            membership[v] = membership.get(v, 0) + 1
    max_membership = max(membership.values(), default=0)
    max_artificial = max((len(D.artificial) for D in result.subgraphs), default=0)
    disjoint = True
    for attr in ("U", "W", "U_back", "W_back"):
        used: list[int] = []
        for D in result.subgraphs:
            used.extend(getattr(D, attr))
        disjoint &= len(used) == len(set(used))
    return {"max_membership": max_membership, "max_artificial": max_artificial,
            "subpartition": disjoint,
            "ok": max_membership <= 4 and max_artificial <= 4 and disjoint}
