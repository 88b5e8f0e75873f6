"""Seeded instance generators.

Each generator returns an ``Instance``: a digraph plus annotations such as
a well-linked terminal set ``D``, a planted packing, or a planted
structure for one of the constructions.  All randomness comes from
``random.Random(seed)``, so an ``InstanceSpec`` determines its output.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .digraph import Digraph
from .errors import BadSpec
from .linkage import Linkage


@dataclass(frozen=True)
class InstanceSpec:
    name: str
    params: tuple = ()
    seed: int = 0

    def to_json(self) -> dict:
        return {"name": self.name, "params": list(self.params), "seed": self.seed}


@dataclass
class Instance:
    graph: Digraph
    annotations: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {}
        for key, value in self.annotations.items():
            if hasattr(value, "to_json"):
                out[key] = value.to_json()
            elif isinstance(value, Linkage):
                out[key] = [list(p) for p in value.paths]
            else:
                out[key] = value
        return out


class _Builder:
    """Vertex/arc accumulator; duplicate arcs are merged."""

    def __init__(self):
        self.n = 0
        self.arcs: set[tuple[int, int]] = set()

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def vertices(self, count: int) -> list[int]:
        return [self.vertex() for _ in range(count)]

    def path(self, seq) -> tuple[int, ...]:
        seq = tuple(seq)
        for u, v in zip(seq, seq[1:]):
            if u != v:
                self.arcs.add((u, v))
        return seq

    def graph(self) -> Digraph:
        return Digraph(self.n, self.arcs)


def grid(rows: int, cols: int, cylindrical: bool = False) -> Instance:
    """Bidirected ``rows x cols`` grid, or the cylindrical orientation
    (rows point right, columns alternate direction, rows wrap around).
    ``boundary`` annotates the outer face vertices."""
    if rows < 1 or cols < 1:
        raise BadSpec("grid dimensions must be positive")
    vid = lambda r, c: r * cols + c
    arcs = set()
    for r in range(rows):
        for c in range(cols):
            if cylindrical:
                if cols > 1:
                    arcs.add((vid(r, c), vid(r, (c + 1) % cols)))
                if r + 1 < rows:
                    arcs.add((vid(r, c), vid(r + 1, c)) if c % 2 == 0 else (vid(r + 1, c), vid(r, c)))
            else:
                if c + 1 < cols:
                    arcs |= {(vid(r, c), vid(r, c + 1)), (vid(r, c + 1), vid(r, c))}
                if r + 1 < rows:
                    arcs |= {(vid(r, c), vid(r + 1, c)), (vid(r + 1, c), vid(r, c))}
    arcs = {(u, v) for u, v in arcs if u != v}
    boundary = sorted({vid(r, c) for r in range(rows) for c in range(cols)
                       if r in (0, rows - 1) or c in (0, cols - 1)})
    return Instance(Digraph(rows * cols, arcs), {"boundary": boundary, "D": boundary})


def planted_cycles(k: int, p: int = 1, seed: int = 0) -> Instance:
    """``k`` planted cycles plus a hub that makes the graph strongly connected.

    For ``p = 1`` the cycles are disjoint 2-cycles ``u_i <-> v_i`` and the
    hub has arcs to every ``u_i`` and from every ``v_i``, so every cycle
    through the hub uses some ``u_i``: the maximum disjoint packing and the
    minimum feedback vertex set both equal ``k``.  For ``p >= 2``
    consecutive cycles are triangles chained through a shared vertex
    (congestion 2).
    ``D`` is the vertex set of the first planted cycle.
    """
    if k < 1:
        raise BadSpec("k must be positive")
    rng = random.Random(seed)
    b = _Builder()
    cycles = []
    if p == 1:
        for _ in range(k):
            u, v = b.vertices(2)
            b.path((u, v, u))
            cycles.append((u, v))
        hub = b.vertex()
        for u, v in cycles:
            b.path((hub, u))
            b.path((v, hub))
    else:
        shared = b.vertex()
        prev = shared
        for i in range(k):
            x, y = b.vertices(2)
            b.path((prev, x, y, prev))
            cycles.append((prev, x, y))
            prev = y
        hub = b.vertex()
        for cyc in cycles:
            b.path((hub, cyc[0]))
            b.path((cyc[-1], hub))
    order = list(range(b.n))
    rng.shuffle(order)  # relabel so that ids carry no structure
    relabel = {old: new for new, old in enumerate(order)}
    g = Digraph(b.n, {(relabel[u], relabel[v]) for u, v in b.arcs})
    planted = [tuple(relabel[v] for v in c) for c in cycles]
    return Instance(g, {"packing": [list(c) for c in planted], "p": 1 if p == 1 else 2,
                        "D": sorted(planted[0])})


def planted_clique(size: int, extra: int = 0, density: float = 0.2, seed: int = 0) -> Instance:
    """Complete digraph on ``D = {0..size-1}`` plus ``extra`` random vertices."""
    rng = random.Random(seed)
    n = size + extra
    arcs = {(u, v) for u in range(size) for v in range(size) if u != v}
    for u in range(n):
        for v in range(n):
            if u != v and (u >= size or v >= size) and rng.random() < density:
                arcs.add((u, v))
    return Instance(Digraph(n, arcs), {"D": list(range(size))})


def random_digraph(n: int, m: int, seed: int = 0) -> Instance:
    """``m`` distinct arcs drawn uniformly without replacement."""
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    if m > len(pairs):
        raise BadSpec(f"m = {m} exceeds the {len(pairs)} possible arcs")
    rng = random.Random(seed)
    return Instance(Digraph(n, rng.sample(pairs, m)))


def planted_dual(q: int, k: int, seed: int = 0, noise: int = 0) -> Instance:
    """A dual linkage pair of order ``q(2k-2)+1`` for untangling.

    Forward paths ``s_i -> x_i -> t_i``; the back path from ``t_i`` goes
    through a fresh vertex to ``s_{pi(i)}`` for a random permutation
    ``pi``, so the Aux cycle structure is random.  ``noise`` adds random
    chords between the middle vertices, which may create
    self-intersections in the greedy walk when back paths reuse them.
    """
    size = q * (2 * k - 2) + 1
    rng = random.Random(seed)
    b = _Builder()
    S = b.vertices(size)
    T = b.vertices(size)
    perm = list(range(size))
    rng.shuffle(perm)
    mids = b.vertices(size)
    forward = [b.path((S[i], mids[i], T[i])) for i in range(size)]
    backs = []
    for i in range(size):
        # back paths may run through a forward middle vertex (never two through one)
        if rng.random() < 0.5:
            hop = mids[rng.randrange(size)]
            if any(hop in p for p in backs):
                hop = b.vertex()
        else:
            hop = b.vertex()
        backs.append(b.path((T[i], hop, S[perm[i]])))
    for _ in range(noise):
        u, v = rng.sample(mids, 2) if size > 1 else (mids[0], mids[0])
        if u != v:
            b.arcs.add((u, v))
    L = Linkage(tuple(forward))
    Lback = Linkage(tuple(backs), 1)
    return Instance(b.graph(), {"L": L, "Lback": Lback, "q": q, "k": k})


def linkage_pair_size(k: int) -> int:
    """Smallest ``m > 24k`` with ``m >= 8k log_{4/3}(m/24k) + 24k + 4`` (plus a margin)."""
    m = 24 * k + 1
    while m < 8 * k * math.log(m / (24 * k), 4 / 3) + 24 * k + 4 + 1e-6:
        m += 1
    return m


def planted_linkage_pair(k: int = 2, m: int | None = None) -> Instance:
    """``m x m`` grid whose rows and columns form two dual linkage pairs.

    Rows run left to right with a return arc from the last to the first
    vertex; columns run top to bottom with the same kind of return arc.
    The intersection graph of rows and columns is complete bipartite, so
    its minimum degree is ``m``.
    """
    if m is None:
        m = linkage_pair_size(k)
    vid = lambda r, c: r * m + c
    rows = tuple(tuple(vid(r, c) for c in range(m)) for r in range(m))
    cols = tuple(tuple(vid(r, c) for r in range(m)) for c in range(m))
    b = _Builder()
    b.n = m * m
    for p in rows + cols:
        b.path(p)
    row_back = tuple((p[-1], p[0]) for p in rows)
    col_back = tuple((p[-1], p[0]) for p in cols)
    for p in row_back + col_back:
        b.path(p)
    return Instance(b.graph(), {"P": Linkage(rows), "Pback": Linkage(row_back),
                                "Q": Linkage(cols), "Qback": Linkage(col_back), "k": k})


def planted_gridwitness(k: int, seg: int = 2) -> Instance:
    """A valid grid witness with ``k`` paths.

    Each ``P_i`` has an ``A`` part of ``max(seg, k-1)`` vertices followed by a
    ``B`` part of the same length; the link ``L_{i,j}`` leaves the ``j``-th
    free vertex of ``B_i``, passes a private middle vertex and enters the
    ``i``-th free vertex of ``A_j``.
    """
    from .witness import GridWitness
    if k < 2:
        raise BadSpec("k must be at least 2")
    width = max(seg, k - 1)
    b = _Builder()
    paths = [b.path(b.vertices(2 * width)) for _ in range(k)]
    links = {}
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            out_slot = j if j < i else j - 1
            in_slot = i if i < j else i - 1
            src = paths[i][width + out_slot]
            dst = paths[j][in_slot]
            mid = b.vertex()
            links[(i, j)] = b.path((src, mid, dst))
    wit = GridWitness(tuple(paths), (width,) * k, (width,) * k, links)
    return Instance(b.graph(), {"witness": wit})


def planted_dense(m: int, seed: int = 0) -> Instance:
    """Row/column grid with permuted return arcs.

    Rows ``L`` and columns ``K`` pairwise intersect; the return arc of row
    ``i`` goes to the start of row ``sigma(i)`` and likewise for columns,
    so both Aux graphs have random cycle structure.
    """
    rng = random.Random(seed)
    vid = lambda r, c: r * m + c
    b = _Builder()
    b.n = m * m
    rows = tuple(b.path(vid(r, c) for c in range(m)) for r in range(m))
    cols = tuple(b.path(vid(r, c) for r in range(m)) for c in range(m))
    sigma = list(range(m)); rng.shuffle(sigma)
    tau = list(range(m)); rng.shuffle(tau)
    row_back = tuple(b.path((rows[i][-1], rows[sigma[i]][0])) for i in range(m))
    col_back = tuple(b.path((cols[j][-1], cols[tau[j]][0])) for j in range(m))
    return Instance(b.graph(), {"L": Linkage(rows), "K": Linkage(cols),
                                "Lback": Linkage(row_back), "Kback": Linkage(col_back)})


def planted_sparse(a: int, b: int, d: int = 0, alpha: int = 1, seed: int = 0) -> Instance:
    """Walk system with pairing linkages of bounded pairwise degeneracy.

    ``P_i`` is ``A_i`` (``b`` vertices), a filler vertex, then ``B_i``.
    For ``alpha = 2`` consecutive walks share their filler vertex.  The
    linkage ``L_{i,j}`` joins ``B_i[t]`` to ``A_j[t]`` through private
    vertices; when ``d >= 1`` random partial matchings between classes
    share a hub vertex, so two classes intersect in at most ``d`` matchings.
    """
    from .extraction import WalkSystem, pairing
    if a < 2 or a % 2:
        raise BadSpec("a must be even and at least 2")
    rng = random.Random(seed)
    bld = _Builder()
    fillers = []
    for i in range(a):
        if alpha >= 2 and i % 2 == 1:
            fillers.append(fillers[-1])
        else:
            fillers.append(bld.vertex())
    A = [bld.vertices(b) for _ in range(a)]
    B = [bld.vertices(b) for _ in range(a)]
    walks = [bld.path(A[i] + [fillers[i]] + B[i]) for i in range(a)]
    keys = pairing(a)
    hubs: dict[tuple[int, int], list[int]] = {(c, t): [] for c in range(len(keys)) for t in range(b)}
    for c1, c2 in itertools.combinations(range(len(keys)), 2):
        for _ in range(d):
            perm = list(range(b)); rng.shuffle(perm)
            for t in range(b):
                if rng.random() < 0.5:
                    h = bld.vertex()
                    hubs[(c1, t)].append(h)
                    hubs[(c2, perm[t])].append(h)
    linkages = {}
    for c, (i, j) in enumerate(keys):
        paths = []
        for t in range(b):
            mid = [bld.vertex()] + hubs[(c, t)]
            paths.append(bld.path([B[i][t]] + mid + [A[j][t]]))
        linkages[(i, j)] = Linkage(tuple(paths))
    system = WalkSystem(tuple(walks), tuple(tuple(x) for x in A), tuple(tuple(x) for x in B),
                        alpha)
    return Instance(bld.graph(), {"system": system, "linkages": linkages, "d": d})


def planted_crossing(k: int, size: int = 3, alpha: int = 1, beta: int = 1,
                     seed: int = 0) -> Instance:
    """``k`` walk pairs ``(U_i, W_i)`` whose member paths intersect densely.

    Each ``U_i`` chains ``size`` paths of ``L`` by direct connector arcs,
    each ``W_i`` chains ``size`` paths of ``K``.  The intersection pattern
    between them is a random bipartite graph with at least ``2 * size``
    edges (so never a forest), realised by shared vertices.  With
    ``alpha = 2`` (``beta = 2``) consecutive ``U`` (``W``) walks share
    their connector vertices.
    """
    rng = random.Random(seed)
    bld = _Builder()
    L_paths, K_paths, U_walks, W_walks, U_members, W_members = [], [], [], [], [], []
    prev_uc = prev_wc = None
    for i in range(k):
        edges = set()
        all_pairs = [(s, t) for s in range(size) for t in range(size)]
        target = min(len(all_pairs), 2 * size + rng.randrange(size + 1))
        edges.update(rng.sample(all_pairs, target))
        shared = {e: bld.vertex() for e in sorted(edges)}
        lp = []
        for s in range(size):
            xs = [shared[(s, t)] for t in range(size) if (s, t) in shared]
            lp.append(tuple([bld.vertex()] + xs + [bld.vertex()]))
        kp = []
        for t in range(size):
            xs = [shared[(s, t)] for s in range(size) if (s, t) in shared]
            kp.append(tuple([bld.vertex()] + xs + [bld.vertex()]))
        for p in lp + kp:
            bld.path(p)
        uc = prev_uc if (alpha >= 2 and i % 2 == 1) else bld.vertices(size - 1)
        wc = prev_wc if (beta >= 2 and i % 2 == 1) else bld.vertices(size - 1)
        prev_uc, prev_wc = uc, wc
        U = list(lp[0])
        for s in range(1, size):
            U += [uc[s - 1]] + list(lp[s])
        W = list(kp[0])
        for t in range(1, size):
            W += [wc[t - 1]] + list(kp[t])
        U_walks.append(bld.path(U))
        W_walks.append(bld.path(W))
        U_members.append(list(range(len(L_paths), len(L_paths) + size)))
        W_members.append(list(range(len(K_paths), len(K_paths) + size)))
        L_paths += lp
        K_paths += kp
    return Instance(bld.graph(), {"U": U_walks, "W": W_walks, "L": Linkage(tuple(L_paths)),
                                  "K": Linkage(tuple(K_paths)), "U_members": U_members,
                                  "W_members": W_members})


def _single_cycle_terminals(b: _Builder, half: int, rng: random.Random):
    """Terminals ``D1``, ``D2`` with arcs ``D1 -> D2`` and ``D2 -> D1`` whose Aux graph is one cycle."""
    D1 = b.vertices(half)
    D2 = b.vertices(half)
    target = list(D2)
    rng.shuffle(target)
    ring = list(range(half))
    rng.shuffle(ring)
    for i in range(half):
        b.path((D1[ring[i]], target[ring[i]], D1[ring[(i + 1) % half]]))
    return D1, D2


def planted_walk_system(a: int, b: int, k: int, seed: int = 0) -> Instance:
    """Well-linked ``D`` of size ``4(a+k)b`` whose dual pair has a single Aux cycle.

    The terminals hang off a complete digraph by a matching of arcs in both
    directions, which makes ``D`` well-linked.  Direct arcs ``D1 -> D2`` and
    ``D2 -> D1`` are the unique shortest routes, so the dual linkages are
    exactly these arcs and their Aux graph is one cycle; for ``k >= 2`` the
    walk-system construction therefore cannot stop at the Aux packing.
    """
    if min(a, b, k) < 1:
        raise BadSpec("a, b, k must be positive")
    rng = random.Random(seed)
    size = 4 * (a + k) * b
    bld = _Builder()
    D1, D2 = _single_cycle_terminals(bld, size // 2, rng)
    core = bld.vertices(size)
    for u, v in itertools.permutations(core, 2):
        bld.arcs.add((u, v))
    for d, c in zip(D1 + D2, core):
        bld.path((d, c, d))
    return Instance(bld.graph(), {"D": D1 + D2, "a": a, "b": b, "k": k})


def planted_driver(k: int, p: int, branch: str = "sparse", seed: int = 0,
                   a: int | None = None, b: int | None = None, q: int | None = None) -> Instance:
    """Instance steering the scaled-mode driver into its sparse or dense branch.

    The terminals carry a single-cycle dual pair (see ``planted_walk_system``),
    so the first stage returns a walk system.  For every pairing key the
    generator then adds a ``B_i -> A_j`` linkage and a return linkage, both
    through fresh vertices.  In the ``sparse`` branch these linkages are
    pairwise disjoint.  In the ``dense`` branch the linkages of the keys
    ``(0, 1)`` and ``(1, 0)`` run along the rows and columns of a shared
    grid, so their intersection graph is complete bipartite.  ``D`` is
    trusted as well-linked (it exceeds the brute-force cap).
    """
    from .extraction import Constants, WalkSystem, disjoint_walk_system, pairing, walk_system
    if branch not in ("sparse", "dense"):
        raise BadSpec("branch must be 'sparse' or 'dense'")
    if p not in (2, 3, 4):
        raise BadSpec("p must be 2, 3 or 4")
    consts = Constants.scaled(k, p, a=a, b=b, q=q)
    rng = random.Random(seed)
    bld = _Builder()
    D1, D2 = _single_cycle_terminals(bld, consts.terminals(k, p) // 2, rng)
    D = D1 + D2
    build = disjoint_walk_system if p == 2 else walk_system
    system = build(bld.graph(), D, consts.a, consts.b, k, assume_well_linked=True)
    if not isinstance(system, WalkSystem):
        raise BadSpec("terminal scaffold did not yield a walk system (need k >= 2)")
    width = consts.b if p == 4 else consts.q * (2 * k - 2) + 1
    width = min(width, consts.b)
    grid_ids = None
    if branch == "dense":
        grid_ids = [bld.vertices(width) for _ in range(width)]
    for i, j in pairing(consts.a):
        Bi, Aj = sorted(system.B[i])[:width], sorted(system.A[j])[:width]
        # return paths follow one cyclic permutation, so the Aux graph is a single cycle
        ring = list(range(width))
        rng.shuffle(ring)
        back = [0] * width
        for x in range(width):
            back[ring[x]] = ring[(x + 1) % width]
        for t in range(width):
            # private exits keep the right/down grid from rerouting rows and columns
            if grid_ids is not None and (i, j) == (0, 1):
                bld.path([Bi[t]] + grid_ids[t] + [bld.vertex(), Aj[t]])
            elif grid_ids is not None and (i, j) == (1, 0):
                bld.path([Bi[t]] + [row[t] for row in grid_ids] + [bld.vertex(), Aj[t]])
            else:
                bld.path((Bi[t], bld.vertex(), Aj[t]))
            bld.path((Aj[t], bld.vertex(), Bi[back[t]]))
    return Instance(bld.graph(), {"D": D, "k": k, "p": p, "branch": branch,
                                  "constants": [consts.d, consts.a, consts.b, consts.q]})


GENERATORS = {
    "grid": (grid, (int, int)),
    "grid-cyl": (lambda r, c: grid(r, c, cylindrical=True), (int, int)),
    "planted-cycles": (planted_cycles, (int, int)),
    "planted-clique": (planted_clique, (int, int)),
    "planted-gridwitness": (planted_gridwitness, (int,)),
    "planted-linkage-pair": (planted_linkage_pair, (int,)),
    "planted-dual": (planted_dual, (int, int)),
    "planted-dense": (planted_dense, (int,)),
    "planted-sparse": (planted_sparse, (int, int, int)),
    "planted-crossing": (planted_crossing, (int, int)),
    "planted-walk-system": (planted_walk_system, (int, int, int)),
    "planted-driver": (planted_driver, (int, int, str)),
    "random": (random_digraph, (int, int)),
}
SEEDED = {"planted-cycles", "planted-clique", "planted-dual", "planted-dense",
          "planted-sparse", "planted-crossing", "planted-walk-system", "planted-driver",
          "random"}


def generate(spec: InstanceSpec) -> Instance:
    try:
        fn, types = GENERATORS[spec.name]
    except KeyError:
        raise BadSpec(f"unknown generator {spec.name!r}; choose from {sorted(GENERATORS)}") from None
    params = list(spec.params)
    if len(params) > len(types):
        raise BadSpec(f"{spec.name} takes at most {len(types)} parameters")
    try:
        values = [t(v) for t, v in zip(types, params)]
    except (TypeError, ValueError) as exc:
        raise BadSpec(f"bad parameter for {spec.name}: {exc}") from None
    kwargs = {"seed": spec.seed} if spec.name in SEEDED else {}
    try:
        return fn(*values, **kwargs)
    except TypeError as exc:
        raise BadSpec(f"bad parameters for {spec.name}: {exc}") from None
