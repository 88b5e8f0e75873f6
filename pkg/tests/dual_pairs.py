"""Random dual linkage pairs for tests."""

import random

from cyclepack.digraph import Digraph
from cyclepack.generators import planted_dual
from cyclepack.linkage import max_linkage


def random_dual_pair(seed, max_n=18):
    """A dual pair found by flow in a random digraph (retries until both directions are full)."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(6, max_n)
        p = rng.uniform(0.15, 0.45)
        g = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])
        verts = list(range(n))
        rng.shuffle(verts)
        size = rng.randint(1, n // 2)
        A, B = verts[:size], verts[size:2 * size]
        L, _ = max_linkage(g, A, B)
        if len(L) < size:
            continue
        back, _ = max_linkage(g, B, A)
        if len(back) == size:
            return g, L, back


def planted_pair(seed):
    rng = random.Random(seed)
    inst = planted_dual(rng.randint(1, 4), rng.randint(1, 3), seed, noise=rng.randint(0, 4))
    return inst.graph, inst.annotations["L"], inst.annotations["Lback"]


def dual_pair_of_size(seed, size):
    """A dual pair with exactly ``size`` paths: either planted with random
    back permutation and noise, or found by flow in a random digraph."""
    rng = random.Random(seed)
    if rng.random() < 0.5:
        while True:
            n = rng.randint(2 * size + 2, 2 * size + 10)
            p = rng.uniform(0.2, 0.5)
            g = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])
            verts = list(range(n))
            rng.shuffle(verts)
            A, B = verts[:size], verts[size:2 * size]
            L, _ = max_linkage(g, A, B)
            back, _ = max_linkage(g, B, A)
            if len(L) == size and len(back) == size:
                return g, L, back
    return planted_sized(seed, size)


def planted_sized(seed, size):
    """``planted_dual``-style pair of a given order."""
    from cyclepack.generators import _Builder
    from cyclepack.linkage import Linkage
    rng = random.Random(seed)
    b = _Builder()
    S, T, mids = b.vertices(size), b.vertices(size), b.vertices(size)
    perm = list(range(size))
    rng.shuffle(perm)
    forward = [b.path((S[i], mids[i], T[i])) for i in range(size)]
    backs, used = [], set()
    for i in range(size):
        hop = mids[rng.randrange(size)] if rng.random() < 0.5 else b.vertex()
        if hop in used:
            hop = b.vertex()
        used.add(hop)
        backs.append(b.path((T[i], hop, S[perm[i]])))
    return b.graph(), Linkage(tuple(forward)), Linkage(tuple(backs), 1)


def check_interlaced(graph, L, back, verdict, q):
    """Independent check of an interlaced path: a simple path of the graph that
    runs through ``q`` member paths of ``L`` joined by paths of ``back``."""
    walk = list(verdict.walk)
    assert len(set(walk)) == len(walk)
    assert all(graph.has_arc(u, v) for u, v in zip(walk, walk[1:]))
    members = list(verdict.members)
    assert len(members) == q == verdict.size and len(set(members)) == q
    pos = 0
    back_by_start = {p[0]: p for p in back.paths}
    for t, m in enumerate(members):
        path = L.paths[m]
        assert walk[pos:pos + len(path)] == list(path)
        pos += len(path) - 1
        if t + 1 < q:
            link = back_by_start[path[-1]]
            assert link[-1] == L.paths[members[t + 1]][0]
            assert walk[pos:pos + len(link)] == list(link)
            pos += len(link) - 1
    assert pos == len(walk) - 1


def planted_half_integral(seed):
    """Dual pair of congestion-2 linkages: forward paths share their middle
    vertex in pairs, back paths share their hop vertex in pairs."""
    from cyclepack.generators import _Builder
    from cyclepack.linkage import Linkage
    rng = random.Random(seed)
    size = rng.randint(2, 12)
    b = _Builder()
    S, T = b.vertices(size), b.vertices(size)
    mids = b.vertices((size + 1) // 2)
    hops = b.vertices((size + 1) // 2)
    perm = list(range(size))
    rng.shuffle(perm)
    forward = tuple(b.path((S[i], mids[i // 2], T[i])) for i in range(size))
    backs = tuple(b.path((T[i], hops[i // 2], S[perm[i]])) for i in range(size))
    return b.graph(), Linkage(forward, 2), Linkage(backs, 2)
