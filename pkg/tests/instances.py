"""Random ordered bipartite graphs that meet the partition hypotheses."""

from fractions import Fraction

import numpy as np

from cyclepack.partition import OrderedBipartite


def partition_instance(rng: np.random.Generator, max_n: int = 300, max_h: int = 3):
    """Instance of ``partition_segments`` meeting its thresholds, with its ``h`` and ``d``."""
    while True:
        h = int(rng.integers(0, max_h + 1))
        # d * 4^(h+1) - 1 > 2, and d >= 1/3 once the recursion is used
        low = Fraction(1, 3) if h else Fraction(3, 4)
        d = low + Fraction(int(rng.integers(1, 40)), 64)
        factor = d * 4 ** (h + 1) - 1
        a = int(rng.integers(2, max_n // 2 + 1))
        b = int(rng.integers(2, max_n - a + 1))
        n = a + b
        need = int(np.ceil(float(factor * n)))
        if need > a * b:
            continue
        m = int(rng.integers(need, a * b + 1))
        flat = rng.choice(a * b, size=m, replace=False)
        edges = np.stack([flat // b, flat % b], axis=1)
        return OrderedBipartite(a, b, edges), h, d


def min_degree_instance(rng: np.random.Generator, k: int, r: int, slack: float = 0.3,
                        max_side: int = 8192):
    """Square bipartite graph of minimum degree at least ``2^9 r k`` as a
    boolean matrix: a circulant band with randomly permuted columns plus
    random extra entries.  Returns the graph and its matrix."""
    delta = 2 ** 9 * r * k
    a = b = min(max_side, delta + int(rng.integers(0, int(slack * delta) + 1)))
    band = (np.arange(b)[None, :] - np.arange(a)[:, None]) % b < delta
    matrix = band[:, rng.permutation(b)]
    extra = int(rng.integers(0, a * 4))
    matrix[rng.integers(0, a, size=extra), rng.integers(0, b, size=extra)] = True
    return OrderedBipartite.from_matrix(matrix), matrix


def count_edges(graph: OrderedBipartite, pair) -> int:
    """Direct count, independent of ``OrderedBipartite.count``."""
    total = 0
    for x, y in graph.edges.tolist():
        if pair.i0 <= x < pair.i1 and pair.j0 <= y < pair.j1:
            total += 1
    return total
