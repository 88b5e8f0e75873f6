"""Segment partitioning of ordered bipartite graphs.

An ordered bipartite graph has sides ``X = x_0..x_{a-1}`` and
``Y = y_0..y_{b-1}``; a segment is a contiguous index interval of one
side.  ``partition_segments`` splits the graph recursively at the
degree-weighted medians of both sides and recurses on whichever pair of
opposite quadrants holds more edges, giving ``2**h`` pairs of disjoint
segments that each keep at least ``d * n`` edges.  ``disjoint_pairs``
turns this into ``k`` pairs of large average degree.

Thresholds are compared in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from .errors import HypothesisViolated, InternalInvariant


@dataclass(frozen=True)
class SegmentPair:
    """Half-open index intervals ``X[i0:i1]`` and ``Y[j0:j1]``."""

    i0: int
    i1: int
    j0: int
    j1: int

    @property
    def x_range(self) -> range:
        return range(self.i0, self.i1)

    @property
    def y_range(self) -> range:
        return range(self.j0, self.j1)

    @property
    def size(self) -> int:
        return (self.i1 - self.i0) + (self.j1 - self.j0)

    def to_json(self) -> dict:
        return {"X": [self.i0, self.i1], "Y": [self.j0, self.j1]}


class OrderedBipartite:
    """Bipartite graph on ordered sides of sizes ``a`` and ``b``.

    ``edges`` is an ``(m, 2)`` array of ``(x_index, y_index)`` pairs.
    Graphs built with ``from_matrix`` keep the boolean adjacency matrix
    instead, which is far smaller for dense graphs; ``edges`` is then
    produced on first access.
    """

    def __init__(self, a: int, b: int, edges):
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr[:, 0].min() < 0 or arr[:, 0].max() >= a
                         or arr[:, 1].min() < 0 or arr[:, 1].max() >= b):
            raise ValueError("edge index out of range")
        keys = arr[:, 0] * max(b, 1) + arr[:, 1]
        if len(np.unique(keys)) != len(keys):
            raise ValueError("duplicate edge")
        self.a = a
        self.b = b
        self._edges = arr
        self.matrix = None

    @classmethod
    def from_matrix(cls, matrix) -> "OrderedBipartite":
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        graph = cls.__new__(cls)
        graph.a, graph.b = m.shape
        graph._edges = None
        graph.matrix = m
        return graph

    @property
    def edges(self) -> np.ndarray:
        if self._edges is None:
            self._edges = np.argwhere(self.matrix).astype(np.int64)
        return self._edges

    @property
    def m(self) -> int:
        if self.matrix is not None:
            return int(np.count_nonzero(self.matrix))
        return len(self._edges)

    def degrees(self) -> tuple[np.ndarray, np.ndarray]:
        if self.matrix is not None:
            return self.matrix.sum(axis=1), self.matrix.sum(axis=0)
        return (np.bincount(self._edges[:, 0], minlength=self.a),
                np.bincount(self._edges[:, 1], minlength=self.b))

    def min_degree(self) -> int:
        if not (self.a and self.b):
            return 0
        dx, dy = self.degrees()
        return int(min(dx.min(), dy.min()))

    def count(self, pair: SegmentPair) -> int:
        """Edges between ``X[i0:i1]`` and ``Y[j0:j1]``."""
        if self.matrix is not None:
            return int(np.count_nonzero(self.matrix[pair.i0:pair.i1, pair.j0:pair.j1]))
        x, y = self._edges[:, 0], self._edges[:, 1]
        mask = (x >= pair.i0) & (x < pair.i1) & (y >= pair.j0) & (y < pair.j1)
        return int(mask.sum())


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Real):
        return Fraction(value)
    raise TypeError(f"expected a real number, got {value!r}")


def _split(edges: np.ndarray, lo: int, hi: int, col: int) -> int:
    """Smallest 1-based ``s`` with degree prefix sum over ``lo..lo+s-1`` >= half the edges."""
    return _median(np.bincount(edges[:, col] - lo, minlength=hi - lo), len(edges))


def partition_segments(graph: OrderedBipartite, h: int, d, n: int | None = None,
                       check: bool = True) -> list[SegmentPair]:
    """``2**h`` segment pairs, disjoint per side, each with ``>= d*n`` edges.

    Requires ``d * 4**(h+1) - 1 > 2`` and at least ``(d * 4**(h+1) - 1) * n``
    edges, ``n`` defaulting to ``a + b``.  For ``h >= 1`` it also requires
    ``d >= 1/3``: the recursion reuses ``d`` one level down, and below that
    value a leaf may keep fewer than ``d * n`` edges (there are instances
    with no valid output at all).  With ``check=False`` the entry thresholds
    are skipped; the edge guarantee is still verified on output.
    """
    if h < 0:
        raise ValueError("h must be non-negative")
    d = _exact(d)
    if d <= 0:
        raise HypothesisViolated("d must be positive")
    if n is None:
        n = graph.a + graph.b
    if n < graph.a + graph.b:
        raise HypothesisViolated(f"n = {n} is below a + b = {graph.a + graph.b}")
    factor = d * 4 ** (h + 1) - 1
    if check:
        if not factor > 2:
            raise HypothesisViolated(f"d * 4^(h+1) - 1 = {factor} is not > 2")
        if h >= 1 and d < Fraction(1, 3):
            raise HypothesisViolated(f"d = {d} is below 1/3, the recursion needs d >= 1/3 for h >= 1")
        if graph.m < factor * n:
            raise HypothesisViolated(f"{graph.m} edges, need at least {factor * n}")
    if graph.matrix is not None:
        pairs = _recurse_dense(graph.matrix, 0, graph.a, 0, graph.b, h, n)
    else:
        pairs = _recurse(graph.edges, 0, graph.a, 0, graph.b, h, n)
    need = d * n
    for p in pairs:
        if p.i1 <= p.i0 or p.j1 <= p.j0:
            raise InternalInvariant(f"empty segment in {p}")
        if graph.count(p) < need:
            raise InternalInvariant(f"{p} carries {graph.count(p)} edges, below d*n = {need}")
    return pairs


def _median(deg: np.ndarray, total: int) -> int:
    """Smallest 1-based ``s`` whose degree prefix sum reaches half of ``total``."""
    return int(np.searchsorted(2 * np.cumsum(deg), total, side="left")) + 1


def _choose_diagonal(e11: int, e12: int, e21: int, e22: int, total: int, n: int) -> bool:
    """True for the main diagonal.  Pigeonhole: one diagonal keeps
    ``>= e/2 - n/2`` edges; ties go to the main diagonal."""
    if 2 * (e11 + e22) >= total - n:
        return True
    if 2 * (e12 + e21) >= total - n:
        return False
    raise InternalInvariant("neither diagonal satisfies the pigeonhole bound")


def _recurse_dense(M: np.ndarray, x0: int, x1: int, y0: int, y1: int, h: int, n: int) -> list[SegmentPair]:
    """Matrix version of ``_recurse``; identical splits and choices."""
    if h == 0:
        return [SegmentPair(x0, x1, y0, y1)]
    a, b = x1 - x0, y1 - y0
    block = M[x0:x1, y0:y1]
    total = int(np.count_nonzero(block))
    if total == 0:
        raise InternalInvariant(f"no edges left to split at depth {h}")
    s = _median(block.sum(axis=1), total)
    t = _median(block.sum(axis=0), total)
    if not (1 < s < a and 1 < t < b):
        raise InternalInvariant(f"median split s={s} of {a}, t={t} of {b} leaves an empty quadrant side")
    xs, ys = x0 + s - 1, y0 + t - 1
    e11 = int(np.count_nonzero(M[x0:xs, y0:ys])); e22 = int(np.count_nonzero(M[xs + 1:x1, ys + 1:y1]))
    e12 = int(np.count_nonzero(M[x0:xs, ys + 1:y1])); e21 = int(np.count_nonzero(M[xs + 1:x1, y0:ys]))
    if _choose_diagonal(e11, e12, e21, e22, total, n):
        return (_recurse_dense(M, x0, xs, y0, ys, h - 1, n)
                + _recurse_dense(M, xs + 1, x1, ys + 1, y1, h - 1, n))
    return (_recurse_dense(M, x0, xs, ys + 1, y1, h - 1, n)
            + _recurse_dense(M, xs + 1, x1, y0, ys, h - 1, n))


def _recurse(edges: np.ndarray, x0: int, x1: int, y0: int, y1: int, h: int, n: int) -> list[SegmentPair]:
    if h == 0:
        return [SegmentPair(x0, x1, y0, y1)]
    a, b = x1 - x0, y1 - y0
    if len(edges) == 0:
        raise InternalInvariant(f"no edges left to split at depth {h}")
    s = _split(edges, x0, x1, 0)
    t = _split(edges, y0, y1, 1)
    if not (1 < s < a and 1 < t < b):
        raise InternalInvariant(f"median split s={s} of {a}, t={t} of {b} leaves an empty quadrant side")
    xs, ys = x0 + s - 1, y0 + t - 1  # x_s and y_t are dropped
    x, y = edges[:, 0], edges[:, 1]
    xl, xr = x < xs, x > xs
    yl, yr = y < ys, y > ys
    e11 = int((xl & yl).sum()); e22 = int((xr & yr).sum())
    e12 = int((xl & yr).sum()); e21 = int((xr & yl).sum())
    if _choose_diagonal(e11, e12, e21, e22, len(edges), n):
        first = _recurse(edges[xl & yl], x0, xs, y0, ys, h - 1, n)
        second = _recurse(edges[xr & yr], xs + 1, x1, ys + 1, y1, h - 1, n)
    else:
        first = _recurse(edges[xl & yr], x0, xs, ys + 1, y1, h - 1, n)
        second = _recurse(edges[xr & yl], xs + 1, x1, y0, ys, h - 1, n)
    return first + second


def disjoint_pairs(graph: OrderedBipartite, k: int, r, check: bool = True) -> list[SegmentPair]:
    """``k`` segment pairs, disjoint per side, each inducing average degree ``>= r``.

    Requires minimum degree at least ``2**9 * r * k``.  Internally uses
    ``k' = 2**h >= 2k``, ``d = 2r/k`` and keeps the first ``k`` pairs whose
    segments are both shorter than ``2n/k'``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    r = _exact(r)
    if r <= 0:
        raise HypothesisViolated("r must be positive")
    if check and graph.min_degree() < 2 ** 9 * r * k:
        raise HypothesisViolated(
            f"minimum degree {graph.min_degree()} below 2^9 * r * k = {2 ** 9 * r * k}")
    h = 0
    while 2 ** h < 2 * k:
        h += 1
    kp = 2 ** h
    d = 2 * r / k
    n = graph.a + graph.b
    # the degree bound already gives every recursion level enough edges, so the
    # partition's own entry thresholds (which need d >= 1/3) are not re-checked
    try:
        pairs = partition_segments(graph, h, d, n, check=False)
    except InternalInvariant:
        if check:
            raise
        raise HypothesisViolated("segment partition failed on an input below the degree bound")
    small = [p for p in pairs if kp * (p.i1 - p.i0) < 2 * n and kp * (p.j1 - p.j0) < 2 * n]
    if len(small) < k:
        raise InternalInvariant(f"only {len(small)} small pairs, need {k}")
    chosen = small[:k]
    for p in chosen:
        if 2 * graph.count(p) < r * p.size:
            if check:
                raise InternalInvariant(f"{p} has average degree below {r}")
            raise HypothesisViolated(f"{p} has average degree below {r}")
    return chosen


def average_degree(graph: OrderedBipartite, pair: SegmentPair) -> Fraction:
    return Fraction(2 * graph.count(pair), pair.size)
