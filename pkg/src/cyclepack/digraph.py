"""Directed graphs, walks, congestion accounting and walk surgery.

Vertices are the integers ``0 .. n-1``.  A walk is a tuple of vertices in
which every consecutive pair is an arc; a path is a walk with distinct
vertices (a single vertex is a path of length zero).  Closed walks repeat
their first vertex at the end.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidGraph, InvalidWalk, NoCycle

Walk = tuple[int, ...]


class Digraph:
    """Immutable simple digraph on ``range(n)``.

    Self-loops and duplicate arcs are rejected unless ``allow_loops`` is
    set (loops only; duplicates are always an error).
    """

    __slots__ = ("n", "arcs", "_out", "_in")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = (), *, allow_loops: bool = False):
        if n < 0:
            raise InvalidGraph(f"negative vertex count {n}")
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in arcs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"arc ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v and not allow_loops:
                raise InvalidGraph(f"self-loop at {u}")
            if (u, v) in seen:
                raise InvalidGraph(f"duplicate arc ({u}, {v})")
            seen.add((u, v))
            out[u].append(v)
            inn[v].append(u)
        self.n = n
        self.arcs = frozenset(seen)
        self._out = tuple(tuple(sorted(a)) for a in out)
        self._in = tuple(tuple(sorted(a)) for a in inn)

    def __repr__(self):
        return f"Digraph(n={self.n}, m={len(self.arcs)})"

    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.n, self.arcs))

    @property
    def m(self) -> int:
        return len(self.arcs)

    def vertices(self) -> range:
        return range(self.n)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def with_arcs(self, extra: Iterable[tuple[int, int]]) -> "Digraph":
        """Return a new digraph with ``extra`` arcs added (existing ones ignored)."""
        arcs = set(self.arcs)
        arcs.update((u, v) for u, v in extra if u != v)
        return Digraph(self.n, arcs)

    def subgraph_without(self, removed: Iterable[int]) -> "Digraph":
        """Same vertex ids, all arcs touching ``removed`` dropped."""
        gone = set(removed)
        return Digraph(self.n, ((u, v) for u, v in self.arcs if u not in gone and v not in gone))

    def reverse(self) -> "Digraph":
        return Digraph(self.n, ((v, u) for u, v in self.arcs))


# -- walks -----------------------------------------------------------------

def check_walk(graph: Digraph, walk: Sequence[int]) -> Walk:
    """Validate ``walk`` against ``graph`` and return it as a tuple."""
    w = tuple(int(v) for v in walk)
    if not w:
        raise InvalidWalk("empty walk")
    for v in w:
        if not 0 <= v < graph.n:
            raise InvalidWalk(f"vertex {v} not in graph")
    for u, v in zip(w, w[1:]):
        if (u, v) not in graph.arcs:
            raise InvalidWalk(f"({u}, {v}) is not an arc")
    return w


def is_walk(graph: Digraph, walk: Sequence[int]) -> bool:
    try:
        check_walk(graph, walk)
    except InvalidWalk:
        return False
    return True


def is_path(graph: Digraph, walk: Sequence[int]) -> bool:
    return is_walk(graph, walk) and len(set(walk)) == len(walk)


def is_closed(walk: Sequence[int]) -> bool:
    return len(walk) >= 2 and walk[0] == walk[-1]


def start(walk: Sequence[int]) -> int:
    return walk[0]


def end(walk: Sequence[int]) -> int:
    return walk[-1]


def concat(*walks: Sequence[int]) -> Walk:
    """Concatenate walks that meet end-to-start, keeping the junction once."""
    out: list[int] = []
    for w in walks:
        if not w:
            continue
        if out:
            if out[-1] != w[0]:
                raise InvalidWalk(f"cannot join walk ending at {out[-1]} to one starting at {w[0]}")
            out.extend(w[1:])
        else:
            out.extend(w)
    return tuple(out)


def visit_counts(walks: Iterable[Sequence[int]]) -> Counter:
    """Per-vertex visit totals; a closed walk's repeated endpoint counts once."""
    counts: Counter = Counter()
    for w in walks:
        body = w[:-1] if is_closed(w) else w
        counts.update(body)
    return counts


def congestion(walks: Iterable[Sequence[int]], graph: Digraph | None = None) -> int:
    """Maximum number of visits any vertex receives from the family.

    Repeated visits by a single walk are counted separately.  The final
    vertex of a closed walk is the same visit as its first.  Returns 0 for
    an empty family.  If ``graph`` is given every walk is validated first.
    """
    walks = list(walks)
    if graph is not None:
        for w in walks:
            check_walk(graph, w)
    counts = visit_counts(walks)
    return max(counts.values(), default=0)


@dataclass(frozen=True)
class WalkFamily:
    walks: tuple[Walk, ...]
    declared_congestion: int = 1
    measured: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "walks", tuple(tuple(w) for w in self.walks))
        object.__setattr__(self, "measured", congestion(self.walks))
        if self.declared_congestion < 1:
            raise ValueError("declared congestion must be positive")
        if self.measured > self.declared_congestion:
            raise InvalidWalk(
                f"measured congestion {self.measured} exceeds declared {self.declared_congestion}")

    def validate(self, graph: Digraph) -> None:
        for w in self.walks:
            check_walk(graph, w)


def shortcut_walk(walk: Sequence[int]) -> Walk:
    """Shortcut a walk to a path with the same endpoints.

    Scanning left to right, a revisited vertex causes the closed segment
    since its earliest occurrence to be deleted.
    """
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            cut = pos[v]
            for u in out[cut + 1:]:
                del pos[u]
            del out[cut + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return tuple(out)


def extract_cycle(walk: Sequence[int]) -> Walk:
    """Return the simple cycle closed by the first repeated vertex of ``walk``.

    The result is a closed walk ``(v, ..., v)`` with distinct interior
    vertices; all of its arcs are arcs of ``walk``.
    """
    first_seen: dict[int, int] = {}
    for j, v in enumerate(walk):
        i = first_seen.get(v)
        if i is not None:
            return tuple(walk[i:j + 1])
        first_seen[v] = j
    raise NoCycle("walk has pairwise distinct vertices")


def cycle_vertices(cycle: Sequence[int]) -> Walk:
    """Drop the repeated endpoint of a closed walk."""
    return tuple(cycle[:-1]) if is_closed(cycle) else tuple(cycle)


def canonical_cycle(cycle: Sequence[int]) -> Walk:
    """Rotate an (open-form) cycle so that its minimum vertex comes first."""
    c = cycle_vertices(cycle)
    i = c.index(min(c))
    return c[i:] + c[:i]


def is_simple_cycle(graph: Digraph, cycle: Sequence[int]) -> bool:
    """True for an open-form vertex sequence forming a directed cycle of length >= 2."""
    c = cycle_vertices(cycle)
    if len(c) < 2 or len(set(c)) != len(c):
        return False
    return all((c[i], c[(i + 1) % len(c)]) in graph.arcs for i in range(len(c)))


def is_acyclic(graph: Digraph, removed: Iterable[int] = ()) -> bool:
    """Kahn's algorithm on ``graph`` minus ``removed``."""
    gone = set(removed)
    indeg = [0] * graph.n
    for u, v in graph.arcs:
        if u not in gone and v not in gone:
            indeg[v] += 1
    stack = [v for v in range(graph.n) if v not in gone and indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in graph.out_neighbors(u):
            if v not in gone:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
    return seen == graph.n - len(gone & set(range(graph.n)))


def reachable(graph: Digraph, sources: Iterable[int], removed: Iterable[int] = ()) -> set[int]:
    """Vertices reachable from ``sources`` in ``graph`` minus ``removed`` (sources included)."""
    gone = set(removed)
    seen = {s for s in sources if s not in gone}
    stack = list(seen)
    while stack:
        u = stack.pop()
        for v in graph.out_neighbors(u):
            if v not in seen and v not in gone:
                seen.add(v)
                stack.append(v)
    return seen


# -- text formats ----------------------------------------------------------

def parse_edgelist(text: str) -> Digraph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (0-based)."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InvalidGraph("empty edge list")
    header = lines[0].split()
    if len(header) != 2:
        raise InvalidGraph("header must be 'n m'")
    n, m = int(header[0]), int(header[1])
    body = lines[1:]
    if len(body) != m:
        raise InvalidGraph(f"header announces {m} arcs, found {len(body)}")
    arcs = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise InvalidGraph(f"bad arc line {ln!r}")
        arcs.append((int(parts[0]), int(parts[1])))
    return Digraph(n, arcs)


def format_edgelist(graph: Digraph) -> str:
    rows = [f"{graph.n} {graph.m}"] + [f"{u} {v}" for u, v in graph.sorted_arcs()]
    return "\n".join(rows) + "\n"


_DOT_HEADER = re.compile(r"^\s*(strict\s+)?digraph\b[^{]*\{", re.S)
_DOT_ATTRS = re.compile(r"\[[^\]]*\]")


def parse_dot(text: str, n: int | None = None) -> Digraph:
    """Read the integer-node subset of DOT: ``digraph { 0 -> 1 -> 2; 3; }``.

    Attribute lists are ignored.  ``n`` defaults to one more than the
    largest node id mentioned.
    """
    text = re.sub(r"//[^\n]*|#[^\n]*|/\*.*?\*/", "", text, flags=re.S)
    header = _DOT_HEADER.match(text)
    if not header or "}" not in text:
        raise InvalidGraph("not a digraph block")
    body = text[header.end():text.rindex("}")]
    body = _DOT_ATTRS.sub("", body)
    nodes: set[int] = set()
    arcs: list[tuple[int, int]] = []
    for stmt in re.split(r"[;\n]", body):
        stmt = stmt.strip()
        if not stmt or "=" in stmt and "->" not in stmt:
            continue
        parts = [p.strip().strip('"') for p in stmt.split("->")]
        try:
            ids = [int(p) for p in parts]
        except ValueError as exc:
            raise InvalidGraph(f"non-integer node in {stmt!r}") from exc
        nodes.update(ids)
        arcs.extend(zip(ids, ids[1:]))
    if n is None:
        n = max(nodes) + 1 if nodes else 0
    return Digraph(n, arcs)


def format_dot(graph: Digraph) -> str:
    lines = ["digraph {"]
    lines += [f"  {v};" for v in range(graph.n)]
    lines += [f"  {u} -> {v};" for u, v in graph.sorted_arcs()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_graph(path: str, fmt: str | None = None) -> Digraph:
    with open(path) as fh:
        text = fh.read()
    if fmt is None:
        fmt = "dot" if path.endswith((".dot", ".gv")) else "edgelist"
    return parse_dot(text) if fmt == "dot" else parse_edgelist(text)
