"""Labeled simple graphs and placed copies over a small vertex universe.

Adjacency is kept as one Python ``int`` bitmask per vertex, and edge sets as
bitmasks over the global pair index ``pair_index(u, v)``.  The pair index does
not depend on the host graph, so edge masks of copies living in different
hosts over the same universe can be compared directly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from turanlab.errors import GraphFormatError

MAX_VERTICES = 64

Edge = tuple[int, int]


def pair_index(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pair_from_index(k: int) -> Edge:
    v = int(((8 * k + 1) ** 0.5 + 1) / 2)
    while v * (v - 1) // 2 > k:
        v -= 1
    while (v + 1) * v // 2 <= k:
        v += 1
    return (k - v * (v - 1) // 2, v)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def edges_from_mask(mask: int) -> list[Edge]:
    return [pair_from_index(k) for k in iter_bits(mask)]


def edge_mask(edges: Iterable[Edge]) -> int:
    m = 0
    for u, v in edges:
        m |= 1 << pair_index(u, v)
    return m


def _normalize_edges(n: int, edges: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for e in edges:
        u, v = e
        u, v = int(u), int(v)
        if u == v:
            raise GraphFormatError("loops are not allowed", f"{u}-{v}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge endpoint outside 0..{n - 1}", f"{u}-{v}")
        out.add((u, v) if u < v else (v, u))
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("vertex count must be non-negative", str(self.n))
        if self.n > MAX_VERTICES:
            raise GraphFormatError(f"vertex count exceeds the cap of {MAX_VERTICES}", str(self.n))
        object.__setattr__(self, "edges", _normalize_edges(self.n, self.edges))

    # -- basic views ---------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return self.n

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adj(self) -> tuple[int, ...]:
        a = [0] * self.n
        for u, v in self.edges:
            a[u] |= 1 << v
            a[v] |= 1 << u
        return tuple(a)

    @cached_property
    def mask(self) -> int:
        return edge_mask(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(x.bit_count() for x in self.adj)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    @property
    def is_complete(self) -> bool:
        return self.edge_count == self.n * (self.n - 1) // 2

    @cached_property
    def isolated_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.adj[v])

    # -- derived graphs ------------------------------------------------

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabeled to ``0..k-1`` in increasing vertex order."""
        vs = sorted(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        return Graph(len(vs), [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos])

    def edge_subgraph(self, edges: Iterable[Edge], compact: bool = True) -> "Graph":
        es = [tuple(e) for e in edges]
        if not compact:
            return Graph(self.n, es)
        return from_edges(es)

    def remove_edges(self, edges: Iterable[Edge]) -> "Graph":
        drop = _normalize_edges(self.n, edges)
        return Graph(self.n, self.edges - drop)

    def with_mask(self, mask: int) -> "Graph":
        return Graph(self.n, edges_from_mask(mask))

    def relabel(self, perm: Iterable[int]) -> "Graph":
        p = list(perm)
        return Graph(self.n, [(p[u], p[v]) for u, v in self.edges])

    def without_isolated(self) -> "Graph":
        return self.induced(v for v in range(self.n) if self.adj[v])

    def __repr__(self):
        return f"Graph({self.n}; {','.join(f'{u}-{v}' for u, v in self.sorted_edges)})"


def from_edges(edges: Iterable[Edge]) -> Graph:
    """Graph on the support of ``edges``, relabeled to ``0..k-1`` in vertex order."""
    es = [tuple(e) for e in edges]
    vs = sorted({x for e in es for x in e})
    pos = {v: i for i, v in enumerate(vs)}
    return Graph(len(vs), [(pos[u], pos[v]) for u, v in es])


def from_mask(n: int, mask: int) -> Graph:
    return Graph(n, edges_from_mask(mask))


@dataclass(frozen=True)
class Copy:
    """A subgraph of some host isomorphic to ``pattern``.

    ``labels[i]`` is the host vertex playing pattern vertex ``i``; it is one
    witness embedding and does not take part in equality.
    """

    edges: frozenset
    vertices: frozenset
    pattern: Graph = field(compare=False, repr=False)
    labels: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def from_embedding(cls, pattern: Graph, labels) -> "Copy":
        labels = tuple(labels)
        es = frozenset(
            (labels[u], labels[v]) if labels[u] < labels[v] else (labels[v], labels[u])
            for u, v in pattern.edges
        )
        return cls(es, frozenset(labels), pattern, labels)

    @cached_property
    def edge_mask(self) -> int:
        return edge_mask(self.edges)

    @cached_property
    def vertex_mask(self) -> int:
        m = 0
        for v in self.vertices:
            m |= 1 << v
        return m

    @cached_property
    def key(self) -> tuple[int, int]:
        return (self.edge_mask, self.vertex_mask)

    @cached_property
    def sort_key(self):
        return (tuple(sorted(self.edges)), tuple(sorted(self.vertices)))

    def as_graph(self, n: int) -> Graph:
        return Graph(n, self.edges)


# -- named builtins ------------------------------------------------------

def empty(n: int) -> Graph:
    return Graph(n)


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphFormatError("a cycle needs at least 3 vertices", f"C{n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    """Path on ``n`` vertices (``n - 1`` edges)."""
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(*graphs: Graph) -> Graph:
    off, es = 0, []
    for g in graphs:
        es.extend((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Graph(off, es)


_NAME_RE = re.compile(r"^(?P<kind>[KCP])(?P<a>\d+)(?:,(?P<b>\d+))?$")


def named(name: str) -> Graph:
    """Builtin graphs: ``Kn``, ``Cn``, ``Pn`` (n vertices), ``Ka,b``, ``Petersen``, ``Fano``.

    Two-digit ``Kab`` names above ``K12`` are read as complete bipartite
    (``K33`` is K_{3,3}).  ``Fano`` is the union graph of the Fano triangle
    decomposition, i.e. K7.
    """
    s = name.strip()
    if s.lower() == "petersen":
        return petersen()
    if s.lower() == "fano":
        return complete(7)
    m = _NAME_RE.match(s)
    if m is None:
        raise GraphFormatError("unknown graph name", name)
    kind, a, b = m["kind"], m["a"], m["b"]
    if kind == "K" and b is None and len(a) == 2 and int(a) > 12:
        a, b = a[0], a[1]
    if b is not None:
        if kind != "K":
            raise GraphFormatError("unknown graph name", name)
        return complete_bipartite(int(a), int(b))
    k = int(a)
    return {"K": complete, "C": cycle, "P": path}[kind](k)
