"""Subgraph embeddings, copy enumeration, homomorphisms and coloring.

All searches are bitset backtracking: the candidate set for the next pattern
vertex is the intersection of the host neighborhoods of its already-mapped
pattern neighbors.
"""
from __future__ import annotations

from functools import lru_cache
from math import perm
from typing import Iterator

from turanlab.graphs.core import Copy, Graph, iter_bits


def search_order(pattern: Graph, first: int | None = None) -> list[int]:
    """Connected-first vertex order: each next vertex has the most mapped neighbors."""
    n = pattern.n
    adj = pattern.adj
    deg = pattern.degrees
    order: list[int] = []
    placed = 0
    remaining = set(range(n))
    if first is not None:
        order.append(first)
        placed = 1 << first
        remaining.discard(first)
    while remaining:
        v = max(remaining, key=lambda x: ((adj[x] & placed).bit_count(), deg[x], -x))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


def embeddings(pattern: Graph, host: Graph, induced: bool = False,
               anchor: tuple[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield injective edge-preserving maps ``pattern -> host`` as label tuples.

    ``anchor=(a, x)`` restricts to maps sending pattern vertex ``a`` to host vertex ``x``.
    """
    n = pattern.n
    if n > host.n or pattern.edge_count > host.edge_count:
        return
    order = search_order(pattern, None if anchor is None else anchor[0])
    padj, hadj = pattern.adj, host.adj
    pdeg, hdeg = pattern.degrees, host.degrees
    back = [[w for w in order[:i] if padj[order[i]] >> w & 1] for i in range(n)]
    nonback = [[w for w in order[:i] if not padj[order[i]] >> w & 1] for i in range(n)]
    allhost = (1 << host.n) - 1
    degok = []
    for v in range(n):
        m = 0
        for x in range(host.n):
            if hdeg[x] >= pdeg[v]:
                m |= 1 << x
        degok.append(m)
    if anchor is not None:
        a, x = anchor
        degok[a] &= 1 << x
    img = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield tuple(img)
            return
        v = order[i]
        cand = degok[v] & ~used & allhost
        for w in back[i]:
            cand &= hadj[img[w]]
        if induced:
            for w in nonback[i]:
                cand &= ~hadj[img[w]]
        for x in iter_bits(cand):
            img[v] = x
            yield from rec(i + 1, used | (1 << x))

    yield from rec(0, 0)


def _clique_sets(host: Graph, k: int) -> Iterator[tuple[int, ...]]:
    adj = host.adj
    cur: list[int] = []

    def rec(cand: int):
        if len(cur) == k:
            yield tuple(cur)
            return
        for x in iter_bits(cand):
            cur.append(x)
            # only extend upward so each clique is produced once
            yield from rec(cand & adj[x] & ~((2 << x) - 1))
            cur.pop()

    yield from rec((1 << host.n) - 1)


def enumerate_copies(t: Graph, g: Graph) -> list[Copy]:
    """Every subgraph of ``g`` isomorphic to ``t``, each once, in sorted order.

    Copies are identified by their edge set together with their vertex set
    (the vertex set only matters when ``t`` has isolated vertices).
    """
    if t.n == 0:
        return []
    if t.is_complete:
        out = [Copy.from_embedding(t, c) for c in _clique_sets(g, t.n)]
    else:
        seen: dict[tuple[int, int], Copy] = {}
        for lab in embeddings(t, g):
            c = Copy.from_embedding(t, lab)
            if c.key not in seen:
                seen[c.key] = c
        out = list(seen.values())
    out.sort(key=lambda c: c.sort_key)
    return out


def count_copies(t: Graph, g: Graph) -> int:
    if t.is_complete and t.n > 0:
        return sum(1 for _ in _clique_sets(g, t.n))
    return len(enumerate_copies(t, g))


def automorphism_count(t: Graph) -> int:
    """Order of Aut(t): injective maps of t into itself are exactly its automorphisms."""
    return sum(1 for _ in embeddings(t, t))


def count_copies_complete(t: Graph, n: int) -> int:
    """N_T(K_n) = n (n-1) ... (n - v_T + 1) / |Aut(T)|."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if t.n > n:
        return 0
    return perm(n, t.n) // automorphism_count(t)


def contains_subgraph(h: Graph, g: Graph) -> bool:
    """True iff ``g`` has a (not necessarily induced) subgraph isomorphic to ``h``."""
    for _ in embeddings(h, g):
        return True
    return False


@lru_cache(maxsize=256)
def orbit_representatives(g: Graph) -> tuple[int, ...]:
    """Smallest vertex of each orbit of Aut(g)."""
    # the orbit minimum maps onto every other orbit member, so marking the
    # larger end of each moved pair leaves exactly the minima unmarked
    covered = 0
    for lab in embeddings(g, g):
        for v in range(g.n):
            if lab[v] != v:
                covered |= 1 << max(v, lab[v])
    return tuple(v for v in range(g.n) if not covered >> v & 1)


def contains_subgraph_at(h: Graph, g: Graph, x: int) -> bool:
    """True iff some copy of ``h`` in ``g`` uses host vertex ``x``."""
    for a in orbit_representatives(h):
        for _ in embeddings(h, g, anchor=(a, x)):
            return True
    return False


def homomorphism_exists(h: Graph, t: Graph) -> bool:
    """True iff there is an edge-preserving map V(h) -> V(t), i.e. h sits in a blow-up of t."""
    if t.n == 0:
        return h.n == 0
    if h.edge_count and not t.edge_count:
        return False
    order = search_order(h)
    hadj, tadj = h.adj, t.adj
    back = [[w for w in order[:i] if hadj[order[i]] >> w & 1] for i in range(h.n)]
    alltarget = (1 << t.n) - 1
    img = [0] * h.n

    def rec(i: int) -> bool:
        if i == h.n:
            return True
        v = order[i]
        cand = alltarget
        for w in back[i]:
            cand &= tadj[img[w]]
        for x in iter_bits(cand):
            img[v] = x
            if rec(i + 1):
                return True
        return False

    return rec(0)


def clique_number(g: Graph) -> int:
    best = 0
    adj = g.adj

    def rec(size: int, cand: int):
        nonlocal best
        if size > best:
            best = size
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            x = low.bit_length() - 1
            cand ^= low
            rec(size + 1, cand & adj[x])

    rec(0, (1 << g.n) - 1)
    return best


def is_colorable(g: Graph, k: int) -> bool:
    """k-colorability by DSATUR-ordered backtracking."""
    n = g.n
    if n == 0:
        return True
    if k <= 0:
        return False
    adj = g.adj
    color = [-1] * n

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if color[v] >= 0:
                continue
            sat = len({color[u] for u in iter_bits(adj[v]) if color[u] >= 0})
            kv = (sat, g.degrees[v])
            if key is None or kv > key:
                best, key = v, kv
        return best

    def rec(done: int, used: int) -> bool:
        if done == n:
            return True
        v = pick()
        banned = {color[u] for u in iter_bits(adj[v]) if color[u] >= 0}
        # a fresh color is interchangeable with any other fresh color
        for c in range(min(k, used + 1)):
            if c in banned:
                continue
            color[v] = c
            if rec(done + 1, max(used, c + 1)):
                return True
            color[v] = -1
        return False

    return rec(0, 0)


def chromatic_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    k = max(2, clique_number(g))
    while not is_colorable(g, k):
        k += 1
    return k
