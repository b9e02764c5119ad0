"""Exact small-n solvers for ex(n, T, H) and the covering-free variant.

``ex_exact`` grows graphs one vertex at a time.  Every graph G on n vertices
can be built so that each added vertex has the smallest number of T-copies
through it at the moment it is added (peel off such vertices from the top).
Removing a vertex of minimum T-degree from a k-vertex graph keeps at least a
``1 - v_T/k`` fraction of its T-copies, so the k-vertex prefix of an optimal
graph has at least ``LB * C(k, v_T) / C(n, v_T)`` copies for any valid lower
bound LB.  Each level is deduplicated up to isomorphism.

``exx_exact`` is a maximum independent set in the hypergraph whose vertices
are the T-copies of K_n and whose edges are the covering instances.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from turanlab.covering import CoveringType, covering_instances, t_resolution
from turanlab.density import format_rational
from turanlab.errors import GuardExceeded, PreconditionError
from turanlab.graphs import (
    Copy,
    Graph,
    canonical_form,
    complete,
    contains_subgraph,
    contains_subgraph_at,
    count_copies,
    count_copies_complete,
    embeddings,
    enumerate_copies,
    orbit_representatives,
    to_graph6,
)
from turanlab.graphs.core import iter_bits

DEFAULT_MAX_N = 10
DEFAULT_MAX_POOL = 120


@dataclass(frozen=True)
class ExtremalResult:
    n: int
    value: int
    witness: Graph | tuple
    elapsed: float
    nodes_explored: int

    def to_json(self, deterministic: bool = False) -> dict:
        out: dict = {"n": self.n, "value": self.value}
        if isinstance(self.witness, Graph):
            out["witness_graph6"] = to_graph6(self.witness)
        else:
            out["witness_copies"] = [[list(e) for e in sorted(c.edges)] for c in self.witness]
        out["nodes"] = self.nodes_explored
        # wall-clock time is left out when the output must be reproducible byte for byte
        out["millis"] = None if deterministic else round(self.elapsed * 1000, 3)
        return out


@dataclass(frozen=True)
class PiEntry:
    mu: Fraction
    pi_numerator: int
    pi_value: Fraction


@dataclass(frozen=True)
class PiSequence:
    n: int
    entries: tuple

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [
                {"mu": format_rational(e.mu), "exx": e.pi_numerator, "pi_hat": format_rational(e.pi_value)}
                for e in self.entries
            ],
        }


# -- ex(n, T, H) ---------------------------------------------------------------

def _copies_through(t: Graph, g: Graph, x: int) -> list[tuple[int, ...]]:
    """Vertex tuples of the T-copies of ``g`` that use vertex ``x``."""
    if t.is_complete:
        nb = [v for v in range(g.n) if g.has_edge(v, x)]
        if t.n == 2:
            return [(x, v) for v in nb]
        link = g.induced(nb)
        return [(x,) + tuple(nb[i] for i in c.vertices) for c in enumerate_copies(complete(t.n - 1), link)]
    seen: dict = {}
    for a in orbit_representatives(t):
        for lab in embeddings(t, g, anchor=(a, x)):
            seen.setdefault(Copy.from_embedding(t, lab).key, lab)
    return list(seen.values())


def _lower_bound(n: int, t: Graph, h: Graph) -> tuple[int, Graph]:
    """Best of a few H-free constructions on n vertices: balanced complete multipartite graphs
    and greedy edge deletion from K_n."""
    from turanlab.randomsim import lower_bound_easy

    best = lower_bound_easy(complete(n), t, h)
    best_val = count_copies(t, best)
    for r in range(1, n + 1):
        part = [i % r for i in range(n)]
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]])
        if contains_subgraph(h, g):
            continue
        val = count_copies(t, g)
        if val > best_val:
            best, best_val = g, val
    return best_val, best


def ex_exact(n: int, t: Graph, h: Graph, max_n: int = DEFAULT_MAX_N) -> ExtremalResult:
    """Maximum number of T-copies in an H-free graph on n vertices, with a witness."""
    start = time.perf_counter()
    if t.n == 0 or t.edge_count == 0:
        raise PreconditionError("T must have at least one edge")
    if n < t.n:
        raise PreconditionError("n must be at least v_T")
    if n > max_n:
        raise GuardExceeded(f"ex search refused: n={n} exceeds the guard max_n={max_n}")
    if h.edge_count == 0:
        raise PreconditionError("H must have at least one edge")
    if h.n > n:
        return ExtremalResult(n, count_copies_complete(t, n), complete(n), time.perf_counter() - start, 0)
    if contains_subgraph(h, t):
        # every copy of T already contains H
        return ExtremalResult(n, 0, Graph(n), time.perf_counter() - start, 0)

    lb, lb_graph = _lower_bound(n, t, h)
    total = comb(n, t.n)
    nodes = 0
    # level k holds (graph, T-degree vector, copy count) per isomorphism class
    level = {canonical_form(Graph(1)): (Graph(1), [0], 0)}
    for k in range(2, n + 1):
        need = Fraction(lb * comb(k, t.n), total)
        nxt: dict = {}
        x = k - 1
        for g, deg, count in level.values():
            base_edges = list(g.edges)
            for nb in range(1 << (k - 1)):
                nodes += 1
                child = Graph(k, base_edges + [(v, x) for v in iter_bits(nb)])
                through = _copies_through(t, child, x)
                new_count = count + len(through)
                if new_count < need:
                    continue
                cdeg = deg + [0]
                for lab in through:
                    for v in lab:
                        cdeg[v] += 1
                if cdeg[x] > min(cdeg):
                    continue
                if contains_subgraph_at(h, child, x):
                    continue
                key = canonical_form(child)
                if key not in nxt:
                    nxt[key] = (child, cdeg, new_count)
        level = nxt
    best_val, best = lb, lb_graph
    for g, _, count in level.values():
        if count > best_val:
            best_val, best = count, g
    return ExtremalResult(n, best_val, best, time.perf_counter() - start, nodes)


# -- covering-free collections ---------------------------------------------------

def _minimal_sets(masks) -> list[int]:
    """Drop every set that contains another one; the survivors forbid exactly the same collections."""
    out: list[int] = []
    for m in sorted(set(masks), key=lambda m: (m.bit_count(), m)):
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def max_free_set(size: int, hyperedges: Sequence[int]) -> tuple[int, int]:
    """Largest subset of ``range(size)`` (as a bitmask) containing no hyperedge.

    Branch and bound: the upper bound subtracts one for each hyperedge in a
    greedy family of hyperedges with pairwise disjoint undecided parts, each
    of which still needs one of its undecided members left out.  Returns
    ``(mask, nodes explored)``.
    """
    edges = _minimal_sets(hyperedges)
    full = (1 << size) - 1
    if any(e == 0 for e in edges):
        return 0, 1
    degree = [sum(1 for e in edges if e >> v & 1) for v in range(size)]

    # greedy start: take vertices in order while nothing gets completed
    best = 0
    for v in range(size):
        trial = best | (1 << v)
        if not any(e & trial == e for e in edges):
            best = trial
    best_size = best.bit_count()
    nodes = 0

    def rec(chosen: int, free: int):
        nonlocal best, best_size, nodes
        nodes += 1
        while True:
            active = []
            forced_out = 0
            for e in edges:
                if e & ~(chosen | free):
                    continue  # already broken by an excluded member
                rest = e & free
                if rest.bit_count() == 1:
                    forced_out |= rest
                active.append(rest)
            if not forced_out:
                break
            free &= ~forced_out
        bound = chosen.bit_count() + free.bit_count()
        if bound <= best_size:
            return
        used = 0
        for rest in sorted(active, key=lambda r: (r.bit_count(), r)):
            if rest & used == 0:
                used |= rest
                bound -= 1
                if bound <= best_size:
                    return
        if not active:
            best, best_size = chosen | free, bound
            return
        target = min(active, key=lambda r: (r.bit_count(), r))
        v = max(iter_bits(target), key=lambda u: (degree[u], -u))
        bit = 1 << v
        rec(chosen | bit, free & ~bit)
        rec(chosen, free & ~bit)

    rec(0, full)
    return best, nodes


def _pool_and_instances(n, t, family, max_pool):
    if t.edge_count == 0:
        raise PreconditionError("T must have at least one edge")
    if n < t.n:
        raise PreconditionError("n must be at least v_T")
    pool_size = count_copies_complete(t, n)
    if pool_size > max_pool:
        raise GuardExceeded(f"exx search refused: pool of {pool_size} copies exceeds the guard max_pool={max_pool}")
    pool = enumerate_copies(t, complete(n))
    masks = []
    for ft in family:
        rep = ft.representative if isinstance(ft, CoveringType) else ft
        if rep.pattern.n != t.n or rep.pattern.edge_count != t.edge_count:
            raise PreconditionError("family coverings must be made of copies of T")
        for inst in covering_instances(ft, pool):
            m = 0
            for i in inst:
                m |= 1 << i
            masks.append(m)
    return pool, masks


def exx_exact(n: int, t: Graph, family: Sequence, max_pool: int = DEFAULT_MAX_POOL) -> ExtremalResult:
    """Largest collection of T-copies in K_n containing no covering isomorphic to a family member."""
    start = time.perf_counter()
    pool, masks = _pool_and_instances(n, t, family, max_pool)
    best, nodes = max_free_set(len(pool), masks)
    witness = tuple(pool[i] for i in iter_bits(best))
    return ExtremalResult(n, len(witness), witness, time.perf_counter() - start, nodes)


def pi_sequence_surrogate(n: int, t: Graph, h: Graph, max_pool: int = DEFAULT_MAX_POOL,
                          types: list | None = None) -> PiSequence:
    """Finite-n stand-ins for the constants of the phase diagram.

    Entry 0 pairs e_T/v_T with N_T(K_n).  Entry i pairs the density of the
    i-th resolution type with exx over the first i types, for every i that
    is last or whose next type is strictly denser.  Entries whose count
    equals the previous one are merged into the earlier entry.
    """
    res = t_resolution(t, h, types=types)
    scale = n ** t.n
    top = count_copies_complete(t, n)
    entries = [PiEntry(Fraction(t.edge_count, t.n), top, Fraction(top, scale))]
    k = len(res.types)
    for i in range(1, k + 1):
        if i < k and res.densities[i] == res.densities[i - 1]:
            continue
        value = exx_exact(n, t, res.types[:i], max_pool).value
        if value == entries[-1].pi_numerator:
            continue
        entries.append(PiEntry(res.densities[i - 1], value, Fraction(value, scale)))
    return PiSequence(n, tuple(entries))
