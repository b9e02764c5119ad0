"""Canonical labeling by color refinement and individualization.

The search tree is the usual one: refine to an equitable coloring, pick the
smallest non-singleton cell, individualize each of its vertices in turn and
recurse.  Leaves are discrete colorings; the certificate of a leaf is the
relabeled adjacency, and the canonical label is the largest certificate.
Two leaves with equal certificates give an automorphism, and children that
lie in the same orbit of the automorphisms found so far (restricted to those
fixing the current prefix) are skipped.

Works on raw ``(neighbor lists, initial colors)`` so callers can canonicalize
colored incidence structures larger than the ``Graph`` cap.
"""
from __future__ import annotations

from itertools import permutations

from turanlab.graphs.core import Graph


def _as_cells(colors: list[int]) -> list[int]:
    """Recolor so each vertex's color is the start position of its cell in the ordered partition."""
    count: dict[int, int] = {}
    for c in colors:
        count[c] = count.get(c, 0) + 1
    start, pos = {}, 0
    for c in sorted(count):
        start[c] = pos
        pos += count[c]
    return [start[c] for c in colors]


def refine(nbrs: list[list[int]], colors: list[int], splitters: list[int] | None = None) -> list[int]:
    """Coarsest equitable refinement of a cell-start coloring (see ``_as_cells``).

    Classic splitter-queue refinement: for each splitter cell, split every cell
    by the number of neighbors its vertices have in the splitter, smaller
    counts first.  The resulting ordered partition depends only on the input
    partition and the graph, not on the vertex names.
    """
    colors = list(colors)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    queue = sorted(cells) if splitters is None else list(splitters)
    queued = set(queue)
    n = len(colors)
    head = 0
    while head < len(queue):
        if len(cells) == n:
            break
        w = queue[head]
        head += 1
        queued.discard(w)
        hits: dict[int, int] = {}
        for u in cells[w]:
            for v in nbrs[u]:
                hits[v] = hits.get(v, 0) + 1
        touched = sorted({colors[v] for v in hits})
        for c in touched:
            cell = cells[c]
            if len(cell) == 1:
                continue
            groups: dict[int, list[int]] = {}
            for v in cell:
                groups.setdefault(hits.get(v, 0), []).append(v)
            if len(groups) == 1:
                continue
            pos = c
            for k in sorted(groups):
                part = groups[k]
                for v in part:
                    colors[v] = pos
                cells[pos] = part
                if pos not in queued:
                    queue.append(pos)
                    queued.add(pos)
                pos += len(part)
    return colors


def _individualize(colors: list[int], v: int) -> list[int]:
    c = colors[v]
    return [x + 1 if x == c and u != v else x for u, x in enumerate(colors)]


def _target_cell(colors: list[int]) -> list[int] | None:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    best = None
    for c in sorted(cells):
        cell = cells[c]
        if len(cell) > 1 and (best is None or len(cell) < len(best)):
            best = cell
    return best


def _orbit_rep(v: int, explored: list[int], gens: list[tuple[int, ...]]) -> bool:
    """True if ``v`` is in the orbit of an explored vertex under ``gens``."""
    if not gens:
        return False
    seen = {v}
    stack = [v]
    targets = set(explored)
    while stack:
        x = stack.pop()
        if x in targets:
            return True
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def _twin_swaps(nbrs: list[list[int]], colors: list[int]) -> list[tuple[int, ...]]:
    """Transpositions of same-colored vertices with identical neighborhoods.

    These are automorphisms known up front; seeding the search with them
    prunes the many interchangeable private vertices of incidence structures.
    """
    n = len(nbrs)
    classes: dict = {}
    for v in range(n):
        classes.setdefault((colors[v], frozenset(nbrs[v])), []).append(v)
    out = []
    for members in classes.values():
        for a, b in zip(members, members[1:]):
            perm = list(range(n))
            perm[a], perm[b] = b, a
            out.append(tuple(perm))
    return out


class _Search:
    def __init__(self, nbrs, colors):
        self.nbrs = nbrs
        self.n = len(colors)
        self.best_cert = None
        self.best_order = None
        self.leaves: dict = {}
        self.gens: list[tuple[int, ...]] = []
        self.nodes = 0

    def cert(self, colors):
        # discrete coloring: colors are a permutation of 0..n-1
        order = [0] * self.n
        for v, c in enumerate(colors):
            order[c] = v
        rows = []
        for v in order:
            r = 0
            for u in self.nbrs[v]:
                r |= 1 << colors[u]
            rows.append(r)
        return tuple(rows), order

    def run(self, colors, prefix):
        self.nodes += 1
        cell = _target_cell(colors)
        if cell is None:
            cert, order = self.cert(colors)
            other = self.leaves.get(cert)
            if other is not None:
                # other[i] -> order[i] maps vertices to vertices preserving structure
                perm = [0] * self.n
                for a, b in zip(other, order):
                    perm[a] = b
                self.gens.append(tuple(perm))
            else:
                self.leaves[cert] = order
            if self.best_cert is None or cert > self.best_cert:
                self.best_cert, self.best_order = cert, order
            return
        explored: list[int] = []
        for v in cell:
            if explored:
                fixing = [g for g in self.gens if all(g[p] == p for p in prefix)]
                if _orbit_rep(v, explored, fixing):
                    continue
            explored.append(v)
            self.run(refine(self.nbrs, _individualize(colors, v), [colors[v]]), prefix + [v])


def canonical_order(nbrs: list[list[int]], colors: list[int] | None = None):
    """Return ``(certificate, order, generators)``.

    ``order[i]`` is the vertex placed at canonical position ``i``; the
    generators generate the color-preserving automorphism group.
    """
    n = len(nbrs)
    if colors is None:
        colors = [0] * n
    start = refine(nbrs, _as_cells(colors))
    s = _Search(nbrs, colors)
    s.gens.extend(_twin_swaps(nbrs, colors))
    s.run(start, [])
    return s.best_cert, s.best_order, s.gens


def _label_bytes(n: int, colors_in_order: list[int], rows: tuple[int, ...]) -> bytes:
    width = (n + 7) // 8
    out = bytearray(n.to_bytes(2, "big"))
    for c in colors_in_order:
        out += int(c).to_bytes(4, "big", signed=True)
    for r in rows:
        out += r.to_bytes(width, "big")
    return bytes(out)


def colored_label(nbrs: list[list[int]], colors: list[int] | None = None) -> bytes:
    n = len(nbrs)
    if colors is None:
        colors = [0] * n
    cert, order, _ = canonical_order(nbrs, colors)
    return _label_bytes(n, [colors[v] for v in order], cert if cert is not None else ())


def canonical_form(g: Graph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    nbrs = [g.neighbors(v) for v in range(g.n)]
    return colored_label(nbrs)


def canonical_relabeling(g: Graph) -> list[int]:
    """``perm`` with ``g.relabel(perm)`` canonical: ``perm[v]`` is v's canonical position."""
    nbrs = [g.neighbors(v) for v in range(g.n)]
    _, order, _ = canonical_order(nbrs)
    perm = [0] * g.n
    for i, v in enumerate(order or []):
        perm[v] = i
    return perm


def brute_force_form(g: Graph) -> tuple:
    """Exhaustive canonical form: lexicographically largest relabeled edge list.

    Used as the correctness oracle for ``canonical_form`` on small graphs.
    """
    best = None
    for perm in permutations(range(g.n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges))
        if best is None or key > best:
            best = key
    return (g.n, best)
