"""T-coverings of H: enumeration up to isomorphism, T-density, and the T-resolution.

A covering is a minimal family of pairwise edge-disjoint copies of T whose
union contains H.  Coverings are compared through a colored incidence graph
(vertex nodes, copy nodes, and one node per copy edge), so two coverings get
the same canonical form iff some bijection of their vertex sets maps copies
onto copies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from turanlab.density import (
    DensityReport,
    base_exponent,
    exponent_of,
    format_rational,
    is_two_balanced,
)
from turanlab.errors import PreconditionError
from turanlab.graphs import (
    Copy,
    Graph,
    contains_subgraph,
    embeddings,
    from_edges,
    homomorphism_exists,
    to_graph6,
)
from turanlab.graphs.canon import colored_label
from turanlab.graphs.core import edges_from_mask, iter_bits, pair_index

INF = float("inf")


# -- data -----------------------------------------------------------------

@dataclass(frozen=True)
class Covering:
    """Edge-disjoint copies of ``pattern`` over vertices ``0..universe_size-1`` whose union contains ``target``.

    Minimality is not enforced here (the one-copy-per-edge covering is not
    minimal when H already fits in fewer copies); see :meth:`is_minimal`.
    """

    universe_size: int
    copies: tuple
    target: Graph
    pattern: Graph = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "copies", tuple(self.copies))
        used = 0
        vertices = 0
        for c in self.copies:
            if c.edge_mask & used:
                raise PreconditionError("covering copies must be pairwise edge-disjoint")
            used |= c.edge_mask
            vertices |= c.vertex_mask
        if vertices != (1 << self.universe_size) - 1:
            raise PreconditionError("every universe vertex must belong to some copy")
        if not contains_subgraph(self.target, self.union):
            raise PreconditionError("the union of the copies does not contain the target graph")

    @cached_property
    def union(self) -> Graph:
        return Graph(self.universe_size, [e for c in self.copies for e in c.edges])

    def is_minimal(self) -> bool:
        for i in range(len(self.copies)):
            rest = Graph(self.universe_size, [e for j, c in enumerate(self.copies) if j != i for e in c.edges])
            if contains_subgraph(self.target, rest):
                return False
        return True

    @cached_property
    def canonical(self) -> bytes:
        return covering_canonical_form(self.universe_size, self.copies)

    def to_json(self, density=None) -> dict:
        out = {
            "universe_size": self.universe_size,
            "copies": [[list(e) for e in sorted(c.edges)] for c in self.copies],
            "target": to_graph6(self.target),
            "union": to_graph6(self.union),
        }
        if density is not None:
            out["density"] = format_rational(density)
        return out


@dataclass(frozen=True)
class CoveringType:
    canonical: bytes
    representative: Covering = field(compare=False, repr=False)
    copy_count: int = 0
    union_vertices: int = 0
    union_edges: int = 0

    @classmethod
    def of(cls, cov: Covering) -> "CoveringType":
        return cls(cov.canonical, cov, len(cov.copies), cov.universe_size, cov.union.edge_count)

    @property
    def is_singleton(self) -> bool:
        return self.copy_count == 1

    @cached_property
    def density(self):
        if self.is_singleton:
            return None
        return t_density(self.representative).value


@dataclass(frozen=True)
class Resolution:
    types: tuple
    densities: tuple
    threshold_exponents: tuple
    base_exponent: Fraction
    fe_type: CoveringType
    fe_density: Fraction

    def to_json(self) -> dict:
        return {
            "base_exponent": format_rational(self.base_exponent),
            "fe_density": format_rational(self.fe_density),
            "types": [
                dict(ty.representative.to_json(d), threshold_exponent=format_rational(a),
                     is_fe=ty.canonical == self.fe_type.canonical)
                for ty, d, a in zip(self.types, self.densities, self.threshold_exponents)
            ],
        }


# -- canonical forms --------------------------------------------------------

def _incidence(nv: int, copies: Iterable[Copy], marked_edges: Iterable = ()):
    """Colored graph encoding a family of copies up to relabeling.

    Nodes: the vertices (color 0) and one node per copy (color 1) joined to
    the copy's vertices.  An edge whose endpoints lie together in just one
    copy must belong to that copy, so it becomes a plain vertex-vertex edge;
    any other edge gets its own node (color 2) joined to its endpoints and
    its copy.  Marked edges become color-3 nodes on their endpoints.
    """
    copies = list(copies)
    nbrs: list[list[int]] = [[] for _ in range(nv)]
    colors = [0] * nv

    def node(color):
        nbrs.append([])
        colors.append(color)
        return len(nbrs) - 1

    def link(a, b):
        nbrs[a].append(b)
        nbrs[b].append(a)

    vmasks = [c.vertex_mask for c in copies]
    cnodes = []
    for c in copies:
        cn = node(1)
        cnodes.append(cn)
        for v in c.vertices:
            link(cn, v)
    for i, c in enumerate(copies):
        for u, v in c.edges:
            pair = (1 << u) | (1 << v)
            holders = sum(1 for m in vmasks if m & pair == pair)
            if holders == 1:
                link(u, v)
            else:
                en = node(2)
                link(en, u)
                link(en, v)
                link(en, cnodes[i])
    for u, v in marked_edges:
        en = node(3)
        link(en, u)
        link(en, v)
    return nbrs, colors


def covering_canonical_form(universe_size: int, copies: Iterable[Copy]) -> bytes:
    return colored_label(*_incidence(universe_size, copies))


# -- constructions ------------------------------------------------------------

def _require_coverable(t: Graph, h: Graph):
    if t.edge_count < 1 or h.edge_count < 1:
        raise PreconditionError("T and H must each have at least one edge")
    if h.isolated_vertices:
        raise PreconditionError("H must not have isolated vertices")


def build_special_covering(t: Graph, h: Graph) -> Covering:
    """One copy of T per edge of H, meeting H only in that edge; other vertices fresh."""
    _require_coverable(t, h)
    x, y = t.sorted_edges[0]
    rest = [v for v in range(t.n) if v not in (x, y)]
    nxt = h.n
    copies = []
    for a, b in h.sorted_edges:
        lab = [0] * t.n
        lab[x], lab[y] = a, b
        for v in rest:
            lab[v] = nxt
            nxt += 1
        copies.append(Copy.from_embedding(t, lab))
    return Covering(nxt, copies, h, t)


def fano_covering() -> Covering:
    """The Fano plane as an edge-disjoint triangle decomposition of K7."""
    from turanlab.graphs import complete

    k3 = complete(3)
    lines = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    return Covering(7, [Copy.from_embedding(k3, ln) for ln in lines], complete(7), k3)


def underlying_graph(f: Covering | Sequence[Copy]) -> Graph:
    """Union of the copies on their joint vertex support, relabeled to ``0..k-1``."""
    copies = f.copies if isinstance(f, Covering) else list(f)
    if not copies:
        raise PreconditionError("underlying graph of an empty collection")
    verts = sorted(set().union(*(c.vertices for c in copies)))
    pos = {v: i for i, v in enumerate(verts)}
    return Graph(len(verts), [(pos[u], pos[v]) for c in copies for u, v in c.edges])


# -- T-density ------------------------------------------------------------------

def t_density(f: Covering | Sequence[Copy]) -> DensityReport:
    """max (e_U(F') - e_T) / (v_U(F') - v_T) over sub-collections with at least two copies.

    A sub-collection whose union has exactly v_T vertices has density +inf.
    Ties go to the larger sub-collection, then the smaller index mask.
    """
    copies = list(f.copies if isinstance(f, Covering) else f)
    k = len(copies)
    if k < 2:
        raise PreconditionError("T-density needs at least two copies")
    pattern = copies[0].pattern
    vt, et = pattern.n, pattern.edge_count
    emask = [c.edge_mask for c in copies]
    vmask = [c.vertex_mask for c in copies]
    best, best_sel = None, 0
    for sel in range(1, 1 << k):
        size = sel.bit_count()
        if size < 2:
            continue
        em = vm = 0
        for i in iter_bits(sel):
            em |= emask[i]
            vm |= vmask[i]
        dv = vm.bit_count() - vt
        de = em.bit_count() - et
        val = INF if dv == 0 else Fraction(de, dv)
        if best is None or val > best or (val == best and size > best_sel.bit_count()):
            best, best_sel = val, sel
    chosen = [copies[i] for i in iter_bits(best_sel)]
    return DensityReport(best, underlying_graph(chosen), tuple(iter_bits(best_sel)))


# -- enumeration ------------------------------------------------------------------

def _fewest_vertices(g: Graph, top: int) -> list[int]:
    """fewest[s] = least number of vertices spanned by s edges of g, for s <= top."""
    edges = g.sorted_edges
    if len(edges) > 16:
        # cheap valid floor: s edges need a vertex set with at least s pairs
        out = [0]
        for s in range(1, top + 1):
            v = out[-1]
            while v * (v - 1) // 2 < s:
                v += 1
            out.append(v)
        return out
    out = [0] + [g.n] * top
    for sel in range(1, 1 << len(edges)):
        k = sel.bit_count()
        if k > top:
            continue
        vm = 0
        for i in iter_bits(sel):
            a, b = edges[i]
            vm |= (1 << a) | (1 << b)
        out[k] = min(out[k], vm.bit_count())
    return out


class _Enumerator:
    """Breadth-first growth of partial coverings of a fixed placement of H.

    A state is a list of copies; the next copy must contain the first H-edge
    not yet covered.  States are merged up to relabelings that map H onto
    itself, and a state whose union already contains H (before H is fully
    covered) cannot extend to a minimal covering.

    With ``cap`` set, states with a sub-collection denser than ``cap`` are
    dropped: adding copies never lowers the T-density.
    """

    def __init__(self, t: Graph, h: Graph, cap=None):
        self.t, self.h = t, h
        self.cap = cap
        self.h_edges = h.sorted_edges
        self.h_mask = h.mask
        self.h_vertices = (1 << h.n) - 1
        self.plans = []
        # one plan per Aut(T)-orbit of oriented edges is enough to reach every copy
        auts = list(embeddings(t, t))
        seen_arcs: set = set()
        for x, y in t.sorted_edges:
            for a, b in ((x, y), (y, x)):
                if (a, b) in seen_arcs:
                    continue
                seen_arcs.update((g[a], g[b]) for g in auts)
                order = [a, b]
                placed = {a, b}
                while len(order) < t.n:
                    v = max((v for v in range(t.n) if v not in placed),
                            key=lambda v: (sum(1 for w in placed if t.has_edge(v, w)), t.degrees[v], -v))
                    order.append(v)
                    placed.add(v)
                back = [[w for w in order[:i] if t.has_edge(order[i], w)] for i in range(t.n)]
                self.plans.append((order, back))
        self.states_seen = 0
        if cap is not None:
            self._init_budget()

    def _init_budget(self):
        # A future copy holding s uncovered H-edges has at least fewest[s] vertices
        # inside H, so it brings at most v_T - fewest[s] vertices from outside.
        # budget[r] is the best total, over ways to split r uncovered H-edges
        # among future copies, of num * (new vertices) - den * e_T per copy.
        t, h = self.t, self.h
        num, den = self.cap.numerator, self.cap.denominator
        top = min(t.edge_count, h.edge_count)
        ft, fh = _fewest_vertices(t, top), _fewest_vertices(h, top)
        gain = [None] + [num * (t.n - max(ft[s], fh[s])) - den * t.edge_count for s in range(1, top + 1)]
        budget = [0]
        for r in range(1, h.edge_count + 1):
            budget.append(max(gain[s] + budget[r - s] for s in range(1, min(r, top) + 1)))
        self.budget = budget

    def copies_through(self, e, used: int, nv: int, floors=()) -> list:
        """Copies of T through H-edge ``e`` avoiding ``used`` edges, as ((edge mask, vertex mask), labels).

        ``floors`` come from :meth:`vertex_floors`; a branch is cut once the
        copy can no longer reach enough new vertices.
        """
        t = self.t
        n = t.n
        out: dict = {}
        for order, back in self.plans:
            lab = [-1] * n
            lab[order[0]], lab[order[1]] = e

            def rec(i, vmask, emask, fresh):
                left = n - i
                for vm, least in floors:
                    if (vm | vmask).bit_count() + left < least:
                        return
                if i == n:
                    key = (emask, vmask)
                    if key not in out:
                        out[key] = tuple(lab)
                    return
                v = order[i]
                top = nv + fresh
                for x in range(top + 1):
                    if vmask >> x & 1:
                        continue
                    add = 0
                    for w in back[i]:
                        add |= 1 << pair_index(x, lab[w])
                    if add & used:
                        continue
                    lab[v] = x
                    rec(i + 1, vmask | (1 << x), emask | add, fresh + (x == top))
                lab[v] = -1

            rec(2, (1 << e[0]) | (1 << e[1]), 1 << pair_index(*e), 0)
        return [(k, out[k]) for k in sorted(out)]

    @staticmethod
    def subcollections(copies) -> list[tuple[int, int]]:
        """(vertex mask, size) of every sub-collection of ``copies``, the empty one first."""
        out = [(0, 0)]
        for c in copies:
            out += [(vm | c.vertex_mask, k + 1) for vm, k in out]
        return out

    def vertex_floors(self, subs) -> list[tuple[int, int]]:
        """For each sub-collection S: (vertex mask of S, least union size a new
        copy may leave so that S plus it stays within the cap).

        Copies are edge-disjoint, so the union of S plus one more copy has
        exactly (|S| + 1) e_T edges and only the vertex count varies.
        """
        if self.cap is None:
            return []
        vt, et = self.t.n, self.t.edge_count
        num, den = self.cap.numerator, self.cap.denominator
        # need num * (size - vt) >= |S| * et * den
        return [(vm, vt + -(-k * et * den // num)) for vm, k in subs if k]

    def slack(self, vm: int, k: int) -> int:
        """num * (|V_S u V(H)| - v_T) - den * (|S| - 1) e_T: the room S leaves for future copies."""
        num, den = self.cap.numerator, self.cap.denominator
        return num * ((vm | self.h_vertices).bit_count() - self.t.n) - den * (k - 1) * self.t.edge_count

    def hopeless(self, subs, old_slack: int, c: Copy, remaining: int) -> bool:
        """True when some sub-collection of the state plus ``c``, together with any
        copies still needed for the ``remaining`` H-edges, must exceed the cap."""
        room = self.budget[remaining]
        if old_slack is not None and old_slack + room < 0:
            return True
        cv = c.vertex_mask
        return any(self.slack(vm | cv, k + 1) + room < 0 for vm, k in subs)

    def state_key(self, nv, copies):
        return colored_label(*_incidence(nv, copies, self.h_edges))

    def run(self) -> dict[bytes, Covering]:
        h, t = self.h, self.t
        found: dict[bytes, Covering] = {}
        frontier = {b"": ((), 0, h.n)}
        while frontier:
            nxt: dict = {}
            for copies, used, nv in frontier.values():
                todo = self.h_mask & ~used
                e = edges_from_mask(todo & -todo)[0]
                subs = self.subcollections(copies)
                if self.cap is not None:
                    old_slack = min((self.slack(vm, k) for vm, k in subs if k), default=None)
                for _, lab in self.copies_through(e, used, nv, self.vertex_floors(subs)):
                    self.states_seen += 1
                    c = Copy.from_embedding(t, lab)
                    new = copies + (c,)
                    nused = used | c.edge_mask
                    nnv = max(nv, max(c.vertices) + 1)
                    if self.h_mask & ~nused == 0:
                        cov = Covering(nnv, new, h, t)
                        if cov.is_minimal():
                            found.setdefault(cov.canonical, cov)
                        continue
                    if self.cap is not None and self.hopeless(
                            subs, old_slack, c, (self.h_mask & ~nused).bit_count()):
                        continue
                    if contains_subgraph(h, Graph(nnv, edges_from_mask(nused))):
                        continue
                    key = self.state_key(nnv, new)
                    if key not in nxt:
                        nxt[key] = (new, nused, nnv)
            frontier = nxt
        return found


def enumerate_covering_types(t: Graph, h: Graph, max_density=None) -> list[CoveringType]:
    """All types of minimal T-coverings of H, sorted by canonical form.

    Singleton types (one copy of T already containing H) are included and
    flagged through :attr:`CoveringType.is_singleton`.  With ``max_density``
    only types of T-density at most that value are produced, which prunes
    the search heavily.
    """
    _require_coverable(t, h)
    cap = None if max_density is None else Fraction(max_density)
    found = _Enumerator(t, h, cap).run()
    return [CoveringType.of(found[k]) for k in sorted(found)]


def covering_type(cov: Covering) -> CoveringType:
    return CoveringType.of(cov)


# -- resolution -------------------------------------------------------------------

def t_resolution(t: Graph, h: Graph, relax: bool = False,
                 types: list[CoveringType] | None = None) -> Resolution:
    """Covering types with T-density at most that of the special covering, densest last.

    ``relax=True`` skips the blow-up precondition (singleton types are still
    left out, their density being undefined).
    """
    if t.edge_count < 2 or not is_two_balanced(t):
        raise PreconditionError("T must be 2-balanced")
    if not relax and homomorphism_exists(h, t):
        raise PreconditionError("H must not be contained in a blow-up of T")
    fe = build_special_covering(t, h)
    fe_density = t_density(fe).value
    if types is None:
        types = enumerate_covering_types(t, h, max_density=fe_density)
    fe_type = covering_type(fe)
    chosen = [ty for ty in types if not ty.is_singleton and ty.density <= fe_density]
    chosen.sort(key=lambda ty: (ty.density, ty.canonical))
    dens = tuple(ty.density for ty in chosen)
    return Resolution(
        types=tuple(chosen),
        densities=dens,
        threshold_exponents=tuple(exponent_of(d) for d in dens),
        base_exponent=base_exponent(t),
        fe_type=fe_type,
        fe_density=fe_density,
    )


# -- instances inside a pool of copies ------------------------------------------

def _labels(c: Copy, t: Graph) -> tuple:
    if c.labels:
        return c.labels
    g = Graph(max(c.vertices) + 1, c.edges)
    for lab in embeddings(t, g):
        if set(lab) == set(c.vertices):
            return lab
    raise PreconditionError("pool copy is not a copy of the covering's pattern")


def covering_instances(ft: CoveringType | Covering, pool: Sequence[Copy]) -> list[frozenset]:
    """Sub-collections of ``pool`` (as index sets) isomorphic to the covering ``ft``."""
    rep = ft.representative if isinstance(ft, CoveringType) else ft
    if not pool:
        return []
    t = rep.pattern
    auts = list(embeddings(t, t))
    # order copies so each one after the first touches an already-placed copy
    reps = list(rep.copies)
    ordered = [reps.pop(0)]
    seen_v = set(ordered[0].vertices)
    while reps:
        i = max(range(len(reps)), key=lambda j: (len(seen_v & reps[j].vertices), -j))
        ordered.append(reps.pop(i))
        seen_v |= ordered[-1].vertices
    rep_labels = [_labels(c, t) for c in ordered]
    pool_labels = [_labels(c, t) for c in pool]
    by_vertex: dict[int, set[int]] = {}
    for i, c in enumerate(pool):
        for v in c.vertices:
            by_vertex.setdefault(v, set()).add(i)
    everything = set(range(len(pool)))
    phi: dict[int, int] = {}
    hosts: set[int] = set()
    chosen: list[int] = []
    found: set[frozenset] = set()
    k = len(ordered)

    def rec(j):
        if j == k:
            found.add(frozenset(chosen))
            return
        lab_c = rep_labels[j]
        cand = everything
        for rv in lab_c:
            if rv in phi:
                cand = cand & by_vertex.get(phi[rv], set())
        for pi in sorted(cand):
            if pi in chosen:
                continue
            lab_p = pool_labels[pi]
            for a in auts:
                new = []
                ok = True
                for i, rv in enumerate(lab_c):
                    hv = lab_p[a[i]]
                    if rv in phi:
                        if phi[rv] != hv:
                            ok = False
                            break
                    elif hv in hosts:
                        ok = False
                        break
                    else:
                        new.append((rv, hv))
                if not ok:
                    continue
                for rv, hv in new:
                    phi[rv] = hv
                    hosts.add(hv)
                chosen.append(pi)
                rec(j + 1)
                chosen.pop()
                for rv, hv in new:
                    del phi[rv]
                    hosts.discard(hv)

    rec(0)
    return sorted(found, key=lambda s: sorted(s))


def count_covering_instances(ft: CoveringType | Covering, pool: Sequence[Copy]) -> int:
    return len(covering_instances(ft, pool))
