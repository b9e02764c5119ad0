"""Expected copy counts, the Psi_T minimum and Janson's lower-tail bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from turanlab.density import two_density
from turanlab.errors import PreconditionError
from turanlab.graphs import Copy, Graph, count_copies_complete
from turanlab.graphs.core import iter_bits

REL_TOL = 1e-12


def _check_p(p: float, allow_zero: bool = True):
    if not (0.0 <= p <= 1.0) or (not allow_zero and p == 0.0):
        raise PreconditionError(f"p must lie in {'[0, 1]' if allow_zero else '(0, 1]'}, got {p}")


def expected_copy_count(pattern: Graph, n: int, p: float) -> float:
    """E[N_pattern(G(n, p))] = N_pattern(K_n) p^e."""
    _check_p(p)
    if n < 0:
        raise PreconditionError("n must be non-negative")
    return count_copies_complete(pattern, n) * p ** pattern.edge_count


def psi_T(t: Graph, n: int, p: float) -> tuple[float, Graph]:
    """min n^v(T') p^e(T') over subgraphs T' of t with at least one edge, by enumeration.

    A subgraph is given by its edge set; its vertices are the endpoints, since
    extra isolated vertices only raise n^v.  Ties go to fewer edges.
    """
    if t.edge_count == 0:
        raise PreconditionError("T must have at least one edge")
    _check_p(p, allow_zero=False)
    edges = t.sorted_edges
    best, best_sel = None, 0
    logn, logp = math.log(n), math.log(p)
    for sel in range(1, 1 << len(edges)):
        verts = set()
        for i in iter_bits(sel):
            verts.update(edges[i])
        val = len(verts) * logn + sel.bit_count() * logp
        if best is None or val < best - 1e-15 or (abs(val - best) <= 1e-15 and sel.bit_count() < best_sel.bit_count()):
            best, best_sel = val, sel
    witness = Graph(t.n, [edges[i] for i in iter_bits(best_sel)]).without_isolated()
    return float(n) ** witness.n * p ** witness.edge_count, witness


def psi_closed_form(t: Graph, n: int, p: float) -> float:
    """Piecewise value for 2-balanced T: n^v_T p^e_T below n^(-1/m_2(T)), n^2 p above."""
    _check_p(p, allow_zero=False)
    m2 = two_density(t).value
    if p <= float(n) ** (-1 / float(m2)):
        return float(n) ** t.n * p ** t.edge_count
    return float(n) ** 2 * p


@dataclass(frozen=True)
class JansonReport:
    mu: float
    delta: float
    t: float
    bound: float

    def to_json(self) -> dict:
        return {"mu": self.mu, "delta": self.delta, "t": self.t, "bound": self.bound}


def janson_parameters(pool: Sequence[Copy], p: float) -> tuple[float, float]:
    """(mu, delta): mu sums p^e over the pool, delta sums p^|E_i u E_j| over ordered intersecting pairs."""
    masks = [c.edge_mask for c in pool]
    mu = math.fsum(p ** m.bit_count() for m in masks)
    terms = []
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            b = masks[j]
            if a & b:
                terms.append(2 * p ** (a | b).bit_count())
    # fsum is exactly rounded, so the result does not depend on summation order
    return mu, math.fsum(terms)


def janson_lower_tail(pool: Sequence[Copy], p: float, shortfall: float) -> JansonReport:
    """P(X <= mu - t) <= exp(-t^2 / (2 (mu + delta))) for X the number of pool copies present in G(n, p)."""
    _check_p(p, allow_zero=False)
    mu, delta = janson_parameters(pool, p)
    if shortfall < 0:
        raise PreconditionError("shortfall must be non-negative")
    if shortfall > mu * (1 + REL_TOL):
        raise PreconditionError(f"shortfall {shortfall} exceeds mu = {mu}")
    denom = 2 * (mu + delta)
    bound = 1.0 if denom == 0 else math.exp(-shortfall * shortfall / denom)
    return JansonReport(mu, delta, shortfall, min(1.0, max(0.0, bound)))
