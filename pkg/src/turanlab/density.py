"""Exact 2-density, 2-balancedness and the closed-form density of the special covering.

All values are ``fractions.Fraction``.  ``format_rational`` gives the
``"num/den"`` text form used in every JSON/CSV output.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from turanlab.errors import PreconditionError
from turanlab.graphs import Graph

Rational = Fraction


@dataclass(frozen=True)
class DensityReport:
    """A maximum density together with the subgraph that attains it.

    ``support`` lists the vertices (for 2-density) or the copy indices (for
    T-density) of the witness inside the input.
    """

    value: Fraction | float
    witness: Graph
    support: tuple[int, ...] = ()


def format_rational(x) -> str:
    if isinstance(x, float):
        if x == float("inf"):
            return "inf"
        raise TypeError(f"expected an exact rational, got float {x!r}")
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if s == "inf":
        raise PreconditionError("infinite density is not a valid rational input")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"not a rational number: {s!r}") from None


def _subset_edge_counts(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Edge and vertex counts of the induced subgraph on every vertex subset."""
    n = g.n
    edges = np.zeros(1, dtype=np.int32)
    sizes = np.zeros(1, dtype=np.int32)
    for v in range(n):
        idx = np.arange(1 << v, dtype=np.int64)
        gained = np.bitwise_count(idx & g.adj[v]).astype(np.int32)
        edges = np.concatenate([edges, edges + gained])
        sizes = np.concatenate([sizes, sizes + 1])
    return edges, sizes


def two_density(h: Graph) -> DensityReport:
    """m_2(h) = max (e' - 1) / (v' - 2) over subgraphs with at least two edges.

    For a fixed vertex set the induced subgraph has the most edges, so the
    maximum runs over vertex subsets.  Ties go to the smallest subset mask.
    """
    if h.edge_count < 2:
        raise PreconditionError("2-density needs a subgraph with at least 2 edges")
    if h.n > 24:
        raise PreconditionError("2-density is computed exhaustively; graph has more than 24 vertices")
    e, v = _subset_edge_counts(h)
    ok = e >= 2
    ratio = np.full(e.shape, -1.0)
    ratio[ok] = (e[ok] - 1) / (v[ok] - 2)
    top = ratio.max()
    best, best_mask = None, None
    for mask in np.flatnonzero(ratio >= top - 1e-9):
        r = Fraction(int(e[mask]) - 1, int(v[mask]) - 2)
        if best is None or r > best:
            best, best_mask = r, int(mask)
    verts = tuple(x for x in range(h.n) if best_mask >> x & 1)
    return DensityReport(best, h.induced(verts), verts)


def is_two_balanced(t: Graph) -> bool:
    """True iff the whole graph attains its 2-density."""
    m2 = two_density(t).value
    return Fraction(t.edge_count - 1, t.n - 2) == m2


def fe_density_closed_form(t: Graph, h: Graph) -> Fraction:
    """e_T / (v_T - 2 + 1/m_2(H)), the T-density of the one-copy-per-edge covering."""
    if t.edge_count < 2 or t.n < 3:
        raise PreconditionError("T needs at least 2 edges and 3 vertices")
    return Fraction(t.edge_count) / (t.n - 2 + 1 / two_density(h).value)


def exponent_of(density) -> Fraction:
    """Threshold exponent ``a`` with ``p = n^{-a}`` for a density ``d``: ``a = 1/d``."""
    d = Fraction(density)
    if d == 0:
        raise PreconditionError("density 0 has no threshold exponent")
    return 1 / d


def base_exponent(t: Graph) -> Fraction:
    """Exponent of the appearance threshold ``p_0 = n^{-v_T/e_T}``."""
    if t.edge_count == 0:
        raise PreconditionError("T must have at least one edge")
    return Fraction(t.n, t.edge_count)
