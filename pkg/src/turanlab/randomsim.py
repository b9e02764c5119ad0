"""Binomial random graphs and the subgraph constructions run on them.

Samples come from a counter-based generator keyed by ``(seed, trial)``, so a
trial can be regenerated on its own and parallel runs match serial ones.
The same trial index reuses the same uniforms at every ``p``, which couples
samples across a scan: raising ``p`` only adds edges.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from turanlab.density import format_rational
from turanlab.errors import GuardExceeded, PreconditionError, TuranLabError
from turanlab.extremal import DEFAULT_MAX_N, ExtremalResult, ex_exact
from turanlab.graphs import Copy, Graph, contains_subgraph, count_copies, enumerate_copies
from turanlab.graphs.core import iter_bits, pair_index

DEFAULT_MAX_EDGES = 40
DEFAULT_MAX_H_COPIES = 64
SCAN_COLUMNS = ("exponent", "p", "trials", "mean_ex", "std_ex", "normalized_pi", "mean_NT", "threshold_markers")


@dataclass(frozen=True)
class Sample:
    graph: Graph
    n: int
    p: float
    seed: int
    trial_index: int


def _generator(seed: int, trial: int) -> np.random.Generator:
    if trial < 0:
        raise PreconditionError("trial index must be non-negative")
    key = (seed % (1 << 64)) | ((trial % (1 << 64)) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_gnp(n: int, p: float, seed: int, trial: int = 0) -> Sample:
    """G(n, p): pair (u, v), u < v, taken in lexicographic order, is an edge iff its uniform is below p."""
    if not 0.0 <= p <= 1.0:
        raise PreconditionError(f"p must lie in [0, 1], got {p}")
    if n < 0:
        raise PreconditionError("n must be non-negative")
    u = _generator(seed, trial).random(n * (n - 1) // 2)
    hit = np.flatnonzero(u < p)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    return Sample(Graph(n, [pairs[i] for i in hit]), n, p, seed, trial)


def extract_disjoint_core(g: Graph, t: Graph) -> Graph:
    """Drop edges lying in two or more T-copies, then edges lying in none."""
    counts: dict[int, int] = {}
    for c in enumerate_copies(t, g):
        for k in iter_bits(c.edge_mask):
            counts[k] = counts.get(k, 0) + 1
    shared = 0
    for k, m in counts.items():
        if m > 1:
            shared |= 1 << k
    g1 = g.with_mask(g.mask & ~shared)
    covered = 0
    for c in enumerate_copies(t, g1):
        covered |= c.edge_mask
    return g1.with_mask(covered)


def lower_bound_easy(g: Graph, t: Graph, h: Graph, h_sub: Graph | None = None) -> Graph:
    """Delete the first edge of the lexicographically first surviving copy of H (or of ``h_sub``) until none is left."""
    target = h if h_sub is None else h_sub
    if h_sub is not None and not contains_subgraph(h_sub, h):
        raise PreconditionError("h_sub must be a subgraph of H")
    if target.edge_count == 0:
        raise PreconditionError("H must have at least one edge")
    removed = 0
    # deletions only destroy copies, so one pass over the sorted list finds each next survivor
    for c in enumerate_copies(target, g):
        if c.edge_mask & removed:
            continue
        removed |= 1 << pair_index(*min(c.edges))
    return g.with_mask(g.mask & ~removed)


class BoundResult(NamedTuple):
    graph: Graph
    count: int


def lower_bound_resolution(g: Graph, t: Graph, h: Graph, extremal_pool: Sequence[Copy]) -> BoundResult:
    """Restrict the disjoint core to copies from ``extremal_pool``, then delete every edge of every H-copy."""
    core = extract_disjoint_core(g, t)
    allowed = {c.key for c in extremal_pool}
    keep = 0
    for c in enumerate_copies(t, core):
        if c.key in allowed:
            keep |= c.edge_mask
    kept = core.with_mask(keep)
    doomed = 0
    for c in enumerate_copies(h, kept):
        doomed |= c.edge_mask
    out = kept.with_mask(keep & ~doomed)
    return BoundResult(out, count_copies(t, out))


# -- exact maximum on a host ------------------------------------------------------

@lru_cache(maxsize=32)
def _ex_cached(n: int, t: Graph, h: Graph, max_n: int) -> ExtremalResult:
    # every trial at p = 1 draws K_n, so a scan asks for the same value over and over
    return ex_exact(n, t, h, max_n=max_n)


def max_T_H_free_subgraph(g: Graph, t: Graph, h: Graph, max_edges: int = DEFAULT_MAX_EDGES,
                          max_h_copies: int = DEFAULT_MAX_H_COPIES, max_n: int = DEFAULT_MAX_N) -> ExtremalResult:
    """Exact max of N_T over H-free subgraphs of ``g`` by branching on which edge of an H-copy to delete.

    Complete hosts go to :func:`ex_exact`, which handles them far faster.
    """
    start = time.perf_counter()
    if h.edge_count == 0:
        raise PreconditionError("H must have at least one edge")
    if g.is_complete and g.n >= t.n and g.n > 0:
        res = _ex_cached(g.n, t, h, max_n)
        return ExtremalResult(g.n, res.value, res.witness, time.perf_counter() - start, res.nodes_explored)
    hcopies = sorted({c.edge_mask for c in enumerate_copies(h, g)})
    tcopies = [c.edge_mask for c in enumerate_copies(t, g)]
    if not hcopies:
        return ExtremalResult(g.n, len(tcopies), g, time.perf_counter() - start, 1)
    if g.edge_count > max_edges and len(hcopies) > max_h_copies:
        raise GuardExceeded(
            f"exact search refused: {g.edge_count} edges > {max_edges} and {len(hcopies)} H-copies > {max_h_copies}")

    # per edge: bitset of T-copies through it
    through: dict[int, int] = {}
    for i, m in enumerate(tcopies):
        for k in iter_bits(m):
            through[k] = through.get(k, 0) | (1 << i)
    all_t = (1 << len(tcopies)) - 1

    def alive_t(removed: int) -> int:
        dead = 0
        for k in iter_bits(removed):
            dead |= through.get(k, 0)
        return all_t & ~dead

    inc = lower_bound_easy(g, t, h)
    best_removed = g.mask & ~inc.mask
    best_val = alive_t(best_removed).bit_count()
    nodes = 0

    def rec(removed: int, kept: int):
        nonlocal best_val, best_removed, nodes
        nodes += 1
        live = alive_t(removed)
        value = live.bit_count()
        if value <= best_val:
            return
        alive = [m for m in hcopies if not m & removed]
        if not alive:
            best_val, best_removed = value, removed
            return
        # each alive H-copy loses some free edge; copies whose possible losses are disjoint add up
        bound = value
        spent = 0
        for m in sorted(alive, key=lambda m: ((m & ~kept).bit_count(), m)):
            free = m & ~kept
            if not free:
                return
            reach = 0
            least = None
            for k in iter_bits(free):
                hit = through.get(k, 0) & live
                reach |= hit
                c = hit.bit_count()
                least = c if least is None or c < least else least
            if reach & spent == 0:
                spent |= reach
                bound -= least
                if bound <= best_val:
                    return
        target = min(alive, key=lambda m: ((m & ~kept).bit_count(), m))
        forced = kept
        for k in iter_bits(target & ~kept):
            rec(removed | (1 << k), forced)
            forced |= 1 << k

    rec(0, 0)
    witness = g.with_mask(g.mask & ~best_removed)
    return ExtremalResult(g.n, best_val, witness, time.perf_counter() - start, nodes)


# -- Monte Carlo -----------------------------------------------------------------

def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("TURANLAB_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise PreconditionError("thread count must be at least 1")
    return threads


def _ordered_map(fn, jobs: list, threads: int) -> list:
    if threads == 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        # map keeps input order, so the reduction below never depends on scheduling
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


@dataclass(frozen=True)
class ConcentrationStats:
    trials: int
    mean: float
    std: float
    expectation: float
    ratio: float

    def to_json(self) -> dict:
        return {"trials": self.trials, "mean": self.mean, "std": self.std,
                "expectation": self.expectation, "ratio": self.ratio}


def _count_job(job) -> int:
    t, n, p, seed, trial = job
    return count_copies(t, sample_gnp(n, p, seed, trial).graph)


def _std(values: Sequence[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def concentration_check(t: Graph, n: int, p: float, trials: int, seed: int,
                        threads: int | None = None) -> ConcentrationStats:
    """Sample mean and std of N_T(G(n, p)) against its expectation."""
    from turanlab.probability import expected_copy_count

    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    counts = _ordered_map(_count_job, [(t, n, p, seed, i) for i in range(trials)], resolve_threads(threads))
    mean = math.fsum(counts) / trials
    expect = expected_copy_count(t, n, p)
    ratio = mean / expect if expect > 0 else (1.0 if mean == 0 else math.inf)
    return ConcentrationStats(trials, mean, _std(counts), expect, ratio)


@dataclass(frozen=True)
class ScanRow:
    exponent: Fraction
    p: float
    trials: int
    mean_ex: float
    std_ex: float
    normalized_pi: float
    mean_NT: float
    threshold_markers: str
    bound_only: bool = False

    def cells(self) -> list[str]:
        markers = self.threshold_markers + (";bound-only" if self.bound_only else "")
        return [
            format_rational(self.exponent), f"{self.p:.12g}", str(self.trials), f"{self.mean_ex:.12g}",
            f"{self.std_ex:.12g}", f"{self.normalized_pi:.12g}", f"{self.mean_NT:.12g}", markers,
        ]

    def to_json(self) -> dict:
        out = dict(zip(SCAN_COLUMNS, self.cells()))
        out["trials"] = self.trials
        out["bound_only"] = self.bound_only
        return out


def _scan_job(job):
    t, h, n, p, seed, trial, max_edges, max_n = job
    g = sample_gnp(n, p, seed, trial).graph
    nt = count_copies(t, g)
    try:
        return max_T_H_free_subgraph(g, t, h, max_edges=max_edges, max_n=max_n).value, nt, False
    except GuardExceeded:
        return count_copies(t, lower_bound_easy(g, t, h)), nt, True


def threshold_markers(t: Graph, h: Graph) -> str:
    """``p0=<exponent>`` for the appearance threshold, then one entry per resolution type."""
    from turanlab.covering import t_resolution
    from turanlab.density import base_exponent

    marks = [f"p0={format_rational(base_exponent(t))}"]
    try:
        res = t_resolution(t, h)
    except TuranLabError:
        return ";".join(marks)
    marks += [f"p{i}={format_rational(a)}" for i, a in enumerate(res.threshold_exponents, 1)]
    return ";".join(marks)


def scan_p(n: int, exponent) -> float:
    """p = n^(-exponent), exactly 1 at exponent 0."""
    a = Fraction(exponent)
    if a == 0:
        return 1.0
    return float(n) ** (-float(a))


def phase_scan(t: Graph, h: Graph, n: int, exponents: Sequence, trials: int, seed: int,
               threads: int | None = None, max_edges: int = DEFAULT_MAX_EDGES,
               max_n: int = DEFAULT_MAX_N, markers: str | None = None) -> list[ScanRow]:
    """Mean exact ex(G(n, p), T, H) over trials at p = n^(-a) for each exponent a."""
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    exps = [Fraction(a) for a in exponents]
    if any(a < 0 for a in exps):
        raise PreconditionError("exponents must be non-negative")
    if markers is None:
        markers = threshold_markers(t, h)
    threads = resolve_threads(threads)
    jobs = [(t, h, n, scan_p(n, a), seed, i, max_edges, max_n) for a in exps for i in range(trials)]
    results = _ordered_map(_scan_job, jobs, threads)
    rows = []
    for j, a in enumerate(exps):
        chunk = results[j * trials:(j + 1) * trials]
        exs = [r[0] for r in chunk]
        nts = [r[1] for r in chunk]
        p = scan_p(n, a)
        mean_ex = math.fsum(exs) / trials
        scale = float(n) ** t.n * p ** t.edge_count
        rows.append(ScanRow(a, p, trials, mean_ex, _std(exs), mean_ex / scale if scale > 0 else 0.0,
                            math.fsum(nts) / trials, markers, any(r[2] for r in chunk)))
    return rows


def scan_csv(rows: Sequence[ScanRow]) -> str:
    """CSV table; rows that fell back to the greedy construction carry a ``bound-only`` marker."""
    lines = [",".join(SCAN_COLUMNS)]
    lines += [",".join(r.cells()) for r in rows]
    return "\n".join(lines) + "\n"
