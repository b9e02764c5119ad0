import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import max_free_subgraph_brute
from turanlab.errors import GuardExceeded, PreconditionError
from turanlab.extremal import ex_exact, exx_exact
from turanlab.covering import covering_type, fano_covering
from turanlab.graphs import (
    Graph,
    complete,
    contains_subgraph,
    count_copies,
    cycle,
    enumerate_copies,
    path,
)
from turanlab.graphs.core import iter_bits
from turanlab.randomsim import (
    SCAN_COLUMNS,
    concentration_check,
    extract_disjoint_core,
    lower_bound_easy,
    lower_bound_resolution,
    max_T_H_free_subgraph,
    phase_scan,
    sample_gnp,
    scan_csv,
    scan_p,
    threshold_markers,
)

K2, K3, K4 = complete(2), complete(3), complete(4)
BOWTIE_EDGE = Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])


# -- sampling -------------------------------------------------------------------

def test_sample_endpoints():
    assert sample_gnp(9, 0.0, 1).graph == Graph(9)
    assert sample_gnp(9, 1.0, 1).graph == complete(9)


def test_sample_is_reproducible_and_trial_dependent():
    a = sample_gnp(30, 0.3, 42, 5).graph
    assert sample_gnp(30, 0.3, 42, 5).graph == a
    assert sample_gnp(30, 0.3, 42, 6).graph != a
    assert sample_gnp(30, 0.3, 43, 5).graph != a


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.integers(0, 2**64 - 1), st.integers(0, 1000))
@settings(max_examples=30)
def test_samples_are_coupled_across_p(p, q, seed, trial):
    lo, hi = sorted((p, q))
    assert sample_gnp(15, lo, seed, trial).graph.edges <= sample_gnp(15, hi, seed, trial).graph.edges


def test_sample_edge_count_statistics():
    counts = [sample_gnp(50, 0.3, 2024, i).graph.edge_count for i in range(1000)]
    mean = sum(counts) / len(counts)
    sigma = math.sqrt(1225 * 0.3 * 0.7 / len(counts))
    assert abs(mean - 1225 * 0.3) <= 3 * sigma


def test_sample_rejects_bad_p():
    with pytest.raises(PreconditionError):
        sample_gnp(5, 1.2, 0)


# -- core --------------------------------------------------------------------------

@pytest.mark.parametrize("g,expected", [
    (BOWTIE_EDGE, Graph(4)),
    (Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]), None),
    (K4, Graph(4)),
])
def test_core_examples(g, expected):
    out = extract_disjoint_core(g, K3)
    assert out == (g if expected is None else expected)


@given(st.integers(8, 16), st.floats(0.1, 0.6), st.integers(0, 10**6))
@settings(max_examples=40)
def test_core_edges_lie_in_exactly_one_copy(n, p, seed):
    g = sample_gnp(n, p, seed).graph
    for t in (K3, cycle(4)):
        core = extract_disjoint_core(g, t)
        assert core.edges <= g.edges
        copies = enumerate_copies(t, core)
        for e in core.edges:
            assert sum(e in c.edges for c in copies) == 1


# -- exact maximum on a host --------------------------------------------------------

def test_max_free_on_complete_hosts():
    assert max_T_H_free_subgraph(complete(5), K2, K3).value == 6
    assert max_T_H_free_subgraph(K4, K3, K4).value == 2


def test_max_free_on_free_host():
    g = cycle(6)
    res = max_T_H_free_subgraph(g, K2, K3)
    assert res.value == 6 and res.witness == g


@given(st.integers(0, 10**6), st.floats(0.3, 0.8))
@settings(max_examples=25)
def test_max_free_matches_brute_force(seed, p):
    g = sample_gnp(7, p, seed).graph
    if g.edge_count > 15:
        g = g.with_mask(sum(1 << k for k in list(iter_bits(g.mask))[:15]))
    for t, h in ((K3, K4), (K2, K3), (path(3), cycle(4))):
        res = max_T_H_free_subgraph(g, t, h)
        assert res.value == max_free_subgraph_brute(g, t, h)
        assert res.witness.edges <= g.edges
        assert not contains_subgraph(h, res.witness)
        assert count_copies(t, res.witness) == res.value


def test_max_free_guard():
    g = sample_gnp(12, 0.9, 3).graph
    with pytest.raises(GuardExceeded):
        max_T_H_free_subgraph(g, K3, K3, max_edges=10, max_h_copies=5)


# -- lower-bound constructions --------------------------------------------------------

def test_lower_bound_easy_examples():
    g = cycle(7)
    assert lower_bound_easy(g, K3, K3) == g
    out = lower_bound_easy(K4, K3, K4)
    assert out.edge_count == 5 and count_copies(K3, out) == 2
    assert (0, 1) not in out.edges


def test_lower_bound_easy_is_h_free_on_samples():
    for seed in range(100):
        g = sample_gnp(20, 0.2, seed).graph
        assert not contains_subgraph(K4, lower_bound_easy(g, K3, K4))


def test_lower_bound_easy_with_sub_pattern():
    g = complete(6)
    out = lower_bound_easy(g, K3, K4, h_sub=K3)
    assert not contains_subgraph(K3, out)
    with pytest.raises(PreconditionError):
        lower_bound_easy(g, K3, K3, h_sub=K4)


def test_lower_bound_resolution_examples():
    pool = enumerate_copies(K3, complete(8))
    g = Graph(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (5, 6)])
    res = lower_bound_resolution(g, K3, K4, pool)
    assert res.graph == extract_disjoint_core(g, K3) and res.count == 2
    assert lower_bound_resolution(g, K3, K4, []).graph == Graph(8)


def test_lower_bound_resolution_with_fano_free_pool():
    pool = list(exx_exact(7, K3, [covering_type(fano_covering())]).witness)
    res = lower_bound_resolution(complete(7), K3, complete(7), pool)
    assert not contains_subgraph(complete(7), res.graph)
    keys = {c.key for c in pool}
    assert all(c.key in keys for c in enumerate_copies(K3, res.graph))


@pytest.mark.parametrize("n,h", [(5, K4), (6, K4), (6, cycle(4))])
def test_sandwich_at_p_one(n, h):
    ex = ex_exact(n, K3, h).value
    assert max_T_H_free_subgraph(complete(n), K3, h).value == ex
    assert count_copies(K3, lower_bound_easy(complete(n), K3, h)) <= ex
    pool = enumerate_copies(K3, complete(n))
    assert lower_bound_resolution(complete(n), K3, h, pool).count <= ex


@given(st.integers(0, 10**6))
@settings(max_examples=20)
def test_sandwich_on_samples(seed):
    g = sample_gnp(9, 0.5, seed).graph
    exact = max_T_H_free_subgraph(g, K3, K4).value
    assert count_copies(K3, lower_bound_easy(g, K3, K4)) <= exact
    pool = enumerate_copies(K3, complete(9))
    assert lower_bound_resolution(g, K3, K4, pool).count <= exact


# -- concentration and scans ------------------------------------------------------------

def test_concentration_endpoints():
    full = concentration_check(K3, 8, 1.0, 5, 0)
    assert full.ratio == 1.0 and full.std == 0.0
    assert concentration_check(K3, 8, 0.0, 5, 0).mean == 0.0


def test_scan_p():
    assert scan_p(10, 0) == 1.0
    assert scan_p(10, 1) == pytest.approx(0.1, rel=1e-15)


def test_threshold_markers():
    assert threshold_markers(K3, K4) == "p0=1/1;p1=7/15"
    assert threshold_markers(K3, cycle(5)) == "p0=1/1"


def test_phase_scan_endpoint_and_csv():
    rows = phase_scan(K3, K4, 7, [0, 2], trials=4, seed=1)
    ex = ex_exact(7, K3, K4).value
    assert rows[0].p == 1.0 and rows[0].mean_ex == ex and rows[0].std_ex == 0.0
    assert rows[0].normalized_pi == ex / 7 ** 3
    text = scan_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(SCAN_COLUMNS)
    assert lines[1].split(",")[0] == "0/1" and len(lines) == 3


def test_phase_scan_marks_fallback_rows():
    rows = phase_scan(K3, K3, 10, ["1/20", 2], trials=2, seed=5, max_edges=3)
    assert rows[0].bound_only and not rows[1].bound_only
    assert rows[0].cells()[-1].endswith(";bound-only")
    assert rows[0].mean_ex == 0.0


def test_phase_scan_is_thread_independent():
    a = phase_scan(K3, K4, 8, [0, "1/2", 1], trials=6, seed=9, threads=1)
    b = phase_scan(K3, K4, 8, [0, "1/2", 1], trials=6, seed=9, threads=3)
    assert scan_csv(a) == scan_csv(b)


def test_phase_scan_rejects_bad_input():
    with pytest.raises(PreconditionError):
        phase_scan(K3, K4, 6, [-1], trials=1, seed=0)
    with pytest.raises(PreconditionError):
        phase_scan(K3, K4, 6, [0], trials=0, seed=0)


def test_concentration_mean_tracks_expectation():
    stats = concentration_check(K3, 30, 0.3, 60, 11)
    assert abs(stats.mean - stats.expectation) <= 4 * stats.std / np.sqrt(60)
