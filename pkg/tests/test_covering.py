from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    coverings_isomorphic,
    covering_types_by_gluing,
    small_graphs,
    steiner_triple_systems,
    t_density_by_subcollections,
)
from turanlab.covering import (
    Covering,
    build_special_covering,
    count_covering_instances,
    covering_canonical_form,
    covering_type,
    enumerate_covering_types,
    fano_covering,
    t_density,
    t_resolution,
    underlying_graph,
)
from turanlab.density import exponent_of, fe_density_closed_form, is_two_balanced, two_density
from turanlab.errors import PreconditionError
from turanlab.graphs import Copy, Graph, complete, contains_subgraph, cycle, enumerate_copies, path

K3, K4, P3 = complete(3), complete(4), path(3)
DIAMOND = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)])

GLUING_PAIRS = [(K3, P3), (K3, K3), (K3, K4), (P3, K3), (P3, cycle(4)), (K3, DIAMOND)]


def relabel_copy(c: Copy, perm) -> Copy:
    return Copy.from_embedding(c.pattern, [perm[v] for v in c.labels])


# -- the special covering ---------------------------------------------------------

@pytest.mark.parametrize("t,h,copies,verts,edges", [(K3, K3, 3, 6, 9), (K3, P3, 2, 5, 6), (K4, K3, 3, 9, 18)])
def test_special_covering_sizes(t, h, copies, verts, edges):
    f = build_special_covering(t, h)
    assert len(f.copies) == copies
    u = underlying_graph(f)
    assert (u.n, u.edge_count) == (verts, edges)
    assert (u.n, u.edge_count) == (h.n + h.edge_count * (t.n - 2), h.edge_count * t.edge_count)


def test_special_covering_meets_target_in_one_edge_each():
    t, h = cycle(5), K4
    f = build_special_covering(t, h)
    for c in f.copies:
        assert len(c.edges & h.edges) == 1
        assert len(c.vertices & set(range(h.n))) == 2


def test_underlying_graph_of_sub_collections():
    f = build_special_covering(K3, K3)
    two = underlying_graph(f.copies[:2])
    assert (two.n, two.edge_count) == (5, 6)
    one = underlying_graph(f.copies[:1])
    assert (one.n, one.edge_count) == (3, 3)


# -- T-density ------------------------------------------------------------------

def test_t_density_of_special_triangle_covering():
    f = build_special_covering(K3, K3)
    rep = t_density(f)
    assert rep.value == 2
    assert len(rep.support) == 3
    assert t_density(f.copies[:2]).value == Fraction(3, 2)


def test_t_density_triangle_cover_of_path():
    assert t_density(build_special_covering(K3, P3)).value == Fraction(3, 2) == fe_density_closed_form(K3, P3)


def test_t_density_fano():
    f = fano_covering()
    assert len(f.copies) == 7 and underlying_graph(f) == complete(7)
    rep = t_density(f)
    assert rep.value == Fraction(9, 2) == t_density_by_subcollections(list(f.copies))
    assert len(rep.support) == 7


def test_t_density_needs_two_copies():
    with pytest.raises(PreconditionError):
        t_density(build_special_covering(K3, complete(2)))


def test_degenerate_sub_collection_has_infinite_density():
    p4 = path(4)
    a = Copy.from_embedding(p4, (0, 1, 2, 3))
    b = Copy.from_embedding(p4, (1, 3, 0, 2))
    assert not (a.edges & b.edges)
    assert t_density([a, b]).value == float("inf")


def test_t_density_matches_sub_collection_oracle():
    for t, h in GLUING_PAIRS[:4]:
        for ty in enumerate_covering_types(t, h):
            if not ty.is_singleton:
                assert ty.density == t_density_by_subcollections(list(ty.representative.copies))


def test_fe_density_closed_form_equals_direct_evaluation():
    gs = small_graphs(5, min_edges=2, no_isolated=True)
    for t in gs:
        if t.n < 3 or not is_two_balanced(t):
            continue
        for h in gs:
            assert t_density(build_special_covering(t, h)).value == fe_density_closed_form(t, h), (t, h)


# -- enumeration ------------------------------------------------------------------

@pytest.mark.parametrize("t,h", GLUING_PAIRS)
def test_enumeration_matches_gluing_oracle(t, h):
    got = enumerate_covering_types(t, h)
    want = covering_types_by_gluing(t, h)
    assert len(got) == len(want)
    for w in want:
        assert sum(coverings_isomorphic(w, g.representative) for g in got) == 1


def test_triangle_covers_of_small_targets_are_single_copies():
    # one triangle already holds P3 or K3, so spreading the edges over several copies is never minimal
    for h in (P3, K3):
        types = enumerate_covering_types(K3, h)
        assert [ty.is_singleton for ty in types] == [True]
        assert not build_special_covering(K3, h).is_minimal()


def test_triangle_covers_of_k4():
    types = enumerate_covering_types(K3, K4)
    assert sorted((ty.copy_count, ty.union_vertices, ty.union_edges) for ty in types) == [(4, 7, 12), (6, 10, 18)]
    fe = covering_type(build_special_covering(K3, K4))
    assert fe.canonical in {ty.canonical for ty in types}


@pytest.mark.parametrize("t,h", [(K3, K4), (cycle(4), cycle(5)), (P3, cycle(4))])
def test_enumerated_coverings_are_valid(t, h):
    for ty in enumerate_covering_types(t, h):
        cov = ty.representative
        used = 0
        for c in cov.copies:
            assert c.edge_mask & used == 0
            used |= c.edge_mask
            assert len(c.vertices) == t.n
        assert contains_subgraph(h, cov.union)
        assert cov.is_minimal()


@pytest.mark.parametrize("t,h", [(K3, K4), (cycle(4), cycle(5)), (P3, cycle(4))])
def test_enumerated_types_are_distinct(t, h):
    types = enumerate_covering_types(t, h)
    assert len({ty.canonical for ty in types}) == len(types)
    for a, b in combinations(types[:12], 2):
        assert not coverings_isomorphic(a.representative, b.representative)


def test_cycle_covers_of_five_cycle_count():
    assert len(enumerate_covering_types(cycle(4), cycle(5))) == 17


@given(st.permutations(range(5)))
@settings(max_examples=8)
def test_enumeration_relabeling_invariant(perm):
    h = cycle(5)
    h2 = Graph(5, [(perm[u], perm[v]) for u, v in h.edges])
    t2 = Graph(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    base = [ty.canonical for ty in enumerate_covering_types(cycle(4), h)]
    assert [ty.canonical for ty in enumerate_covering_types(t2, h2)] == base


@given(st.data())
@settings(max_examples=10)
def test_covering_canonical_form_relabeling_invariant(data):
    t, h = data.draw(st.sampled_from([(K3, K4), (cycle(4), cycle(5))]))
    types = enumerate_covering_types(t, h)
    cov = data.draw(st.sampled_from(types)).representative
    perm = data.draw(st.permutations(range(cov.universe_size)))
    copies = [relabel_copy(c, perm) for c in cov.copies]
    copies = data.draw(st.permutations(copies))
    assert covering_canonical_form(cov.universe_size, copies) == cov.canonical


@pytest.mark.parametrize("t,h", [(K3, K4), (cycle(4), cycle(5)), (P3, cycle(4)), (K3, DIAMOND)])
def test_density_cap_equals_filtering(t, h):
    full = enumerate_covering_types(t, h)
    dens = sorted({ty.density for ty in full if not ty.is_singleton})
    for cap in dens + [Fraction(1), two_density(t).value if t.edge_count > 1 else 1]:
        want = sorted(ty.canonical for ty in full if not ty.is_singleton and ty.density <= cap)
        got = sorted(ty.canonical for ty in enumerate_covering_types(t, h, max_density=cap))
        assert got == want, cap


def test_enumeration_rejects_target_with_isolated_vertices():
    with pytest.raises(PreconditionError):
        enumerate_covering_types(K3, Graph(4, [(0, 1), (1, 2)]))


# -- resolution --------------------------------------------------------------------

def test_resolution_of_k4_by_triangles():
    res = t_resolution(K3, K4)
    # the 4-triangle type has density 9/4, above the special covering's 15/7
    assert res.densities == (Fraction(15, 7),)
    assert res.threshold_exponents == (Fraction(7, 15),)
    assert res.base_exponent == 1
    assert res.fe_density == Fraction(15, 7)
    assert res.types[-1].canonical == res.fe_type.canonical
    assert all(d > two_density(K3).value for d in res.densities)


def test_resolution_of_five_cycle_by_four_cycles():
    res = t_resolution(cycle(4), cycle(5), relax=True)
    assert list(res.densities) == sorted(res.densities)
    assert all(d <= res.fe_density for d in res.densities)
    assert res.fe_density == fe_density_closed_form(cycle(4), cycle(5))
    assert res.fe_type.canonical in {ty.canonical for ty in res.types}


def test_resolution_threshold_of_special_path_cover():
    res = t_resolution(K3, P3, relax=True)
    assert exponent_of(res.fe_density) == Fraction(2, 3)


def test_resolution_preconditions():
    with pytest.raises(PreconditionError, match="2-balanced"):
        t_resolution(Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)]), K4)
    with pytest.raises(PreconditionError, match="blow-up"):
        t_resolution(K3, cycle(5))


def test_resolution_json_shape():
    out = t_resolution(K3, K4).to_json()
    assert out["fe_density"] == "15/7"
    assert [x["threshold_exponent"] for x in out["types"]] == ["7/15"]
    assert out["types"][-1]["is_fe"] is True


# -- instances in a pool -----------------------------------------------------------

def test_fano_instances_in_k7():
    pool = enumerate_copies(K3, complete(7))
    assert len(pool) == 35
    assert count_covering_instances(covering_type(fano_covering()), pool) == steiner_triple_systems(7) == 30


def test_special_covering_has_no_instances_in_k5():
    pool = enumerate_copies(K3, complete(5))
    assert count_covering_instances(build_special_covering(K3, K3), pool) == 0


def test_no_instances_in_empty_pool():
    assert count_covering_instances(fano_covering(), []) == 0


def test_instances_of_k4_cover_in_k7():
    # the 4-triangle type: one triangle per K4 face, apexes fresh except one shared hub (7 vertices)
    first = min(enumerate_covering_types(K3, K4), key=lambda ty: ty.copy_count)
    pool = enumerate_copies(K3, complete(7))
    n_inst = count_covering_instances(first, pool)
    assert n_inst > 0
    # every instance is a set of edge-disjoint triangles whose union contains K4
    from turanlab.covering import covering_instances

    for inst in covering_instances(first, pool)[:50]:
        cs = [pool[i] for i in inst]
        assert len(cs) == first.copy_count
        assert contains_subgraph(K4, Graph(7, [e for c in cs for e in c.edges]))


def test_covering_rejects_overlapping_copies():
    a = Copy.from_embedding(K3, (0, 1, 2))
    with pytest.raises(PreconditionError):
        Covering(3, (a, a), K3, K3)
