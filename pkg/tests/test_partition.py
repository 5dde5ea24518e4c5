import itertools

import pytest
from hypothesis import assume, given, settings

from abcomm.errors import (
    InfeasibleBalance,
    InvalidParams,
    NotAVertexCut,
    NoVertexCut,
    TooLarge,
)
from abcomm.graph import Graph, components_excluding, gen_er_connected, gen_family, is_connected
from abcomm.partition import (
    Partition,
    boundary_set,
    boundary_sets_by_edges,
    brute_force_edge_cut,
    brute_force_vertex_cut,
    cross_edge_count,
    flow_vertex_connectivity,
    greedy_edge_cut,
    neighbor_split,
    total_cross_edges,
    vertex_cut_partition,
)

from .strategies import graph_partitions, graphs


def test_neighbor_split_path(path3, path3_split):
    local, cross = neighbor_split(path3, path3_split, 1)
    assert local == {0}
    assert cross == {1: {2}}
    local, cross = neighbor_split(path3, path3_split, 0)
    assert local == {1} and cross == {}


def test_neighbor_split_single_worker(path3):
    p = Partition(m=1, assignment=(0, 0, 0))
    for v in range(3):
        _local, cross = neighbor_split(path3, p, v)
        assert cross == {}


@settings(max_examples=60, deadline=None)
@given(graph_partitions())
def test_neighbor_split_partitions_neighborhood(gp):
    g, p = gp
    for v in range(g.n):
        local, cross = neighbor_split(g, p, v)
        pieces = [local] + list(cross.values())
        assert sum(len(s) for s in pieces) == g.degree(v)
        union = set().union(*pieces) if pieces else set()
        assert union == set(int(u) for u in g.neighbors(v))
        assert p.worker_of(v) not in cross


def test_boundary_path(path3, path3_split):
    assert boundary_set(path3, path3_split, 0) == {1}
    assert boundary_set(path3, path3_split, 1) == {2}


def test_boundary_single_worker(path3):
    assert boundary_set(path3, Partition(m=1, assignment=(0, 0, 0)), 0) == set()


def test_boundary_star(star5, star5_split):
    # frozen from enumerating cross edges: 0-2, 0-3, 0-4
    assert boundary_set(star5, star5_split, 0) == {0}
    assert boundary_set(star5, star5_split, 1) == {2, 3, 4}


@settings(max_examples=60, deadline=None)
@given(graph_partitions())
def test_boundary_two_routes_agree(gp):
    g, p = gp
    by_edge = boundary_sets_by_edges(g, p)
    for i in range(p.m):
        assert boundary_set(g, p, i) == by_edge[i]


def test_cross_edges(path3, path3_split, star5, star5_split):
    assert cross_edge_count(path3, path3_split, 0, 1) == 1
    assert cross_edge_count(star5, star5_split, 0, 1) == 3
    one_worker = Partition(m=2, assignment=(0, 0, 0))
    assert cross_edge_count(path3, one_worker, 0, 1) == 0
    with pytest.raises(InvalidParams):
        cross_edge_count(path3, path3_split, 1, 1)


@settings(max_examples=50, deadline=None)
@given(graph_partitions())
def test_cross_edge_counts_sum(gp):
    g, p = gp
    pair_sum = sum(
        cross_edge_count(g, p, i, j) for i, j in itertools.combinations(range(p.m), 2)
    )
    assert pair_sum == total_cross_edges(g, p)


# ---------------------------------------------------------------------------
# greedy edge cut


def test_greedy_balances_path4():
    g = gen_family("grid", rows=1, cols=4)
    p = greedy_edge_cut(g, 2, 0, seed=0)
    assert sorted(p.sizes()) == [2, 2]


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=14))
def test_greedy_size_bounds(g):
    for m in (2, 3):
        assume(m <= g.n)
        p = greedy_edge_cut(g, m, 0, seed=5)
        lo, hi = g.n // m, -(-g.n // m)
        assert all(lo <= s <= hi for s in p.sizes())
        assert len(p.assignment) == g.n


def test_greedy_matches_oracle_on_barbell():
    g = gen_family("barbell", k=3)
    _, cert = brute_force_edge_cut(g, slack=0)
    assert cert.size == 1
    # seed frozen to one whose BFS growth isolates one clique
    p = greedy_edge_cut(g, 2, 0, seed=1)
    assert total_cross_edges(g, p) == cert.size


def test_greedy_infeasible():
    with pytest.raises(InfeasibleBalance):
        greedy_edge_cut(Graph.from_edges(2, [(0, 1)]), 3, 0, seed=0)


# ---------------------------------------------------------------------------
# brute-force oracles


def test_brute_edge_cut_path(path3):
    p, cert = brute_force_edge_cut(path3, slack=0)
    assert cert.size == 1
    # lexicographically smallest of the two min-cut balanced assignments
    assert p.assignment == (0, 0, 1)


def test_brute_edge_cut_k4():
    k4 = gen_er_connected(4, 1.0, 1)
    _, cert = brute_force_edge_cut(k4, slack=0)
    assert cert.size == 4


def test_brute_edge_cut_barbell():
    g = gen_family("barbell", k=3)
    p, cert = brute_force_edge_cut(g, slack=0)
    assert cert.size == 1
    assert cert.members == ((2, 3),)
    assert abs(p.sizes()[0] - p.sizes()[1]) <= 1


def test_brute_edge_cut_unconstrained_not_larger():
    g = gen_family("star", n=6)
    _, balanced = brute_force_edge_cut(g, slack=1)
    _, free = brute_force_edge_cut(g, slack=None)
    assert free.size <= balanced.size
    assert free.size == 1  # lop off one leaf


def test_brute_edge_cut_too_large():
    with pytest.raises(TooLarge):
        brute_force_edge_cut(gen_family("ring", n=17))


def test_brute_vertex_cut_examples(path3):
    assert brute_force_vertex_cut(path3).members == (1,)
    assert brute_force_vertex_cut(gen_family("barbell", k=3)).members == (2,)
    assert brute_force_vertex_cut(gen_family("ring", n=5)).size == 2
    with pytest.raises(NoVertexCut):
        brute_force_vertex_cut(gen_er_connected(4, 1.0, 1))
    with pytest.raises(TooLarge):
        brute_force_vertex_cut(gen_family("ring", n=17))


def test_brute_vertex_cut_is_a_cut():
    g = gen_er_connected(9, 0.35, 4)
    cert = brute_force_vertex_cut(g)
    count, _ = components_excluding(g, cert.members)
    assert count >= 2
    # minimality: no smaller subset disconnects
    for size in range(1, cert.size):
        for subset in itertools.combinations(range(g.n), size):
            assert components_excluding(g, subset)[0] < 2


# ---------------------------------------------------------------------------
# flow connectivity


def test_flow_path(path3):
    kappa, cut = flow_vertex_connectivity(path3)
    assert kappa == 1 and cut == {1}


def test_flow_ring5_matches_oracle():
    g = gen_family("ring", n=5)
    kappa, cut = flow_vertex_connectivity(g)
    assert kappa == brute_force_vertex_cut(g).size == 2
    assert components_excluding(g, cut)[0] >= 2


def test_flow_complete():
    kappa, cut = flow_vertex_connectivity(gen_er_connected(4, 1.0, 1))
    assert kappa == 3 and cut is None


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=2, max_n=9))
def test_flow_agrees_with_brute_force(g):
    assume(is_connected(g))
    kappa, cut = flow_vertex_connectivity(g)
    try:
        cert = brute_force_vertex_cut(g)
    except NoVertexCut:
        assert kappa == g.n - 1 and cut is None
        return
    assert kappa == cert.size
    assert len(cut) == kappa
    assert components_excluding(g, cut)[0] >= 2


# ---------------------------------------------------------------------------
# cut-set partitioner


def test_vertex_cut_partition_path(path3):
    p = vertex_cut_partition(path3, {1})
    # cut vertex 1 -> worker 0; component {0} -> worker 1; component {2} -> worker 0
    assert p.assignment == (1, 0, 0)
    assert sorted(p.sizes()) == [1, 2]


def test_vertex_cut_partition_barbell():
    g = gen_family("barbell", k=3)
    p = vertex_cut_partition(g, {2})
    assert p.assignment == (0, 0, 0, 1, 1, 1)
    assert p.worker_of(2) == 0
    assert p.sizes() == [3, 3]


def test_vertex_cut_partition_rejects_non_cut():
    with pytest.raises(NotAVertexCut):
        vertex_cut_partition(gen_family("ring", n=4), {0})


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=3, max_n=10))
def test_vertex_cut_partition_cross_edges_touch_cut(g):
    assume(is_connected(g))
    try:
        cert = brute_force_vertex_cut(g)
    except NoVertexCut:
        assume(False)
    p = vertex_cut_partition(g, cert.members)
    vc = set(cert.members)
    for u, v in g.edges():
        if p.worker_of(u) != p.worker_of(v):
            assert u in vc or v in vc
