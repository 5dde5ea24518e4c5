import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcomm.errors import (
    DuplicateEdge,
    GenerationFailed,
    InvalidParams,
    MalformedHeader,
    SelfLoop,
    VertexOutOfRange,
    ZeroDim,
)
from abcomm.graph import (
    Graph,
    attach_random_features,
    components_excluding,
    gen_er_connected,
    gen_family,
    graph_from_doc,
    graph_to_doc,
    is_connected,
    parse_edge_list,
    serialize_edge_list,
)

from .strategies import graphs


def test_parse_path():
    g, feats = parse_edge_list("3 2 0\n0 1\n1 2")
    assert g.n == 3 and g.m_edges == 2
    assert list(g.neighbors(1)) == [0, 2]
    assert feats is None


def test_parse_isolated_vertex():
    g, feats = parse_edge_list("1 0 0")
    assert g.n == 1 and g.m_edges == 0 and feats is None


def test_parse_vertex_out_of_range():
    with pytest.raises(VertexOutOfRange):
        parse_edge_list("2 1 0\n0 2")


def test_parse_rejects_self_loop_and_duplicate():
    with pytest.raises(SelfLoop):
        parse_edge_list("2 1 0\n1 1")
    with pytest.raises(DuplicateEdge):
        parse_edge_list("2 2 0\n0 1\n1 0")


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n0 1\n1 2", "a b c", "3 2 0\n0 1", "2 1 0\n0 1\nextra", "2 0 2\n1.0"],
)
def test_parse_malformed(text):
    with pytest.raises(MalformedHeader):
        parse_edge_list(text)


def test_parse_with_features():
    g, feats = parse_edge_list("2 1 2\n0 1\n0.5 -1.0\n0.25 0.125")
    assert feats.shape == (2, 2)
    assert feats.dtype == np.float32
    assert feats[0, 0] == np.float32(0.5)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10), st.integers(0, 2**32 - 1))
def test_text_round_trip_with_features(g, seed):
    feats = attach_random_features(g, 3, seed) if g.n else None
    text = serialize_edge_list(g, feats)
    g2, feats2 = parse_edge_list(text)
    assert g2 == g
    if feats is None:
        assert feats2 is None
    else:
        assert feats2.tobytes() == feats.tobytes()


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=10))
def test_doc_round_trip(g):
    feats = attach_random_features(g, 2, 9) if g.n else None
    g2, feats2 = graph_from_doc(graph_to_doc(g, feats))
    assert g2 == g
    if feats is not None:
        assert feats2.tobytes() == feats.tobytes()


def test_doc_rejects_unknown_keys():
    doc = graph_to_doc(Graph.from_edges(1, []))
    doc["extra"] = 1
    with pytest.raises(MalformedHeader):
        graph_from_doc(doc)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_adjacency_symmetric_and_sorted(g):
    for v in range(g.n):
        row = g.neighbors(v)
        assert list(row) == sorted(set(int(u) for u in row))
        for u in row:
            assert v in g.neighbors(int(u))
        assert v not in row


def test_er_single_vertex_and_complete():
    assert gen_er_connected(1, 0.5, 3).n == 1
    k4 = gen_er_connected(4, 1.0, 11)
    assert k4.m_edges == 6


def test_er_deterministic():
    a = gen_er_connected(8, 0.5, 7)
    b = gen_er_connected(8, 0.5, 7)
    assert a == b
    assert is_connected(a)


def test_er_generation_failed():
    with pytest.raises(GenerationFailed):
        gen_er_connected(12, 1e-9, 0)
    with pytest.raises(InvalidParams):
        gen_er_connected(4, 0.0, 0)


def test_ring_degrees():
    g = gen_family("ring", n=4)
    assert g.m_edges == 4
    assert [g.degree(v) for v in range(4)] == [2, 2, 2, 2]


def test_star_degrees():
    g = gen_family("star", n=5)
    assert g.degree(0) == 4
    assert all(g.degree(v) == 1 for v in range(1, 5))


def test_barbell_edges():
    g = gen_family("barbell", k=3)
    assert g.m_edges == 7
    assert g.has_edge(2, 3)


def test_grid_shape():
    g = gen_family("grid", rows=2, cols=3)
    assert g.n == 6 and g.m_edges == 7


def test_bridge_cliques():
    g = gen_family("bridge_cliques", a=3, b=4)
    assert g.n == 7 and g.m_edges == 3 + 6 + 1


@pytest.mark.parametrize(
    "kind,params",
    [
        ("ring", {"n": 2}),
        ("star", {"n": 1}),
        ("barbell", {"k": 1}),
        ("grid", {"rows": 0, "cols": 2}),
        ("nonsense", {"n": 3}),
        ("ring", {"n": 4, "extra": 1}),
    ],
)
def test_family_invalid_params(kind, params):
    with pytest.raises(InvalidParams):
        gen_family(kind, **params)


def test_components_excluding(path3):
    assert components_excluding(path3, set())[0] == 1
    count, labels = components_excluding(path3, {1})
    assert count == 2
    assert labels == [0, -1, 1]
    k4 = gen_family("barbell", k=2)  # two K2s plus bridge = path of 4
    assert components_excluding(gen_er_connected(4, 1.0, 1), {0})[0] == 1
    assert components_excluding(path3, {0, 1, 2}) == (0, [-1, -1, -1])
    assert k4.n == 4


def test_attach_features_deterministic(star5):
    a = attach_random_features(star5, 4, 1)
    b = attach_random_features(star5, 4, 1)
    assert a.tobytes() == b.tobytes()
    assert a.shape == (5, 4) and a.dtype == np.float32
    assert np.all(np.abs(a) <= 1.0)


def test_attach_features_edge_cases():
    empty = Graph.from_edges(0, [])
    assert attach_random_features(empty, 3, 0).shape == (0, 3)
    with pytest.raises(ZeroDim):
        attach_random_features(empty, 0, 0)
