"""Shared hypothesis strategies for graph-shaped inputs."""

from hypothesis import strategies as st

from abcomm.graph import Graph
from abcomm.partition import Partition


@st.composite
def graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [e for e, keep in zip(pairs, mask) if keep]
    return Graph.from_edges(n, edges)


@st.composite
def graph_partitions(draw, min_n=1, max_n=12, max_m=4):
    g = draw(graphs(min_n=min_n, max_n=max_n))
    m = draw(st.integers(1, max_m))
    assignment = tuple(draw(st.integers(0, m - 1)) for _ in range(g.n))
    return g, Partition(m=m, assignment=assignment)
