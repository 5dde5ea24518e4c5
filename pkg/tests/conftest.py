import pytest

from abcomm.graph import Graph, gen_family
from abcomm.partition import Partition


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def path3_split() -> Partition:
    # vertices 0,1 on worker 0; vertex 2 on worker 1
    return Partition(m=2, assignment=(0, 0, 1))


@pytest.fixture
def star5() -> Graph:
    return gen_family("star", n=5)


@pytest.fixture
def star5_split() -> Partition:
    return Partition(m=2, assignment=(0, 0, 1, 1, 1))


@pytest.fixture
def shared_neighbor_graph() -> Graph:
    # two boundary vertices (0 and 1) sharing the single cross neighbor 2
    return Graph.from_edges(4, [(0, 2), (1, 2)])


@pytest.fixture
def shared_neighbor_split() -> Partition:
    return Partition(m=2, assignment=(0, 0, 1, 1))
