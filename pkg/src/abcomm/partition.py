"""Worker assignments, boundary structure, and cut-based partitioners.

A Partition maps every vertex to one of m workers (no replication). From it we
derive each vertex's local/cross neighbor split, per-worker boundary sets
(vertices with at least one neighbor on another worker), and cross-edge
counts. Partitioners: a BFS region-growing edge-cut heuristic, exhaustive
two-worker edge-cut and vertex-cut oracles for small graphs, a max-flow
vertex-connectivity finder, and the deterministic cut-set partitioner that
turns a vertex cut into a two-worker assignment.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    InfeasibleBalance,
    InvalidParams,
    NotAVertexCut,
    NoVertexCut,
    TooLarge,
    VertexOutOfRange,
)
from .graph import Graph, components_excluding, is_connected

BRUTE_FORCE_CAP = 16


@dataclass(frozen=True)
class Partition:
    """Total assignment of vertices to workers 0..m-1."""

    m: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParams(f"worker count must be >= 1, got {self.m}")
        for v, w in enumerate(self.assignment):
            if not (0 <= w < self.m):
                raise InvalidParams(f"vertex {v} assigned to worker {w}, m={self.m}")

    @property
    def n(self) -> int:
        return len(self.assignment)

    def worker_of(self, v: int) -> int:
        return self.assignment[v]

    def members(self, w: int) -> list[int]:
        return [v for v, wv in enumerate(self.assignment) if wv == w]

    def sizes(self) -> list[int]:
        out = [0] * self.m
        for w in self.assignment:
            out[w] += 1
        return out

    def to_doc(self) -> dict:
        return {"m": self.m, "assignment": list(self.assignment)}

    @classmethod
    def from_doc(cls, doc: dict) -> "Partition":
        if set(doc) != {"m", "assignment"}:
            raise InvalidParams("partition document must carry exactly {m, assignment}")
        return cls(m=int(doc["m"]), assignment=tuple(int(w) for w in doc["assignment"]))


@dataclass(frozen=True)
class CutCertificate:
    """Witness for a cut: either an edge list or a vertex set, plus its size."""

    kind: str  # "edge" or "vertex"
    members: tuple
    size: int


def _check_vertex(g: Graph, v: int) -> None:
    if not (0 <= v < g.n):
        raise VertexOutOfRange(f"vertex {v} outside 0..{g.n - 1}")


def neighbor_split(g: Graph, p: Partition, v: int):
    """Split N(v) into same-worker neighbors and a per-worker map of the rest."""
    _check_vertex(g, v)
    home = p.worker_of(v)
    local: set[int] = set()
    cross: dict[int, set[int]] = {}
    for u in g.neighbors(v):
        u = int(u)
        w = p.worker_of(u)
        if w == home:
            local.add(u)
        else:
            cross.setdefault(w, set()).add(u)
    return local, cross


def boundary_set(g: Graph, p: Partition, i: int) -> set[int]:
    """Vertices on worker i having at least one neighbor on another worker."""
    if not (0 <= i < p.m):
        raise InvalidParams(f"worker {i} outside 0..{p.m - 1}")
    out = set()
    for v in range(g.n):
        if p.worker_of(v) != i:
            continue
        if any(p.worker_of(int(u)) != i for u in g.neighbors(v)):
            out.add(v)
    return out


def boundary_sets_by_edges(g: Graph, p: Partition) -> list[set[int]]:
    """All boundary sets at once via a single edge scan (independent route)."""
    out: list[set[int]] = [set() for _ in range(p.m)]
    for u, v in g.edges():
        wu, wv = p.worker_of(u), p.worker_of(v)
        if wu != wv:
            out[wu].add(u)
            out[wv].add(v)
    return out


def cross_edge_count(g: Graph, p: Partition, i: int, j: int) -> int:
    """Number of edges with one endpoint on worker i and the other on j."""
    if i == j:
        raise InvalidParams("cross_edge_count needs two distinct workers")
    count = 0
    for u, v in g.edges():
        if {p.worker_of(u), p.worker_of(v)} == {i, j}:
            count += 1
    return count


def total_cross_edges(g: Graph, p: Partition) -> int:
    return sum(1 for u, v in g.edges() if p.worker_of(u) != p.worker_of(v))


# ---------------------------------------------------------------------------
# heuristic edge-cut partitioner


def greedy_edge_cut(g: Graph, m: int, slack: int, seed: int) -> Partition:
    """BFS region-growing partition into m parts.

    Part sizes land in [floor(n/m) - slack, ceil(n/m) + slack]; the quotas
    used are the exact floor/ceil split, so any slack >= 0 is honoured.
    Deterministic for a fixed seed (seed picks region start vertices).
    """
    if m < 1:
        raise InvalidParams(f"worker count must be >= 1, got {m}")
    if slack < 0:
        raise InvalidParams(f"slack must be >= 0, got {slack}")
    if m > g.n:
        raise InfeasibleBalance(f"cannot balance {g.n} vertices over {m} workers")
    rng = np.random.default_rng(seed)
    base, extra = divmod(g.n, m)
    quotas = [base + 1 if w < extra else base for w in range(m)]
    assignment = [-1] * g.n
    unassigned = set(range(g.n))
    for w in range(m):
        taken = 0
        queue: deque[int] = deque()
        while taken < quotas[w]:
            if not queue:
                pool = sorted(unassigned)
                start = int(pool[rng.integers(len(pool))])
                unassigned.discard(start)
                queue.append(start)
            v = queue.popleft()
            assignment[v] = w
            taken += 1
            for u in g.neighbors(v):
                u = int(u)
                if u in unassigned:
                    unassigned.discard(u)
                    queue.append(u)
        # vertices pulled into the queue but over quota go back to the pool
        unassigned.update(queue)
        queue.clear()
    return Partition(m=m, assignment=tuple(assignment))


# ---------------------------------------------------------------------------
# exhaustive oracles (two workers, small n)


def brute_force_edge_cut(g: Graph, slack: int | None = 1):
    """Exhaustive two-worker minimum-cross-edge bipartition.

    slack bounds the part-size difference by max(1, slack); pass None for the
    unconstrained mode (any split with both sides non-empty). Ties break on
    the lexicographically smallest assignment vector. Returns
    (Partition, CutCertificate).
    """
    if g.n > BRUTE_FORCE_CAP:
        raise TooLarge(f"edge-cut oracle capped at n={BRUTE_FORCE_CAP}, got {g.n}")
    if g.n < 1:
        raise InvalidParams("need at least one vertex")
    if g.n == 1:
        if slack is None:
            raise InvalidParams("unconstrained bipartition needs n >= 2")
        part = Partition(m=2, assignment=(0,))
        return part, CutCertificate(kind="edge", members=(), size=0)
    edge_list = list(g.edges())
    allowed_diff = None if slack is None else max(1, slack)
    best: tuple[int, tuple[int, ...]] | None = None
    # vertex 0 pinned to worker 0: of the two label-swapped forms of any
    # bipartition this is the lexicographically smaller one
    for bits in range(2 ** (g.n - 1)):
        assignment = (0,) + tuple((bits >> k) & 1 for k in range(g.n - 1))
        size1 = sum(assignment)
        size0 = g.n - size1
        if slack is None:
            if size1 == 0:
                continue
        elif abs(size0 - size1) > allowed_diff:
            continue
        cut = sum(1 for u, v in edge_list if assignment[u] != assignment[v])
        cand = (cut, assignment)
        if best is None or cand < best:
            best = cand
    if best is None:
        raise InvalidParams("no feasible bipartition under the given slack")
    cut, assignment = best
    part = Partition(m=2, assignment=assignment)
    members = tuple(
        (u, v) for u, v in edge_list if assignment[u] != assignment[v]
    )
    return part, CutCertificate(kind="edge", members=members, size=cut)


def brute_force_vertex_cut(g: Graph) -> CutCertificate:
    """Smallest vertex set whose removal disconnects the graph.

    Enumerates subsets by increasing size, lexicographic within a size, so
    the returned set is the canonical minimum. Complete graphs have no such
    set and raise NoVertexCut.
    """
    if g.n > BRUTE_FORCE_CAP:
        raise TooLarge(f"vertex-cut oracle capped at n={BRUTE_FORCE_CAP}, got {g.n}")
    if not is_connected(g):
        raise InvalidParams("vertex-cut oracle expects a connected graph")
    for size in range(1, max(g.n - 1, 1)):
        for subset in itertools.combinations(range(g.n), size):
            count, _ = components_excluding(g, subset)
            if count >= 2:
                return CutCertificate(kind="vertex", members=subset, size=size)
    raise NoVertexCut(f"no vertex cut exists (complete graph on {g.n} vertices)")


# ---------------------------------------------------------------------------
# max-flow vertex connectivity


class _Dinic:
    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _bfs_levels(self, s: int, t: int):
        level = [-1] * len(self.adj)
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _dfs(self, u: int, t: int, f: int, level, it) -> int:
        if u == t:
            return f
        while it[u] < len(self.adj[u]):
            e = self.adj[u][it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                pushed = self._dfs(v, t, min(f, self.cap[e]), level, it)
                if pushed:
                    self.cap[e] -= pushed
                    self.cap[e ^ 1] += pushed
                    return pushed
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._bfs_levels(s, t)
            if level is None:
                return flow
            it = [0] * len(self.adj)
            while True:
                pushed = self._dfs(s, t, 1 << 30, level, it)
                if not pushed:
                    break
                flow += pushed

    def residual_reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


def _split_network(g: Graph, s: int, t: int) -> _Dinic:
    # vertex v splits into in-node 2v and out-node 2v+1; interior capacity 1
    # except at the terminals, edges get effectively infinite capacity
    big = g.n + 1
    net = _Dinic(2 * g.n)
    for v in range(g.n):
        net.add_edge(2 * v, 2 * v + 1, big if v in (s, t) else 1)
    for u, v in g.edges():
        net.add_edge(2 * u + 1, 2 * v, big)
        net.add_edge(2 * v + 1, 2 * u, big)
    return net


def flow_vertex_connectivity(g: Graph):
    """Vertex connectivity via vertex-splitting max-flow.

    Runs one flow per non-adjacent vertex pair (sized for desk-scale graphs)
    and returns (kappa, witness cut) with the witness None exactly when the
    graph is complete (kappa = n - 1).
    """
    if not is_connected(g):
        raise InvalidParams("vertex connectivity expects a connected graph")
    if g.is_complete():
        return g.n - 1, None
    best = None
    best_pair = None
    for s in range(g.n):
        for t in range(s + 1, g.n):
            if g.has_edge(s, t):
                continue
            flow = _split_network(g, s, t).max_flow(2 * s + 1, 2 * t)
            if best is None or flow < best:
                best, best_pair = flow, (s, t)
    s, t = best_pair
    net = _split_network(g, s, t)
    net.max_flow(2 * s + 1, 2 * t)
    reach = net.residual_reachable(2 * s + 1)
    cut = frozenset(v for v in range(g.n) if 2 * v in reach and 2 * v + 1 not in reach)
    return best, cut


# ---------------------------------------------------------------------------
# cut-set partitioner


def vertex_cut_partition(g: Graph, vc, seed: int = 0) -> Partition:
    """Two-worker partition grown from a vertex cut.

    Completion rule (fully deterministic; the seed argument is accepted for
    API symmetry but unused):
      (a) order cut vertices by descending degree then ascending id and
          alternate them between worker 0 and worker 1;
      (b) take the components of the graph minus the cut in descending size
          (ties: smallest member id first) and hand each one whole to the
          worker currently holding fewer vertices, ties to worker 0.
    """
    del seed
    vc = sorted(set(int(v) for v in vc))
    for v in vc:
        _check_vertex(g, v)
    count, labels = components_excluding(g, vc)
    if count < 2:
        raise NotAVertexCut(
            f"removing {vc} leaves {count} component(s); need at least 2"
        )
    assignment = [-1] * g.n
    ordered_cut = sorted(vc, key=lambda v: (-g.degree(v), v))
    for k, v in enumerate(ordered_cut):
        assignment[v] = k % 2
    sizes = [sum(1 for a in assignment if a == w) for w in (0, 1)]
    groups: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        if lab >= 0:
            groups.setdefault(lab, []).append(v)
    for comp in sorted(groups.values(), key=lambda c: (-len(c), min(c))):
        w = 0 if sizes[0] <= sizes[1] else 1
        for v in comp:
            assignment[v] = w
        sizes[w] += len(comp)
    return Partition(m=2, assignment=tuple(assignment))
