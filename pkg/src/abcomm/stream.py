"""Online partitioning of a vertex stream.

Vertices arrive one at a time carrying their edges to already-present
vertices and are assigned to a worker irrevocably. Two placement policies:

  boundary - picks the feasible worker minimizing the resulting maximum
             boundary-set size over workers (cross-worker traffic under the
             aggregate-before-send protocol is governed by boundary sets, so
             this is the direct online objective);
  ldg      - the classic streaming edge-cut baseline: maximize
             |neighbors on w| * (1 - size(w) / capacity).

Both respect a hard per-worker capacity of floor(ceil(n/m) * (1 + slack)),
never below ceil(n/m). Replay instruments a whole stream, recomputing the
reported counts from scratch at every step so they are state functions of the
current (graph, partition) rather than accumulated approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParams, NoFeasibleWorker
from .graph import Graph
from .partition import Partition
from .protocol import plan_abc, plan_standard


@dataclass(frozen=True)
class StreamEvent:
    vertex: int
    edges_to_present: tuple[int, ...]


def stream_from_graph(g: Graph, order: str = "natural", seed: int = 0) -> list[StreamEvent]:
    """Turn a static graph into a vertex stream.

    Vertices are relabeled by arrival position, so event k always carries
    vertex id k and back-edges to earlier arrivals; each edge appears exactly
    once, on its later endpoint. order "natural" keeps original ids,
    "random" applies a seed-deterministic arrival permutation.
    """
    if order == "natural":
        arrival = list(range(g.n))
    elif order == "random":
        rng = np.random.default_rng(seed)
        arrival = [int(v) for v in rng.permutation(g.n)]
    else:
        raise InvalidParams(f"order must be 'natural' or 'random', got {order!r}")
    position = {old: k for k, old in enumerate(arrival)}
    events = []
    for k, old in enumerate(arrival):
        back = sorted(position[int(u)] for u in g.neighbors(old) if position[int(u)] < k)
        events.append(StreamEvent(vertex=k, edges_to_present=tuple(back)))
    return events


def capacity_for(n_final: int, m: int, slack: float) -> int:
    if m < 1 or n_final < 0 or slack < 0:
        raise InvalidParams("need m >= 1, n_final >= 0, slack >= 0")
    per = math.ceil(n_final / m) if n_final else 0
    return max(per, int(math.floor(per * (1.0 + slack))))


@dataclass
class StreamState:
    """Growing graph, assignment, and incrementally maintained boundary sets."""

    m: int
    n_final: int
    adjacency: list[list[int]] = field(default_factory=list)
    assignment: list[int] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    boundaries: list[set[int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.sizes:
            self.sizes = [0] * self.m
        if not self.boundaries:
            self.boundaries = [set() for _ in range(self.m)]

    @property
    def arrived(self) -> int:
        return len(self.assignment)

    def check_event(self, event: StreamEvent) -> None:
        if event.vertex != self.arrived:
            raise InvalidParams(
                f"event vertex {event.vertex} arrived out of order (expected {self.arrived})"
            )
        for u in event.edges_to_present:
            if not (0 <= u < self.arrived):
                raise InvalidParams(f"back-edge to vertex {u} that has not arrived")

    def place(self, event: StreamEvent, worker: int) -> None:
        self.check_event(event)
        v = event.vertex
        self.adjacency.append(list(event.edges_to_present))
        self.assignment.append(worker)
        self.sizes[worker] += 1
        crossing = False
        for u in event.edges_to_present:
            self.adjacency[u].append(v)
            wu = self.assignment[u]
            if wu != worker:
                crossing = True
                self.boundaries[wu].add(u)
        if crossing:
            self.boundaries[worker].add(v)

    def boundary_from_scratch(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.m)]
        for v, neigh in enumerate(self.adjacency):
            wv = self.assignment[v]
            for u in neigh:
                if self.assignment[u] != wv:
                    out[wv].add(v)
                    break
        return out

    def max_boundary(self) -> int:
        return max((len(b) for b in self.boundaries), default=0)

    def snapshot(self) -> tuple[Graph, Partition]:
        edges = [(u, v) for v, neigh in enumerate(self.adjacency) for u in neigh if u < v]
        g = Graph.from_edges(self.arrived, edges)
        return g, Partition(m=self.m, assignment=tuple(self.assignment))


def _feasible_workers(state: StreamState, m: int, slack: float) -> list[int]:
    cap = capacity_for(state.n_final, m, slack)
    return [w for w in range(m) if state.sizes[w] < cap]


def assign_boundary_greedy(state: StreamState, event: StreamEvent, m: int, slack: float) -> int:
    """Feasible worker minimizing the post-placement max boundary-set size.

    Ties break to the smaller current size, then the lower worker id.
    Placing v on w can only add boundary members: v itself when any neighbor
    sits elsewhere, and each off-w neighbor not already boundary on its own
    worker; nothing ever leaves a boundary set, so the hypothetical sizes
    are computable without touching state.
    """
    state.check_event(event)
    feasible = _feasible_workers(state, m, slack)
    if not feasible:
        raise NoFeasibleWorker(f"all {m} workers at capacity")
    neighbor_workers = [state.assignment[u] for u in event.edges_to_present]
    best = None
    for w in feasible:
        grown = [len(b) for b in state.boundaries]
        crossing = False
        for u, wu in zip(event.edges_to_present, neighbor_workers):
            if wu != w:
                crossing = True
                if u not in state.boundaries[wu]:
                    grown[wu] += 1
        if crossing:
            grown[w] += 1
        cand = (max(grown), state.sizes[w], w)
        if best is None or cand < best:
            best = cand
    return best[2]


def assign_ldg(state: StreamState, event: StreamEvent, m: int, slack: float) -> int:
    """Linear deterministic greedy baseline scoring neighbor locality against
    load; same tie-breaks as the boundary policy."""
    state.check_event(event)
    feasible = _feasible_workers(state, m, slack)
    if not feasible:
        raise NoFeasibleWorker(f"all {m} workers at capacity")
    cap = capacity_for(state.n_final, m, slack)
    neighbor_workers = [state.assignment[u] for u in event.edges_to_present]
    best = None
    for w in feasible:
        here = sum(1 for wu in neighbor_workers if wu == w)
        score = here * (1.0 - state.sizes[w] / cap)
        cand = (-score, state.sizes[w], w)
        if best is None or cand < best:
            best = cand
    return best[2]


POLICIES = {"boundary": assign_boundary_greedy, "ldg": assign_ldg}


def replay(
    events: list[StreamEvent],
    policy: str,
    m: int,
    slack: float,
    protocol: str,
    selfcheck: bool = True,
) -> list[dict]:
    """Assign a whole stream and report per-step state-function counts.

    Each row carries the step index, max boundary-set size, total cross
    edges, and total payload units under the chosen protocol, all recomputed
    from the frozen current state. With selfcheck the incrementally
    maintained boundary sets are compared against a from-scratch
    recomputation after every event.
    """
    if policy not in POLICIES:
        raise InvalidParams(f"policy must be one of {sorted(POLICIES)}")
    if protocol not in ("standard", "abc"):
        raise InvalidParams(f"protocol must be 'standard' or 'abc', got {protocol!r}")
    assign = POLICIES[policy]
    state = StreamState(m=m, n_final=len(events))
    series = []
    for step, event in enumerate(events):
        worker = assign(state, event, m, slack)
        state.place(event, worker)
        if selfcheck:
            fresh = state.boundary_from_scratch()
            if fresh != state.boundaries:
                raise AssertionError(
                    f"incremental boundary sets diverged at step {step}: "
                    f"{state.boundaries} vs {fresh}"
                )
        g, p = state.snapshot()
        cross = sum(1 for u, v in g.edges() if p.worker_of(u) != p.worker_of(v))
        if protocol == "standard":
            plan = plan_standard(g, p, dedup=False)
        else:
            plan = plan_abc(g, p)
        units = sum(len(v) for v in plan.manifests.values())
        series.append(
            {
                "step": step,
                "policy": policy,
                "protocol": protocol,
                "max_boundary": state.max_boundary(),
                "cross_edges": cross,
                "total_units": units,
            }
        )
    return series


def series_to_csv(series: list[dict]) -> str:
    header = "step,policy,protocol,max_boundary,cross_edges,total_units"
    lines = [header]
    for row in series:
        lines.append(
            f"{row['step']},{row['policy']},{row['protocol']},"
            f"{row['max_boundary']},{row['cross_edges']},{row['total_units']}"
        )
    return "\n".join(lines) + "\n"
