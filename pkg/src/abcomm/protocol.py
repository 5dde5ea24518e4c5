"""Exchange plans and message accounting for the two feature protocols.

standard: a worker pulls the raw feature vector of every cross neighbor its
boundary vertices touch. In dedup mode each needed source vertex travels once
per (receiver, sender) pair; in naive mode one unit is counted per
(boundary vertex, cross neighbor) incidence, which is the per-request traffic
a plan-free implementation would ship.

abc: the serving worker folds each requested vertex's neighbors that live on
it into one Partial and ships that, so a (receiver, sender) pair moves exactly
one payload unit per requested boundary vertex.

Payload units count feature vectors or Partials only; request frames are
control traffic and show up in the byte totals but never in unit counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import wire
from .aggregation import Aggregator, local_aggregate
from .errors import InvalidParams, PlanGraphMismatch, ZeroDim
from .graph import Graph, check_features
from .partition import Partition, boundary_set

PROTOCOLS = ("standard", "abc")

Pair = tuple[int, int]  # (receiver, sender)


@dataclass(frozen=True)
class ExchangePlan:
    """Per ordered worker pair: what is asked for and what gets shipped.

    requests[(i, j)] lists the vertex ids worker i asks j for; manifests holds
    what j ships back - source vertex ids under standard (with duplicates in
    naive mode), requested boundary-vertex ids under abc (one Partial each).
    """

    protocol: str
    dedup: bool
    graph: Graph
    partition: Partition
    requests: dict[Pair, tuple[int, ...]]
    manifests: dict[Pair, tuple[int, ...]]

    def pairs(self) -> list[Pair]:
        return sorted(self.requests)

    def units(self, pair: Pair) -> int:
        return len(self.manifests.get(pair, ()))


@dataclass(frozen=True)
class CommReport:
    """Counted traffic for a plan: per-pair payload units and frame bytes."""

    protocol: str
    dedup: bool
    units: dict[Pair, int]
    bytes_by_pair: dict[Pair, int]
    total_units: int
    total_bytes: int
    received_units: dict[int, int]

    def to_doc(self) -> dict:
        return {
            "protocol": self.protocol,
            "dedup": self.dedup,
            "pairs": [
                {
                    "receiver": i,
                    "sender": j,
                    "units": self.units[(i, j)],
                    "bytes": self.bytes_by_pair[(i, j)],
                }
                for (i, j) in sorted(self.units)
            ],
            "total_units": self.total_units,
            "total_bytes": self.total_bytes,
            "received_units": {str(i): u for i, u in sorted(self.received_units.items())},
        }


def _cross_incidences(g: Graph, p: Partition, i: int):
    """Yield (boundary vertex v, serving worker j, cross neighbor u) for worker i,
    ascending by (v, u)."""
    for v in sorted(boundary_set(g, p, i)):
        for u in g.neighbors(v):
            u = int(u)
            j = p.worker_of(u)
            if j != i:
                yield v, j, u


def plan_standard(g: Graph, p: Partition, dedup: bool) -> ExchangePlan:
    """Plan the raw-feature exchange (deduplicated or per-incidence)."""
    by_pair: dict[Pair, list[int]] = {}
    for i in range(p.m):
        for v, j, u in _cross_incidences(g, p, i):
            by_pair.setdefault((i, j), []).append(u)
    requests: dict[Pair, tuple[int, ...]] = {}
    for pair, sources in by_pair.items():
        if dedup:
            requests[pair] = tuple(sorted(set(sources)))
        else:
            requests[pair] = tuple(sources)  # already ascending by (v, u)
    return ExchangePlan(
        protocol="standard",
        dedup=dedup,
        graph=g,
        partition=p,
        requests=requests,
        manifests=dict(requests),
    )


def plan_abc(g: Graph, p: Partition) -> ExchangePlan:
    """Plan the aggregate-before-send exchange: one Partial per requested
    boundary vertex per serving worker."""
    by_pair: dict[Pair, set[int]] = {}
    for i in range(p.m):
        for v, j, _u in _cross_incidences(g, p, i):
            by_pair.setdefault((i, j), set()).add(v)
    requests = {pair: tuple(sorted(vs)) for pair, vs in by_pair.items()}
    return ExchangePlan(
        protocol="abc",
        dedup=False,
        graph=g,
        partition=p,
        requests=requests,
        manifests=dict(requests),
    )


def serving_neighbors(plan: ExchangePlan, vertex: int, sender: int) -> list[int]:
    """Neighbors of ``vertex`` living on ``sender``, ascending."""
    g, p = plan.graph, plan.partition
    return [int(u) for u in g.neighbors(vertex) if p.worker_of(int(u)) == sender]


def execute(plan: ExchangePlan, feats: np.ndarray, a: Aggregator):
    """Run the exchange and return each worker's delivered values.

    standard: delivery[worker][source vertex] = raw float32 feature row.
    abc: delivery[worker][requested vertex] = list of (sender, Partial) in
    ascending sender order, each Partial folded over the requested vertex's
    neighbors on the sender.
    """
    g = plan.graph
    check_features(g, feats)
    if feats.shape[0] != g.n:
        raise PlanGraphMismatch("feature rows do not match the planned graph")
    if plan.protocol == "abc" and feats.shape[1] != a.dim:
        raise PlanGraphMismatch(
            f"aggregator dim {a.dim} does not match feature dim {feats.shape[1]}"
        )
    delivery: dict[int, dict] = {i: {} for i in range(plan.partition.m)}
    if plan.protocol == "standard":
        for (i, j), sources in plan.manifests.items():
            for u in sources:
                delivery[i][u] = feats[u]
        return delivery
    for (i, j) in sorted(plan.manifests):
        for v in plan.manifests[(i, j)]:
            rows = feats[serving_neighbors(plan, v, j)]
            part = local_aggregate(a, rows)
            delivery[i].setdefault(v, []).append((j, part))
    return delivery


def count_report(plan: ExchangePlan, d: int, agg_kind: str = "sum") -> CommReport:
    """Count payload units and closed-form frame bytes for a plan.

    Pairs with no traffic exchange no frames at all. Request frames add bytes
    but no units. ``agg_kind`` only matters for abc byte sizes (mean partials
    carry an extra count field).
    """
    if d < 1:
        raise ZeroDim("feature dimension must be >= 1")
    if plan.protocol not in PROTOCOLS:
        raise InvalidParams(f"unknown protocol {plan.protocol!r}")
    units: dict[Pair, int] = {}
    nbytes: dict[Pair, int] = {}
    for pair in plan.pairs():
        req = plan.requests[pair]
        man = plan.manifests[pair]
        units[pair] = len(man)
        if len(req) == 0 and len(man) == 0:
            nbytes[pair] = 0
            continue
        total = wire.req_frame_bytes(len(req))
        if plan.protocol == "standard":
            total += wire.std_frame_bytes(len(man), d)
        else:
            total += wire.abc_frame_bytes(len(man), d, agg_kind)
        nbytes[pair] = total
    received: dict[int, int] = {i: 0 for i in range(plan.partition.m)}
    for (i, _j), u in units.items():
        received[i] += u
    return CommReport(
        protocol=plan.protocol,
        dedup=plan.dedup,
        units=units,
        bytes_by_pair=nbytes,
        total_units=sum(units.values()),
        total_bytes=sum(nbytes.values()),
        received_units=received,
    )


def frames_for_pair(plan: ExchangePlan, pair: Pair, feats: np.ndarray, a: Aggregator):
    """Materialize the actual wire frames for one ordered pair (for byte
    accounting checks and transport simulation)."""
    i, j = pair
    req = wire.ReqMessage(sender=i, receiver=j, ids=plan.requests[pair])
    if plan.protocol == "standard":
        entries = tuple(
            (u, wire._f32_tuple(feats[u])) for u in plan.manifests[pair]
        )
        resp = wire.StdResponse(sender=j, receiver=i, entries=entries)
    else:
        entries = []
        for v in plan.manifests[pair]:
            part = local_aggregate(a, feats[serving_neighbors(plan, v, j)])
            entries.append(wire.partial_entry(v, part))
        resp = wire.AbcResponse(sender=j, receiver=i, agg_kind=a.kind, entries=tuple(entries))
    return req, resp
