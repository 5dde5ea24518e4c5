"""One-layer GNN forward pass, centrally and under either exchange protocol.

Per vertex v the layer computes

    z_v = reduce over N(v) feature rows (ascending-id fold)
    h_v = act(z_v @ w_neighbor + x_v @ w_self + bias)

The distributed variants give each worker only its own feature rows plus the
values delivered by an exchange plan. Under standard the neighbor values are
bit-identical to the central ones, so the outputs match exactly; under abc
the per-vertex reduce is re-grouped into local-plus-delivered partials, which
moves sum/mean results by float reassociation only and max/min not at all.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aggregation import Aggregator, aggregate_direct, global_aggregate, local_aggregate
from .errors import DimMismatch, InvalidParams
from .graph import Graph, check_features
from .partition import Partition, boundary_set
from .protocol import execute, plan_abc, plan_standard

ACTIVATIONS = ("identity", "relu")


@dataclass(frozen=True)
class GnnLayer:
    """Affine update over the aggregated neighborhood and the self feature."""

    w_neighbor: np.ndarray  # d x d_out
    w_self: np.ndarray      # d x d_out
    bias: np.ndarray        # d_out
    activation: str
    aggregator: Aggregator

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise InvalidParams(f"activation must be one of {ACTIVATIONS}")
        if self.w_neighbor.shape != self.w_self.shape:
            raise DimMismatch("neighbor and self weights must share a shape")
        if self.w_neighbor.ndim != 2 or self.bias.shape != (self.w_neighbor.shape[1],):
            raise DimMismatch("bias length must equal the output dim")
        if self.w_neighbor.shape[0] != self.aggregator.dim:
            raise DimMismatch("weight input dim must equal the aggregator dim")
        for arr in (self.w_neighbor, self.w_self, self.bias):
            if not np.all(np.isfinite(arr)):
                raise InvalidParams("layer weights must be finite")

    @property
    def d_in(self) -> int:
        return int(self.w_neighbor.shape[0])

    @property
    def d_out(self) -> int:
        return int(self.w_neighbor.shape[1])


def make_random_layer(d: int, d_out: int, activation: str, agg_kind: str, seed: int) -> GnnLayer:
    rng = np.random.default_rng(seed)
    return GnnLayer(
        w_neighbor=rng.uniform(-1, 1, size=(d, d_out)).astype(np.float32),
        w_self=rng.uniform(-1, 1, size=(d, d_out)).astype(np.float32),
        bias=rng.uniform(-1, 1, size=d_out).astype(np.float32),
        activation=activation,
        aggregator=Aggregator(kind=agg_kind, dim=d),
    )


def _update(layer: GnnLayer, z: np.ndarray, x_self: np.ndarray) -> np.ndarray:
    h = z @ layer.w_neighbor + x_self @ layer.w_self + layer.bias
    if layer.activation == "relu":
        h = np.maximum(h, 0.0)
    return h.astype(np.float32)


def forward_centralized(g: Graph, x: np.ndarray, layer: GnnLayer) -> np.ndarray:
    """Reference forward pass with every feature row in one place."""
    check_features(g, x)
    if x.shape[1] != layer.d_in:
        raise DimMismatch(f"features of dim {x.shape[1]} into a layer expecting {layer.d_in}")
    out = np.zeros((g.n, layer.d_out), dtype=np.float32)
    for v in range(g.n):
        z = aggregate_direct(layer.aggregator, x[g.neighbors(v)])
        out[v] = _update(layer, z, x[v])
    return out


def forward_distributed(
    g: Graph,
    p: Partition,
    x: np.ndarray,
    layer: GnnLayer,
    protocol: str,
    dedup: bool = True,
) -> np.ndarray:
    """Forward pass where each worker sees only local rows plus deliveries.

    Results are gathered into one n x d_out matrix in global vertex order.
    """
    check_features(g, x)
    if x.shape[1] != layer.d_in:
        raise DimMismatch(f"features of dim {x.shape[1]} into a layer expecting {layer.d_in}")
    if p.n != g.n:
        raise InvalidParams("partition and graph disagree on vertex count")
    agg = layer.aggregator
    if protocol == "standard":
        plan = plan_standard(g, p, dedup=dedup)
    elif protocol == "abc":
        plan = plan_abc(g, p)
    else:
        raise InvalidParams(f"unknown protocol {protocol!r}")
    delivery = execute(plan, x, agg)
    out = np.zeros((g.n, layer.d_out), dtype=np.float32)
    boundaries = [boundary_set(g, p, i) for i in range(p.m)]
    for i in range(p.m):
        inbox = delivery[i]
        for v in p.members(i):
            neigh = [int(u) for u in g.neighbors(v)]
            if protocol == "standard":
                rows = [x[u] if p.worker_of(u) == i else inbox[u] for u in neigh]
                z = aggregate_direct(agg, rows)
            else:
                if v in boundaries[i]:
                    local_rows = x[[u for u in neigh if p.worker_of(u) == i]]
                    parts = [local_aggregate(agg, local_rows)]
                    parts.extend(part for _sender, part in inbox.get(v, []))
                    z = global_aggregate(agg, parts)
                else:
                    z = aggregate_direct(agg, x[neigh])
            out[v] = _update(layer, z, x[v])
    return out
