"""Communication accounting for distributed GNN forward passes.

Builds exchange plans for the standard raw-feature protocol and the
aggregate-before-send protocol over partitioned graphs, counts their traffic,
partitions graphs by edge-cut and vertex-cut schemes (with exhaustive oracles
at small scale), and checks the claimed communication bounds empirically.
"""

from .aggregation import (
    Aggregator,
    Partial,
    aggregate_direct,
    global_aggregate,
    local_aggregate,
    merge_partials,
    values_close,
)
from .errors import AbcommError
from .forward import GnnLayer, forward_centralized, forward_distributed, make_random_layer
from .graph import (
    Graph,
    attach_random_features,
    components_excluding,
    gen_er_connected,
    gen_family,
    graph_from_doc,
    graph_to_doc,
    parse_edge_list,
    serialize_edge_list,
)
from .partition import (
    CutCertificate,
    Partition,
    boundary_set,
    brute_force_edge_cut,
    brute_force_vertex_cut,
    cross_edge_count,
    flow_vertex_connectivity,
    greedy_edge_cut,
    neighbor_split,
    vertex_cut_partition,
)
from .protocol import CommReport, ExchangePlan, count_report, execute, plan_abc, plan_standard
from .stream import StreamEvent, StreamState, replay, stream_from_graph
from .verify import SuiteConfig, TheoremReport, run_suite
from .wire import decode_frame, encode_frame

__version__ = "0.1.0"
