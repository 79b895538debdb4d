"""The 15-feature vector computed from one interaction graph.

The schema is fixed and versioned; training, serialization, and prediction
all refuse to mix schema versions. Feature definitions (degenerate cases
included) are part of the schema:

  graph_density                     distinct directed (src, dst) pairs with
                                    src != dst, over N*(N-1); 0 when N <= 1
  mean_degree_centrality            mean over nodes of undirected-simple
                                    degree / (N-1); 0 when N <= 1
  max_betweenness_centrality        max over nodes, undirected simple view,
                                    normalized by 2/((N-1)(N-2)); 0 when N < 3
  avg_shortest_path_len             mean over connected unordered pairs on the
                                    undirected simple view; 0 when no pairs
  node_count / edge_count           totals, parallel edges counted
  storage_node_count                nodes of kind Storage
  decoration_node_count             nodes of kind Decoration
  redirect_chain_len                Redirect edge count + 1
  total_query_param_count           Access edges between two Decoration nodes
                                    (one per recorded query parameter)
  mean_query_params_per_network_node  the above over Network node count
  kv_shannon_entropy_bits           character entropy of the concatenated
                                    key and value labels of those edges
  distinct_origin_count             nodes of kind Network
  access_edge_count / modification_edge_count   edges by kind
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, fields

import networkx as nx
import numpy as np

from .interaction_graph import EdgeKind, InteractionGraph, NodeKind

FEATURE_SCHEMA_VERSION = 1

FEATURE_NAMES = (
    "graph_density",
    "mean_degree_centrality",
    "max_betweenness_centrality",
    "avg_shortest_path_len",
    "node_count",
    "edge_count",
    "storage_node_count",
    "decoration_node_count",
    "redirect_chain_len",
    "total_query_param_count",
    "mean_query_params_per_network_node",
    "kv_shannon_entropy_bits",
    "distinct_origin_count",
    "access_edge_count",
    "modification_edge_count",
)


@dataclass(frozen=True, slots=True)
class FeatureVector:
    link_id: str
    graph_density: float
    mean_degree_centrality: float
    max_betweenness_centrality: float
    avg_shortest_path_len: float
    node_count: float
    edge_count: float
    storage_node_count: float
    decoration_node_count: float
    redirect_chain_len: float
    total_query_param_count: float
    mean_query_params_per_network_node: float
    kv_shannon_entropy_bits: float
    distinct_origin_count: float
    access_edge_count: float
    modification_edge_count: float

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)

    def __post_init__(self):
        for f in fields(self):
            if f.name == "link_id":
                continue
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} not finite: {value!r}")


def shannon_entropy(kv_pairs: list[tuple[str, str]]) -> float:
    """Base-2 entropy of the character distribution over all keys and values.

    Empty input (or all-empty strings) gives 0.
    """
    counts = Counter()
    for key, value in kv_pairs:
        counts.update(key)
        counts.update(value)
    total = sum(counts.values())
    if total == 0:
        return 0.0
    return -sum((c / total) * math.log2(c / total) for c in counts.values())


def _undirected_simple(g: InteractionGraph) -> nx.Graph:
    simple = nx.Graph()
    simple.add_nodes_from(n.node_id for n in g.nodes)
    simple.add_edges_from((e.src, e.dst) for e in g.edges if e.src != e.dst)
    return simple


def extract_features(g: InteractionGraph) -> FeatureVector:
    n = len(g.nodes)
    kind_of = {node.node_id: node.kind for node in g.nodes}
    label_of = {node.node_id: node.label for node in g.nodes}

    directed_pairs = {(e.src, e.dst) for e in g.edges if e.src != e.dst}
    density = len(directed_pairs) / (n * (n - 1)) if n > 1 else 0.0

    simple = _undirected_simple(g)
    if n > 1:
        mean_degree = sum(d for _, d in simple.degree()) / (n - 1) / n
    else:
        mean_degree = 0.0

    if n >= 3:
        betweenness = nx.betweenness_centrality(simple, normalized=True)
        max_betweenness = max(betweenness.values())
    else:
        max_betweenness = 0.0

    path_total = 0
    path_pairs = 0
    for src, lengths in nx.all_pairs_shortest_path_length(simple):
        for dst, dist in lengths.items():
            if src < dst:
                path_total += dist
                path_pairs += 1
    avg_path = path_total / path_pairs if path_pairs else 0.0

    redirect_count = 0
    access_count = 0
    modification_count = 0
    param_edges = []
    for e in g.edges:
        if e.kind is EdgeKind.Redirect:
            redirect_count += 1
        elif e.kind is EdgeKind.Modification:
            modification_count += 1
        else:
            access_count += 1
            if kind_of[e.src] is NodeKind.Decoration and kind_of[e.dst] is NodeKind.Decoration:
                param_edges.append(e)

    network_count = sum(1 for node in g.nodes if node.kind is NodeKind.Network)
    storage_count = sum(1 for node in g.nodes if node.kind is NodeKind.Storage)
    decoration_count = sum(1 for node in g.nodes if node.kind is NodeKind.Decoration)

    kv_pairs = [(label_of[e.src], label_of[e.dst]) for e in param_edges]
    entropy = shannon_entropy(kv_pairs)

    return FeatureVector(
        link_id=g.link_id,
        graph_density=density,
        mean_degree_centrality=mean_degree,
        max_betweenness_centrality=max_betweenness,
        avg_shortest_path_len=avg_path,
        node_count=float(n),
        edge_count=float(len(g.edges)),
        storage_node_count=float(storage_count),
        decoration_node_count=float(decoration_count),
        redirect_chain_len=float(redirect_count + 1),
        total_query_param_count=float(len(param_edges)),
        mean_query_params_per_network_node=len(param_edges) / network_count if network_count else 0.0,
        kv_shannon_entropy_bits=entropy,
        distinct_origin_count=float(network_count),
        access_edge_count=float(access_count),
        modification_edge_count=float(modification_count),
    )


def feature_matrix(vectors: list[FeatureVector]) -> np.ndarray:
    """Stack vectors into an (n, 15) float matrix in FEATURE_NAMES order."""
    if not vectors:
        return np.zeros((0, len(FEATURE_NAMES)))
    return np.stack([v.to_array() for v in vectors])
