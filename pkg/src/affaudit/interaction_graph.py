"""Typed interaction graph built from one crawl record.

Five node kinds (Network, Dom, Decoration, Storage, Js) and three edge kinds
(Redirect, Modification, Access). Construction order is canonical so that two
builds of the same record produce identical node ids and edge order:

  1. Network nodes for chain origins, in chain order.
  2. Per redirect event: the Redirect edge, then one Access edge per query
     parameter from its Decoration key node to its Decoration value node.
  3. Storage events in log order: Write gives Modification Network -> Storage,
     Read gives Access Storage -> Network. Actor origins outside the chain
     get Network nodes on first use.
  4. Stored-value flows: a decoration value matching a previously written
     storage value gives Access Storage(key) -> Decoration(param key).
  5. DOM hooks, then JS calls, each an Access edge from the landing origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .crawl_model import CrawlRecord, StorageAction
from .urltools import url_origin

# A stored value shorter than this only links to a decoration on exact
# equality; substring containment of short tokens is spurious.
MIN_SUBSTRING_MATCH = 4


class NodeKind(str, Enum):
    Network = "Network"
    Dom = "Dom"
    Decoration = "Decoration"
    Storage = "Storage"
    Js = "Js"


class EdgeKind(str, Enum):
    Redirect = "Redirect"
    Modification = "Modification"
    Access = "Access"


@dataclass(frozen=True, slots=True)
class GraphNode:
    node_id: int
    kind: NodeKind
    label: str


@dataclass(frozen=True, slots=True)
class GraphEdge:
    src: int
    dst: int
    kind: EdgeKind
    order_index: int


@dataclass(frozen=True, slots=True)
class InteractionGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]
    link_id: str

    def nodes_of_kind(self, kind: NodeKind) -> list[GraphNode]:
        return [n for n in self.nodes if n.kind is kind]

    def edges_of_kind(self, kind: EdgeKind) -> list[GraphEdge]:
        return [e for e in self.edges if e.kind is kind]


@dataclass(frozen=True, slots=True)
class GraphStats:
    node_counts: dict
    edge_counts: dict
    chain_length: int


class _Builder:
    def __init__(self, link_id: str):
        self.link_id = link_id
        self.nodes: list[GraphNode] = []
        self.edges: list[GraphEdge] = []
        self._index: dict[tuple[NodeKind, str], int] = {}

    def node(self, kind: NodeKind, label: str) -> int:
        key = (kind, label)
        node_id = self._index.get(key)
        if node_id is None:
            node_id = len(self.nodes)
            self._index[key] = node_id
            self.nodes.append(GraphNode(node_id, kind, label))
        return node_id

    def edge(self, src: int, dst: int, kind: EdgeKind) -> None:
        self.edges.append(GraphEdge(src, dst, kind, len(self.edges)))

    def build(self) -> InteractionGraph:
        return InteractionGraph(tuple(self.nodes), tuple(self.edges), self.link_id)


def _dom_label(element_name: str, class_id: str) -> str:
    return class_id if class_id else element_name


def build_graph(record: CrawlRecord) -> InteractionGraph:
    """Construct the interaction graph for one validated crawl record."""
    b = _Builder(record.link_id)

    chain_origins = [url_origin(u) for u in record.chain_urls]
    for origin in chain_origins:
        b.node(NodeKind.Network, origin)

    # first chain position at which each origin's page was active
    first_position = {}
    for pos, origin in enumerate(chain_origins):
        first_position.setdefault(origin, pos)

    # decoration occurrences: (event_index, key_node, value string)
    decorations: list[tuple[int, int, str]] = []
    for event in record.redirects:
        src = b.node(NodeKind.Network, url_origin(event.source_url))
        dst = b.node(NodeKind.Network, url_origin(event.target_url))
        b.edge(src, dst, EdgeKind.Redirect)
        for key, value in event.query_params:
            key_node = b.node(NodeKind.Decoration, key)
            value_node = b.node(NodeKind.Decoration, value)
            b.edge(key_node, value_node, EdgeKind.Access)
            decorations.append((event.sequence_index, key_node, value))

    # (storage key, written value, chain position of writer or None)
    writes: list[tuple[str, str, int | None]] = []
    for event in record.storage_events:
        actor = b.node(NodeKind.Network, event.actor_origin)
        store = b.node(NodeKind.Storage, event.storage_key)
        if event.action is StorageAction.Write:
            b.edge(actor, store, EdgeKind.Modification)
            writes.append((event.storage_key, event.storage_value, first_position.get(event.actor_origin)))
        else:
            b.edge(store, actor, EdgeKind.Access)

    for event_index, key_node, value in decorations:
        linked: set[str] = set()
        for storage_key, stored, writer_pos in writes:
            if storage_key in linked:
                continue
            if writer_pos is not None and writer_pos > event_index:
                continue
            if _values_match(stored, value):
                linked.add(storage_key)
                store = b.node(NodeKind.Storage, storage_key)
                b.edge(store, key_node, EdgeKind.Access)

    landing = b.node(NodeKind.Network, url_origin(record.landing_url))
    for element_name, class_id in record.dom_hooks:
        dom = b.node(NodeKind.Dom, _dom_label(element_name, class_id))
        b.edge(landing, dom, EdgeKind.Access)
    for name in record.js_calls:
        js = b.node(NodeKind.Js, name)
        b.edge(landing, js, EdgeKind.Access)

    return b.build()


def _values_match(stored: str, decoration_value: str) -> bool:
    """Exact equality always links; containment needs a long-enough token."""
    if not stored or not decoration_value:
        return False
    if stored == decoration_value:
        return True
    shorter = min(len(stored), len(decoration_value))
    if shorter < MIN_SUBSTRING_MATCH:
        return False
    return stored in decoration_value or decoration_value in stored


def graph_stats(g: InteractionGraph) -> GraphStats:
    node_counts = {kind.value: 0 for kind in NodeKind}
    for node in g.nodes:
        node_counts[node.kind.value] += 1
    edge_counts = {kind.value: 0 for kind in EdgeKind}
    for edge in g.edges:
        edge_counts[edge.kind.value] += 1
    return GraphStats(node_counts, edge_counts, edge_counts[EdgeKind.Redirect.value] + 1)


def graph_to_dict(g: InteractionGraph) -> dict:
    return {
        "link_id": g.link_id,
        "nodes": [{"node_id": n.node_id, "kind": n.kind.value, "label": n.label} for n in g.nodes],
        "edges": [
            {"src": e.src, "dst": e.dst, "kind": e.kind.value, "order_index": e.order_index}
            for e in g.edges
        ],
    }


def graph_from_dict(obj: dict) -> InteractionGraph:
    nodes = tuple(GraphNode(n["node_id"], NodeKind(n["kind"]), n["label"]) for n in obj["nodes"])
    edges = tuple(GraphEdge(e["src"], e["dst"], EdgeKind(e["kind"]), e["order_index"]) for e in obj["edges"])
    return InteractionGraph(nodes, edges, obj["link_id"])
