"""Weighted undirected graphs shared by every network analysis.

One structure serves co-occurrence, collaboration, coupling and co-citation
networks: nodes carry a display label and a weight, edges are canonically
ordered (source id < target id), and cluster ids come from one deterministic
greedy-modularity grouping so cluster semantics are uniform across network
kinds.

Exports are hand-emitted GraphML / DOT / CSV text so identical graphs always
serialize to identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

__all__ = [
    "GraphEdge",
    "GraphNode",
    "WeightedGraph",
    "graph_from_graphml",
    "greedy_modularity_clusters",
    "make_graph",
    "to_dot",
    "to_edge_csv",
    "to_graphml",
    "to_node_csv",
    "validate_graph",
    "weighted_degrees",
]

GRAPH_KINDS = ("collaboration", "author_coupling", "doc_coupling", "cocitation", "cooccurrence")


class GraphNode(NamedTuple):
    id: str
    label: str
    weight: float


class GraphEdge(NamedTuple):
    a: str
    b: str
    weight: float


@dataclass(frozen=True)
class WeightedGraph:
    kind: str
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]
    clusters: Mapping[str, int] = field(default_factory=dict)
    coverage_note: str | None = None

    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]


def make_graph(kind: str, nodes: Iterable[tuple[str, str, float]],
               edges: Iterable[tuple[str, str, float]],
               clusters: Mapping[str, int] | None = None,
               coverage_note: str | None = None) -> WeightedGraph:
    """Assemble a validated graph; edges are canonicalized and sorted."""
    node_tuples = tuple(GraphNode(*n) for n in nodes)
    canon = []
    for a, b, w in edges:
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        canon.append(GraphEdge(*(sorted((a, b))), w))
    canon.sort(key=lambda e: (e.a, e.b))
    g = WeightedGraph(kind=kind, nodes=node_tuples, edges=tuple(canon),
                      clusters=dict(clusters or {}), coverage_note=coverage_note)
    validate_graph(g)
    return g


def validate_graph(g: WeightedGraph) -> None:
    """Check the structural invariants every network must satisfy."""
    if g.kind not in GRAPH_KINDS:
        raise ValueError(f"unknown graph kind {g.kind!r}")
    ids = [n.id for n in g.nodes]
    id_set = set(ids)
    if len(ids) != len(id_set):
        raise ValueError("duplicate node ids")
    pairs = [(e.a, e.b) for e in g.edges]
    if len(pairs) != len(set(pairs)):
        raise ValueError("duplicate edges")
    for e in g.edges:
        if e.a == e.b:
            raise ValueError(f"self-loop on {e.a!r}")
        if e.a > e.b:
            raise ValueError(f"edge ({e.a!r}, {e.b!r}) not canonically ordered")
        if e.a not in id_set or e.b not in id_set:
            raise ValueError(f"edge ({e.a!r}, {e.b!r}) has an endpoint outside the node set")
        if not e.weight > 0:
            raise ValueError(f"edge ({e.a!r}, {e.b!r}) has non-positive weight {e.weight}")
    for node_id in g.clusters:
        if node_id not in id_set:
            raise ValueError(f"cluster assignment for unknown node {node_id!r}")


def weighted_degrees(g: WeightedGraph) -> dict[str, float]:
    deg = {n.id: 0.0 for n in g.nodes}
    for e in g.edges:
        deg[e.a] += e.weight
        deg[e.b] += e.weight
    return deg


# --------------------------------------------------------------------------
# Deterministic community grouping
# --------------------------------------------------------------------------

def greedy_modularity_clusters(node_ids: list[str],
                               edges: Iterable[tuple[str, str, float]],
                               target: int | None = None) -> dict[str, int]:
    """Agglomerative greedy-modularity communities with fixed tie-breaking.

    Starting from singletons, repeatedly merge the community pair with the
    largest modularity gain; ties go to the pair whose smallest member
    appears first in ``node_ids``. Without ``target`` the merging stops at
    the modularity maximum; with it, merging continues (even through
    negative gains) until exactly ``target`` communities remain.

    Returned cluster ids are contiguous from 1, ordered by each community's
    first node in ``node_ids``.
    """
    index = {nid: i for i, nid in enumerate(node_ids)}
    n = len(node_ids)
    if target is not None and not 1 <= target <= n:
        raise ValueError(f"target cluster count {target} not in 1..{n}")

    # community state keyed by representative = smallest member index
    members: dict[int, set[int]] = {i: {i} for i in range(n)}
    strength = [0.0] * n
    between: dict[tuple[int, int], float] = {}
    m = 0.0
    for a, b, w in edges:
        ia, ib = index[a], index[b]
        strength[ia] += w
        strength[ib] += w
        key = (min(ia, ib), max(ia, ib))
        between[key] = between.get(key, 0.0) + w
        m += w
    comm_strength = {i: strength[i] for i in range(n)}

    def gain(a: int, b: int) -> float:
        if m == 0:
            return 0.0
        l_ab = between.get((a, b), 0.0)
        return l_ab / m - comm_strength[a] * comm_strength[b] / (2 * m * m)

    while len(members) > 1:
        if target is None and not between:
            break
        reps = sorted(members)
        best: tuple[float, int, int] | None = None
        candidates = between.keys() if target is None else (
            (a, b) for i, a in enumerate(reps) for b in reps[i + 1:])
        for a, b in candidates:
            g = gain(a, b)
            if best is None or g > best[0] + 1e-12 or (abs(g - best[0]) <= 1e-12 and (a, b) < best[1:]):
                best = (g, a, b)
        if best is None:
            break
        g, a, b = best
        if target is None and g <= 1e-12:
            break
        members[a] |= members.pop(b)
        comm_strength[a] += comm_strength.pop(b)
        for (x, y), w in list(between.items()):
            if b in (x, y):
                del between[(x, y)]
                other = y if x == b else x
                if other == a:
                    continue
                key = (min(a, other), max(a, other))
                between[key] = between.get(key, 0.0) + w
        if target is not None and len(members) == target:
            break

    clusters: dict[str, int] = {}
    for cid, rep in enumerate(sorted(members), start=1):
        for i in members[rep]:
            clusters[node_ids[i]] = cid
    return clusters


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.10g}"


def to_graphml(g: WeightedGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d_label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="d_nw" for="node" attr.name="weight" attr.type="double"/>',
        '  <key id="d_cluster" for="node" attr.name="cluster" attr.type="int"/>',
        '  <key id="d_ew" for="edge" attr.name="weight" attr.type="double"/>',
        '  <key id="d_kind" for="graph" attr.name="kind" attr.type="string"/>',
        '  <key id="d_coverage" for="graph" attr.name="coverage" attr.type="string"/>',
        '  <graph id="G" edgedefault="undirected">',
        f'    <data key="d_kind">{escape(g.kind)}</data>',
    ]
    if g.coverage_note:
        lines.append(f'    <data key="d_coverage">{escape(g.coverage_note)}</data>')
    for node in g.nodes:
        lines.append(f'    <node id={quoteattr(node.id)}>')
        lines.append(f'      <data key="d_label">{escape(node.label)}</data>')
        lines.append(f'      <data key="d_nw">{_fmt(node.weight)}</data>')
        if node.id in g.clusters:
            lines.append(f'      <data key="d_cluster">{g.clusters[node.id]}</data>')
        lines.append('    </node>')
    for e in g.edges:
        lines.append(f'    <edge source={quoteattr(e.a)} target={quoteattr(e.b)}>')
        lines.append(f'      <data key="d_ew">{_fmt(e.weight)}</data>')
        lines.append('    </edge>')
    lines.append('  </graph>')
    lines.append('</graphml>')
    return "\n".join(lines) + "\n"


def graph_from_graphml(text: str) -> WeightedGraph:
    """Rebuild a graph from GraphML produced by :func:`to_graphml`."""
    ns = "{http://graphml.graphdrawing.org/xmlns}"
    root = ElementTree.fromstring(text)
    graph = root.find(f"{ns}graph")
    if graph is None:
        raise ValueError("no <graph> element")
    kind = "cooccurrence"
    coverage = None
    for data in graph.findall(f"{ns}data"):
        if data.get("key") == "d_kind":
            kind = data.text or kind
        elif data.get("key") == "d_coverage":
            coverage = data.text
    nodes = []
    clusters: dict[str, int] = {}
    for el in graph.findall(f"{ns}node"):
        nid = el.get("id", "")
        label, weight = nid, 0.0
        for data in el.findall(f"{ns}data"):
            if data.get("key") == "d_label":
                label = data.text or ""
            elif data.get("key") == "d_nw":
                weight = float(data.text or 0)
            elif data.get("key") == "d_cluster":
                clusters[nid] = int(data.text or 0)
        nodes.append((nid, label, weight))
    edges = []
    for el in graph.findall(f"{ns}edge"):
        w = 1.0
        for data in el.findall(f"{ns}data"):
            if data.get("key") == "d_ew":
                w = float(data.text or 1)
        edges.append((el.get("source", ""), el.get("target", ""), w))
    return make_graph(kind, nodes, edges, clusters, coverage)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: WeightedGraph) -> str:
    lines = [f"graph {_dot_quote(g.kind)} {{"]
    if g.coverage_note:
        lines.append(f"  // {g.coverage_note}")
    for node in g.nodes:
        attrs = [f"label={_dot_quote(node.label)}", f"weight={_fmt(node.weight)}"]
        if node.id in g.clusters:
            attrs.append(f"cluster={g.clusters[node.id]}")
        lines.append(f"  {_dot_quote(node.id)} [{', '.join(attrs)}];")
    for e in g.edges:
        lines.append(f"  {_dot_quote(e.a)} -- {_dot_quote(e.b)} [weight={_fmt(e.weight)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _csv_cell(value: str) -> str:
    if any(c in value for c in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def to_node_csv(g: WeightedGraph) -> str:
    lines = ["id,label,weight,cluster"]
    for n in g.nodes:
        cluster = g.clusters.get(n.id, "")
        lines.append(f"{_csv_cell(n.id)},{_csv_cell(n.label)},{_fmt(n.weight)},{cluster}")
    return "\n".join(lines) + "\n"


def to_edge_csv(g: WeightedGraph) -> str:
    lines = ["source,target,weight"]
    for e in g.edges:
        lines.append(f"{_csv_cell(e.a)},{_csv_cell(e.b)},{_fmt(e.weight)}")
    return "\n".join(lines) + "\n"
